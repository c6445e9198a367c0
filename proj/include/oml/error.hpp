#pragma once

#include <stdexcept>
#include <string>

namespace oml {

// kind is a stable machine-readable tag: parse | context | overlap | covering |
// ambiguous | type | improve | carrier | eval | input | internal
struct OmlError : std::runtime_error {
  std::string kind;
  int line = 0;
  int col = 0;

  OmlError(std::string k, const std::string& msg, int l = 0, int c = 0)
      : std::runtime_error(msg), kind(std::move(k)), line(l), col(c) {}
};

}  // namespace oml
