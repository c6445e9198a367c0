#pragma once

#include <string>
#include <string_view>

#include "oml/syntax.hpp"

namespace oml {

// All entry points throw OmlError(kind="parse") with line/col on bad input.
Program parse_program(std::string_view src);
TypePtr parse_type(std::string_view src);
Pred parse_pred(std::string_view src);
PredList parse_preds(std::string_view src);  // comma-separated, no parens required
Scheme parse_scheme(std::string_view src);
ExprPtr parse_expr(std::string_view src);

}  // namespace oml
