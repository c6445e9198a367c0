#pragma once

#include <map>
#include <memory>

#include "oml/syntax.hpp"

namespace oml {

struct DomainCfg {
  int int_size = 2;               // Int inhabitants 0..int_size-1, plus bottom
  size_t carrier_cap = 1'000'000;  // refuse carriers larger than this
};

// Finite pointed domains.  A function value stores one slot per element of
// its domain carrier, position-aligned; the everywhere-bottom table is
// represented by Bot itself, so Bot is carrier index 0 at every type.
struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct Value {
  enum class K { Bot, Base, Fun };
  K k = K::Bot;
  std::string con;  // Base: "Int" or "Bool"
  int idx = 0;      // Base: 0..n-1
  TypePtr dom, cod;
  std::vector<ValuePtr> table;  // Fun: size |carrier(dom)|, never all-bottom
};

ValuePtr bot();
ValuePtr make_base(const std::string& con, int idx);
ValuePtr make_fun(TypePtr dom, TypePtr cod, std::vector<ValuePtr> table);

// carrier size saturated at cap+1; throws only on non-ground/unknown types
size_t carrier_size(const DomainCfg& cfg, const TypePtr& t);
// exact size as a decimal string (small-exponent guard applies)
std::string carrier_size_str(const DomainCfg& cfg, const TypePtr& t);

// full carrier in index order (bottom first); throws kind="carrier" over cap
std::vector<ValuePtr> carrier(const DomainCfg& cfg, const TypePtr& t);

ValuePtr value_at_index(const DomainCfg& cfg, const TypePtr& t, size_t i);
size_t index_of(const DomainCfg& cfg, const TypePtr& t, const ValuePtr& v);

ValuePtr app(const DomainCfg& cfg, const ValuePtr& f, const ValuePtr& arg);

bool val_eq(const ValuePtr& a, const ValuePtr& b);
bool val_leq(const ValuePtr& a, const ValuePtr& b);
// join of two comparable values (fixpoint iterates ascend); throws internal
// if the arguments are incomparable
ValuePtr val_lub(const ValuePtr& a, const ValuePtr& b);

bool well_formed_at(const DomainCfg& cfg, const TypePtr& t, const ValuePtr& v);

std::string show_value(const DomainCfg& cfg, const TypePtr& t, const ValuePtr& v);

// value of a scheme: one domain element per ground instance of its body
using SchemeValue = std::map<TypePtr, ValuePtr, TypeLess>;

SchemeValue scheme_bottom(const std::vector<TypePtr>& keys);
bool scheme_eq(const SchemeValue& a, const SchemeValue& b);
bool scheme_leq(const SchemeValue& a, const SchemeValue& b);
std::string show_scheme_value(const DomainCfg& cfg, const SchemeValue& sv);

}  // namespace oml
