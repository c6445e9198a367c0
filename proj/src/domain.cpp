#include "oml/domain.hpp"

#include <algorithm>

#include "oml/error.hpp"

namespace oml {

ValuePtr bot() {
  static const ValuePtr b = std::make_shared<Value>();
  return b;
}

ValuePtr make_base(const std::string& con, int idx) {
  auto v = std::make_shared<Value>();
  v->k = Value::K::Base;
  v->con = con;
  v->idx = idx;
  return v;
}

ValuePtr make_fun(TypePtr dom, TypePtr cod, std::vector<ValuePtr> table) {
  bool all_bot = true;
  for (const auto& e : table) all_bot = all_bot && e->k == Value::K::Bot;
  if (all_bot) return bot();
  auto v = std::make_shared<Value>();
  v->k = Value::K::Fun;
  v->dom = std::move(dom);
  v->cod = std::move(cod);
  v->table = std::move(table);
  return v;
}

namespace {

[[noreturn]] void dom_err(const std::string& msg) { throw OmlError("carrier", msg); }

int base_width(const DomainCfg& cfg, const std::string& con) {
  if (con == "Int") return cfg.int_size;
  if (con == "Bool") return 2;
  dom_err("no carrier for base type '" + con + "'");
}

size_t sat_pow(size_t b, size_t e, size_t sat) {
  size_t acc = 1;
  for (size_t i = 0; i < e; ++i) {
    if (acc > sat / (b ? b : 1)) return sat + 1;
    acc *= b;
    if (acc > sat) return sat + 1;
  }
  return acc;
}

}  // namespace

size_t carrier_size(const DomainCfg& cfg, const TypePtr& t) {
  size_t sat = cfg.carrier_cap;
  switch (t->k) {
    case Type::K::Con:
      return static_cast<size_t>(base_width(cfg, t->name)) + 1;
    case Type::K::Arr: {
      size_t d = carrier_size(cfg, t->a);
      size_t c = carrier_size(cfg, t->b);
      if (d > sat || c > sat) return sat + 1;
      return sat_pow(c, d, sat);
    }
    case Type::K::Var:
      dom_err("carrier of non-ground type " + show_type(t));
  }
  return 0;
}

namespace {

// minimal decimal bignum: little-endian base-1e9 limbs
using Big = std::vector<uint32_t>;

Big big_from(size_t n) {
  Big b;
  while (n) {
    b.push_back(static_cast<uint32_t>(n % 1000000000));
    n /= 1000000000;
  }
  if (b.empty()) b.push_back(0);
  return b;
}

Big big_mul(const Big& a, const Big& b) {
  Big r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      uint64_t cur = r[i + j] + static_cast<uint64_t>(a[i]) * b[j] + carry;
      r[i + j] = static_cast<uint32_t>(cur % 1000000000);
      carry = cur / 1000000000;
    }
    size_t j = b.size();
    while (carry) {
      uint64_t cur = r[i + j] + carry;
      r[i + j] = static_cast<uint32_t>(cur % 1000000000);
      carry = cur / 1000000000;
      ++j;
    }
  }
  while (r.size() > 1 && r.back() == 0) r.pop_back();
  return r;
}

std::string big_str(const Big& b) {
  std::string s = std::to_string(b.back());
  for (size_t i = b.size() - 1; i-- > 0;) {
    std::string part = std::to_string(b[i]);
    s += std::string(9 - part.size(), '0') + part;
  }
  return s;
}

Big big_size(const DomainCfg& cfg, const TypePtr& t) {
  if (t->k == Type::K::Con) return big_from(static_cast<size_t>(base_width(cfg, t->name)) + 1);
  if (t->k == Type::K::Var) dom_err("carrier of non-ground type " + show_type(t));
  size_t e = carrier_size(cfg, t->a);
  if (e > cfg.carrier_cap)
    dom_err("carrier of " + show_type(t) + " has a domain too large to size exactly");
  Big base = big_size(cfg, t->b);
  Big acc = big_from(1);
  for (size_t i = 0; i < e; ++i) {
    acc = big_mul(acc, base);
    if (acc.size() > 12000) dom_err("carrier of " + show_type(t) + " too large to size exactly");
  }
  return acc;
}

}  // namespace

std::string carrier_size_str(const DomainCfg& cfg, const TypePtr& t) {
  return big_str(big_size(cfg, t));
}

std::vector<ValuePtr> carrier(const DomainCfg& cfg, const TypePtr& t) {
  size_t n = carrier_size(cfg, t);
  if (n > cfg.carrier_cap)
    dom_err("carrier of " + show_type(t) + " exceeds cap of " + std::to_string(cfg.carrier_cap));
  std::vector<ValuePtr> out;
  out.reserve(n);
  if (t->k == Type::K::Con) {
    out.push_back(bot());
    for (int i = 0; i < base_width(cfg, t->name); ++i) out.push_back(make_base(t->name, i));
    return out;
  }
  size_t nd = carrier_size(cfg, t->a);
  std::vector<ValuePtr> cc = carrier(cfg, t->b);
  std::vector<size_t> digit(nd, 0);
  for (size_t ix = 0; ix < n; ++ix) {
    std::vector<ValuePtr> table(nd);
    for (size_t j = 0; j < nd; ++j) table[j] = cc[digit[j]];
    out.push_back(make_fun(t->a, t->b, std::move(table)));
    size_t k = nd;
    while (k > 0) {
      --k;
      if (++digit[k] < cc.size()) break;
      digit[k] = 0;
    }
  }
  return out;
}

ValuePtr value_at_index(const DomainCfg& cfg, const TypePtr& t, size_t i) {
  if (i == 0) return bot();
  if (t->k == Type::K::Con) {
    int w = base_width(cfg, t->name);
    if (i > static_cast<size_t>(w)) dom_err("index out of carrier for " + show_type(t));
    return make_base(t->name, static_cast<int>(i) - 1);
  }
  if (t->k == Type::K::Var) dom_err("carrier of non-ground type " + show_type(t));
  size_t nd = carrier_size(cfg, t->a);
  size_t nc = carrier_size(cfg, t->b);
  if (nd > cfg.carrier_cap || nc > cfg.carrier_cap)
    dom_err("carrier of " + show_type(t) + " exceeds cap");
  std::vector<ValuePtr> table(nd);
  for (size_t j = nd; j-- > 0;) {
    table[j] = value_at_index(cfg, t->b, i % nc);
    i /= nc;
  }
  if (i != 0) dom_err("index out of carrier for " + show_type(t));
  return make_fun(t->a, t->b, std::move(table));
}

size_t index_of(const DomainCfg& cfg, const TypePtr& t, const ValuePtr& v) {
  if (v->k == Value::K::Bot) return 0;
  if (v->k == Value::K::Base) return static_cast<size_t>(v->idx) + 1;
  size_t nc = carrier_size(cfg, t->b);
  size_t acc = 0;
  for (const auto& e : v->table) acc = acc * nc + index_of(cfg, t->b, e);
  return acc;
}

ValuePtr app(const DomainCfg& cfg, const ValuePtr& f, const ValuePtr& arg) {
  if (f->k == Value::K::Bot) return bot();
  if (f->k != Value::K::Fun) throw OmlError("internal", "applying a base value");
  return f->table[index_of(cfg, f->dom, arg)];
}

bool val_eq(const ValuePtr& a, const ValuePtr& b) {
  if (a->k != b->k) return false;
  switch (a->k) {
    case Value::K::Bot: return true;
    case Value::K::Base: return a->con == b->con && a->idx == b->idx;
    case Value::K::Fun: {
      if (!type_eq(a->dom, b->dom) || !type_eq(a->cod, b->cod)) return false;
      if (a->table.size() != b->table.size()) return false;
      for (size_t i = 0; i < a->table.size(); ++i)
        if (!val_eq(a->table[i], b->table[i])) return false;
      return true;
    }
  }
  return false;
}

bool val_leq(const ValuePtr& a, const ValuePtr& b) {
  if (a->k == Value::K::Bot) return true;
  if (b->k == Value::K::Bot) return false;
  if (a->k != b->k) return false;
  if (a->k == Value::K::Base) return a->con == b->con && a->idx == b->idx;
  if (!type_eq(a->dom, b->dom) || !type_eq(a->cod, b->cod)) return false;
  if (a->table.size() != b->table.size()) return false;
  for (size_t i = 0; i < a->table.size(); ++i)
    if (!val_leq(a->table[i], b->table[i])) return false;
  return true;
}

ValuePtr val_lub(const ValuePtr& a, const ValuePtr& b) {
  if (val_leq(a, b)) return b;
  if (val_leq(b, a)) return a;
  throw OmlError("internal", "join of incomparable values");
}

bool well_formed_at(const DomainCfg& cfg, const TypePtr& t, const ValuePtr& v) {
  switch (v->k) {
    case Value::K::Bot: return true;
    case Value::K::Base:
      return t->k == Type::K::Con && t->name == v->con && v->idx >= 0 &&
             v->idx < base_width(cfg, v->con);
    case Value::K::Fun: {
      if (t->k != Type::K::Arr || !type_eq(t->a, v->dom) || !type_eq(t->b, v->cod))
        return false;
      if (v->table.size() != carrier_size(cfg, t->a)) return false;
      bool all_bot = true;
      for (const auto& e : v->table) {
        if (!well_formed_at(cfg, t->b, e)) return false;
        all_bot = all_bot && e->k == Value::K::Bot;
      }
      return !all_bot;
    }
  }
  return false;
}

std::string show_value(const DomainCfg& cfg, const TypePtr& t, const ValuePtr& v) {
  if (v->k == Value::K::Bot) return "⊥";
  if (v->k == Value::K::Base) {
    if (v->con == "Bool") return v->idx ? "true" : "false";
    return std::to_string(v->idx);
  }
  std::string s = "{";
  for (size_t i = 1; i < v->table.size(); ++i) {
    if (i > 1) s += ", ";
    s += show_value(cfg, v->dom, value_at_index(cfg, v->dom, i));
    s += "↦";
    s += show_value(cfg, v->cod, v->table[i]);
  }
  if (v->table.size() > 1) s += ", ";
  s += "⊥↦" + show_value(cfg, v->cod, v->table[0]);
  return s + "}";
}

SchemeValue scheme_bottom(const std::vector<TypePtr>& keys) {
  SchemeValue sv;
  for (const auto& k : keys) sv.emplace(k, bot());
  return sv;
}

bool scheme_eq(const SchemeValue& a, const SchemeValue& b) {
  if (a.size() != b.size()) return false;
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end(); ++ia, ++ib) {
    if (!type_eq(ia->first, ib->first)) return false;
    if (!val_eq(ia->second, ib->second)) return false;
  }
  return true;
}

bool scheme_leq(const SchemeValue& a, const SchemeValue& b) {
  if (a.size() != b.size()) return false;
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end(); ++ia, ++ib) {
    if (!type_eq(ia->first, ib->first)) return false;
    if (!val_leq(ia->second, ib->second)) return false;
  }
  return true;
}

std::string show_scheme_value(const DomainCfg& cfg, const SchemeValue& sv) {
  std::string s;
  for (const auto& [t, v] : sv) {
    if (!s.empty()) s += "\n";
    s += show_type(t) + " = " + show_value(cfg, t, v);
  }
  return s;
}

}  // namespace oml
