#include "oml/unify.hpp"

namespace oml {

const char* show_unify_fail(UnifyFail f) {
  switch (f) {
    case UnifyFail::None: return "none";
    case UnifyFail::Clash: return "clash";
    case UnifyFail::Occurs: return "occurs";
    case UnifyFail::Arity: return "arity";
    case UnifyFail::ClassMismatch: return "class-mismatch";
  }
  return "?";
}

namespace {

bool occurs(const std::string& v, const TypePtr& t) {
  switch (t->k) {
    case Type::K::Var: return t->name == v;
    case Type::K::Con: return false;
    case Type::K::Arr: return occurs(v, t->a) || occurs(v, t->b);
  }
  return false;
}

bool unify_rec(const TypePtr& a0, const TypePtr& b0, UnifyResult& r) {
  TypePtr a = r.s(a0), b = r.s(b0);
  if (a->k == Type::K::Var) {
    if (b->k == Type::K::Var && b->name == a->name) return true;
    if (occurs(a->name, b)) {
      r.why = UnifyFail::Occurs;
      r.detail = "'" + a->name + "' occurs in " + show_type(b);
      return false;
    }
    r.s = compose(Subst::one(a->name, b), r.s);
    return true;
  }
  if (b->k == Type::K::Var) return unify_rec(b, a, r);
  if (a->k == Type::K::Con && b->k == Type::K::Con) {
    if (a->name == b->name) return true;
    r.why = UnifyFail::Clash;
    r.detail = show_type(a) + " vs " + show_type(b);
    return false;
  }
  if (a->k == Type::K::Arr && b->k == Type::K::Arr)
    return unify_rec(a->a, b->a, r) && unify_rec(a->b, b->b, r);
  r.why = UnifyFail::Clash;
  r.detail = show_type(a) + " vs " + show_type(b);
  return false;
}

bool match_rec(const TypePtr& pat, const TypePtr& target, const std::set<std::string>* flex,
               Subst& s) {
  if (pat->k == Type::K::Var) {
    if (!flex || flex->count(pat->name)) {
      auto it = s.m.find(pat->name);
      if (it != s.m.end()) return type_eq(it->second, target);
      s.m.emplace(pat->name, target);
      return true;
    }
    return target->k == Type::K::Var && target->name == pat->name;
  }
  if (pat->k == Type::K::Con)
    return target->k == Type::K::Con && target->name == pat->name;
  return target->k == Type::K::Arr && match_rec(pat->a, target->a, flex, s) &&
         match_rec(pat->b, target->b, flex, s);
}

}  // namespace

UnifyResult unify(const TypePtr& a, const TypePtr& b) {
  UnifyResult r;
  r.ok = unify_rec(a, b, r);
  return r;
}

UnifyResult unify_pred(const Pred& a, const Pred& b) {
  UnifyResult r;
  if (a.cls != b.cls) {
    r.why = UnifyFail::ClassMismatch;
    r.detail = a.cls + " vs " + b.cls;
    return r;
  }
  if (a.args.size() != b.args.size()) {
    r.why = UnifyFail::Arity;
    r.detail = show_pred(a) + " vs " + show_pred(b);
    return r;
  }
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!unify_rec(a.args[i], b.args[i], r)) return r;
  r.ok = true;
  return r;
}

std::optional<Subst> match_onto(const TypePtr& pat, const TypePtr& target,
                                const std::set<std::string>* flex) {
  Subst s;
  if (match_rec(pat, target, flex, s)) return s;
  return std::nullopt;
}

std::optional<Subst> match_pred_onto(const Pred& pat, const Pred& target,
                                     const std::set<std::string>* flex) {
  if (pat.cls != target.cls || pat.args.size() != target.args.size()) return std::nullopt;
  Subst s;
  for (size_t i = 0; i < pat.args.size(); ++i)
    if (!match_rec(pat.args[i], target.args[i], flex, s)) return std::nullopt;
  return s;
}

UnifyResult unify_at_indices(const Pred& a, const Pred& b, const std::vector<int>& idxs) {
  UnifyResult r;
  if (a.cls != b.cls) {
    r.why = UnifyFail::ClassMismatch;
    r.detail = a.cls + " vs " + b.cls;
    return r;
  }
  for (int ix : idxs) {
    if (ix < 0 || ix >= static_cast<int>(a.args.size()) ||
        ix >= static_cast<int>(b.args.size())) {
      r.why = UnifyFail::Arity;
      r.detail = "argument index " + std::to_string(ix) + " out of range";
      return r;
    }
    if (!unify_rec(a.args[ix], b.args[ix], r)) return r;
  }
  r.ok = true;
  return r;
}

}  // namespace oml
