#include "oml/ground.hpp"

#include <algorithm>
#include <map>

#include "oml/error.hpp"

namespace oml {

Universe make_universe(std::vector<std::string> base, int depth) {
  Universe u;
  u.base = base;
  u.depth = depth;
  std::set<TypePtr, TypeLess> all;
  for (const auto& b : base) all.insert(tcon(b));
  for (int d = 0; d < depth; ++d) {
    std::vector<TypePtr> cur(all.begin(), all.end());
    for (const auto& a : cur)
      for (const auto& b : cur) all.insert(tarr(a, b));
  }
  u.members.assign(all.begin(), all.end());
  std::sort(u.members.begin(), u.members.end(), [](const TypePtr& a, const TypePtr& b) {
    int da = arrow_depth(a), db = arrow_depth(b);
    if (da != db) return da < db;
    return show_type(a) < show_type(b);
  });
  u.member_set = std::move(all);
  return u;
}

std::vector<Subst> gsubst_enum(const Universe& u, const std::vector<std::string>& vars,
                               size_t cap) {
  size_t total = 1;
  for (size_t i = 0; i < vars.size(); ++i) {
    total *= u.members.size();
    if (total > cap)
      throw OmlError("carrier", "instantiation space exceeds cap of " + std::to_string(cap));
  }
  std::vector<Subst> out;
  out.reserve(total);
  std::vector<size_t> idx(vars.size(), 0);
  for (;;) {
    Subst s;
    for (size_t i = 0; i < vars.size(); ++i) s.m.emplace(vars[i], u.members[idx[i]]);
    out.push_back(std::move(s));
    size_t k = vars.size();
    while (k > 0) {
      --k;
      if (++idx[k] < u.members.size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (vars.empty()) return out;
  }
}

std::vector<TypePtr> ground_instances(const std::vector<Axiom>& axioms, const PredList& outer,
                                      const Scheme& s, const Universe& u, int entail_depth) {
  std::vector<TypePtr> out;
  std::set<TypePtr, TypeLess> seen;
  for (const Subst& g : gsubst_enum(u, s.vars)) {
    PredList goals = outer;
    for (const auto& q : s.qt.preds) goals.push_back(g(q));
    if (!entail_all(axioms, {}, goals, entail_depth).ok) continue;
    TypePtr t = g(s.qt.body);
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

std::vector<Pred> saturate_facts(const std::vector<Axiom>& axioms, const Universe& u) {
  std::map<std::string, Pred> facts;
  auto key = [](const Pred& p) { return show_pred(p); };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& a : axioms) {
      for (const Subst& g : gsubst_enum(u, a.vars)) {
        bool have = true;
        for (const auto& q : a.context) have = have && facts.count(key(g(q))) > 0;
        if (!have) continue;
        Pred h = g(a.head);
        std::string k = key(h);
        if (!facts.count(k)) {
          facts.emplace(std::move(k), std::move(h));
          changed = true;
        }
      }
    }
  }
  std::vector<Pred> out;
  out.reserve(facts.size());
  for (auto& [k, p] : facts) out.push_back(p);
  return out;
}

std::vector<TypePtr> ground_instances_rec(const std::vector<Axiom>& axioms, const PredList& outer,
                                          const Scheme& s, const Universe& u) {
  std::set<std::string> facts;
  for (const auto& p : saturate_facts(axioms, u)) facts.insert(show_pred(p));
  std::vector<TypePtr> out;
  std::set<TypePtr, TypeLess> seen;
  for (const Subst& g : gsubst_enum(u, s.vars)) {
    bool ok = true;
    for (const auto& q : outer) ok = ok && facts.count(show_pred(q)) > 0;
    for (const auto& q : s.qt.preds) ok = ok && facts.count(show_pred(g(q))) > 0;
    if (!ok) continue;
    TypePtr t = g(s.qt.body);
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

}  // namespace oml
