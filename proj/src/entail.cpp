#include "oml/entail.hpp"

#include <set>

#include "oml/unify.hpp"

namespace oml {

std::string show_witness(const EntailWitness& w) {
  if (!w.by_axiom) return "-";
  if (w.premises.empty()) return w.axiom;
  std::string s = w.axiom + "(";
  for (size_t i = 0; i < w.premises.size(); ++i) {
    if (i) s += ", ";
    s += show_witness(w.premises[i]);
  }
  return s + ")";
}

namespace {

// rename quantified variables of `a` away from `avoid` so a goal variable can
// never be captured by an unrelated binder of the same name
Axiom freshen(const Axiom& a, const std::set<std::string>& avoid) {
  Subst ren;
  std::vector<std::string> vars;
  for (const auto& v : a.vars) {
    if (!avoid.count(v)) {
      vars.push_back(v);
      continue;
    }
    std::string nv = v;
    int k = 0;
    while (avoid.count(nv) || ren.m.count(nv)) nv = v + "_" + std::to_string(k++);
    ren.m.emplace(v, tvar(nv));
    vars.push_back(nv);
  }
  if (ren.m.empty()) return a;
  Axiom out;
  out.name = a.name;
  out.vars = std::move(vars);
  for (const auto& p : a.context) out.context.push_back(ren(p));
  out.head = ren(a.head);
  return out;
}

EntailResult entail_rec(const std::vector<Axiom>& axioms, const PredList& assume,
                        const std::set<std::string>& rigid, const Pred& goal, int depth) {
  EntailResult r;
  for (const auto& p : assume) {
    if (pred_eq(p, goal)) {
      r.ok = true;
      return r;
    }
  }

  const Axiom* chosen = nullptr;
  Subst s;
  for (const auto& a0 : axioms) {
    Axiom a = freshen(a0, rigid);
    std::set<std::string> flex(a.vars.begin(), a.vars.end());
    auto m = match_pred_onto(a.head, goal, &flex);
    if (!m) continue;
    if (chosen) {
      r.why = EntailFail::MultipleAxioms;
      r.detail = "both " + chosen->name + " and " + a0.name + " match " + show_pred(goal);
      return r;
    }
    chosen = &a0;
    s = *m;
  }
  if (!chosen) {
    r.why = EntailFail::NoAxiom;
    r.detail = "no instance matches " + show_pred(goal);
    return r;
  }
  if (depth <= 0) {
    r.why = EntailFail::Depth;
    r.detail = "depth budget exhausted at " + show_pred(goal);
    return r;
  }
  Axiom a = freshen(*chosen, rigid);
  {
    std::set<std::string> flex(a.vars.begin(), a.vars.end());
    s = *match_pred_onto(a.head, goal, &flex);
  }
  r.w.by_axiom = true;
  r.w.axiom = chosen->name;
  for (const auto& q : a.context) {
    EntailResult sub = entail_rec(axioms, assume, rigid, s(q), depth - 1);
    if (!sub.ok) {
      sub.detail += " (needed by " + chosen->name + " for " + show_pred(goal) + ")";
      return sub;
    }
    r.w.premises.push_back(std::move(sub.w));
  }
  r.ok = true;
  return r;
}

std::set<std::string> rigid_of(const PredList& assume, const Pred& goal) {
  std::set<std::string> rigid;
  std::vector<std::string> vs;
  std::set<std::string> seen;
  for (const auto& p : assume) ftv_pred(p, vs, seen);
  ftv_pred(goal, vs, seen);
  rigid.insert(vs.begin(), vs.end());
  return rigid;
}

}  // namespace

EntailResult entail(const std::vector<Axiom>& axioms, const PredList& assume, const Pred& goal,
                    int depth) {
  return entail_rec(axioms, assume, rigid_of(assume, goal), goal, depth);
}

EntailAllResult entail_all(const std::vector<Axiom>& axioms, const PredList& assume,
                           const PredList& goals, int depth) {
  EntailAllResult r;
  for (const auto& g : goals) {
    EntailResult one = entail(axioms, assume, g, depth);
    if (!one.ok) {
      r.why = one.why;
      r.detail = one.detail;
      return r;
    }
    r.ws.push_back(std::move(one.w));
  }
  r.ok = true;
  return r;
}

bool replay_witness(const std::vector<Axiom>& axioms, const PredList& assume, const Pred& goal,
                    const EntailWitness& w) {
  if (!w.by_axiom) {
    for (const auto& p : assume)
      if (pred_eq(p, goal)) return true;
    return false;
  }
  const Axiom* ax = nullptr;
  for (const auto& a : axioms)
    if (a.name == w.axiom) ax = &a;
  if (!ax) return false;
  Axiom a = freshen(*ax, rigid_of(assume, goal));
  std::set<std::string> flex(a.vars.begin(), a.vars.end());
  auto m = match_pred_onto(a.head, goal, &flex);
  if (!m) return false;
  if (w.premises.size() != a.context.size()) return false;
  for (size_t i = 0; i < a.context.size(); ++i)
    if (!replay_witness(axioms, assume, (*m)(a.context[i]), w.premises[i])) return false;
  return true;
}

}  // namespace oml
