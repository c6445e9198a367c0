#include "oml/equality.hpp"

#include <algorithm>

#include "oml/error.hpp"

namespace oml {

const char* show_rw(RW r) {
  switch (r) {
    case RW::Beta: return "beta";
    case RW::Eta: return "eta";
    case RW::MuUnroll: return "unroll";
    case RW::LetInline: return "let";
    case RW::Method: return "method";
    case RW::ImprStep: return "improve";
  }
  return "?";
}

std::string show_path(const std::vector<int>& p) {
  if (p.empty()) return "root";
  std::string s;
  for (size_t i = 0; i < p.size(); i++) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

TypeEnvPtr global_env(const TypedProgram& tp) {
  TypeEnvPtr env;
  for (auto& m : tp.cx.method_order) env = env_bind(env, m, method_scheme(tp.cx, m));
  for (auto& b : tp.prog.binds) env = env_bind(env, b.name, b.scheme);
  return env;
}

Scheme improve_scheme(const ClassContext& cx, const Scheme& s, std::vector<std::string>* steps) {
  PredList ps = s.qt.preds;
  TypePtr body = s.qt.body;
  while (true) {
    ImprStepResult r = improve_step(cx, ps);
    if (!r.applicable) break;
    if (!r.ok) throw OmlError("improve", r.detail);
    if (steps)
      for (auto& [v, t] : r.s.m) steps->push_back(v + ":=" + show_type(t));
    ps = r.s(ps);
    body = r.s(body);
    PredList dedup;
    for (auto& p : ps) {
      bool seen = false;
      for (auto& q : dedup) seen = seen || pred_eq(p, q);
      if (!seen) dedup.push_back(p);
    }
    ps = std::move(dedup);
  }
  Scheme out;
  out.qt = QualType{ps, body};
  std::vector<std::string> fv = ftv(QualType{ps, body}.body);
  std::set<std::string> keep(fv.begin(), fv.end());
  for (auto& p : ps)
    for (auto& v : ftv(PredList{p})) keep.insert(v);
  for (auto& v : s.vars)
    if (keep.count(v)) out.vars.push_back(v);
  return out;
}

namespace {

bool is_wrapper(Rule r) {
  return r == Rule::ForallI || r == Rule::ThenI || r == Rule::Impr || r == Rule::ForallE ||
         r == Rule::ThenE;
}

// derivation subtree for the expression at `path`, elimination chain included
DerivPtr deriv_at(DerivPtr d, const std::vector<int>& path) {
  size_t i = 0;
  while (true) {
    if (i == path.size()) return d;
    while (is_wrapper(d->rule)) d = d->kids.at(0);
    d = d->kids.at(static_cast<size_t>(path[i++]));
  }
}

ExprPtr replace_at(const ExprPtr& e, const std::vector<int>& path, size_t i, const ExprPtr& sub) {
  if (i == path.size()) return sub;
  const int c = path[i];
  switch (e->k) {
    case Expr::K::Lam:
      return elam(e->name, replace_at(e->e1, path, i + 1, sub));
    case Expr::K::Mu:
      return emu(e->name, replace_at(e->e1, path, i + 1, sub));
    case Expr::K::App:
      return c == 0 ? eapp(replace_at(e->e1, path, i + 1, sub), e->e2)
                    : eapp(e->e1, replace_at(e->e2, path, i + 1, sub));
    case Expr::K::Let:
      return c == 0 ? elet(e->name, replace_at(e->e1, path, i + 1, sub), e->e2)
                    : elet(e->name, e->e1, replace_at(e->e2, path, i + 1, sub));
    default:
      throw OmlError("internal", "rewrite path leaves the term");
  }
}

struct CandWalk {
  const TypedProgram& tp;
  DerivPtr root;
  ExprPtr whole;
  Scheme scheme;
  bool all = false;
  std::vector<RewriteStep> out;

  void add(RW rule, const std::vector<int>& path, const ExprPtr& sub, std::string note = "") {
    RewriteStep st;
    st.rule = rule;
    st.path = path;
    st.before = whole;
    st.after = replace_at(whole, path, 0, sub);
    st.scheme_before = scheme;
    st.scheme_after = scheme;
    st.note = std::move(note);
    out.push_back(std::move(st));
  }

  void walk(const ExprPtr& e, std::vector<int>& path, std::vector<std::string>& binders) {
    switch (e->k) {
      case Expr::K::App:
        if (e->e1->k == Expr::K::Lam)
          add(RW::Beta, path, subst_expr(e->e1->e1, e->e1->name, e->e2));
        break;
      case Expr::K::Lam:
        if (e->e1->k == Expr::K::App && e->e1->e2->k == Expr::K::Var && e->e1->e2->name == e->name &&
            !free_vars(e->e1->e1).count(e->name))
          add(RW::Eta, path, e->e1->e1);
        break;
      case Expr::K::Mu:
        if (all) add(RW::MuUnroll, path, subst_expr(e->e1, e->name, e));
        break;
      case Expr::K::Let:
        add(RW::LetInline, path, subst_expr(e->e2, e->name, e->e1));
        break;
      case Expr::K::Var: {
        const std::string& x = e->name;
        bool local = std::find(binders.begin(), binders.end(), x) != binders.end();
        if (!local && tp.cx.is_method(x)) {
          // instance chosen by the evidence for the class predicate, the
          // innermost context elimination of the occurrence's chain
          DerivPtr d = deriv_at(root, path);
          DerivPtr cls;
          while (is_wrapper(d->rule)) {
            if (d->rule == Rule::ThenE) cls = d;
            d = d->kids.at(0);
          }
          if (cls && cls->pi.cls == tp.cx.si.at(x).cls && cls->wit.by_axiom) {
            const ExprPtr* impl = tp.cx.impl(x, cls->wit.axiom);
            if (impl) {
              bool captured = false;
              for (auto& fv : free_vars(*impl))
                captured = captured || std::find(binders.begin(), binders.end(), fv) != binders.end();
              if (!captured) add(RW::Method, path, *impl, x + " -> " + cls->wit.axiom);
            }
          }
        }
        break;
      }
      case Expr::K::Const:
        break;
    }
    auto down = [&](const ExprPtr& kid, int c, const std::string* binder) {
      path.push_back(c);
      if (binder) binders.push_back(*binder);
      walk(kid, path, binders);
      if (binder) binders.pop_back();
      path.pop_back();
    };
    switch (e->k) {
      case Expr::K::Lam:
      case Expr::K::Mu:
        down(e->e1, 0, &e->name);
        break;
      case Expr::K::App:
        down(e->e1, 0, nullptr);
        down(e->e2, 1, nullptr);
        break;
      case Expr::K::Let:
        down(e->e1, 0, nullptr);
        down(e->e2, 1, &e->name);
        break;
      default:
        break;
    }
  }
};

}  // namespace

std::vector<RewriteStep> rewrite_candidates(const TypedProgram& tp, const ExprPtr& e, const Scheme& s,
                                            bool all, int entail_depth) {
  CandWalk cw{tp, check_scheme(tp.cx, global_env(tp), e, s, {}, entail_depth), e, s, all, {}};
  std::vector<int> path;
  std::vector<std::string> binders;
  cw.walk(e, path, binders);
  if (all) {
    try {
      Scheme improved = improve_scheme(tp.cx, s);
      if (!scheme_eq(improved, s)) {
        RewriteStep st;
        st.rule = RW::ImprStep;
        st.before = st.after = e;
        st.scheme_before = s;
        st.scheme_after = improved;
        cw.out.push_back(std::move(st));
      }
    } catch (const OmlError&) {
      // irreconcilable improvement: no admissible scheme step
    }
  }
  return cw.out;
}

NormResult normalize(const TypedProgram& tp, ExprPtr e, const Scheme& s, size_t fuel,
                     int entail_depth) {
  NormResult r;
  r.expr = std::move(e);
  for (size_t n = 0; n < fuel; n++) {
    auto cands = rewrite_candidates(tp, r.expr, s, false, entail_depth);
    if (cands.empty()) {
      r.complete = true;
      return r;
    }
    RewriteStep st = cands.front();
    check_scheme(tp.cx, global_env(tp), st.after, s, {}, entail_depth);  // step stays well typed
    r.expr = st.after;
    r.steps.push_back(std::move(st));
  }
  return r;
}

EquivResult oracle_equiv(const TypedProgram& tp, const ExprPtr& a, const ExprPtr& b, const Scheme& s,
                         const EvalCfg& cfg) {
  auto amb = ambiguous_vars(tp.cx, s);
  if (!amb.empty())
    throw OmlError("ambiguous", "cannot compare at this scheme: variable '" + amb.front() +
                                    "' is not determined by the instance type");
  Program p2 = tp.prog;
  p2.binds.push_back(Binding{"#lhs", s, a, 0});
  p2.binds.push_back(Binding{"#rhs", s, b, 0});
  TypedProgram tp2 = check_program(p2, {}, cfg.entail_depth);
  Evaluator ev(tp2, cfg);
  EquivResult r;
  r.keys = ev.bind_keys("#lhs");
  for (auto& k : r.keys) {
    ValuePtr va = ev.eval_bind_at("#lhs", k);
    ValuePtr vb = ev.eval_bind_at("#rhs", k);
    if (!val_eq(va, vb)) {
      r.ok = false;
      r.key = k;
      r.lhs = show_value(cfg.dom, k, va);
      r.rhs = show_value(cfg.dom, k, vb);
      return r;
    }
  }
  r.ok = true;
  return r;
}

}  // namespace oml
