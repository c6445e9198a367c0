#include "oml/typing.hpp"

#include <algorithm>
#include <cctype>

#include "oml/error.hpp"
#include "oml/unify.hpp"

namespace oml {

const char* show_rule(Rule r) {
  switch (r) {
    case Rule::Var: return "Var";
    case Rule::Const: return "Const";
    case Rule::LamI: return "LamI";
    case Rule::AppE: return "AppE";
    case Rule::Mu: return "Mu";
    case Rule::ThenI: return "ThenI";
    case Rule::ThenE: return "ThenE";
    case Rule::ForallI: return "ForallI";
    case Rule::ForallE: return "ForallE";
    case Rule::Let: return "Let";
    case Rule::Impr: return "Impr";
    case Rule::Ctxt: return "Ctxt";
  }
  return "?";
}

TypeEnvPtr env_bind(TypeEnvPtr parent, std::string name, Scheme s) {
  auto e = std::make_shared<TypeEnv>();
  e->parent = std::move(parent);
  e->name = std::move(name);
  e->scheme = std::move(s);
  return e;
}

const Scheme* env_lookup(const TypeEnvPtr& env, const std::string& name) {
  for (const TypeEnv* e = env.get(); e; e = e->parent.get())
    if (e->name == name) return &e->scheme;
  return nullptr;
}

bool is_int_literal(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::optional<TypePtr> const_type(const std::string& name) {
  if (is_int_literal(name)) return tcon("Int");
  if (name == "true" || name == "false") return tcon("Bool");
  static const std::map<std::string, TypePtr> builtins = {
      {"not", tarr(tcon("Bool"), tcon("Bool"))},
      {"succ", tarr(tcon("Int"), tcon("Int"))},
      {"eqInt", tarr(tcon("Int"), tarr(tcon("Int"), tcon("Bool")))},
      {"eqBool", tarr(tcon("Bool"), tarr(tcon("Bool"), tcon("Bool")))},
  };
  auto it = builtins.find(name);
  if (it != builtins.end()) return it->second;
  return std::nullopt;
}

std::vector<std::string> ambiguous_vars(const ClassContext& cx, const Scheme& s) {
  std::set<std::string> reach;
  for (const auto& v : ftv(s.qt.body)) reach.insert(v);
  reach = fd_closure(cx, std::move(reach), s.qt.preds);
  std::vector<std::string> out;
  for (const auto& v : s.vars)
    if (!reach.count(v)) out.push_back(v);
  return out;
}

const DerivPtr* TypedProgram::find_inst(const std::string& key) const {
  for (const auto& [k, d] : inst_derivs)
    if (k == key) return &d;
  return nullptr;
}

const DerivPtr* TypedProgram::find_bind_deriv(const std::string& name) const {
  for (const auto& [k, d] : bind_derivs)
    if (k == name) return &d;
  return nullptr;
}

namespace {

bool is_meta(const std::string& n) { return !n.empty() && n[0] == '?'; }

std::set<std::string> metas_in(const TypePtr& t) {
  std::set<std::string> out;
  for (const auto& v : ftv(t))
    if (is_meta(v)) out.insert(v);
  return out;
}

// ---------- constraint collection ----------

struct Infer {
  const ClassContext& cx;
  PredList ambient;  // assumption context used by improvement
  int entail_depth;
  int counter = 0;
  Subst su;
  PredList collected;
  std::map<const Expr*, std::vector<TypePtr>> occ;  // quantifier instantiations
  std::map<const Expr*, Scheme> let_scheme;
  std::set<std::string> used_tv;
  int gen_counter = 0;

  TypePtr fresh() { return tvar("?" + std::to_string(counter++)); }

  [[noreturn]] void terr(const std::string& msg, const ExprPtr& e) {
    throw OmlError("type", msg, e ? e->line : 0, e ? e->col : 0);
  }

  void unify_or_fail(const TypePtr& a, const TypePtr& b, const ExprPtr& e) {
    UnifyResult r = unify(su(a), su(b));
    if (!r.ok)
      terr("cannot match " + show_type(su(a)) + " with " + show_type(su(b)) + ": " + r.detail, e);
    su = compose(r.s, su);
  }

  // apply every improvement step that only binds inference variables; in
  // strict mode a remaining applicable-but-stuck pair is an error
  void improve_all(bool strict) {
    for (;;) {
      PredList ps = ambient;
      for (const auto& p : collected) ps.push_back(su(p));
      std::set<std::string> flex;
      for (const auto& p : ps)
        for (const auto& v : ftv(PredList{p}))
          if (is_meta(v)) flex.insert(v);
      ImprStepResult r = improve_step(cx, ps, &flex);
      if (r.ok) {
        su = compose(r.s, su);
        continue;
      }
      if (r.applicable && strict) throw OmlError("improve", r.detail);
      return;
    }
  }

  std::string fresh_gen_name() {
    for (;;) {
      int i = gen_counter++;
      std::string n(1, static_cast<char>('a' + i % 26));
      if (i >= 26) n += std::to_string(i / 26);
      if (used_tv.insert(n).second) return n;
    }
  }

  std::set<std::string> env_metas(const TypeEnvPtr& env) {
    std::set<std::string> out;
    for (const TypeEnv* e = env.get(); e; e = e->parent.get())
      for (const auto& v : ftv(su(e->scheme)))
        if (is_meta(v)) out.insert(v);
    return out;
  }

  TypePtr infer(const TypeEnvPtr& env, const ExprPtr& e) {
    switch (e->k) {
      case Expr::K::Var: {
        if (const Scheme* s = env_lookup(env, e->name)) {
          std::vector<TypePtr> ms;
          Subst inst;
          for (const auto& v : s->vars) {
            TypePtr m = fresh();
            ms.push_back(m);
            inst.m.emplace(v, m);
          }
          occ[e.get()] = ms;
          for (const auto& p : s->qt.preds) collected.push_back(inst(p));
          return inst(s->qt.body);
        }
        if (auto bt = const_type(e->name)) {
          occ[e.get()] = {};
          return *bt;
        }
        terr("unbound variable '" + e->name + "'", e);
      }
      case Expr::K::Const: {
        if (is_int_literal(e->name)) return tcon("Int");
        if (e->name == "true" || e->name == "false") return tcon("Bool");
        terr("unknown constant '" + e->name + "'", e);
      }
      case Expr::K::Lam: {
        TypePtr a = fresh();
        occ[e.get()] = {a};
        TypePtr t = infer(env_bind(env, e->name, mono_scheme(a)), e->e1);
        return tarr(a, t);
      }
      case Expr::K::App: {
        TypePtr tf = infer(env, e->e1);
        TypePtr ta = infer(env, e->e2);
        TypePtr b = fresh();
        unify_or_fail(tf, tarr(ta, b), e);
        return b;
      }
      case Expr::K::Mu: {
        TypePtr a = fresh();
        occ[e.get()] = {a};
        TypePtr t = infer(env_bind(env, e->name, mono_scheme(a)), e->e1);
        unify_or_fail(a, t, e);
        return a;
      }
      case Expr::K::Let: {
        TypePtr t1 = infer(env, e->e1);
        improve_all(false);
        TypePtr t1s = su(t1);
        std::set<std::string> envm = env_metas(env);
        std::set<std::string> collm;
        for (const auto& p : collected)
          for (const auto& v : ftv(PredList{su(p)}))
            if (is_meta(v)) collm.insert(v);
        Subst ren;
        std::vector<std::string> names;
        for (const auto& v : ftv(t1s)) {
          if (!is_meta(v) || envm.count(v) || collm.count(v) || ren.m.count(v)) continue;
          std::string n = fresh_gen_name();
          names.push_back(n);
          ren.m.emplace(v, tvar(n));
        }
        su = compose(ren, su);
        Scheme sx{names, QualType{{}, su(t1)}};
        let_scheme[e.get()] = sx;
        return infer(env_bind(env, e->name, sx), e->e2);
      }
    }
    terr("malformed expression", e);
  }
};

// ---------- elaboration to derivations ----------

Scheme peel_one(const Scheme& s, const TypePtr& at) {
  Scheme rest{std::vector<std::string>(s.vars.begin() + 1, s.vars.end()), s.qt};
  return Subst::one(s.vars[0], at)(rest);
}

struct Elab {
  const ClassContext& cx;
  Infer& inf;
  PredList q_fin;
  int entail_depth;

  std::shared_ptr<Deriv> mk(Rule r, const TypeEnvPtr& env, const ExprPtr& e, Scheme s) {
    auto d = std::make_shared<Deriv>();
    d->rule = r;
    d->preds = q_fin;
    d->env = env;
    d->subject = e;
    d->scheme = std::move(s);
    return d;
  }

  const std::vector<TypePtr>& occ_of(const ExprPtr& e) {
    auto it = inf.occ.find(e.get());
    if (it == inf.occ.end()) throw OmlError("internal", "no recorded instantiation for " + show_expr(e));
    return it->second;
  }

  DerivPtr elab(const TypeEnvPtr& env, const ExprPtr& e) {
    switch (e->k) {
      case Expr::K::Var: {
        const Scheme* s0 = env_lookup(env, e->name);
        if (!s0) {
          auto bt = const_type(e->name);
          if (!bt) throw OmlError("internal", "unbound '" + e->name + "' at elaboration");
          auto n = mk(Rule::Const, env, e, mono_scheme(*bt));
          n->var_name = e->name;
          return n;
        }
        auto node = mk(Rule::Var, env, e, *s0);
        node->var_name = e->name;
        DerivPtr cur = node;
        Scheme cs = *s0;
        const auto& ms = occ_of(e);
        for (size_t i = 0; i < ms.size(); ++i) {
          TypePtr at = inf.su(ms[i]);
          std::string v = cs.vars[0];
          cs = peel_one(cs, at);
          auto n2 = mk(Rule::ForallE, env, e, cs);
          n2->kids = {cur};
          n2->at_type = at;
          n2->tv = v;
          cur = n2;
        }
        while (!cs.qt.preds.empty()) {
          Pred q = cs.qt.preds.front();
          EntailResult er = entail(cx.axioms, q_fin, q, entail_depth);
          if (!er.ok)
            throw OmlError("type", "cannot resolve " + show_pred(q) + " at use of '" + e->name +
                                       "': " + er.detail,
                           e->line, e->col);
          cs.qt.preds.erase(cs.qt.preds.begin());
          auto n2 = mk(Rule::ThenE, env, e, cs);
          n2->kids = {cur};
          n2->pi = q;
          n2->wit = er.w;
          cur = n2;
        }
        return cur;
      }
      case Expr::K::Const: {
        auto bt = const_type(e->name);
        if (!bt) throw OmlError("internal", "unknown constant at elaboration");
        auto n = mk(Rule::Const, env, e, mono_scheme(*bt));
        n->var_name = e->name;
        return n;
      }
      case Expr::K::Lam: {
        TypePtr a = inf.su(occ_of(e)[0]);
        TypeEnvPtr env2 = env_bind(env, e->name, mono_scheme(a));
        DerivPtr kid = elab(env2, e->e1);
        auto n = mk(Rule::LamI, env, e, mono_scheme(tarr(a, kid->scheme.qt.body)));
        n->kids = {kid};
        n->var_name = e->name;
        return n;
      }
      case Expr::K::App: {
        DerivPtr k1 = elab(env, e->e1);
        DerivPtr k2 = elab(env, e->e2);
        TypePtr tf = k1->scheme.qt.body;
        if (tf->k != Type::K::Arr) throw OmlError("internal", "non-function in application");
        auto n = mk(Rule::AppE, env, e, mono_scheme(tf->b));
        n->kids = {k1, k2};
        return n;
      }
      case Expr::K::Mu: {
        TypePtr a = inf.su(occ_of(e)[0]);
        TypeEnvPtr env2 = env_bind(env, e->name, mono_scheme(a));
        DerivPtr kid = elab(env2, e->e1);
        auto n = mk(Rule::Mu, env, e, mono_scheme(a));
        n->kids = {kid};
        n->var_name = e->name;
        return n;
      }
      case Expr::K::Let: {
        auto it = inf.let_scheme.find(e.get());
        if (it == inf.let_scheme.end()) throw OmlError("internal", "no let scheme recorded");
        Scheme sx = inf.su(it->second);
        DerivPtr m = elab(env, e->e1);
        DerivPtr w = m;
        for (size_t i = sx.vars.size(); i-- > 0;) {
          Scheme ws{std::vector<std::string>(sx.vars.begin() + i, sx.vars.end()), sx.qt};
          auto n2 = mk(Rule::ForallI, env, e->e1, ws);
          n2->kids = {w};
          n2->tv = sx.vars[i];
          w = n2;
        }
        DerivPtr k2 = elab(env_bind(env, e->name, sx), e->e2);
        auto n = mk(Rule::Let, env, e, k2->scheme);
        n->kids = {w, k2};
        n->var_name = e->name;
        return n;
      }
    }
    throw OmlError("internal", "malformed expression at elaboration");
  }
};

void validate_scheme_decl(const ClassContext& cx, const Scheme& s) {
  auto fv = ftv(s);
  if (!fv.empty())
    throw OmlError("type", "signature mentions unbound type variable '" + fv[0] + "' in " +
                               show_scheme(s));
  for (const auto& q : s.qt.preds) {
    auto it = cx.classes.find(q.cls);
    if (it == cx.classes.end())
      throw OmlError("type", "unknown class '" + q.cls + "' in " + show_scheme(s));
    if (q.args.size() != it->second.params.size())
      throw OmlError("type", "class '" + q.cls + "' applied to " + std::to_string(q.args.size()) +
                                 " arguments in " + show_scheme(s));
  }
}

}  // namespace

DerivPtr check_scheme(const ClassContext& cx, const TypeEnvPtr& env, const ExprPtr& body,
                      const Scheme& declared, const ElabOptions& opts, int entail_depth) {
  validate_scheme_decl(cx, declared);
  {
    auto amb = ambiguous_vars(cx, declared);
    if (!amb.empty()) {
      std::string vs;
      for (const auto& v : amb) vs += (vs.empty() ? "" : ", ") + v;
      throw OmlError("ambiguous", "ambiguous type variable(s) {" + vs + "} in " +
                                      show_scheme(declared));
    }
  }

  Infer inf{cx, declared.qt.preds, entail_depth};
  for (const auto& v : declared.vars) inf.used_tv.insert(v);
  TypePtr t0 = inf.infer(env, body);
  inf.improve_all(false);

  // improvement chain over the declared context
  std::vector<std::pair<Subst, ImprJustPair>> steps;
  std::vector<PredList> chain_q{declared.qt.preds};
  std::vector<TypePtr> chain_t{declared.qt.body};
  for (;;) {
    ImprStepResult r = improve_step(cx, chain_q.back(), nullptr);
    if (!r.applicable) break;
    if (!r.ok) throw OmlError("improve", r.detail);
    steps.emplace_back(r.s, ImprJustPair{r.earlier, r.later, r.fd});
    chain_q.push_back(r.s(chain_q.back()));
    chain_t.push_back(r.s(chain_t.back()));
  }
  PredList q_fin = chain_q.back();
  TypePtr t_imp = chain_t.back();

  // the inferred type must specialize to the (improved) declared body
  TypePtr t_prin = inf.su(t0);
  std::set<std::string> flex = metas_in(t_prin);
  auto m = match_onto(t_prin, t_imp, &flex);
  if (!m)
    throw OmlError("type", "declared signature is too general: body has type " +
                               show_type(t_prin) + " but the signature requires " +
                               show_type(t_imp));
  inf.su = compose(*m, inf.su);

  inf.ambient = q_fin;
  inf.improve_all(true);

  // ground any leftover inference variables
  Subst def;
  for (int i = 0; i < inf.counter; ++i) {
    TypePtr img = inf.su(tvar("?" + std::to_string(i)));
    for (const auto& v : ftv(img))
      if (is_meta(v) && !def.m.count(v)) def.m.emplace(v, tcon("Int"));
  }
  if (!def.m.empty()) inf.su = compose(def, inf.su);

  for (const auto& p0 : inf.collected) {
    Pred p = inf.su(p0);
    EntailResult er = entail(cx.axioms, q_fin, p, entail_depth);
    if (!er.ok) throw OmlError("type", "cannot resolve " + show_pred(p) + ": " + er.detail);
  }

  Elab el{cx, inf, q_fin, entail_depth};
  DerivPtr node = el.elab(env, body);
  if (!type_eq(node->scheme.qt.body, t_imp))
    throw OmlError("internal", "elaborated type " + show_type(node->scheme.qt.body) +
                                   " differs from " + show_type(t_imp));

  for (size_t k = steps.size(); k-- > 0;) {
    auto d = std::make_shared<Deriv>();
    d->rule = Rule::Impr;
    d->preds = chain_q[k];
    d->env = env;
    d->subject = body;
    d->scheme = mono_scheme(chain_t[k]);
    d->kids = {node};
    d->impr = steps[k].first;
    d->just = {steps[k].second};
    node = d;
  }

  const PredList& ps = declared.qt.preds;
  if (opts.redundant_then && !ps.empty()) {
    // detour: re-introduce then immediately discharge the last assumption
    const Pred& q = ps.back();
    auto ti = std::make_shared<Deriv>();
    ti->rule = Rule::ThenI;
    ti->preds = ps;
    ti->env = env;
    ti->subject = body;
    ti->scheme = Scheme{{}, QualType{{q}, chain_t[0]}};
    ti->kids = {node};
    ti->pi = q;
    auto te = std::make_shared<Deriv>();
    te->rule = Rule::ThenE;
    te->preds = ps;
    te->env = env;
    te->subject = body;
    te->scheme = mono_scheme(chain_t[0]);
    te->kids = {ti};
    te->pi = q;
    te->wit = EntailWitness{};
    node = te;
  }
  for (size_t i = ps.size(); i-- > 0;) {
    auto d = std::make_shared<Deriv>();
    d->rule = Rule::ThenI;
    d->preds = PredList(ps.begin(), ps.begin() + i);
    d->env = env;
    d->subject = body;
    d->scheme = Scheme{{}, PredList(ps.begin() + i, ps.end()), declared.qt.body};
    d->kids = {node};
    d->pi = ps[i];
    node = d;
  }

  std::vector<std::string> vs = declared.vars;
  if (opts.reverse_quantifiers) std::reverse(vs.begin(), vs.end());
  for (size_t i = vs.size(); i-- > 0;) {
    auto d = std::make_shared<Deriv>();
    d->rule = Rule::ForallI;
    d->env = env;
    d->subject = body;
    d->scheme = Scheme{std::vector<std::string>(vs.begin() + i, vs.end()), declared.qt};
    d->kids = {node};
    d->tv = vs[i];
    node = d;
  }
  return node;
}

TypedProgram check_program(const Program& p, const ElabOptions& opts, int entail_depth) {
  TypedProgram tp;
  tp.prog = p;
  tp.cx = build_context(p);

  TypeEnvPtr menv = nullptr;
  for (const auto& mname : tp.cx.method_order) {
    Scheme sx = method_scheme(tp.cx, mname);
    auto amb = ambiguous_vars(tp.cx, sx);
    if (!amb.empty())
      throw OmlError("ambiguous", "method '" + mname + "' does not determine {" + amb[0] + "}");
    menv = env_bind(menv, mname, sx);
  }

  std::vector<DerivPtr> ctxt_kids;
  for (const auto& dname : tp.cx.instance_order) {
    const Axiom* ax = tp.cx.find_axiom(dname);
    const ClassDecl& c = tp.cx.classes.at(ax->head.cls);
    for (const auto& [mname, sig] : c.methods) {
      Scheme sxd = instance_method_scheme(tp.cx, mname, dname);
      const ExprPtr* impl = tp.cx.impl(mname, dname);
      DerivPtr dv = check_scheme(tp.cx, menv, *impl, sxd, opts, entail_depth);
      tp.inst_derivs.emplace_back(mname + "@" + dname, dv);
      ctxt_kids.push_back(dv);
    }
  }
  auto root = std::make_shared<Deriv>();
  root->rule = Rule::Ctxt;
  root->kids = std::move(ctxt_kids);
  tp.ctxt_root = root;

  TypeEnvPtr env = menv;
  for (const auto& b : p.binds) {
    if (tp.cx.is_method(b.name))
      throw OmlError("type", "binding '" + b.name + "' shadows a method", b.line, 0);
    if (const_type(b.name))
      throw OmlError("type", "binding '" + b.name + "' shadows a builtin", b.line, 0);
    DerivPtr dv = check_scheme(tp.cx, env, b.body, b.scheme, opts, entail_depth);
    tp.bind_derivs.emplace_back(b.name, dv);
    env = env_bind(env, b.name, b.scheme);
  }
  return tp;
}

namespace {

bool preds_subset(const PredList& a, const PredList& b) {
  for (const auto& p : a) {
    bool found = false;
    for (const auto& q : b) found = found || pred_eq(p, q);
    if (!found) return false;
  }
  return true;
}

bool preds_set_eq(const PredList& a, const PredList& b) {
  return preds_subset(a, b) && preds_subset(b, a);
}

bool replay_rec(const ClassContext& cx, const DerivPtr& d, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = std::string(show_rule(d->rule)) + ": " + msg;
    return false;
  };
  for (const auto& k : d->kids)
    if (!replay_rec(cx, k, why)) return false;
  switch (d->rule) {
    case Rule::Ctxt:
      return true;
    case Rule::Var: {
      const Scheme* s = env_lookup(d->env, d->var_name);
      if (!s) return fail("unbound '" + d->var_name + "'");
      if (!scheme_eq(*s, d->scheme)) return fail("environment disagrees at '" + d->var_name + "'");
      return true;
    }
    case Rule::Const: {
      auto bt = const_type(d->var_name);
      if (!bt) return fail("unknown constant");
      if (!scheme_is_mono(d->scheme) || !type_eq(d->scheme.qt.body, *bt))
        return fail("constant type mismatch");
      return true;
    }
    case Rule::LamI: {
      if (d->kids.size() != 1) return fail("arity");
      const Deriv& k = *d->kids[0];
      const TypePtr& t = d->scheme.qt.body;
      if (t->k != Type::K::Arr) return fail("not a function type");
      if (!type_eq(k.scheme.qt.body, t->b)) return fail("body type mismatch");
      const Scheme* bs = env_lookup(k.env, d->var_name);
      if (!bs || !scheme_is_mono(*bs) || !type_eq(bs->qt.body, t->a))
        return fail("binder type mismatch");
      if (!preds_set_eq(k.preds, d->preds)) return fail("ambient context changed");
      return true;
    }
    case Rule::AppE: {
      if (d->kids.size() != 2) return fail("arity");
      const TypePtr& tf = d->kids[0]->scheme.qt.body;
      if (tf->k != Type::K::Arr) return fail("left side not a function");
      if (!type_eq(tf->a, d->kids[1]->scheme.qt.body)) return fail("argument type mismatch");
      if (!type_eq(tf->b, d->scheme.qt.body)) return fail("result type mismatch");
      return true;
    }
    case Rule::Mu: {
      if (d->kids.size() != 1) return fail("arity");
      const Deriv& k = *d->kids[0];
      if (!type_eq(k.scheme.qt.body, d->scheme.qt.body)) return fail("body type mismatch");
      const Scheme* bs = env_lookup(k.env, d->var_name);
      if (!bs || !type_eq(bs->qt.body, d->scheme.qt.body)) return fail("binder type mismatch");
      return true;
    }
    case Rule::ThenI: {
      if (d->kids.size() != 1) return fail("arity");
      const Deriv& k = *d->kids[0];
      if (d->scheme.qt.preds.empty() || !pred_eq(d->scheme.qt.preds.front(), d->pi))
        return fail("introduced predicate mismatch");
      Scheme rest{{}, PredList(d->scheme.qt.preds.begin() + 1, d->scheme.qt.preds.end()),
                  d->scheme.qt.body};
      if (!scheme_eq(k.scheme, rest)) return fail("premise scheme mismatch");
      PredList ext = d->preds;
      ext.push_back(d->pi);
      if (!preds_set_eq(k.preds, ext)) return fail("premise context mismatch");
      return true;
    }
    case Rule::ThenE: {
      if (d->kids.size() != 1) return fail("arity");
      const Deriv& k = *d->kids[0];
      Scheme want{{}, PredList{d->pi}, d->scheme.qt.body};
      for (const auto& q : d->scheme.qt.preds) want.qt.preds.push_back(q);
      if (!scheme_eq(k.scheme, want)) return fail("premise scheme mismatch");
      if (!preds_set_eq(k.preds, d->preds)) return fail("ambient context changed");
      if (!replay_witness(cx.axioms, d->preds, d->pi, d->wit)) return fail("witness rejected");
      return true;
    }
    case Rule::ForallI: {
      if (d->kids.size() != 1) return fail("arity");
      const Deriv& k = *d->kids[0];
      if (d->scheme.vars.empty() || d->scheme.vars.front() != d->tv)
        return fail("quantifier mismatch");
      Scheme rest{std::vector<std::string>(d->scheme.vars.begin() + 1, d->scheme.vars.end()),
                  d->scheme.qt};
      if (!scheme_eq(k.scheme, rest)) return fail("premise scheme mismatch");
      for (const auto& v : ftv(d->preds))
        if (v == d->tv) return fail("quantified variable free in context");
      for (const TypeEnv* e = d->env.get(); e; e = e->parent.get())
        for (const auto& v : ftv(e->scheme))
          if (v == d->tv) return fail("quantified variable free in environment");
      return true;
    }
    case Rule::ForallE: {
      if (d->kids.size() != 1) return fail("arity");
      const Deriv& k = *d->kids[0];
      if (k.scheme.vars.empty() || k.scheme.vars.front() != d->tv)
        return fail("premise not quantified by " + d->tv);
      Scheme want = peel_one(k.scheme, d->at_type);
      if (!scheme_eq(want, d->scheme)) return fail("instantiation mismatch");
      return true;
    }
    case Rule::Let: {
      if (d->kids.size() != 2) return fail("arity");
      const Deriv& k2 = *d->kids[1];
      if (!scheme_eq(k2.scheme, d->scheme)) return fail("body scheme mismatch");
      const Scheme* bs = env_lookup(k2.env, d->var_name);
      if (!bs || !scheme_eq(*bs, d->kids[0]->scheme)) return fail("bound scheme mismatch");
      return true;
    }
    case Rule::Impr: {
      if (d->kids.size() != 1 || d->just.size() != 1) return fail("arity");
      const Deriv& k = *d->kids[0];
      const ImprJustPair& j = d->just[0];
      if (!type_eq(k.scheme.qt.body, d->impr(d->scheme.qt.body))) return fail("body mismatch");
      if (!preds_set_eq(k.preds, d->impr(d->preds))) return fail("context mismatch");
      bool fe = false, fl = false;
      for (const auto& q : d->preds) {
        fe = fe || pred_eq(q, j.earlier);
        fl = fl || pred_eq(q, j.later);
      }
      if (!fe || !fl) return fail("justifying pair not assumed");
      bool fd_ok = false;
      for (const auto& f : cx.fundeps)
        fd_ok = fd_ok || (f.cls == j.fd.cls && f.from == j.fd.from && f.to == j.fd.to);
      if (!fd_ok) return fail("unknown dependency");
      if (j.earlier.cls != j.fd.cls || j.later.cls != j.fd.cls) return fail("class mismatch");
      for (int ix : j.fd.from)
        if (!type_eq(j.earlier.args[ix], j.later.args[ix])) return fail("sources differ");
      for (int ix : j.fd.to)
        if (!type_eq(d->impr(j.earlier.args[ix]), d->impr(j.later.args[ix])))
          return fail("substitution does not reconcile targets");
      return true;
    }
  }
  return fail("unknown rule");
}

}  // namespace

bool replay_deriv(const ClassContext& cx, const DerivPtr& d, std::string* why) {
  return replay_rec(cx, d, why);
}

namespace {

void show_deriv_rec(const DerivPtr& d, int depth, std::string& out) {
  out.append(static_cast<size_t>(depth) * 2, ' ');
  out += show_rule(d->rule);
  if (!d->var_name.empty()) out += " " + d->var_name;
  if (d->rule == Rule::ForallI || d->rule == Rule::ForallE) out += " " + d->tv;
  if (d->rule == Rule::ForallE) out += " @ " + show_type(d->at_type);
  if (d->rule == Rule::ThenI || d->rule == Rule::ThenE) out += " " + show_pred(d->pi);
  if (d->rule == Rule::Impr) out += " [" + show_subst(d->impr) + "]";
  if (d->rule != Rule::Ctxt) out += " : " + show_scheme(d->scheme);
  out += "\n";
  for (const auto& k : d->kids) show_deriv_rec(k, depth + 1, out);
}

}  // namespace

std::string show_deriv(const DerivPtr& d) {
  std::string out;
  show_deriv_rec(d, 0, out);
  return out;
}

}  // namespace oml
