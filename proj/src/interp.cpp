#include "oml/interp.hpp"

#include <atomic>
#include <exception>

#include "oml/error.hpp"
#include "oml/unify.hpp"

namespace oml {

namespace {

LEnvPtr bind_strict(LEnvPtr p, std::string name, const TypePtr& key, ValuePtr v) {
  auto e = std::make_shared<LEnv>();
  e->parent = std::move(p);
  e->name = std::move(name);
  e->sv[key] = std::move(v);
  return e;
}

LEnvPtr bind_lazy(LEnvPtr p, std::string name, DerivPtr d, Subst s, LEnvPtr at) {
  auto e = std::make_shared<LEnv>();
  e->parent = std::move(p);
  e->name = std::move(name);
  e->lazy = true;
  e->ld = std::move(d);
  e->ls = std::move(s);
  e->lenv = std::move(at);
  return e;
}

const LEnv* lenv_lookup(const LEnvPtr& env, const std::string& name) {
  for (const LEnv* e = env.get(); e; e = e->parent.get())
    if (e->name == name) return e;
  return nullptr;
}

// extend acc so that acc(pat) == tgt; false when impossible or inconsistent
bool match_accum(const TypePtr& pat, const TypePtr& tgt, Subst& acc) {
  auto r = match_onto(pat, tgt);
  if (!r) return false;
  for (auto& [v, t] : r->m) {
    auto it = acc.m.find(v);
    if (it == acc.m.end())
      acc.m.emplace(v, t);
    else if (!type_eq(it->second, t))
      return false;
  }
  return true;
}

Subst subst_union(const Subst& a, const Subst& b) {
  Subst r = a;
  for (auto& [v, t] : b.m) {
    auto it = r.m.find(v);
    if (it == r.m.end())
      r.m.emplace(v, t);
    else if (!type_eq(it->second, t))
      throw OmlError("internal", "conflicting ground assignments for '" + v + "'");
  }
  return r;
}

}  // namespace

std::vector<TypePtr> Evaluator::scheme_keys(const PredList& outer, const Scheme& s) const {
  const std::string memo = show_preds(outer) + " => " + show_scheme(s);
  {
    std::lock_guard<std::mutex> lk(memo_mu);
    auto it = keys_memo.find(memo);
    if (it != keys_memo.end()) return it->second;
  }
  std::vector<TypePtr> ks = ground_instances(tp.cx.axioms, outer, s, cfg.uni, cfg.entail_depth);
  std::lock_guard<std::mutex> lk(memo_mu);
  return keys_memo.emplace(memo, std::move(ks)).first->second;
}

bool Evaluator::entails_ok(const PredList& from, const Pred& goal) const {
  const std::string memo = show_preds(from) + " |- " + show_pred(goal);
  {
    std::lock_guard<std::mutex> lk(memo_mu);
    auto it = entail_memo.find(memo);
    if (it != entail_memo.end()) return it->second;
  }
  bool ok = entail(tp.cx.axioms, from, goal, cfg.entail_depth).ok;
  std::lock_guard<std::mutex> lk(memo_mu);
  return entail_memo.emplace(memo, ok).first->second;
}

std::vector<TypePtr> Evaluator::method_keys(const std::string& m) const {
  return scheme_keys({}, method_scheme(tp.cx, m));
}

std::vector<TypePtr> Evaluator::bind_keys(const std::string& b) const {
  const Binding* bd = tp.prog.find_bind(b);
  if (!bd) throw OmlError("input", "unknown binding '" + b + "'");
  return scheme_keys({}, bd->scheme);
}

ValuePtr Evaluator::const_value(const std::string& name) const {
  const int n = cfg.dom.int_size;
  if (is_int_literal(name)) {
    long v = std::stol(name);
    return make_base("Int", static_cast<int>(((v % n) + n) % n));
  }
  if (name == "true") return make_base("Bool", 1);
  if (name == "false") return make_base("Bool", 0);
  if (name == "succ") {
    std::vector<ValuePtr> t(static_cast<size_t>(n) + 1);
    t[0] = bot();
    for (int i = 0; i < n; i++) t[static_cast<size_t>(i) + 1] = make_base("Int", (i + 1) % n);
    return make_fun(tcon("Int"), tcon("Int"), std::move(t));
  }
  if (name == "not") {
    return make_fun(tcon("Bool"), tcon("Bool"), {bot(), make_base("Bool", 1), make_base("Bool", 0)});
  }
  if (name == "eqInt" || name == "eqBool") {
    const std::string con = name == "eqInt" ? "Int" : "Bool";
    const int w = con == "Int" ? n : 2;
    std::vector<ValuePtr> outer(static_cast<size_t>(w) + 1);
    outer[0] = bot();
    for (int i = 0; i < w; i++) {
      std::vector<ValuePtr> inner(static_cast<size_t>(w) + 1);
      inner[0] = bot();
      for (int j = 0; j < w; j++) inner[static_cast<size_t>(j) + 1] = make_base("Bool", i == j ? 1 : 0);
      outer[static_cast<size_t>(i) + 1] = make_fun(tcon(con), tcon("Bool"), std::move(inner));
    }
    return make_fun(tcon(con), tarr(tcon(con), tcon("Bool")), std::move(outer));
  }
  throw OmlError("internal", "no built-in value for '" + name + "'");
}

ValuePtr Evaluator::lookup(const std::string& skey, const TypePtr& key) {
  auto it = store.find(skey);
  if (it != store.end()) {
    auto jt = it->second.find(key);
    if (jt != it->second.end()) return jt->second;
  }
  if (driving) {
#pragma omp critical(oml_demands)
    pending[skey].insert(key);
    return bot();
  }
  throw OmlError("eval", "no stored value for " + skey + " at " + show_type(key));
}

std::optional<ValuePtr> Evaluator::mono_of(const SchemeValue& sv) const {
  if (sv.empty()) return std::nullopt;
  if (sv.size() != 1) throw OmlError("internal", "expected a single-instance value");
  return sv.begin()->second;
}

void Evaluator::verify_node(const DerivPtr& d, const Subst& S, const SchemeValue& got) {
  PredList outer = S(d->preds);
  Scheme sc = S(d->scheme);
  std::vector<TypePtr> expect = scheme_keys(outer, sc);
  bool ok = expect.size() == got.size();
  if (ok)
    for (auto& k : expect)
      if (!got.count(k)) {
        ok = false;
        break;
      }
  if (!ok)
    throw OmlError("internal", std::string("instance set mismatch at ") + show_rule(d->rule) +
                                   " node of conclusion " + show_scheme(sc) + ": evaluated " +
                                   std::to_string(got.size()) + " keys, ground instances give " +
                                   std::to_string(expect.size()));
}

// Var possibly under ForallE/ThenE eliminations: walk to the variable, check
// each instantiation stays inside the universe and each context elimination
// is derivable, then fetch the conclusion's keys from the variable's source.
SchemeValue Evaluator::resolve_chain(const DerivPtr& top, const Subst& S, const LEnvPtr& lenv) {
  DerivPtr cur = top;
  std::vector<DerivPtr> chain;
  while (true) {
    chain.push_back(cur);
    if (cur->rule == Rule::ForallE) {
      TypePtr at = S(cur->at_type);
      if (!cfg.uni.contains(at))
        throw OmlError("eval", "instantiation outside universe: " + show_type(at));
      cur = cur->kids.at(0);
    } else if (cur->rule == Rule::ThenE) {
      if (!entails_ok(S(cur->preds), S(cur->pi))) return {};
      cur = cur->kids.at(0);
    } else {
      break;
    }
  }

  std::vector<TypePtr> keys = scheme_keys(S(top->preds), S(top->scheme));
  if (cfg.verify_keysets && chain.size() > 1) {
    // instantiation property along the chain: conclusions shrink inwards
    std::vector<TypePtr> prev = keys;
    for (size_t i = 1; i < chain.size(); i++) {
      std::vector<TypePtr> ks = scheme_keys(S(chain[i]->preds), S(chain[i]->scheme));
      std::set<TypePtr, TypeLess> here(ks.begin(), ks.end());
      for (auto& k : prev)
        if (!here.count(k))
          throw OmlError("internal", "instance " + show_type(k) +
                                         " missing from premise of " + show_rule(chain[i - 1]->rule));
      prev = std::move(ks);
    }
  }

  SchemeValue out;
  if (cur->rule == Rule::Var) {
    const std::string& x = cur->var_name;
    if (const LEnv* e = lenv_lookup(lenv, x)) {
      for (auto& k : keys) {
        if (!e->lazy) {
          auto it = e->sv.find(k);
          if (it == e->sv.end())
            throw OmlError("internal", "bound variable '" + x + "' has no value at " + show_type(k));
          out[k] = it->second;
        } else {
          auto v = eval_at(e->ld, k, e->ls, e->lenv);
          if (!v)
            throw OmlError("internal", "let binding '" + x + "' has no value at " + show_type(k));
          out[k] = *v;
        }
      }
    } else if (tp.cx.is_method(x)) {
      for (auto& k : keys) out[k] = lookup("m:" + x, k);
    } else if (tp.prog.find_bind(x)) {
      for (auto& k : keys) out[k] = lookup("b:" + x, k);
    } else {
      throw OmlError("internal", "unresolvable variable '" + x + "' during evaluation");
    }
  } else {
    SchemeValue sub = interp(cur, S, lenv);
    for (auto& k : keys) {
      auto it = sub.find(k);
      if (it == sub.end())
        throw OmlError("internal", "instance " + show_type(k) + " missing from eliminated value");
      out[k] = it->second;
    }
  }
  return out;
}

SchemeValue Evaluator::interp(const DerivPtr& d, const Subst& S, const LEnvPtr& lenv) {
  SchemeValue out;
  switch (d->rule) {
    case Rule::Ctxt:
      throw OmlError("internal", "context node has no value");

    case Rule::Var:
    case Rule::ForallE:
    case Rule::ThenE:
      out = resolve_chain(d, S, lenv);
      break;

    case Rule::Const: {
      TypePtr t = S(d->scheme.qt.body);
      out[t] = const_value(d->var_name);
      break;
    }

    case Rule::ForallI: {
      for (auto& tau : cfg.uni.members) {
        Subst S2 = S;
        S2.m[d->tv] = tau;
        SchemeValue sv = interp(d->kids.at(0), S2, lenv);
        for (auto& [k, v] : sv) {
          auto it = out.find(k);
          if (it == out.end())
            out.emplace(k, v);
          else if (!val_eq(it->second, v))
            throw OmlError("internal",
                           "incoherent instantiations at " + show_type(k) + " under forall " + d->tv);
        }
      }
      break;
    }

    case Rule::ThenI: {
      if (!entails_ok(S(d->preds), S(d->pi))) break;
      out = interp(d->kids.at(0), S, lenv);
      break;
    }

    case Rule::Impr: {
      Subst S2;
      bool ok = true;
      for (auto& [v, t] : S.m)
        if (!match_accum(d->impr(tvar(v)), t, S2)) {
          ok = false;
          break;
        }
      if (!ok) break;  // assignment does not respect the improvement
      out = interp(d->kids.at(0), S2, lenv);
      break;
    }

    case Rule::LamI: {
      TypePtr t = S(d->scheme.qt.body);
      if (t->k != Type::K::Arr) throw OmlError("internal", "abstraction at a non-arrow type");
      std::vector<ValuePtr> car = carrier(cfg.dom, t->a);
      const size_t n = car.size();
      std::vector<ValuePtr> table(n);
      std::atomic<bool> dead{false};
      if (cfg.parallel && n >= 16) {
        std::exception_ptr eptr = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); i++) {
          if (dead.load(std::memory_order_relaxed)) continue;
          try {
            LEnvPtr e2 = bind_strict(lenv, d->var_name, t->a, car[static_cast<size_t>(i)]);
            auto v = mono_of(interp(d->kids.at(0), S, e2));
            if (!v)
              dead.store(true, std::memory_order_relaxed);
            else
              table[static_cast<size_t>(i)] = *v;
          } catch (...) {
#pragma omp critical(oml_eptr)
            if (!eptr) eptr = std::current_exception();
            dead.store(true, std::memory_order_relaxed);
          }
        }
        if (eptr) std::rethrow_exception(eptr);
      } else {
        for (size_t i = 0; i < n && !dead; i++) {
          LEnvPtr e2 = bind_strict(lenv, d->var_name, t->a, car[i]);
          auto v = mono_of(interp(d->kids.at(0), S, e2));
          if (!v)
            dead = true;
          else
            table[i] = *v;
        }
      }
      if (dead) break;
      out[t] = make_fun(t->a, t->b, std::move(table));
      break;
    }

    case Rule::AppE: {
      // walk the application spine so a lambda in function position is
      // entered at the argument instead of tabulated over its whole carrier
      // and indexed once; entries are built by the same body evaluation, so
      // the applied-at value is identical
      std::vector<DerivPtr> spine;
      DerivPtr f = d;
      while (f->rule == Rule::AppE) {
        spine.push_back(f);
        f = f->kids.at(0);
      }
      std::vector<ValuePtr> args;  // innermost application first
      bool dead = false;
      for (auto it = spine.rbegin(); it != spine.rend(); ++it) {
        auto a = mono_of(interp((*it)->kids.at(1), S, lenv));
        if (!a) {
          dead = true;
          break;
        }
        args.push_back(*a);
      }
      if (dead) break;
      size_t used = 0;
      LEnvPtr e2 = lenv;
      while (f->rule == Rule::LamI && used < args.size()) {
        TypePtr t = S(f->scheme.qt.body);
        if (t->k != Type::K::Arr) throw OmlError("internal", "abstraction at a non-arrow type");
        e2 = bind_strict(e2, f->var_name, t->a, args[used++]);
        f = f->kids.at(0);
      }
      auto v = mono_of(interp(f, S, e2));
      if (!v) break;
      ValuePtr r = *v;
      for (; used < args.size(); used++) r = app(cfg.dom, r, args[used]);
      out[S(d->scheme.qt.body)] = r;
      break;
    }

    case Rule::Mu: {
      TypePtr t = S(d->scheme.qt.body);
      ValuePtr v = bot();
      bool done = false;
      for (size_t it = 0; it <= cfg.fix_cap; it++) {
        LEnvPtr e2 = bind_strict(lenv, d->var_name, t, v);
        auto nv = mono_of(interp(d->kids.at(0), S, e2));
        if (!nv) break;  // body gated out: no value at all
        if (val_eq(v, *nv)) {
          out[t] = v;
          done = true;
          break;
        }
        if (!val_leq(v, *nv)) throw OmlError("internal", "recursion step is not monotone");
        v = *nv;
      }
      if (!done && !out.count(t) && !val_eq(v, bot()))
        throw OmlError("eval", "recursion did not stabilize within the unrolling budget");
      break;
    }

    case Rule::Let: {
      LEnvPtr e2 = bind_lazy(lenv, d->var_name, d->kids.at(0), S, lenv);
      out = interp(d->kids.at(1), S, e2);
      break;
    }
  }
  if (cfg.verify_keysets) verify_node(d, S, out);
  return out;
}

std::optional<ValuePtr> Evaluator::eval_at(const DerivPtr& root, const TypePtr& key, const Subst& S0,
                                           const LEnvPtr& lenv0) {
  // introduction prefix: quantifiers, contexts, improvements
  std::vector<DerivPtr> pre;
  DerivPtr inner = root;
  while (inner->rule == Rule::ForallI || inner->rule == Rule::ThenI || inner->rule == Rule::Impr) {
    pre.push_back(inner);
    inner = inner->kids.at(0);
  }
  std::vector<std::string> vars;
  Subst impr_all;
  for (auto& d : pre) {
    if (d->rule == Rule::ForallI) vars.push_back(d->tv);
    if (d->rule == Rule::Impr) impr_all = compose(d->impr, impr_all);
  }
  if (!scheme_is_mono(inner->scheme))
    throw OmlError("internal", "introduction prefix does not reach a monomorphic premise");

  std::set<std::string> flex(vars.begin(), vars.end());
  auto m0 = match_onto(S0(inner->scheme.qt.body), key, &flex);
  if (!m0) return std::nullopt;
  for (auto& [v, t] : m0->m)
    if (!cfg.uni.contains(t)) return std::nullopt;

  // variables still needed to ground the conclusion-level assignment
  std::vector<std::string> needed;
  std::set<std::string> seen;
  for (auto& v : vars) ftv_type(S0(impr_all(tvar(v))), needed, seen);
  std::vector<std::string> leftover;
  for (auto& v : needed)
    if (!m0->m.count(v)) leftover.push_back(v);

  std::optional<ValuePtr> best;
  for (auto& g : gsubst_enum(cfg.uni, leftover, cfg.dom.carrier_cap)) {
    Subst A = subst_union(*m0, g);
    Subst A0;  // assignment at the conclusion, before improvement
    for (auto& v : vars) {
      TypePtr t = A(S0(impr_all(tvar(v))));
      if (!ftv(t).empty())
        throw OmlError("internal", "unresolved variable instantiating '" + v + "'");
      A0.m[v] = t;
    }
    Subst Slevel = subst_union(S0, A0);
    bool gated = false;
    for (auto& d : pre)
      if (d->rule == Rule::ThenI && !entails_ok(Slevel(d->preds), Slevel(d->pi))) {
        gated = true;
        break;
      }
    if (gated) continue;

    auto v = mono_of(interp(inner, subst_union(S0, A), lenv0));
    if (!v) continue;
    if (driving) return v;  // approximations may disagree mid-sweep
    if (best && !val_eq(*best, *v))
      throw OmlError("internal", "incoherent instantiations at " + show_type(key));
    best = *v;
  }
  return best;
}

ValuePtr Evaluator::value_of(const std::string& skey, const TypePtr& key) {
  const std::string name = skey.substr(2);
  if (skey.rfind("b:", 0) == 0) {
    const DerivPtr* d = tp.find_bind_deriv(name);
    if (!d) throw OmlError("internal", "no derivation for binding '" + name + "'");
    auto v = eval_at(*d, key, Subst{}, nullptr);
    if (!v) throw OmlError("eval", "'" + name + "' has no instance at " + show_type(key));
    return *v;
  }
  if (skey.rfind("m:", 0) != 0) throw OmlError("internal", "malformed store key " + skey);

  Scheme sx = method_scheme(tp.cx, name);
  std::set<std::string> flex(sx.vars.begin(), sx.vars.end());
  auto m0 = match_onto(sx.qt.body, key, &flex);
  bool shaped = m0.has_value();
  if (shaped)
    for (auto& [v, t] : m0->m)
      if (!cfg.uni.contains(t)) shaped = false;
  std::optional<ValuePtr> best;
  if (shaped) {
    std::vector<std::string> leftover;
    for (auto& v : sx.vars)
      if (!m0->m.count(v)) leftover.push_back(v);
    for (auto& g : gsubst_enum(cfg.uni, leftover, cfg.dom.carrier_cap)) {
      Subst A = subst_union(*m0, g);
      auto er = entail_all(tp.cx.axioms, {}, A(sx.qt.preds), cfg.entail_depth);
      if (!er.ok) continue;
      if (!er.ws.at(0).by_axiom)
        throw OmlError("internal", "class predicate resolved without an instance");
      const std::string inst = er.ws.at(0).axiom;
      const DerivPtr* dd = tp.find_inst(name + "@" + inst);
      if (!dd) throw OmlError("internal", "no derivation for " + name + "@" + inst);
      auto v = eval_at(*dd, key, Subst{}, nullptr);
      if (!v) continue;
      if (driving) return *v;
      if (best && !val_eq(*best, *v))
        throw OmlError("internal", "incoherent instances of '" + name + "' at " + show_type(key));
      best = *v;
    }
  }
  if (!best) {
    if (driving) return bot();
    throw OmlError("eval", "no instance of '" + name + "' at " + show_type(key));
  }
  return *best;
}

void Evaluator::drive() {
  driving = true;
  try {
    drive_rounds();
    driving = false;
  } catch (...) {
    driving = false;
    throw;
  }
}

void Evaluator::drive_rounds() {
  for (size_t round = 0; round <= cfg.fix_cap; round++) {
    std::vector<std::pair<std::string, TypePtr>> pairs;
    for (auto& [k, s] : demands)
      for (auto& t : s) pairs.emplace_back(k, t);
    std::vector<ValuePtr> results(pairs.size());
    pending.clear();

    std::exception_ptr eptr = nullptr;
    if (cfg.parallel && pairs.size() > 1) {
#pragma omp parallel for schedule(dynamic)
      for (long long i = 0; i < static_cast<long long>(pairs.size()); i++) {
        try {
          results[static_cast<size_t>(i)] =
              value_of(pairs[static_cast<size_t>(i)].first, pairs[static_cast<size_t>(i)].second);
        } catch (...) {
#pragma omp critical(oml_eptr)
          if (!eptr) eptr = std::current_exception();
        }
      }
    } else {
      for (size_t i = 0; i < pairs.size(); i++) results[i] = value_of(pairs[i].first, pairs[i].second);
    }
    if (eptr) std::rethrow_exception(eptr);

    bool grew = false;
    for (auto& [k, s] : pending)
      for (auto& t : s)
        if (demands[k].insert(t).second) grew = true;

    bool changed = grew;
    std::map<std::string, SchemeValue> next;
    for (size_t i = 0; i < pairs.size(); i++) {
      ValuePtr old = bot();
      auto it = store.find(pairs[i].first);
      if (it != store.end()) {
        auto jt = it->second.find(pairs[i].second);
        if (jt != it->second.end()) old = jt->second;
      }
      if (!val_leq(old, results[i]))
        throw OmlError("internal", "store value descended at " + pairs[i].first + " " +
                                       show_type(pairs[i].second));
      if (!val_eq(old, results[i])) changed = true;
      next[pairs[i].first][pairs[i].second] = results[i];
    }
    store = std::move(next);
    if (!changed) return;
  }
  throw OmlError("eval", "evaluation did not stabilize within the sweep budget");
}

ValuePtr Evaluator::eval_bind_at(const std::string& name, const TypePtr& key) {
  if (!tp.prog.find_bind(name)) throw OmlError("input", "unknown binding '" + name + "'");
  demands["b:" + name].insert(key);
  drive();
  return lookup("b:" + name, key);
}

void Evaluator::method_fixpoint() {
  for (auto& m : tp.cx.method_order)
    for (auto& k : method_keys(m)) demands["m:" + m].insert(k);
  drive();
}

void Evaluator::eval_all() {
  for (auto& m : tp.cx.method_order)
    for (auto& k : method_keys(m)) demands["m:" + m].insert(k);
  for (auto& b : tp.prog.binds)
    for (auto& k : bind_keys(b.name)) demands["b:" + b.name].insert(k);
  drive();
}

bool Evaluator::resweep_changes() {
  driving = true;
  pending.clear();
  bool changed = false;
  try {
    for (auto& [skey, keys] : demands)
      for (auto& k : keys) {
        ValuePtr v = value_of(skey, k);
        ValuePtr old = bot();
        auto it = store.find(skey);
        if (it != store.end()) {
          auto jt = it->second.find(k);
          if (jt != it->second.end()) old = jt->second;
        }
        if (!val_eq(old, v)) changed = true;
      }
    for (auto& [k, s] : pending)
      for (auto& t : s)
        if (!demands.count(k) || !demands.at(k).count(t)) changed = true;
  } catch (...) {
    driving = false;
    throw;
  }
  driving = false;
  return changed;
}

}  // namespace oml
