#include "oml/classctx.hpp"

#include <algorithm>

#include "oml/error.hpp"
#include "oml/unify.hpp"

namespace oml {

const Axiom* ClassContext::find_axiom(const std::string& name) const {
  for (const auto& a : axioms)
    if (a.name == name) return &a;
  return nullptr;
}

std::vector<const FundepDecl*> ClassContext::fundeps_of(const std::string& cls) const {
  std::vector<const FundepDecl*> out;
  for (const auto& f : fundeps)
    if (f.cls == cls) out.push_back(&f);
  return out;
}

const ExprPtr* ClassContext::impl(const std::string& method, const std::string& inst) const {
  auto it = im.find(method + "@" + inst);
  return it == im.end() ? nullptr : &it->second;
}

namespace {

[[noreturn]] void ctx_err(const std::string& msg, int line = 0) {
  throw OmlError("context", msg, line, 0);
}

void check_nonoverlap(const ClassContext& cx) {
  for (size_t i = 0; i < cx.axioms.size(); ++i) {
    for (size_t j = i + 1; j < cx.axioms.size(); ++j) {
      const Axiom& a = cx.axioms[i];
      const Axiom& b = cx.axioms[j];
      if (a.head.cls != b.head.cls) continue;
      auto fds = cx.fundeps_of(a.head.cls);
      if (fds.empty()) {
        UnifyResult u = unify_pred(a.head, b.head);
        if (u.ok)
          throw OmlError("overlap", "instances " + a.name + " and " + b.name +
                                        " overlap: " + show_pred(a.head) + " / " +
                                        show_pred(b.head));
        continue;
      }
      for (const FundepDecl* fd : fds) {
        UnifyResult u = unify_at_indices(a.head, b.head, fd->from);
        if (u.ok)
          throw OmlError("overlap", "instances " + a.name + " and " + b.name +
                                        " agree on the sources of " + show_fundep(*fd) + ": " +
                                        show_pred(a.head) + " / " + show_pred(b.head));
      }
    }
  }
}

void check_covering(const ClassContext& cx) {
  for (const auto& a : cx.axioms) {
    for (const FundepDecl* fd : cx.fundeps_of(a.head.cls)) {
      std::set<std::string> from;
      for (int ix : fd->from) {
        auto vs = ftv(a.head.args[ix]);
        from.insert(vs.begin(), vs.end());
      }
      std::set<std::string> cl = fd_closure(cx, from, a.context);
      for (int ix : fd->to)
        for (const auto& v : ftv(a.head.args[ix]))
          if (!cl.count(v))
            throw OmlError("covering", "instance " + a.name + " leaves '" + v +
                                           "' undetermined by " + show_fundep(*fd));
    }
  }
}

}  // namespace

ClassContext build_context(const Program& p) {
  ClassContext cx;
  for (const auto& c : p.classes) {
    if (cx.classes.count(c.name)) ctx_err("duplicate class '" + c.name + "'", c.line);
    std::set<std::string> ps(c.params.begin(), c.params.end());
    if (ps.size() != c.params.size())
      ctx_err("class '" + c.name + "' repeats a parameter", c.line);
    Pred cp{c.name, {}};
    for (const auto& v : c.params) cp.args.push_back(tvar(v));
    for (const auto& [mname, sig] : c.methods) {
      if (cx.si.count(mname)) ctx_err("duplicate method '" + mname + "'", c.line);
      for (const auto& v : sig.vars)
        if (ps.count(v))
          ctx_err("method '" + mname + "' re-quantifies class parameter '" + v + "'", c.line);
      std::set<std::string> bound(sig.vars.begin(), sig.vars.end());
      for (const auto& v : ftv(sig.qt.body))
        if (!ps.count(v) && !bound.count(v))
          ctx_err("method '" + mname + "' mentions unbound '" + v + "'", c.line);
      for (const auto& v : ftv(sig.qt.preds))
        if (!ps.count(v) && !bound.count(v))
          ctx_err("method '" + mname + "' mentions unbound '" + v + "'", c.line);
      cx.si.emplace(mname, MethodInfo{c.name, cp, sig});
      cx.method_order.push_back(mname);
    }
    cx.classes.emplace(c.name, c);
  }

  for (const auto& f : p.fundeps) {
    auto it = cx.classes.find(f.cls);
    if (it == cx.classes.end()) ctx_err("dependency names unknown class '" + f.cls + "'");
    int n = static_cast<int>(it->second.params.size());
    for (int ix : f.from)
      if (ix < 0 || ix >= n) ctx_err("dependency index " + std::to_string(ix) + " out of range");
    for (int ix : f.to)
      if (ix < 0 || ix >= n) ctx_err("dependency index " + std::to_string(ix) + " out of range");
    cx.fundeps.push_back(f);
  }

  auto check_pred_decl = [&](const Pred& q, int line) {
    auto it = cx.classes.find(q.cls);
    if (it == cx.classes.end()) ctx_err("unknown class '" + q.cls + "'", line);
    if (q.args.size() != it->second.params.size())
      ctx_err("class '" + q.cls + "' applied to " + std::to_string(q.args.size()) +
                  " arguments, expects " + std::to_string(it->second.params.size()),
              line);
  };

  for (const auto& inst : p.instances) {
    if (cx.find_axiom(inst.axiom.name))
      ctx_err("duplicate instance name '" + inst.axiom.name + "'", inst.line);
    check_pred_decl(inst.axiom.head, inst.line);
    for (const auto& q : inst.axiom.context) check_pred_decl(q, inst.line);
    const ClassDecl& cls = cx.classes.at(inst.axiom.head.cls);
    std::set<std::string> provided;
    for (const auto& [mname, body] : inst.impls) {
      bool belongs = false;
      for (const auto& [cm, sig] : cls.methods) belongs = belongs || cm == mname;
      if (!belongs)
        ctx_err("instance " + inst.axiom.name + " implements '" + mname + "' which is not a " +
                    cls.name + " method",
                inst.line);
      if (!provided.insert(mname).second)
        ctx_err("instance " + inst.axiom.name + " implements '" + mname + "' twice", inst.line);
      cx.im.emplace(mname + "@" + inst.axiom.name, body);
    }
    for (const auto& [cm, sig] : cls.methods)
      if (!provided.count(cm))
        ctx_err("instance " + inst.axiom.name + " is missing method '" + cm + "'", inst.line);
    cx.axioms.push_back(inst.axiom);
    cx.instance_order.push_back(inst.axiom.name);
  }

  check_nonoverlap(cx);
  check_covering(cx);
  return cx;
}

Scheme method_scheme(const ClassContext& cx, const std::string& x) {
  auto it = cx.si.find(x);
  if (it == cx.si.end()) ctx_err("unknown method '" + x + "'");
  const MethodInfo& mi = it->second;
  const ClassDecl& c = cx.classes.at(mi.cls);
  Scheme s;
  s.vars = c.params;
  s.vars.insert(s.vars.end(), mi.sig.vars.begin(), mi.sig.vars.end());
  s.qt.preds.push_back(mi.class_pred);
  s.qt.preds.insert(s.qt.preds.end(), mi.sig.qt.preds.begin(), mi.sig.qt.preds.end());
  s.qt.body = mi.sig.qt.body;
  return s;
}

Scheme instance_method_scheme(const ClassContext& cx, const std::string& x,
                              const std::string& d) {
  auto it = cx.si.find(x);
  if (it == cx.si.end()) ctx_err("unknown method '" + x + "'");
  const Axiom* ax = cx.find_axiom(d);
  if (!ax) ctx_err("unknown instance '" + d + "'");
  const MethodInfo& mi = it->second;
  if (mi.cls != ax->head.cls)
    ctx_err("method '" + x + "' does not belong to class " + ax->head.cls);
  std::set<std::string> flex;
  for (const auto& a : mi.class_pred.args) flex.insert(a->name);
  auto m = match_pred_onto(mi.class_pred, ax->head, &flex);
  if (!m) ctx_err("instance head " + show_pred(ax->head) + " does not fit class pattern");

  // push the head instantiation under the method's own quantifiers,
  // renaming them clear of every instance variable
  Scheme inner{mi.sig.vars, mi.sig.qt};
  Scheme inst = (*m)(inner);
  std::set<std::string> avoid(ax->vars.begin(), ax->vars.end());
  Subst ren;
  std::vector<std::string> vars2;
  for (const auto& v : inst.vars) {
    if (!avoid.count(v)) {
      vars2.push_back(v);
      continue;
    }
    std::string nv = v;
    int k = 0;
    while (avoid.count(nv) || ren.m.count(nv)) nv = v + "_" + std::to_string(k++);
    ren.m.emplace(v, tvar(nv));
    vars2.push_back(nv);
  }
  QualType qt = ren.m.empty() ? inst.qt : ren(inst.qt);

  Scheme out;
  out.vars = ax->vars;
  out.vars.insert(out.vars.end(), vars2.begin(), vars2.end());
  out.qt.preds = ax->context;
  out.qt.preds.insert(out.qt.preds.end(), qt.preds.begin(), qt.preds.end());
  out.qt.body = qt.body;
  return out;
}

std::set<std::string> fd_closure(const ClassContext& cx, std::set<std::string> xs,
                                 const PredList& ps) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : ps) {
      for (const FundepDecl* fd : cx.fundeps_of(p.cls)) {
        bool covered = true;
        for (int ix : fd->from)
          for (const auto& v : ftv(p.args[ix])) covered = covered && xs.count(v) > 0;
        if (!covered) continue;
        for (int ix : fd->to)
          for (const auto& v : ftv(p.args[ix])) changed = xs.insert(v).second || changed;
      }
    }
  }
  return xs;
}

namespace {

// unify binding only flex variables, preferring to bind the left side
bool unify_flex(const TypePtr& a0, const TypePtr& b0, const std::set<std::string>* flex,
                Subst& s, std::string& why) {
  TypePtr a = s(a0), b = s(b0);
  if (a->k == Type::K::Var && b->k == Type::K::Var && a->name == b->name) return true;
  auto bindable = [&](const TypePtr& t) {
    return t->k == Type::K::Var && (!flex || flex->count(t->name));
  };
  auto occurs = [&](const std::string& v, const TypePtr& t) {
    std::vector<std::string> vs = ftv(t);
    return std::find(vs.begin(), vs.end(), v) != vs.end();
  };
  if (bindable(a)) {
    if (occurs(a->name, b)) {
      why = "'" + a->name + "' occurs in " + show_type(b);
      return false;
    }
    s = compose(Subst::one(a->name, b), s);
    return true;
  }
  if (bindable(b)) {
    if (occurs(b->name, a)) {
      why = "'" + b->name + "' occurs in " + show_type(a);
      return false;
    }
    s = compose(Subst::one(b->name, a), s);
    return true;
  }
  if (a->k == Type::K::Con && b->k == Type::K::Con && a->name == b->name) return true;
  if (a->k == Type::K::Arr && b->k == Type::K::Arr)
    return unify_flex(a->a, b->a, flex, s, why) && unify_flex(a->b, b->b, flex, s, why);
  why = "cannot reconcile " + show_type(a) + " with " + show_type(b);
  return false;
}

}  // namespace

ImprStepResult improve_step(const ClassContext& cx, const PredList& ps,
                            const std::set<std::string>* flex) {
  ImprStepResult stuck;  // first pair that applies but cannot be reconciled
  for (size_t i = 0; i < ps.size(); ++i) {
    for (size_t j = i + 1; j < ps.size(); ++j) {
      if (ps[i].cls != ps[j].cls) continue;
      for (const FundepDecl* fd : cx.fundeps_of(ps[i].cls)) {
        bool same_from = true;
        for (int ix : fd->from) same_from = same_from && type_eq(ps[i].args[ix], ps[j].args[ix]);
        if (!same_from) continue;
        bool same_to = true;
        for (int ix : fd->to) same_to = same_to && type_eq(ps[i].args[ix], ps[j].args[ix]);
        if (same_to) continue;
        ImprStepResult r;
        r.applicable = true;
        r.earlier = ps[i];
        r.later = ps[j];
        r.fd = *fd;
        Subst s;
        std::string why;
        bool ok = true;
        for (int ix : fd->to)
          ok = ok && unify_flex(ps[j].args[ix], ps[i].args[ix], flex, s, why);
        if (!ok) {
          r.detail = show_pred(ps[i]) + " and " + show_pred(ps[j]) + " disagree on targets of " +
                     show_fundep(*fd) + ": " + why;
          if (!stuck.applicable) stuck = r;
          continue;
        }
        r.ok = true;
        r.s = s;
        return r;
      }
    }
  }
  return stuck;
}

}  // namespace oml
