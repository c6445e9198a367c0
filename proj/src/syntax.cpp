#include "oml/syntax.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "oml/error.hpp"

namespace oml {

TypePtr tvar(std::string name) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Var;
  t->name = std::move(name);
  return t;
}

TypePtr tcon(std::string name) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Con;
  t->name = std::move(name);
  return t;
}

TypePtr tarr(TypePtr dom, TypePtr cod) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Arr;
  t->a = std::move(dom);
  t->b = std::move(cod);
  return t;
}

bool type_eq(const TypePtr& x, const TypePtr& y) { return type_cmp(x, y) == 0; }

int type_cmp(const TypePtr& x, const TypePtr& y) {
  if (x.get() == y.get()) return 0;
  auto rank = [](const Type& t) { return static_cast<int>(t.k); };
  if (rank(*x) != rank(*y)) return rank(*x) < rank(*y) ? -1 : 1;
  switch (x->k) {
    case Type::K::Var:
    case Type::K::Con: {
      int c = x->name.compare(y->name);
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Type::K::Arr: {
      int c = type_cmp(x->a, y->a);
      if (c != 0) return c;
      return type_cmp(x->b, y->b);
    }
  }
  return 0;
}

int arrow_depth(const TypePtr& t) {
  if (t->k != Type::K::Arr) return 0;
  return 1 + std::max(arrow_depth(t->a), arrow_depth(t->b));
}

std::string show_type(const TypePtr& t) {
  switch (t->k) {
    case Type::K::Var:
    case Type::K::Con:
      return t->name;
    case Type::K::Arr:
      return show_type_atom(t->a) + " -> " + show_type(t->b);
  }
  return "?";
}

std::string show_type_atom(const TypePtr& t) {
  if (t->k == Type::K::Arr) return "(" + show_type(t) + ")";
  return show_type(t);
}

bool pred_eq(const Pred& p, const Pred& q) { return pred_cmp(p, q) == 0; }

int pred_cmp(const Pred& p, const Pred& q) {
  int c = p.cls.compare(q.cls);
  if (c != 0) return c < 0 ? -1 : 1;
  if (p.args.size() != q.args.size()) return p.args.size() < q.args.size() ? -1 : 1;
  for (size_t i = 0; i < p.args.size(); ++i) {
    c = type_cmp(p.args[i], q.args[i]);
    if (c != 0) return c;
  }
  return 0;
}

std::string show_pred(const Pred& p) {
  std::string s = p.cls;
  for (const auto& a : p.args) s += " " + show_type_atom(a);
  return s;
}

std::string show_preds(const PredList& ps) {
  if (ps.size() == 1) return show_pred(ps[0]);
  std::string s = "(";
  for (size_t i = 0; i < ps.size(); ++i) {
    if (i) s += ", ";
    s += show_pred(ps[i]);
  }
  return s + ")";
}

Scheme mono_scheme(TypePtr t) { return Scheme{{}, QualType{{}, std::move(t)}}; }

bool scheme_is_mono(const Scheme& s) { return s.vars.empty() && s.qt.preds.empty(); }

std::string show_qual(const QualType& q) {
  if (q.preds.empty()) return show_type(q.body);
  return show_preds(q.preds) + " => " + show_type(q.body);
}

std::string show_scheme(const Scheme& s) {
  if (s.vars.empty()) return show_qual(s.qt);
  std::string out = "forall";
  for (const auto& v : s.vars) out += " " + v;
  return out + ". " + show_qual(s.qt);
}

bool scheme_eq(const Scheme& a, const Scheme& b) {
  if (a.vars != b.vars) return false;
  if (a.qt.preds.size() != b.qt.preds.size()) return false;
  for (size_t i = 0; i < a.qt.preds.size(); ++i)
    if (!pred_eq(a.qt.preds[i], b.qt.preds[i])) return false;
  return type_eq(a.qt.body, b.qt.body);
}

void ftv_type(const TypePtr& t, std::vector<std::string>& out, std::set<std::string>& seen) {
  switch (t->k) {
    case Type::K::Var:
      if (seen.insert(t->name).second) out.push_back(t->name);
      break;
    case Type::K::Con:
      break;
    case Type::K::Arr:
      ftv_type(t->a, out, seen);
      ftv_type(t->b, out, seen);
      break;
  }
}

void ftv_pred(const Pred& p, std::vector<std::string>& out, std::set<std::string>& seen) {
  for (const auto& a : p.args) ftv_type(a, out, seen);
}

std::vector<std::string> ftv(const TypePtr& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  ftv_type(t, out, seen);
  return out;
}

std::vector<std::string> ftv(const PredList& ps) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& p : ps) ftv_pred(p, out, seen);
  return out;
}

std::vector<std::string> ftv(const Scheme& s) {
  std::vector<std::string> all;
  std::set<std::string> seen;
  for (const auto& p : s.qt.preds) ftv_pred(p, all, seen);
  ftv_type(s.qt.body, all, seen);
  std::vector<std::string> out;
  std::set<std::string> bound(s.vars.begin(), s.vars.end());
  for (auto& v : all)
    if (!bound.count(v)) out.push_back(v);
  return out;
}

TypePtr Subst::operator()(const TypePtr& t) const {
  switch (t->k) {
    case Type::K::Var: {
      auto it = m.find(t->name);
      return it == m.end() ? t : it->second;
    }
    case Type::K::Con:
      return t;
    case Type::K::Arr: {
      TypePtr a = (*this)(t->a), b = (*this)(t->b);
      if (a.get() == t->a.get() && b.get() == t->b.get()) return t;
      return tarr(a, b);
    }
  }
  return t;
}

Pred Subst::operator()(const Pred& p) const {
  Pred q{p.cls, {}};
  q.args.reserve(p.args.size());
  for (const auto& a : p.args) q.args.push_back((*this)(a));
  return q;
}

PredList Subst::operator()(const PredList& ps) const {
  PredList out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.push_back((*this)(p));
  return out;
}

QualType Subst::operator()(const QualType& q) const { return QualType{(*this)(q.preds), (*this)(q.body)}; }

Scheme Subst::operator()(const Scheme& s) const {
  // drop bindings for bound vars; rename bound vars that would capture range vars
  Subst inner;
  std::set<std::string> bound(s.vars.begin(), s.vars.end());
  std::set<std::string> range_vars;
  for (const auto& [v, t] : m) {
    if (bound.count(v)) continue;
    inner.m.emplace(v, t);
    for (auto& rv : ftv(t)) range_vars.insert(rv);
  }
  // only rename when a substituted variable actually occurs free in the scheme
  std::vector<std::string> frees = ftv(s);
  bool relevant = false;
  for (auto& v : frees)
    if (inner.m.count(v)) relevant = true;
  if (!relevant) return s;

  std::vector<std::string> vars = s.vars;
  Subst rename;
  std::set<std::string> taken = range_vars;
  for (auto& v : frees) taken.insert(v);
  for (auto& v : vars) taken.insert(v);
  for (auto& v : vars) {
    if (!range_vars.count(v)) continue;
    std::string fresh = v;
    int i = 0;
    while (taken.count(fresh)) fresh = v + "_" + std::to_string(i++);
    taken.insert(fresh);
    rename.m[v] = tvar(fresh);
    v = fresh;
  }
  QualType qt = s.qt;
  if (!rename.empty()) qt = rename(qt);
  return Scheme{vars, inner(qt)};
}

Subst Subst::one(const std::string& v, TypePtr t) {
  Subst s;
  s.m.emplace(v, std::move(t));
  return s;
}

Subst compose(const Subst& s2, const Subst& s1) {
  Subst out;
  for (const auto& [v, t] : s1.m) out.m[v] = s2(t);
  for (const auto& [v, t] : s2.m)
    if (!out.m.count(v)) out.m[v] = t;
  return out;
}

std::string show_subst(const Subst& s) {
  if (s.m.empty()) return "identity";
  std::string out;
  for (const auto& [v, t] : s.m) {
    if (!out.empty()) out += ", ";
    out += v + " ↦ " + show_type(t);
  }
  return out;
}

ExprPtr make_expr(Expr::K k, std::string name, ExprPtr e1, ExprPtr e2, int line, int col) {
  auto e = std::make_shared<Expr>();
  e->k = k;
  e->name = std::move(name);
  e->e1 = std::move(e1);
  e->e2 = std::move(e2);
  e->line = line;
  e->col = col;
  return e;
}

ExprPtr evar(std::string n, int line, int col) {
  return make_expr(Expr::K::Var, std::move(n), nullptr, nullptr, line, col);
}
ExprPtr econst(std::string n, int line, int col) {
  return make_expr(Expr::K::Const, std::move(n), nullptr, nullptr, line, col);
}
ExprPtr elam(std::string x, ExprPtr body) {
  return make_expr(Expr::K::Lam, std::move(x), std::move(body), nullptr, 0, 0);
}
ExprPtr eapp(ExprPtr f, ExprPtr a) {
  return make_expr(Expr::K::App, "", std::move(f), std::move(a), 0, 0);
}
ExprPtr emu(std::string x, ExprPtr body) {
  return make_expr(Expr::K::Mu, std::move(x), std::move(body), nullptr, 0, 0);
}
ExprPtr elet(std::string x, ExprPtr bound, ExprPtr body) {
  return make_expr(Expr::K::Let, std::move(x), std::move(bound), std::move(body), 0, 0);
}

namespace {

// precedence: 0 = top (lam/mu/let bodies), 1 = application, 2 = atom
void show_expr_rec(const ExprPtr& e, int prec, std::string& out) {
  switch (e->k) {
    case Expr::K::Var:
    case Expr::K::Const:
      out += e->name;
      return;
    case Expr::K::App: {
      bool paren = prec > 1;
      if (paren) out += "(";
      show_expr_rec(e->e1, 1, out);
      out += " ";
      show_expr_rec(e->e2, 2, out);
      if (paren) out += ")";
      return;
    }
    case Expr::K::Lam:
    case Expr::K::Mu: {
      bool paren = prec > 0;
      if (paren) out += "(";
      out += (e->k == Expr::K::Lam) ? "\\" : "mu ";
      out += e->name + ". ";
      show_expr_rec(e->e1, 0, out);
      if (paren) out += ")";
      return;
    }
    case Expr::K::Let: {
      bool paren = prec > 0;
      if (paren) out += "(";
      out += "let " + e->name + " = ";
      show_expr_rec(e->e1, 0, out);
      out += " in ";
      show_expr_rec(e->e2, 0, out);
      if (paren) out += ")";
      return;
    }
  }
}

void free_vars_rec(const ExprPtr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (e->k) {
    case Expr::K::Var:
      if (!bound.count(e->name)) out.insert(e->name);
      return;
    case Expr::K::Const:
      return;
    case Expr::K::App:
      free_vars_rec(e->e1, bound, out);
      free_vars_rec(e->e2, bound, out);
      return;
    case Expr::K::Lam:
    case Expr::K::Mu: {
      bool added = bound.insert(e->name).second;
      free_vars_rec(e->e1, bound, out);
      if (added) bound.erase(e->name);
      return;
    }
    case Expr::K::Let: {
      free_vars_rec(e->e1, bound, out);
      bool added = bound.insert(e->name).second;
      free_vars_rec(e->e2, bound, out);
      if (added) bound.erase(e->name);
      return;
    }
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 0;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

}  // namespace

std::string show_expr(const ExprPtr& e) {
  std::string out;
  show_expr_rec(e, 0, out);
  return out;
}

std::set<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> bound, out;
  free_vars_rec(e, bound, out);
  return out;
}

namespace {

// fresh copy per substitution site: occurrences must stay distinct nodes,
// since later passes key per-occurrence state by node identity
ExprPtr clone_expr(const ExprPtr& e) {
  if (!e) return e;
  auto c = std::make_shared<Expr>(*e);
  c->e1 = clone_expr(e->e1);
  c->e2 = clone_expr(e->e2);
  return c;
}

}  // namespace

ExprPtr subst_expr(const ExprPtr& e, const std::string& x, const ExprPtr& r) {
  switch (e->k) {
    case Expr::K::Var:
      return e->name == x ? clone_expr(r) : e;
    case Expr::K::Const:
      return e;
    case Expr::K::App: {
      ExprPtr f = subst_expr(e->e1, x, r), a = subst_expr(e->e2, x, r);
      if (f.get() == e->e1.get() && a.get() == e->e2.get()) return e;
      return eapp(f, a);
    }
    case Expr::K::Lam:
    case Expr::K::Mu: {
      if (e->name == x) return e;
      auto rfv = free_vars(r);
      std::string binder = e->name;
      ExprPtr body = e->e1;
      if (rfv.count(binder) && free_vars(body).count(x)) {
        auto avoid = rfv;
        for (auto& v : free_vars(body)) avoid.insert(v);
        avoid.insert(x);
        std::string nb = fresh_name(binder, avoid);
        body = subst_expr(body, binder, evar(nb));
        binder = nb;
      }
      ExprPtr nb = subst_expr(body, x, r);
      if (nb.get() == e->e1.get() && binder == e->name) return e;
      return e->k == Expr::K::Lam ? elam(binder, nb) : emu(binder, nb);
    }
    case Expr::K::Let: {
      ExprPtr b1 = subst_expr(e->e1, x, r);
      if (e->name == x) {
        if (b1.get() == e->e1.get()) return e;
        return elet(e->name, b1, e->e2);
      }
      auto rfv = free_vars(r);
      std::string binder = e->name;
      ExprPtr body = e->e2;
      if (rfv.count(binder) && free_vars(body).count(x)) {
        auto avoid = rfv;
        for (auto& v : free_vars(body)) avoid.insert(v);
        avoid.insert(x);
        std::string nbn = fresh_name(binder, avoid);
        body = subst_expr(body, binder, evar(nbn));
        binder = nbn;
      }
      ExprPtr b2 = subst_expr(body, x, r);
      if (b1.get() == e->e1.get() && b2.get() == e->e2.get() && binder == e->name) return e;
      return elet(binder, b1, b2);
    }
  }
  return e;
}

namespace {

bool alpha_eq_rec(const ExprPtr& a, const ExprPtr& b, std::map<std::string, std::string>& la,
                  std::map<std::string, std::string>& lb, int& depth) {
  if (a->k != b->k) return false;
  switch (a->k) {
    case Expr::K::Var: {
      auto ia = la.find(a->name), ib = lb.find(b->name);
      if ((ia == la.end()) != (ib == lb.end())) return false;
      if (ia == la.end()) return a->name == b->name;
      return ia->second == ib->second;
    }
    case Expr::K::Const:
      return a->name == b->name;
    case Expr::K::App:
      return alpha_eq_rec(a->e1, b->e1, la, lb, depth) && alpha_eq_rec(a->e2, b->e2, la, lb, depth);
    case Expr::K::Lam:
    case Expr::K::Mu: {
      std::string tag = "#" + std::to_string(depth++);
      auto sa = la.find(a->name) != la.end() ? std::optional(la[a->name]) : std::nullopt;
      auto sb = lb.find(b->name) != lb.end() ? std::optional(lb[b->name]) : std::nullopt;
      la[a->name] = tag;
      lb[b->name] = tag;
      bool ok = alpha_eq_rec(a->e1, b->e1, la, lb, depth);
      if (sa) la[a->name] = *sa; else la.erase(a->name);
      if (sb) lb[b->name] = *sb; else lb.erase(b->name);
      return ok;
    }
    case Expr::K::Let: {
      if (!alpha_eq_rec(a->e1, b->e1, la, lb, depth)) return false;
      std::string tag = "#" + std::to_string(depth++);
      auto sa = la.find(a->name) != la.end() ? std::optional(la[a->name]) : std::nullopt;
      auto sb = lb.find(b->name) != lb.end() ? std::optional(lb[b->name]) : std::nullopt;
      la[a->name] = tag;
      lb[b->name] = tag;
      bool ok = alpha_eq_rec(a->e2, b->e2, la, lb, depth);
      if (sa) la[a->name] = *sa; else la.erase(a->name);
      if (sb) lb[b->name] = *sb; else lb.erase(b->name);
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_eq(const ExprPtr& a, const ExprPtr& b) {
  std::map<std::string, std::string> la, lb;
  int depth = 0;
  return alpha_eq_rec(a, b, la, lb, depth);
}

std::string show_axiom(const Axiom& a) {
  std::string s = a.name + " : ";
  if (!a.vars.empty()) {
    s += "forall";
    for (const auto& v : a.vars) s += " " + v;
    s += ". ";
  }
  if (!a.context.empty()) s += show_preds(a.context) + " => ";
  return s + show_pred(a.head);
}

std::string show_fundep(const FundepDecl& f) {
  auto idxset = [](const std::vector<int>& xs) {
    std::string s = "{";
    for (size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(xs[i]);
    }
    return s + "}";
  };
  return "fundep " + f.cls + " " + idxset(f.from) + " ~> " + idxset(f.to);
}

const Binding* Program::find_bind(const std::string& n) const {
  for (const auto& b : binds)
    if (b.name == n) return &b;
  return nullptr;
}

std::string show_program(const Program& p) {
  std::ostringstream out;
  for (const auto& c : p.classes) {
    out << "class " << c.name;
    for (const auto& v : c.params) out << " " << v;
    out << " where {\n";
    for (const auto& [m, s] : c.methods) out << "  " << m << " : " << show_scheme(s) << ";\n";
    out << "}\n";
  }
  for (const auto& f : p.fundeps) out << show_fundep(f) << "\n";
  for (const auto& i : p.instances) {
    out << "instance " << show_axiom(i.axiom) << " where {\n";
    for (const auto& [m, e] : i.impls) out << "  " << m << " = " << show_expr(e) << ";\n";
    out << "}\n";
  }
  for (const auto& b : p.binds) {
    out << b.name << " : " << show_scheme(b.scheme) << "\n";
    out << b.name << " = " << show_expr(b.body) << "\n";
  }
  return out.str();
}

}  // namespace oml
