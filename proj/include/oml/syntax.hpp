#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace oml {

// ---------- types ----------

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class K { Var, Con, Arr };
  K k;
  std::string name;  // Var / Con
  TypePtr a, b;      // Arr: a -> b
};

TypePtr tvar(std::string name);
TypePtr tcon(std::string name);
TypePtr tarr(TypePtr dom, TypePtr cod);

bool type_eq(const TypePtr& x, const TypePtr& y);
int type_cmp(const TypePtr& x, const TypePtr& y);  // total order, deterministic
int arrow_depth(const TypePtr& t);
std::string show_type(const TypePtr& t);
std::string show_type_atom(const TypePtr& t);  // parenthesized when an arrow

struct TypeLess {
  bool operator()(const TypePtr& a, const TypePtr& b) const { return type_cmp(a, b) < 0; }
};

// ---------- predicates, qualified types, schemes ----------

struct Pred {
  std::string cls;
  std::vector<TypePtr> args;
};
using PredList = std::vector<Pred>;

bool pred_eq(const Pred& p, const Pred& q);
int pred_cmp(const Pred& p, const Pred& q);
std::string show_pred(const Pred& p);
std::string show_preds(const PredList& ps);  // "P" or "(P1, P2)"

struct QualType {
  PredList preds;
  TypePtr body;
};

struct Scheme {
  std::vector<std::string> vars;  // quantifier prefix, in order
  QualType qt;
};

Scheme mono_scheme(TypePtr t);
bool scheme_is_mono(const Scheme& s);
std::string show_qual(const QualType& q);
std::string show_scheme(const Scheme& s);
bool scheme_eq(const Scheme& a, const Scheme& b);  // syntactic, same binder names

struct ConstrainedScheme {
  PredList outer;
  Scheme scheme;
};

// ---------- free type variables (first-occurrence order) ----------

void ftv_type(const TypePtr& t, std::vector<std::string>& out, std::set<std::string>& seen);
void ftv_pred(const Pred& p, std::vector<std::string>& out, std::set<std::string>& seen);
std::vector<std::string> ftv(const TypePtr& t);
std::vector<std::string> ftv(const PredList& ps);
std::vector<std::string> ftv(const Scheme& s);  // minus quantified

// ---------- substitutions ----------

struct Subst {
  std::map<std::string, TypePtr> m;

  bool empty() const { return m.empty(); }
  TypePtr operator()(const TypePtr& t) const;
  Pred operator()(const Pred& p) const;
  PredList operator()(const PredList& ps) const;
  QualType operator()(const QualType& q) const;
  Scheme operator()(const Scheme& s) const;  // capture-avoiding over the prefix

  static Subst one(const std::string& v, TypePtr t);
};

// apply s2 after s1: (compose(s2,s1))(t) == s2(s1(t))
Subst compose(const Subst& s2, const Subst& s1);
std::string show_subst(const Subst& s);

// ---------- expressions ----------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class K { Var, Const, Lam, App, Mu, Let };
  K k;
  std::string name;  // Var/Const; binder for Lam/Mu/Let
  ExprPtr e1, e2;    // Lam body=e1; App fn=e1 arg=e2; Mu body=e1; Let bound=e1 body=e2
  int line = 0, col = 0;
};

ExprPtr evar(std::string n, int line = 0, int col = 0);
ExprPtr econst(std::string n, int line = 0, int col = 0);
ExprPtr elam(std::string x, ExprPtr body);
ExprPtr eapp(ExprPtr f, ExprPtr a);
ExprPtr emu(std::string x, ExprPtr body);
ExprPtr elet(std::string x, ExprPtr bound, ExprPtr body);

std::string show_expr(const ExprPtr& e);
std::set<std::string> free_vars(const ExprPtr& e);
// capture-avoiding [r/x]e
ExprPtr subst_expr(const ExprPtr& e, const std::string& x, const ExprPtr& r);
bool alpha_eq(const ExprPtr& a, const ExprPtr& b);

// ---------- programs ----------

struct Axiom {
  std::string name;                // instance name, e.g. dArr
  std::vector<std::string> vars;   // quantified; must cover ftv(head)
  PredList context;
  Pred head;
};
std::string show_axiom(const Axiom& a);

struct FundepDecl {
  std::string cls;
  std::vector<int> from, to;  // argument positions, sorted, disjoint not required
};
std::string show_fundep(const FundepDecl& f);

struct ClassDecl {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::pair<std::string, Scheme>> methods;  // method's own forall/context part
  int line = 0;
};

struct InstanceDecl {
  Axiom axiom;
  std::vector<std::pair<std::string, ExprPtr>> impls;
  int line = 0;
};

struct Binding {
  std::string name;
  Scheme scheme;  // declared; bindings without signatures are rejected
  ExprPtr body;
  int line = 0;
};

struct Program {
  std::vector<ClassDecl> classes;
  std::vector<InstanceDecl> instances;
  std::vector<FundepDecl> fundeps;
  std::vector<Binding> binds;  // in file order; "main" is the entry point when present

  const Binding* find_bind(const std::string& n) const;
};

std::string show_program(const Program& p);

}  // namespace oml
