#pragma once

#include <map>
#include <optional>
#include <set>

#include "oml/syntax.hpp"

namespace oml {

struct MethodInfo {
  std::string cls;   // owning class
  Pred class_pred;   // C t1 ... tn over the declared parameters
  Scheme sig;        // the method's own quantifier/context part
};

struct ClassContext {
  std::map<std::string, ClassDecl> classes;
  std::vector<Axiom> axioms;  // declaration order; names unique
  std::vector<FundepDecl> fundeps;
  std::map<std::string, MethodInfo> si;
  std::map<std::string, ExprPtr> im;  // key "method@instance"
  std::vector<std::string> method_order;
  std::vector<std::string> instance_order;

  const Axiom* find_axiom(const std::string& name) const;
  std::vector<const FundepDecl*> fundeps_of(const std::string& cls) const;
  bool is_method(const std::string& x) const { return si.count(x) != 0; }
  const ExprPtr* impl(const std::string& method, const std::string& inst) const;
};

// Validates declarations and checks instance non-overlap plus dependency
// covering; throws OmlError with kinds context/overlap/covering.
ClassContext build_context(const Program& p);

// method's standalone scheme: class params first, then its own quantifiers
Scheme method_scheme(const ClassContext& cx, const std::string& x);

// the scheme the instance's implementation must inhabit
Scheme instance_method_scheme(const ClassContext& cx, const std::string& x, const std::string& d);

// closure of a variable set under the dependencies occurring in ps
std::set<std::string> fd_closure(const ClassContext& cx, std::set<std::string> xs,
                                 const PredList& ps);

struct ImprStepResult {
  bool applicable = false;  // some pair agrees on sources but not targets
  bool ok = false;          // and the target parts reconcile within flex
  Subst s;
  Pred earlier, later;  // justifying pair
  FundepDecl fd;
  std::string detail;  // reason when applicable && !ok
};

// One elementary improvement over ps: scan pairs i<j in order, each dependency
// of their class in order; sources must agree syntactically.  Later predicate's
// variables are bound in preference to the earlier one's.  flex == nullptr
// allows binding any variable.
ImprStepResult improve_step(const ClassContext& cx, const PredList& ps,
                            const std::set<std::string>* flex = nullptr);

}  // namespace oml
