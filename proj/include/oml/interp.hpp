#pragma once

#include <mutex>
#include <optional>

#include "oml/domain.hpp"
#include "oml/ground.hpp"
#include "oml/typing.hpp"

namespace oml {

struct EvalCfg {
  Universe uni;
  DomainCfg dom;
  int entail_depth = 100;
  size_t fix_cap = 1000;      // recursion unrolling and store sweep budget
  bool parallel = true;       // use the OpenMP kernels where profitable
  bool verify_keysets = false;  // cross-check every node's keys against its
                                // conclusion's ground instances (slow)
};

// local (lambda/recursion/let) bindings during evaluation
struct LEnv;
using LEnvPtr = std::shared_ptr<const LEnv>;
struct LEnv {
  LEnvPtr parent;
  std::string name;
  bool lazy = false;
  SchemeValue sv;  // strict entry
  DerivPtr ld;     // lazy entry: derivation of the bound term (quantified)
  Subst ls;        // ground context captured at the binding site
  LEnvPtr lenv;
};

// Evaluator over a checked program.  Method and top-level binding values live
// in a shared store keyed "m:name" / "b:name"; evaluation is demand-driven,
// with missing instances read as bottom and re-swept until the store is a
// fixed point of the program's method/binding transformer.
struct Evaluator {
  const TypedProgram& tp;
  EvalCfg cfg;

  std::map<std::string, SchemeValue> store;
  std::map<std::string, std::set<TypePtr, TypeLess>> demands;
  std::map<std::string, std::set<TypePtr, TypeLess>> pending;  // new demands, current sweep
  bool driving = false;

  Evaluator(const TypedProgram& t, EvalCfg c) : tp(t), cfg(std::move(c)) {}

  std::vector<TypePtr> scheme_keys(const PredList& outer, const Scheme& s) const;
  std::vector<TypePtr> method_keys(const std::string& m) const;
  std::vector<TypePtr> bind_keys(const std::string& b) const;

  // demand-driven entry: value of binding `name` at ground instance `key`
  ValuePtr eval_bind_at(const std::string& name, const TypePtr& key);

  // seed every ground instance of every method (and optionally binding) and
  // iterate to the least fixed point; feasible at small universes only
  void method_fixpoint();
  void eval_all();

  // one extra sweep over the demanded pairs; true if anything would change
  // (false exactly when the store satisfies b = f(b))
  bool resweep_changes();

  // full materializing interpretation of a derivation (store must be ready)
  SchemeValue interp(const DerivPtr& d) { return interp(d, Subst{}, nullptr); }
  SchemeValue interp(const DerivPtr& d, const Subst& S, const LEnvPtr& lenv);

  // targeted interpretation: single ground instance of a quantified derivation
  std::optional<ValuePtr> eval_at(const DerivPtr& root, const TypePtr& key, const Subst& S0,
                                  const LEnvPtr& lenv0);

  ValuePtr value_of(const std::string& skey, const TypePtr& key);
  ValuePtr lookup(const std::string& skey, const TypePtr& key);
  ValuePtr const_value(const std::string& name) const;

 private:
  void drive();
  void drive_rounds();
  std::optional<ValuePtr> mono_of(const SchemeValue& sv) const;
  SchemeValue resolve_chain(const DerivPtr& d, const Subst& S, const LEnvPtr& lenv);
  void verify_node(const DerivPtr& d, const Subst& S, const SchemeValue& got);
  bool entails_ok(const PredList& from, const Pred& goal) const;

  // ground-instance and entailment queries depend only on the axioms,
  // universe, and budgets, all fixed per evaluator; sweeping a carrier asks
  // the same questions once per element, so memoize them
  mutable std::mutex memo_mu;
  mutable std::map<std::string, std::vector<TypePtr>> keys_memo;
  mutable std::map<std::string, bool> entail_memo;
};

}  // namespace oml
