#pragma once

#include <optional>

#include "oml/classctx.hpp"
#include "oml/entail.hpp"

namespace oml {

enum class Rule { Var, Const, LamI, AppE, Mu, ThenI, ThenE, ForallI, ForallE, Let, Impr, Ctxt };
const char* show_rule(Rule r);

// persistent environment chain; inner bindings shadow outer ones
struct TypeEnv;
using TypeEnvPtr = std::shared_ptr<const TypeEnv>;
struct TypeEnv {
  TypeEnvPtr parent;
  std::string name;
  Scheme scheme;
};
TypeEnvPtr env_bind(TypeEnvPtr parent, std::string name, Scheme s);
const Scheme* env_lookup(const TypeEnvPtr& env, const std::string& name);

struct ImprJustPair {
  Pred earlier, later;
  FundepDecl fd;
};

// One node of a typing derivation.  `preds` is the ambient predicate context
// and `scheme` the conclusion; quantifier- and context-introduction appear as
// explicit ForallI/ThenI nodes so evaluation can walk the exact rule shape.
struct Deriv;
using DerivPtr = std::shared_ptr<const Deriv>;
struct Deriv {
  Rule rule = Rule::Ctxt;
  PredList preds;
  TypeEnvPtr env;
  ExprPtr subject;
  Scheme scheme;
  std::vector<DerivPtr> kids;

  std::string var_name;            // Var/Const/LamI/Mu/Let binder or name
  TypePtr at_type;                 // ForallE instantiation
  std::string tv;                  // ForallI/ForallE quantifier name
  Pred pi;                         // ThenI/ThenE predicate
  EntailWitness wit;               // ThenE evidence
  Subst impr;                      // Impr improving substitution
  std::vector<ImprJustPair> just;  // Impr justification
};

// Alternate elaborations of the same judgment, for coherence checks:
// reversed quantifier introduction and a discharged-then-reintroduced
// predicate detour.
struct ElabOptions {
  bool reverse_quantifiers = false;
  bool redundant_then = false;
};

// fixed built-ins; integer literals are Const nodes typed Int
std::optional<TypePtr> const_type(const std::string& name);
bool is_int_literal(const std::string& s);

// quantified variables not reachable from the body under the dependencies
std::vector<std::string> ambiguous_vars(const ClassContext& cx, const Scheme& s);

// Checks `body` against the declared scheme and returns the full derivation:
// ForallI* over ThenI* over an improvement chain over the syntax-directed
// body derivation.  Throws OmlError kinds type/improve/ambiguous.
DerivPtr check_scheme(const ClassContext& cx, const TypeEnvPtr& env, const ExprPtr& body,
                      const Scheme& declared, const ElabOptions& opts = {},
                      int entail_depth = 100);

struct TypedProgram {
  Program prog;
  ClassContext cx;
  std::vector<std::pair<std::string, DerivPtr>> inst_derivs;  // "method@instance"
  std::vector<std::pair<std::string, DerivPtr>> bind_derivs;  // binding name
  DerivPtr ctxt_root;  // Ctxt node over the instance-method derivations

  const DerivPtr* find_inst(const std::string& key) const;
  const DerivPtr* find_bind_deriv(const std::string& name) const;
};

TypedProgram check_program(const Program& p, const ElabOptions& opts = {}, int entail_depth = 100);

// independent rule-by-rule validation of a stored derivation
bool replay_deriv(const ClassContext& cx, const DerivPtr& d, std::string* why = nullptr);

std::string show_deriv(const DerivPtr& d);  // indented rule/scheme dump

}  // namespace oml
