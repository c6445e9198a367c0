#pragma once

#include "oml/interp.hpp"
#include "oml/typing.hpp"

namespace oml {

enum class RW { Beta, Eta, MuUnroll, LetInline, Method, ImprStep };
const char* show_rw(RW r);

// One admissible rewrite of a whole checked term.  `path` addresses the redex
// (child indices from the root); ImprStep leaves the term alone and improves
// the scheme instead.
struct RewriteStep {
  RW rule = RW::Beta;
  std::vector<int> path;
  ExprPtr before, after;
  Scheme scheme_before, scheme_after;
  std::string note;  // "method -> instance" for unfolding steps
};
std::string show_path(const std::vector<int>& p);

// environment holding every method and top-level binding scheme
TypeEnvPtr global_env(const TypedProgram& tp);

// All rewrites of `e` checked at scheme `s`, in pre-order path order.  Size-
// increasing recursion unrolling and root scheme improvement are listed only
// when `all` is set; reduction uses the remaining rules.
std::vector<RewriteStep> rewrite_candidates(const TypedProgram& tp, const ExprPtr& e,
                                            const Scheme& s, bool all, int entail_depth = 100);

struct NormResult {
  ExprPtr expr;
  std::vector<RewriteStep> steps;
  bool complete = false;  // no redex left within the fuel budget
};
// leftmost-outermost reduction (beta, eta, let inlining, method unfolding),
// re-checked against the scheme after every step
NormResult normalize(const TypedProgram& tp, ExprPtr e, const Scheme& s, size_t fuel = 200,
                     int entail_depth = 100);

struct EquivResult {
  bool ok = false;
  std::vector<TypePtr> keys;  // compared ground instances, in order
  TypePtr key;                // first differing instance when !ok
  std::string lhs, rhs;       // printed values at that instance
};
// instance-by-instance comparison of two terms at a shared unambiguous scheme
EquivResult oracle_equiv(const TypedProgram& tp, const ExprPtr& a, const ExprPtr& b, const Scheme& s,
                         const EvalCfg& cfg);

// scheme after exhaustive context improvement: substituted, duplicate
// predicates collapsed, dead quantifiers dropped.  Steps print as "v:=T".
// Throws kind="improve" when a required improvement cannot be reconciled.
Scheme improve_scheme(const ClassContext& cx, const Scheme& s,
                      std::vector<std::string>* steps = nullptr);

}  // namespace oml
