#pragma once

#include <optional>
#include <set>

#include "oml/syntax.hpp"

namespace oml {

enum class UnifyFail { None, Clash, Occurs, Arity, ClassMismatch };

struct UnifyResult {
  bool ok = false;
  Subst s;
  UnifyFail why = UnifyFail::None;
  std::string detail;  // human-readable reason when !ok
};

const char* show_unify_fail(UnifyFail f);

// most general unifier; binds variables from either side
UnifyResult unify(const TypePtr& a, const TypePtr& b);
UnifyResult unify_pred(const Pred& a, const Pred& b);

// One-way matching: S with S(pat) == target and dom(S) ⊆ flex.
// flex == nullptr treats every variable of pat as bindable; target is
// never touched, so its variables behave as constants.
std::optional<Subst> match_onto(const TypePtr& pat, const TypePtr& target,
                                const std::set<std::string>* flex = nullptr);
std::optional<Subst> match_pred_onto(const Pred& pat, const Pred& target,
                                     const std::set<std::string>* flex = nullptr);

// unify only the argument positions listed (overlap checks along a
// dependency's source set); idxs must be valid for both predicates
UnifyResult unify_at_indices(const Pred& a, const Pred& b, const std::vector<int>& idxs);

}  // namespace oml
