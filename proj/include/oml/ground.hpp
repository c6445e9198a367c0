#pragma once

#include <set>

#include "oml/entail.hpp"
#include "oml/syntax.hpp"

namespace oml {

// All ground types over the base constructors whose arrow nesting does not
// exceed `depth`, ordered by (nesting, printed form).
struct Universe {
  std::vector<std::string> base;
  int depth = 2;
  std::vector<TypePtr> members;
  std::set<TypePtr, TypeLess> member_set;

  bool contains(const TypePtr& t) const { return member_set.count(t) != 0; }
};

Universe make_universe(std::vector<std::string> base, int depth);

// Substitutions vars -> members, odometer order (last variable fastest).
// Throws kind="carrier" past `cap` combinations.
std::vector<Subst> gsubst_enum(const Universe& u, const std::vector<std::string>& vars,
                               size_t cap = 1'000'000);

// Instance set of a constrained scheme: images S(body) for S over the
// universe whose side conditions (outer ++ S(context)) are derivable from no
// assumptions.  Result keeps enumeration order, first occurrence wins.
std::vector<TypePtr> ground_instances(const std::vector<Axiom>& axioms, const PredList& outer,
                                      const Scheme& s, const Universe& u, int entail_depth = 100);

// Same set computed by bottom-up saturation of derivable ground predicates
// instead of entailment search; used to cross-check ground_instances.
std::vector<TypePtr> ground_instances_rec(const std::vector<Axiom>& axioms, const PredList& outer,
                                          const Scheme& s, const Universe& u);

// every derivable ground predicate whose arguments come from images of the
// axiom heads under the universe (fixpoint saturation)
std::vector<Pred> saturate_facts(const std::vector<Axiom>& axioms, const Universe& u);

}  // namespace oml
