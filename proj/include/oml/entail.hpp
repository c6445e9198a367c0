#pragma once

#include "oml/syntax.hpp"

namespace oml {

enum class EntailFail { None, NoAxiom, Depth, MultipleAxioms };

// Proof that a predicate follows from assumptions plus instance axioms.
// Assumption use prints as "-", axiom use as name(premise, ...).
struct EntailWitness {
  bool by_axiom = false;
  std::string axiom;
  std::vector<EntailWitness> premises;
};
std::string show_witness(const EntailWitness& w);

struct EntailResult {
  bool ok = false;
  EntailWitness w;
  EntailFail why = EntailFail::None;
  std::string detail;
};

// Assumptions are checked first (syntactic equality); otherwise exactly one
// axiom head may match the goal, and its instantiated context is discharged
// recursively.  Each axiom step consumes one unit of depth.
EntailResult entail(const std::vector<Axiom>& axioms, const PredList& assume, const Pred& goal,
                    int depth = 100);

struct EntailAllResult {
  bool ok = false;
  std::vector<EntailWitness> ws;
  EntailFail why = EntailFail::None;
  std::string detail;
};
EntailAllResult entail_all(const std::vector<Axiom>& axioms, const PredList& assume,
                           const PredList& goals, int depth = 100);

// re-check a stored witness without re-running search
bool replay_witness(const std::vector<Axiom>& axioms, const PredList& assume, const Pred& goal,
                    const EntailWitness& w);

}  // namespace oml
