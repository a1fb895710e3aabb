#pragma once

// pr-relations (tuples annotated with event formulas over independent
// Boolean event variables) and epr-relations (pr-relations plus event
// constraints lhs ≡ rhs).

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "probint/logic.hpp"
#include "probint/pwdb.hpp"
#include "probint/rational.hpp"

namespace probint {

/// t@f
struct PrTuple {
  Tuple tuple;
  Formula event;

  friend bool operator==(const PrTuple&, const PrTuple&) = default;
};

using VarProbs = std::map<std::string, Rational>;

struct PrRelation {
  std::vector<PrTuple> rows;
  /// Either empty (no probabilities) or covering every event variable, each
  /// value strictly between 0 and 1.
  VarProbs var_probs;

  friend bool operator==(const PrRelation&, const PrRelation&) = default;
};

/// lhs ≡ rhs
struct Constraint {
  Formula lhs;
  Formula rhs;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct EprRelation {
  std::vector<PrTuple> rows;
  std::vector<Constraint> constraints;
  VarProbs var_probs;

  friend bool operator==(const EprRelation&, const EprRelation&) = default;
};

/// World -> probability. Keys are canonical worlds, so two distributions are
/// equal exactly when they assign identical probabilities to identical
/// worlds.
struct Distribution {
  std::map<World, Rational> probs;

  Rational total() const;
  std::size_t size() const { return probs.size(); }
  friend bool operator==(const Distribution&, const Distribution&) = default;
};

/// Requires `u.probs`.
Distribution to_distribution(const UncertainDB& u);

ValidationReport validate_pr(const PrRelation& r);
ValidationReport validate_epr(const EprRelation& q);

VarSet event_vars(const PrRelation& r);
/// Variables of rows and constraints.
VarSet event_vars(const EprRelation& q);
TupleSet tuples_of(const std::vector<PrTuple>& rows);

/// Worlds of `r` without probabilities (every assignment is considered).
UncertainDB possible_worlds(const PrRelation& r, std::size_t cap = kDefaultExpansionCap);

struct Expansion {
  UncertainDB db;  // probabilities attached, aligned with `dist` order
  Distribution dist;
};

/// Enumerates all assignments, weighting each by the product of independent
/// variable probabilities and grouping identical worlds. Throws
/// ExpansionTooLarge, or ValidationError if a variable has no probability.
Expansion expand_pr(const PrRelation& r, std::size_t cap = kDefaultExpansionCap);

struct ValidWorld {
  World world;
  Assignment witness;  // lowest-numbered valid assignment producing `world`
};

/// One entry per distinct world reachable through a constraint-satisfying
/// assignment, in world order. Never attaches probabilities. Throws
/// ExpansionTooLarge or NoValidAssignment.
std::vector<ValidWorld> expand_epr(const EprRelation& q, std::size_t cap = kDefaultExpansionCap);

/// Returns the pair unchanged when their variable sets are disjoint,
/// otherwise both renamed under prefixes "s1" and "s2".
std::pair<PrRelation, PrRelation> make_disjoint(const PrRelation& r, const PrRelation& s);

/// Integration of two pr-relations into an epr-relation. Rows come out in
/// canonical tuple order; a common tuple is copied from `s` and contributes
/// the constraint f ≡ g with f from `r`. var_probs are merged only when both
/// sides carry them. Runs in O(n log n).
EprRelation integrate_pr(const PrRelation& r, const PrRelation& s);

/// ⋀_{t∈w} f_t ∧ ⋀_{t∉w} ¬f_t in row order. `w` must be a subset of the
/// relation's tuples.
Formula evf(const PrRelation& r, const World& w);
/// Same, prefixed with the conjunction of the constraints (lhs <-> rhs).
Formula evf(const EprRelation& q, const World& w);

/// Chain encoding of a probabilistic uncertain database: fresh variables
/// x1..x(n-1); world i is selected by !x1 & ... & !x(i-1) & xi.
PrRelation encode_pw(const UncertainDB& u, std::string_view var_prefix = "x");

}  // namespace probint
