#pragma once

// Exact distribution of an integrated epr-relation under partial
// independence: every event variable is independent except for the
// dependencies its event constraints induce.

#include <cstddef>
#include <vector>

#include "probint/decompose.hpp"

namespace probint {

struct IntegratedDistribution {
  Distribution distribution;
  std::vector<ComponentSummary> components;
  PrPair pair_used;
  /// Compatible source-world pairs before worlds with equal unions merge.
  std::vector<JointWorld> joint;
};

/// Decomposes q with the default (first) partition, expands both
/// pr-relations, and assigns each compatible pair P(ri)·P(sj)/P of its
/// component. q.var_probs must cover every variable.
///
/// Throws NotIntegrated, ProbConstraintViolation, ExpansionTooLarge,
/// ValidationError.
IntegratedDistribution epr_distribution(const EprRelation& q,
                                        std::size_t cap = kDefaultExpansionCap);

/// Possible-worlds route for one pair: integrate_pw_prob of both expansions.
Distribution pair_distribution(const PrPair& pair, std::size_t cap = kDefaultExpansionCap);

struct CrossCheckReport {
  bool ok = true;
  std::size_t pairs_checked = 0;
  /// Worlds of the distribution equal the constraint-satisfying worlds.
  bool matches_valid_worlds = true;
  std::vector<std::string> mismatches;
};

/// epr_distribution(q) against pair_distribution of every enumerated pair
/// (up to `limit`), plus the world set of expand_epr(q).
CrossCheckReport cross_check_report(const EprRelation& q, std::size_t cap = kDefaultExpansionCap,
                                    std::size_t limit = 1024);
bool cross_check(const EprRelation& q, std::size_t cap = kDefaultExpansionCap);

}  // namespace probint
