#pragma once

// Seeded random pr-relation pairs for property tests and the `gen` command.

#include <cstdint>
#include <random>
#include <vector>

#include "probint/prdb.hpp"

namespace probint {

struct GenParams {
  std::size_t max_tuples = 4;  // per source, at most 8
  std::size_t max_vars = 3;    // per source, at most 4
  std::size_t max_depth = 2;   // formula depth, at most 3
  /// Chance that each tuple of the second source is taken from the first.
  double overlap = 0.5;
  /// Mirror the first source's common rows (renamed variables, same
  /// probabilities, equivalence-preserving rewrites) into the second source
  /// so that every probabilistic constraint balances.
  bool balanced = false;
};

/// Throws ValidationError when a bound is exceeded.
void check_params(const GenParams& params);

struct GeneratedPair {
  PrRelation r;
  PrRelation s;
};

/// Deterministic in (seed, params). Every event formula is structurally
/// distinct from the others in its relation, at most one row across both
/// relations carries a constant formula (its mirror excepted), and every
/// variable has a probability.
GeneratedPair generate_pair(std::uint64_t seed, const GenParams& params = {});

/// Random formula over `names` of depth at most `depth`.
Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& names,
                       std::size_t depth);

/// Random semantics-preserving rewrite (double negation, De Morgan,
/// commutation, implication elimination).
Formula random_rewrite(std::mt19937_64& rng, const Formula& f);

/// Random probabilistic uncertain database over `tuple_count` tuples with at
/// most `max_worlds` distinct worlds.
UncertainDB random_udb(std::mt19937_64& rng, std::size_t tuple_count, std::size_t max_worlds);

}  // namespace probint
