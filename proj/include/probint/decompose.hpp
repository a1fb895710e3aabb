#pragma once

// Recognition of integrated epr-relations and reconstruction of pr-relation
// pairs (r, s) with q = r ⊎ s.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "probint/prdb.hpp"

namespace probint {

struct PartitionResult {
  VarSet v1;  // variables forced to the first relation
  VarSet w1;  // variables forced to the second relation
  /// Variable groups touching no constraint edge; free to go either way.
  std::vector<VarSet> free_groups;
  /// Every constraint matches exactly one row formula (structurally), and no
  /// two constraints match the same row.
  bool condition3_ok = false;
  /// Set when a group would need both labels.
  std::optional<std::string> failure;
  /// Union-find lookups plus row, constraint and edge visits.
  std::size_t work = 0;

  bool recognized() const { return !failure && condition3_ok; }
};

/// Groups variables that co-occur in a row formula or on one side of a
/// constraint, links groups across each constraint, and 2-colors the links.
/// The lowest-numbered group (groups are numbered by their smallest
/// variable) of each linked component is labeled V.
PartitionResult partition(const EprRelation& q);

/// Whether (v, w) witnesses that q is integrated: rows stay on one side,
/// constraints straddle the sides, and constraints match rows one-to-one.
/// False means "not recognized", not "not integrated".
bool check_integrated(const EprRelation& q, const VarSet& v, const VarSet& w);

struct PrPair {
  PrRelation r;
  PrRelation s;

  friend bool operator==(const PrPair&, const PrPair&) = default;
};

/// Splits q into r (rows over v) and s (rows over w), then gives each
/// constraint's row a partner row on the other side. Variable-free rows go
/// opposite their constraint partner, or to r. Throws NotIntegrated.
PrPair build_pair(const EprRelation& q, const VarSet& v, const VarSet& w,
                  std::size_t* work = nullptr);

/// (V, W) choices in binary-counter order over the free groups: bit k of the
/// counter sends free group k to V. Throws NotIntegrated.
std::vector<std::pair<VarSet, VarSet>> enumerate_partitions(
    const EprRelation& q, std::size_t limit = std::numeric_limits<std::size_t>::max());

/// build_pair for each of enumerate_partitions.
std::vector<PrPair> enumerate_pairs(
    const EprRelation& q, std::size_t limit = std::numeric_limits<std::size_t>::max());

}  // namespace probint
