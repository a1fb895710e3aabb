#pragma once

// Probabilistic possible-worlds model: uncertain databases, world
// compatibility, pairwise integration, compatibility graphs, probabilistic
// constraints and the partial-independence joint distribution.

#include <compare>
#include <cstddef>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "probint/rational.hpp"

namespace probint {

/// A schema-free tuple of attribute values. Ordered by canonical key.
struct Tuple {
  std::vector<std::string> values;

  Tuple() = default;
  Tuple(std::initializer_list<std::string> v) : values(v) {}
  explicit Tuple(std::vector<std::string> v) : values(std::move(v)) {}

  friend bool operator==(const Tuple&, const Tuple&) = default;
  friend std::strong_ordering operator<=>(const Tuple& a, const Tuple& b);
};

/// Attribute values joined with the unit separator (0x1F). Defines the total
/// order on tuples used for sorting and merging.
std::string canonical_key(const Tuple& t);

std::string to_string(const Tuple& t);
std::ostream& operator<<(std::ostream& os, const Tuple& t);

/// A certain database; std::set keeps the canonical (sorted) form, so set
/// equality is world identity.
using World = std::set<Tuple>;
using TupleSet = std::set<Tuple>;

std::string to_string(const World& w);

struct UncertainDB {
  TupleSet tuple_set;
  std::vector<World> worlds;
  /// Aligned with `worlds` when present.
  std::optional<std::vector<Rational>> probs;

  bool probabilistic() const { return probs.has_value(); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Every violated invariant of `u`; an empty report means valid.
ValidationReport validate_udb(const UncertainDB& u);

/// Throws ValidationError carrying the first violation, if any.
void require_valid(const UncertainDB& u);

/// Worlds agree on every tuple both sources know about.
bool compatible(const World& di, const World& dj, const TupleSet& t1, const TupleSet& t2);

/// Pairwise integration of two uncertain databases: tuple set T ∪ T', one
/// world per distinct union of a compatible pair. Probabilities are not
/// carried. Throws EmptyIntegration when no pair is compatible.
UncertainDB integrate_pw(const UncertainDB& s1, const UncertainDB& s2);

struct GraphComponent {
  std::vector<std::size_t> left;   // world indices of the first source
  std::vector<std::size_t> right;  // world indices of the second source
  std::size_t edges = 0;

  bool complete_bipartite() const { return edges == left.size() * right.size(); }
};

struct CompatibilityGraph {
  std::size_t left_count = 0;
  std::size_t right_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> left_component;
  std::vector<std::size_t> right_component;
  /// Numbered by first appearance scanning left nodes then right nodes.
  std::vector<GraphComponent> components;
};

CompatibilityGraph compatibility_graph(const UncertainDB& s1, const UncertainDB& s2);

struct ComponentSummary {
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  /// Common side-sum; meaningful only when the component is balanced.
  Rational constant;
};

struct ComponentCheck {
  ComponentSummary summary;
  Rational left_sum;
  Rational right_sum;
  std::optional<std::string> violation;
};

/// Per-component probabilistic constraint check. Both sources must carry
/// probabilities. A component without edges is always a violation.
std::vector<ComponentCheck> check_prob_constraints(const UncertainDB& s1,
                                                   const UncertainDB& s2,
                                                   const CompatibilityGraph& graph);

/// One compatible pair (i, j) with its joint probability, before worlds with
/// equal unions are merged.
struct JointWorld {
  std::size_t left;
  std::size_t right;
  std::size_t component;
  World world;
  Rational prob;
};

/// P(Di ∧ D'j) = P(Di)·P(D'j)/P for every compatible pair. Throws
/// ProbConstraintViolation, EmptyIntegration or ValidationError.
std::vector<JointWorld> joint_pairs(const UncertainDB& s1, const UncertainDB& s2,
                                    std::vector<ComponentCheck>* checks = nullptr);

/// integrate_pw with probabilities; worlds from distinct pairs with the same
/// union are merged by summing.
UncertainDB integrate_pw_prob(const UncertainDB& s1, const UncertainDB& s2);

}  // namespace probint
