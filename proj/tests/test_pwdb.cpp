#include <random>

#include "doctest.h"
#include "probint/error.hpp"
#include "probint/generator.hpp"
#include "probint/pwdb.hpp"
#include "support.hpp"

using namespace probint;
using testing::bob;
using testing::Q;

namespace {

UncertainDB andy_pw(bool knows_cs102) {
  UncertainDB u;
  u.tuple_set = {bob("CS100"), bob("CS101")};
  if (knows_cs102) u.tuple_set.insert(bob("CS102"));
  u.worlds = {{bob("CS100")}, {bob("CS101")}};
  return u;
}

UncertainDB jane_pw() {
  UncertainDB u;
  u.tuple_set = {bob("CS101"), bob("CS102")};
  u.worlds = {{bob("CS101")}, {bob("CS102")}};
  return u;
}

UncertainDB certain(World w) {
  UncertainDB u;
  u.tuple_set = w;
  u.worlds = {std::move(w)};
  u.probs = std::vector<Rational>{1};
  return u;
}

std::set<World> world_set(const UncertainDB& u) { return {u.worlds.begin(), u.worlds.end()}; }

}  // namespace

TEST_CASE("tuple ordering follows the canonical key") {
  CHECK(Tuple{"Bob", "CS100"} < Tuple{"Bob", "CS101"});
  CHECK(Tuple{"a"} < Tuple{"a", "b"});
  CHECK(Tuple{"a", "b"} < Tuple{"ab"});  // separator sorts below printable characters
  CHECK(canonical_key(Tuple{"a", "b"}) == std::string("a\x1f" "b"));
  CHECK(to_string(Tuple{"Bob", "CS100"}) == "(Bob, CS100)");
}

TEST_CASE("property: tuple order agrees with the key order") {
  std::mt19937_64 rng(11);
  const std::string alphabet = std::string("ab\x1f") + '\0' + "\xff";
  auto random_tuple = [&] {
    std::vector<std::string> values(std::uniform_int_distribution<int>(1, 3)(rng));
    for (auto& v : values) {
      int len = std::uniform_int_distribution<int>(0, 3)(rng);
      for (int i = 0; i < len; ++i) v += alphabet[std::uniform_int_distribution<std::size_t>(0, 4)(rng)];
    }
    return Tuple(values);
  };
  for (int i = 0; i < 20000; ++i) {
    Tuple a = random_tuple(), b = random_tuple();
    std::string ka = canonical_key(a), kb = canonical_key(b);
    // Byte strings compare unsigned; std::string does the same.
    if (ka != kb) {
      CHECK((a < b) == (ka < kb));
    } else {
      CHECK((a <=> b) == (a.values <=> b.values));
    }
    CHECK((a == b) == ((a <=> b) == 0));
  }
}

TEST_CASE("validate_udb") {
  CHECK(validate_udb(testing::courses_s()).ok());
  CHECK(validate_udb(certain({bob("CS100")})).ok());

  UncertainDB u = testing::courses_s();
  u.worlds.resize(2);
  u.probs = std::vector<Rational>{Q("0.5"), Q("0.4")};
  auto report = validate_udb(u);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations.front() == "probabilities sum to 9/10 ≠ 1");

  UncertainDB bad;
  bad.tuple_set = {bob("CS100")};
  bad.worlds = {{bob("CS999")}, {bob("CS999")}};
  bad.probs = std::vector<Rational>{0, 1};
  auto r2 = validate_udb(bad);
  CHECK(r2.violations.size() == 4);  // outside tuple set twice, duplicate world, zero probability
  CHECK_THROWS_AS(require_valid(bad), ValidationError);

  UncertainDB empty;
  CHECK_FALSE(validate_udb(empty).ok());
}

TEST_CASE("compatible") {
  TupleSet t1 = {bob("CS100"), bob("CS101"), bob("CS102")};
  TupleSet t2 = {bob("CS101"), bob("CS102")};
  CHECK(compatible({bob("CS101")}, {bob("CS101")}, t1, t2));
  CHECK_FALSE(compatible({bob("CS100")}, {bob("CS101")}, t1, t2));
  CHECK(compatible({bob("A")}, {bob("B")}, {bob("A")}, {bob("B")}));
}

TEST_CASE("integrate_pw: Andy and Jane") {
  UncertainDB one = integrate_pw(andy_pw(true), jane_pw());
  CHECK(world_set(one) == std::set<World>{{bob("CS101")}});
  CHECK(one.tuple_set.size() == 3);
  CHECK_FALSE(one.probs);

  UncertainDB two = integrate_pw(andy_pw(false), jane_pw());
  CHECK(world_set(two) == std::set<World>{{bob("CS101")}, {bob("CS100"), bob("CS102")}});
}

TEST_CASE("integrate_pw: neutral source and empty integration") {
  UncertainDB neutral;
  neutral.worlds = {World{}};
  UncertainDB s = testing::courses_s();
  CHECK(world_set(integrate_pw(s, neutral)) == world_set(s));

  UncertainDB a = certain({bob("X")});
  UncertainDB b;
  b.tuple_set = {bob("X")};
  b.worlds = {World{}};
  CHECK_THROWS_AS(integrate_pw(a, b), EmptyIntegration);
  auto g = compatibility_graph(a, b);
  CHECK(g.edges.empty());
  CHECK(g.components.size() == 2);
}

TEST_CASE("integrate_pw: courses give six worlds") {
  UncertainDB u = integrate_pw(testing::courses_s(), testing::courses_s_prime());
  std::set<World> expected;
  for (const auto& [w, p] : testing::courses_expected()) expected.insert(w);
  CHECK(world_set(u) == expected);
}

TEST_CASE("compatibility graph of the courses example") {
  auto g = compatibility_graph(testing::courses_s(), testing::courses_s_prime());
  REQUIRE(g.components.size() == 2);
  CHECK(g.components[0].left == std::vector<std::size_t>{0, 1});
  CHECK(g.components[0].right == std::vector<std::size_t>{0, 1});
  CHECK(g.components[1].left == std::vector<std::size_t>{2});
  CHECK(g.components[1].right == std::vector<std::size_t>{2, 3});
  for (const auto& c : g.components) CHECK(c.complete_bipartite());

  auto same = compatibility_graph(certain({bob("A")}), certain({bob("A")}));
  CHECK(same.components.size() == 1);
  CHECK(same.edges.size() == 1);
}

TEST_CASE("probabilistic constraints of the courses example") {
  auto s = testing::courses_s();
  auto sp = testing::courses_s_prime();
  auto checks = check_prob_constraints(s, sp, compatibility_graph(s, sp));
  REQUIRE(checks.size() == 2);
  CHECK_FALSE(checks[0].violation);
  CHECK(checks[0].summary.constant == Q("4/5"));
  CHECK_FALSE(checks[1].violation);
  CHECK(checks[1].summary.constant == Q("1/5"));

  // Shifting mass inside one component keeps it balanced.
  auto shifted = sp;
  (*shifted.probs)[0] = Q("0.36");
  (*shifted.probs)[1] = Q("0.44");
  for (const auto& c : check_prob_constraints(s, shifted, compatibility_graph(s, shifted))) {
    CHECK_FALSE(c.violation);
  }
  // Moving mass across components does not.
  auto moved = sp;
  (*moved.probs)[0] = Q("0.36");
  (*moved.probs)[3] = Q("0.14");
  auto bad = check_prob_constraints(s, moved, compatibility_graph(s, moved));
  REQUIRE(bad[0].violation);
  CHECK(bad[0].right_sum == Q("0.81"));
  CHECK_THROWS_AS(integrate_pw_prob(s, moved), ProbConstraintViolation);

  UncertainDB plain = testing::courses_s();
  plain.probs.reset();
  CHECK_THROWS_AS(check_prob_constraints(plain, sp, compatibility_graph(plain, sp)), ValidationError);
}

TEST_CASE("integrate_pw_prob: courses example") {
  UncertainDB u = integrate_pw_prob(testing::courses_s(), testing::courses_s_prime());
  REQUIRE(u.probs);
  std::map<World, Rational> got;
  for (std::size_t i = 0; i < u.worlds.size(); ++i) got[u.worlds[i]] = (*u.probs)[i];
  CHECK(got == testing::courses_expected());
  // (D1, D'1) alone: 0.3 × 0.35 / (0.3 + 0.5).
  CHECK(got.at({bob("CS100")}) == Q("0.3") * Q("0.35") / Q("0.8"));
}

TEST_CASE("integrate_pw_prob: certain sources") {
  UncertainDB u = integrate_pw_prob(certain({bob("A")}), certain({bob("A")}));
  REQUIRE(u.worlds.size() == 1);
  CHECK((*u.probs)[0] == 1);
}

TEST_CASE("a world with no compatible partner is a violation, not dropped") {
  UncertainDB a;
  a.tuple_set = {bob("X"), bob("Y")};
  a.worlds = {{bob("X")}, {bob("Y")}};
  a.probs = std::vector<Rational>{Q("1/2"), Q("1/2")};
  UncertainDB b = certain({bob("X")});
  auto checks = check_prob_constraints(a, b, compatibility_graph(a, b));
  bool flagged = false;
  for (const auto& c : checks) flagged = flagged || (c.violation && c.summary.right.empty());
  CHECK(flagged);
  CHECK_THROWS_AS(integrate_pw_prob(a, b), ProbConstraintViolation);
}

// Random pairs made balanced by rescaling the second source inside each
// common-tuple pattern.
namespace {

UncertainDB rebalance(const UncertainDB& a, UncertainDB b) {
  TupleSet common;
  for (const auto& t : a.tuple_set) {
    if (b.tuple_set.contains(t)) common.insert(t);
  }
  auto pattern = [&](const World& w) {
    World out;
    for (const auto& t : w) {
      if (common.contains(t)) out.insert(t);
    }
    return out;
  };
  std::map<World, Rational> mass_a, mass_b;
  for (std::size_t i = 0; i < a.worlds.size(); ++i) mass_a[pattern(a.worlds[i])] += (*a.probs)[i];
  std::vector<World> worlds;
  std::vector<Rational> probs;
  for (std::size_t j = 0; j < b.worlds.size(); ++j) mass_b[pattern(b.worlds[j])] += (*b.probs)[j];
  for (std::size_t j = 0; j < b.worlds.size(); ++j) {
    World p = pattern(b.worlds[j]);
    if (!mass_a.contains(p)) continue;
    worlds.push_back(b.worlds[j]);
    probs.push_back((*b.probs)[j] / mass_b[p] * mass_a[p]);
  }
  b.worlds = std::move(worlds);
  b.probs = std::move(probs);
  return b;
}

}  // namespace

TEST_CASE("property: structure and marginals of probabilistic integration") {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    UncertainDB a = random_udb(rng, 3, 5);
    UncertainDB b = random_udb(rng, 3, 5);
    // Shift b's tuples so the overlap varies between none and full.
    std::size_t shift = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    auto shift_tuple = [&](const Tuple& t) { return Tuple{"Bob", "CS" + std::to_string(std::stoi(t.values[1].substr(2)) + shift)}; };
    UncertainDB moved;
    for (const auto& t : b.tuple_set) moved.tuple_set.insert(shift_tuple(t));
    for (const auto& w : b.worlds) {
      World x;
      for (const auto& t : w) x.insert(shift_tuple(t));
      moved.worlds.push_back(x);
    }
    moved.probs = b.probs;
    b = rebalance(a, moved);
    if (b.worlds.empty()) continue;
    b.tuple_set = moved.tuple_set;
    if (!validate_udb(b).ok()) continue;

    auto g = compatibility_graph(a, b);
    for (const auto& c : g.components) CHECK(c.complete_bipartite());

    std::vector<ComponentCheck> checks;
    std::vector<JointWorld> joint;
    try {
      joint = joint_pairs(a, b, &checks);
    } catch (const ProbConstraintViolation&) {
      // A left world without partner is possible when its pattern is
      // missing from b.
      continue;
    }
    ++checked;
    std::vector<Rational> left(a.worlds.size()), right(b.worlds.size());
    Rational total = 0;
    for (const auto& jw : joint) {
      left[jw.left] += jw.prob;
      right[jw.right] += jw.prob;
      total += jw.prob;
    }
    CHECK(total == 1);
    for (std::size_t k = 0; k < left.size(); ++k) CHECK(left[k] == (*a.probs)[k]);
    for (std::size_t k = 0; k < right.size(); ++k) CHECK(right[k] == (*b.probs)[k]);
    // Ratio property inside a component, cross-multiplied.
    for (const auto& x : joint) {
      for (const auto& y : joint) {
        if (x.component != y.component || x.right != y.right) continue;
        CHECK(x.prob * (*a.probs)[y.left] == y.prob * (*a.probs)[x.left]);
      }
    }
    UncertainDB merged = integrate_pw_prob(a, b);
    Rational sum = 0;
    for (const auto& p : *merged.probs) sum += p;
    CHECK(sum == 1);

    UncertainDB ab = integrate_pw(a, b);
    UncertainDB ba = integrate_pw(b, a);
    CHECK(world_set(ab) == world_set(ba));
  }
  CHECK(checked >= 100);
}
