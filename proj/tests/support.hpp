#pragma once

// Fixtures from the worked examples and brute-force oracles. The oracles
// deliberately avoid the library's expansion code: they walk formulas with
// their own evaluator, enumerate assignments through std::map, and compute
// partial-independence probabilities straight from the per-pattern ratios.

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "probint/decompose.hpp"
#include "probint/logic.hpp"
#include "probint/prdb.hpp"
#include "probint/pwdb.hpp"

namespace testing {

using probint::EprRelation;
using probint::Formula;
using probint::PrRelation;
using probint::Rational;
using probint::Tuple;
using probint::UncertainDB;
using probint::World;

using OWorld = std::set<std::vector<std::string>>;
using ODist = std::map<OWorld, Rational>;

inline Formula F(const char* text) { return probint::parse_formula(text); }
inline Rational Q(const char* text) { return probint::parse_rational(text); }
inline Tuple bob(const char* course) { return Tuple{"Bob", course}; }

// --- fixtures -------------------------------------------------------------

inline PrRelation andy() {
  return PrRelation{{{bob("CS100"), F("x")}, {bob("CS101"), F("!x")}, {bob("CS102"), F("false")}}, {}};
}
inline PrRelation andy_case2() {
  return PrRelation{{{bob("CS100"), F("x")}, {bob("CS101"), F("!x")}}, {}};
}
inline PrRelation jane() {
  return PrRelation{{{bob("CS101"), F("y")}, {bob("CS102"), F("!y")}}, {}};
}

// Course-selection sources as pr-relations.
inline PrRelation courses_r1() {
  return PrRelation{{{bob("CS100"), F("!c1")}, {bob("CS101"), F("c1 | c2")}},
                    {{"c1", Q("1/5")}, {"c2", Q("5/8")}}};
}
inline PrRelation courses_r2() {
  return PrRelation{{{bob("CS100"), F("b1 | b2")},
                     {bob("CS201"), F("!b1")},
                     {bob("CS202"), F("!b1 & !b2 & !b3")}},
                    {{"b1", Q("7/20")}, {"b2", Q("9/13")}, {"b3", Q("1/4")}}};
}

// The same sources as possible worlds.
inline UncertainDB courses_s() {
  UncertainDB u;
  u.tuple_set = {bob("CS100"), bob("CS101")};
  u.worlds = {{bob("CS100")}, {bob("CS100"), bob("CS101")}, {bob("CS101")}};
  u.probs = std::vector<Rational>{Q("0.3"), Q("0.5"), Q("0.2")};
  return u;
}
inline UncertainDB courses_s_prime() {
  UncertainDB u;
  u.tuple_set = {bob("CS100"), bob("CS201"), bob("CS202")};
  u.worlds = {{bob("CS100")}, {bob("CS100"), bob("CS201")}, {bob("CS201")}, {bob("CS201"), bob("CS202")}};
  u.probs = std::vector<Rational>{Q("0.35"), Q("0.45"), Q("0.05"), Q("0.15")};
  return u;
}

// Worlds of the integrated result and their probabilities, hand-listed.
inline std::map<World, Rational> courses_expected() {
  return {
      {{bob("CS100")}, Q("21/160")},
      {{bob("CS100"), bob("CS201")}, Q("27/160")},
      {{bob("CS100"), bob("CS101")}, Q("35/160")},
      {{bob("CS100"), bob("CS101"), bob("CS201")}, Q("45/160")},
      {{bob("CS101"), bob("CS201")}, Q("1/20")},
      {{bob("CS101"), bob("CS201"), bob("CS202")}, Q("3/20")},
  };
}

// t1@a, t2@b, t3@(!c | d) with a ≡ c.
inline EprRelation multiple_pairs_epr(probint::VarProbs probs = {}) {
  EprRelation q;
  q.rows = {{Tuple{"t1"}, F("a")}, {Tuple{"t2"}, F("b")}, {Tuple{"t3"}, F("!c | d")}};
  q.constraints = {{F("a"), F("c")}};
  q.var_probs = std::move(probs);
  return q;
}

// --- oracles --------------------------------------------------------------

inline bool oracle_eval(const Formula& f, const std::map<std::string, bool>& mu) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Variable: return mu.at(f.name());
    case K::True: return true;
    case K::False: return false;
    case K::Not: return !oracle_eval(f.left(), mu);
    case K::And: return oracle_eval(f.left(), mu) && oracle_eval(f.right(), mu);
    case K::Or: return oracle_eval(f.left(), mu) || oracle_eval(f.right(), mu);
    case K::Implies: return !oracle_eval(f.left(), mu) || oracle_eval(f.right(), mu);
    case K::Iff: return oracle_eval(f.left(), mu) == oracle_eval(f.right(), mu);
  }
  return false;
}

inline void oracle_vars(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == Formula::Kind::Variable) out.insert(f.name());
  if (f.kind() == Formula::Kind::Not) oracle_vars(f.left(), out);
  if (f.kind() >= Formula::Kind::And) {
    oracle_vars(f.left(), out);
    oracle_vars(f.right(), out);
  }
}

// Calls visit(mu, weight) for every assignment; weight is 1 when probs is
// null.
inline void for_each_assignment(
    const std::set<std::string>& names, const probint::VarProbs* probs,
    const std::function<void(const std::map<std::string, bool>&, const Rational&)>& visit) {
  std::vector<std::string> order(names.begin(), names.end());
  std::map<std::string, bool> mu;
  std::function<void(std::size_t, Rational)> go = [&](std::size_t i, Rational w) {
    if (i == order.size()) {
      visit(mu, w);
      return;
    }
    Rational p = probs ? probs->at(order[i]) : Rational(1);
    mu[order[i]] = true;
    go(i + 1, probs ? w * p : w);
    mu[order[i]] = false;
    go(i + 1, probs ? w * (1 - p) : w);
  };
  go(0, Rational(1));
}

inline OWorld oworld(const World& w) {
  OWorld out;
  for (const auto& t : w) out.insert(t.values);
  return out;
}

inline std::set<OWorld> oworlds(const std::vector<World>& ws) {
  std::set<OWorld> out;
  for (const auto& w : ws) out.insert(oworld(w));
  return out;
}

inline ODist odist(const probint::Distribution& d) {
  ODist out;
  for (const auto& [w, p] : d.probs) out[oworld(w)] += p;
  return out;
}

inline std::set<std::string> rel_vars(const std::vector<probint::PrTuple>& rows) {
  std::set<std::string> out;
  for (const auto& row : rows) oracle_vars(row.event, out);
  return out;
}

// Distribution of a pr-relation by brute force (zero-mass worlds kept out).
inline ODist oracle_pr(const PrRelation& r) {
  ODist out;
  for_each_assignment(rel_vars(r.rows), &r.var_probs, [&](const auto& mu, const Rational& w) {
    OWorld world;
    for (const auto& row : r.rows) {
      if (oracle_eval(row.event, mu)) world.insert(row.tuple.values);
    }
    if (w != 0) out[world] += w;
  });
  return out;
}

// Worlds of a pr-relation over all assignments.
inline std::set<OWorld> oracle_pr_worlds(const PrRelation& r) {
  std::set<OWorld> out;
  for_each_assignment(rel_vars(r.rows), nullptr, [&](const auto& mu, const Rational&) {
    OWorld world;
    for (const auto& row : r.rows) {
      if (oracle_eval(row.event, mu)) world.insert(row.tuple.values);
    }
    out.insert(world);
  });
  return out;
}

inline std::set<OWorld> oracle_epr_worlds(const EprRelation& q) {
  std::set<std::string> names = rel_vars(q.rows);
  for (const auto& c : q.constraints) {
    oracle_vars(c.lhs, names);
    oracle_vars(c.rhs, names);
  }
  std::set<OWorld> out;
  for_each_assignment(names, nullptr, [&](const auto& mu, const Rational&) {
    for (const auto& c : q.constraints) {
      if (oracle_eval(c.lhs, mu) != oracle_eval(c.rhs, mu)) return;
    }
    OWorld world;
    for (const auto& row : q.rows) {
      if (oracle_eval(row.event, mu)) world.insert(row.tuple.values);
    }
    out.insert(world);
  });
  return out;
}

inline std::set<std::vector<std::string>> tuple_values(const std::vector<probint::PrTuple>& rows) {
  std::set<std::vector<std::string>> out;
  for (const auto& row : rows) out.insert(row.tuple.values);
  return out;
}

inline OWorld restrict_to(const OWorld& w, const std::set<std::vector<std::string>>& ts) {
  OWorld out;
  for (const auto& t : w) {
    if (ts.contains(t)) out.insert(t);
  }
  return out;
}

// Pairwise integration of world sets.
inline std::set<OWorld> oracle_integrate_worlds(const std::set<OWorld>& a,
                                                const std::set<std::vector<std::string>>& ta,
                                                const std::set<OWorld>& b,
                                                const std::set<std::vector<std::string>>& tb) {
  std::set<std::vector<std::string>> common;
  for (const auto& t : ta) {
    if (tb.contains(t)) common.insert(t);
  }
  std::set<OWorld> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (restrict_to(x, common) != restrict_to(y, common)) continue;
      OWorld u = x;
      u.insert(y.begin(), y.end());
      out.insert(u);
    }
  }
  return out;
}

// Partial independence from the definitions: a world pair agreeing on the
// common tuples gets P(x)·P(y)/P(pattern). Nullopt when some pattern has
// different mass on the two sides.
inline std::optional<ODist> oracle_partial_independence(const PrRelation& r, const PrRelation& s) {
  ODist dr = oracle_pr(r);
  ODist ds = oracle_pr(s);
  auto tr = tuple_values(r.rows);
  auto ts = tuple_values(s.rows);
  std::set<std::vector<std::string>> common;
  for (const auto& t : tr) {
    if (ts.contains(t)) common.insert(t);
  }
  std::map<OWorld, Rational> mass_r, mass_s;
  for (const auto& [w, p] : dr) mass_r[restrict_to(w, common)] += p;
  for (const auto& [w, p] : ds) mass_s[restrict_to(w, common)] += p;
  if (mass_r != mass_s) return std::nullopt;
  ODist out;
  for (const auto& [x, px] : dr) {
    for (const auto& [y, py] : ds) {
      OWorld pattern = restrict_to(x, common);
      if (pattern != restrict_to(y, common)) continue;
      OWorld u = x;
      u.insert(y.begin(), y.end());
      out[u] += px * py / mass_r.at(pattern);
    }
  }
  return out;
}

inline Rational osum(const ODist& d) {
  Rational total = 0;
  for (const auto& [w, p] : d) total += p;
  return total;
}

}  // namespace testing
