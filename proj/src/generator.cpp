#include "probint/generator.hpp"

#include <algorithm>
#include <unordered_set>

#include "probint/error.hpp"

namespace probint {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

Rational random_prob(std::mt19937_64& rng) {
  static constexpr int kDenominators[] = {2, 3, 4, 5, 8, 10, 13, 20};
  int d = kDenominators[pick(rng, 0, std::size(kDenominators) - 1)];
  return Rational(static_cast<int>(pick(rng, 1, static_cast<std::size_t>(d - 1))), d);
}

Tuple course(std::size_t number) { return Tuple{"Bob", "CS" + std::to_string(number)}; }

// Formula distinct from everything in `used`; falls back to stacking double
// negations, which always yields a fresh structure.
Formula fresh_formula(std::mt19937_64& rng, const std::vector<std::string>& names,
                      std::size_t depth,
                      std::unordered_set<Formula, FormulaHash>& used) {
  Formula f = random_formula(rng, names, depth);
  for (int attempt = 0; attempt < 50 && used.contains(f); ++attempt) {
    f = random_formula(rng, names, depth);
  }
  while (used.contains(f)) f = Formula::Not(Formula::Not(f));
  used.insert(f);
  return f;
}

void attach_probs(PrRelation& r, std::mt19937_64& rng,
                  const std::map<std::string, Rational>* copy_from = nullptr,
                  const std::map<std::string, std::string>* mirror_of = nullptr) {
  for (const auto& name : event_vars(r)) {
    if (copy_from && mirror_of) {
      if (auto it = mirror_of->find(name); it != mirror_of->end()) {
        r.var_probs.emplace(name, copy_from->at(it->second));
        continue;
      }
    }
    r.var_probs.emplace(name, random_prob(rng));
  }
}

Formula substitute(const Formula& f, const std::map<std::string, std::string>& names) {
  switch (f.kind()) {
    case Formula::Kind::Variable: return Formula::Var(names.at(f.name()));
    case Formula::Kind::True:
    case Formula::Kind::False: return f;
    case Formula::Kind::Not: return Formula::Not(substitute(f.left(), names));
    case Formula::Kind::And: return Formula::And(substitute(f.left(), names), substitute(f.right(), names));
    case Formula::Kind::Or: return Formula::Or(substitute(f.left(), names), substitute(f.right(), names));
    case Formula::Kind::Implies:
      return Formula::Implies(substitute(f.left(), names), substitute(f.right(), names));
    case Formula::Kind::Iff: return Formula::Iff(substitute(f.left(), names), substitute(f.right(), names));
  }
  return f;
}

}  // namespace

void check_params(const GenParams& p) {
  if (p.max_tuples < 1 || p.max_tuples > 8) throw ValidationError("tuples must be in 1..8");
  if (p.max_vars < 1 || p.max_vars > 4) throw ValidationError("variables must be in 1..4");
  if (p.max_depth > 3) throw ValidationError("formula depth must be at most 3");
  if (!(p.overlap >= 0.0 && p.overlap <= 1.0)) throw ValidationError("overlap must be in [0, 1]");
}

Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& names,
                       std::size_t depth) {
  if (depth == 0 || chance(rng, 0.35)) return Formula::Var(names[pick(rng, 0, names.size() - 1)]);
  switch (pick(rng, 0, 9)) {
    case 0:
    case 1: return Formula::Not(random_formula(rng, names, depth - 1));
    case 2:
    case 3:
    case 4: return Formula::And(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1));
    case 5:
    case 6:
    case 7: return Formula::Or(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1));
    case 8: return Formula::Implies(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1));
    default: return Formula::Iff(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1));
  }
}

Formula random_rewrite(std::mt19937_64& rng, const Formula& f) {
  using K = Formula::Kind;
  auto sub = [&](const Formula& g) { return random_rewrite(rng, g); };
  Formula out = f;
  switch (f.kind()) {
    case K::Variable:
    case K::True:
    case K::False: break;
    case K::Not: {
      const Formula& c = f.left();
      if (c.kind() == K::And && chance(rng, 0.5)) {
        out = Formula::Or(Formula::Not(sub(c.left())), Formula::Not(sub(c.right())));
      } else if (c.kind() == K::Or && chance(rng, 0.5)) {
        out = Formula::And(Formula::Not(sub(c.left())), Formula::Not(sub(c.right())));
      } else {
        out = Formula::Not(sub(c));
      }
      break;
    }
    case K::And:
      out = chance(rng, 0.5) ? Formula::And(sub(f.right()), sub(f.left()))
                             : Formula::And(sub(f.left()), sub(f.right()));
      break;
    case K::Or:
      out = chance(rng, 0.5) ? Formula::Or(sub(f.right()), sub(f.left()))
                             : Formula::Or(sub(f.left()), sub(f.right()));
      break;
    case K::Implies:
      out = chance(rng, 0.5) ? Formula::Or(Formula::Not(sub(f.left())), sub(f.right()))
                             : Formula::Implies(sub(f.left()), sub(f.right()));
      break;
    case K::Iff:
      out = chance(rng, 0.5) ? Formula::Iff(sub(f.right()), sub(f.left()))
                             : Formula::Iff(sub(f.left()), sub(f.right()));
      break;
  }
  if (chance(rng, 0.1)) out = Formula::Not(Formula::Not(out));
  return out;
}

GeneratedPair generate_pair(std::uint64_t seed, const GenParams& params) {
  check_params(params);
  std::mt19937_64 rng(seed);
  static const std::vector<std::string> kFirst = {"a", "b", "c", "d"};
  static const std::vector<std::string> kSecond = {"e", "f", "g", "h"};

  GeneratedPair out;
  bool constant_used = false;

  // First source.
  std::vector<std::string> r_names(kFirst.begin(), kFirst.begin() + pick(rng, 1, params.max_vars));
  // In plain mode the second source reuses the first source's names, which
  // exercises renaming during integration.
  std::vector<std::string> s_pool = params.balanced ? kSecond : kFirst;
  std::vector<std::size_t> numbers(100);
  for (std::size_t i = 0; i < numbers.size(); ++i) numbers[i] = 100 + i;
  std::shuffle(numbers.begin(), numbers.end(), rng);
  const std::size_t r_count = pick(rng, 1, params.max_tuples);
  std::unordered_set<Formula, FormulaHash> r_used;
  for (std::size_t i = 0; i < r_count; ++i) {
    Formula f = Formula::False();
    if (!constant_used && chance(rng, 0.08)) {
      constant_used = true;
      r_used.insert(f);
    } else {
      f = fresh_formula(rng, r_names, params.max_depth, r_used);
    }
    out.r.rows.push_back({course(numbers[i]), f});
  }
  attach_probs(out.r, rng);

  // Second source: tuples drawn from the first with the overlap bias,
  // otherwise fresh (CS2xx never occurs in the first source).
  std::vector<std::size_t> fresh(100);
  for (std::size_t i = 0; i < fresh.size(); ++i) fresh[i] = 200 + i;
  std::shuffle(fresh.begin(), fresh.end(), rng);
  std::vector<std::size_t> unused_r(r_count);
  for (std::size_t i = 0; i < r_count; ++i) unused_r[i] = i;
  std::shuffle(unused_r.begin(), unused_r.end(), rng);

  const std::size_t s_count = pick(rng, 1, params.max_tuples);
  std::vector<std::optional<std::size_t>> source_row;  // r row mirrored, if common
  std::vector<Tuple> s_tuples;
  std::size_t next_fresh = 0;
  for (std::size_t i = 0; i < s_count; ++i) {
    if (!unused_r.empty() && chance(rng, params.overlap)) {
      std::size_t k = unused_r.back();
      unused_r.pop_back();
      s_tuples.push_back(out.r.rows[k].tuple);
      source_row.push_back(k);
    } else {
      s_tuples.push_back(course(fresh[next_fresh++]));
      source_row.push_back(std::nullopt);
    }
  }

  std::unordered_set<Formula, FormulaHash> s_used;
  std::map<std::string, std::string> mirror_name;  // second-source name -> first-source name
  std::map<std::string, std::string> forward;      // first -> second
  std::vector<std::string> s_names;
  if (params.balanced) {
    // Mirrored variables first: every variable of a common row.
    VarSet needed;
    for (const auto& k : source_row) {
      if (k) collect_vars(out.r.rows[*k].event, needed);
    }
    for (const auto& n : needed) {
      std::string m = n + "2";
      forward.emplace(n, m);
      mirror_name.emplace(m, n);
      s_names.push_back(m);
    }
    const std::size_t extra = s_names.size() >= params.max_vars
                                  ? 0
                                  : pick(rng, s_names.empty() ? 1 : 0, params.max_vars - s_names.size());
    for (std::size_t i = 0; i < extra; ++i) s_names.push_back(kSecond[i]);
  } else {
    s_names.assign(s_pool.begin(), s_pool.begin() + pick(rng, 1, params.max_vars));
  }

  for (std::size_t i = 0; i < s_count; ++i) {
    Formula f = Formula::False();
    if (params.balanced && source_row[i]) {
      const Formula base = substitute(out.r.rows[*source_row[i]].event, forward);
      f = random_rewrite(rng, base);
      for (int attempt = 0; attempt < 20 && s_used.contains(f); ++attempt) f = random_rewrite(rng, base);
      while (s_used.contains(f)) f = Formula::Not(Formula::Not(f));
      s_used.insert(f);
    } else if (!constant_used && !params.balanced && chance(rng, 0.08)) {
      constant_used = true;
      f = Formula::True();
      s_used.insert(f);
    } else {
      f = fresh_formula(rng, s_names, params.max_depth, s_used);
    }
    out.s.rows.push_back({s_tuples[i], f});
  }
  attach_probs(out.s, rng, &out.r.var_probs, &mirror_name);
  return out;
}

UncertainDB random_udb(std::mt19937_64& rng, std::size_t tuple_count, std::size_t max_worlds) {
  UncertainDB u;
  std::vector<Tuple> tuples;
  for (std::size_t i = 0; i < tuple_count; ++i) {
    tuples.push_back(course(100 + i));
    u.tuple_set.insert(tuples.back());
  }
  const std::size_t target = pick(rng, 1, max_worlds);
  std::set<World> seen;
  for (int attempt = 0; attempt < 64 && u.worlds.size() < target; ++attempt) {
    World w;
    for (const auto& t : tuples) {
      if (chance(rng, 0.5)) w.insert(t);
    }
    if (seen.insert(w).second) u.worlds.push_back(std::move(w));
  }
  // Random positive weights normalized to an exact distribution.
  std::vector<Rational> probs;
  Rational total = 0;
  for (std::size_t i = 0; i < u.worlds.size(); ++i) {
    probs.emplace_back(static_cast<int>(pick(rng, 1, 20)));
    total += probs.back();
  }
  for (auto& p : probs) p /= total;
  u.probs = std::move(probs);
  return u;
}

}  // namespace probint
