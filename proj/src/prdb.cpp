#include "probint/prdb.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <unordered_set>

#include "probint/error.hpp"

namespace probint {

Rational Distribution::total() const {
  Rational sum = 0;
  for (const auto& [w, p] : probs) sum += p;
  return sum;
}

Distribution to_distribution(const UncertainDB& u) {
  if (!u.probs) throw ValidationError("uncertain database carries no probabilities");
  Distribution d;
  for (std::size_t i = 0; i < u.worlds.size(); ++i) d.probs[u.worlds[i]] += (*u.probs)[i];
  return d;
}

namespace {

void validate_rows(const std::vector<PrTuple>& rows, std::vector<std::string>& v) {
  std::vector<const Tuple*> sorted;
  sorted.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.tuple.values.empty()) v.push_back("empty tuple");
    sorted.push_back(&row.tuple);
  }
  std::sort(sorted.begin(), sorted.end(), [](const Tuple* a, const Tuple* b) { return *a < *b; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (*sorted[i] == *sorted[i - 1]) v.push_back("duplicate tuple " + to_string(*sorted[i]));
  }
}

template <class Used>
void validate_probs(const VarProbs& probs, Used&& used_vars, std::vector<std::string>& v) {
  for (const auto& [name, p] : probs) {
    if (!is_valid_identifier(name)) v.push_back("invalid variable name '" + name + "'");
    if (p <= 0 || p >= 1) {
      v.push_back("probability of " + name + " is " + to_fraction_string(p) +
                  ", outside (0, 1)");
    }
  }
  if (probs.empty()) return;
  for (const auto& name : used_vars()) {
    if (!probs.contains(name)) v.push_back("variable " + name + " has no probability");
  }
}

void require(const ValidationReport& report) {
  if (!report.ok()) throw ValidationError(report.violations.front());
}

void require_probs(const VarProbs& probs, const VarSet& used) {
  for (const auto& name : used) {
    if (!probs.contains(name)) throw ValidationError("variable " + name + " has no probability");
  }
}

// Bit set over row indices, used as a grouping key during enumeration.
using RowMask = std::vector<std::uint64_t>;

RowMask world_mask(const std::vector<Evaluator>& rows, std::uint64_t bits) {
  RowMask mask((rows.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i](bits)) mask[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return mask;
}

World world_of(const std::vector<PrTuple>& rows, const RowMask& mask) {
  World w;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if ((mask[i / 64] >> (i % 64)) & 1U) w.insert(rows[i].tuple);
  }
  return w;
}

std::vector<Evaluator> compile_rows(const std::vector<PrTuple>& rows,
                                    const Evaluator::Index& index) {
  std::vector<Evaluator> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.emplace_back(row.event, index);
  return out;
}

Assignment assignment_of(const VarSet& names, std::uint64_t bits) {
  Assignment mu;
  unsigned i = 0;
  for (const auto& n : names) mu.emplace(n, (bits >> i++) & 1U);
  return mu;
}

}  // namespace

ValidationReport validate_pr(const PrRelation& r) {
  ValidationReport report;
  validate_rows(r.rows, report.violations);
  validate_probs(r.var_probs, [&r] { return event_vars(r); }, report.violations);
  return report;
}

ValidationReport validate_epr(const EprRelation& q) {
  ValidationReport report;
  validate_rows(q.rows, report.violations);
  validate_probs(q.var_probs, [&q] { return event_vars(q); }, report.violations);
  return report;
}

VarSet event_vars(const PrRelation& r) {
  VarSet out;
  for (const auto& row : r.rows) collect_vars(row.event, out);
  return out;
}

VarSet event_vars(const EprRelation& q) {
  VarSet out;
  for (const auto& row : q.rows) collect_vars(row.event, out);
  for (const auto& c : q.constraints) {
    collect_vars(c.lhs, out);
    collect_vars(c.rhs, out);
  }
  return out;
}

TupleSet tuples_of(const std::vector<PrTuple>& rows) {
  TupleSet out;
  for (const auto& row : rows) out.insert(row.tuple);
  return out;
}

UncertainDB possible_worlds(const PrRelation& r, std::size_t cap) {
  require(validate_pr(r));
  VarSet names = event_vars(r);
  check_expansion(names.size(), cap);
  auto rows = compile_rows(r.rows, index_variables(names));
  std::set<World> worlds;
  const std::uint64_t total = std::uint64_t{1} << names.size();
  std::set<RowMask> seen;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    RowMask m = world_mask(rows, bits);
    if (seen.insert(m).second) worlds.insert(world_of(r.rows, m));
  }
  UncertainDB out;
  out.tuple_set = tuples_of(r.rows);
  out.worlds.assign(worlds.begin(), worlds.end());
  return out;
}

Expansion expand_pr(const PrRelation& r, std::size_t cap) {
  require(validate_pr(r));
  VarSet names = event_vars(r);
  check_expansion(names.size(), cap);
  require_probs(r.var_probs, names);
  auto rows = compile_rows(r.rows, index_variables(names));

  // Put every variable over a common denominator so that each assignment's
  // weight is an integer numerator over the single denominator `scale`.
  std::vector<Integer> yes, no;
  Integer scale = 1;
  for (const auto& n : names) {
    const Rational& p = r.var_probs.at(n);
    Integer num = boost::multiprecision::numerator(p);
    Integer den = boost::multiprecision::denominator(p);
    yes.push_back(num);
    no.push_back(den - num);
    scale *= den;
  }

  std::map<RowMask, Integer> mass;
  const std::size_t k = names.size();
  // Depth-first over variables, carrying the partial product.
  auto walk = [&](auto& self, std::size_t depth, std::uint64_t bits, const Integer& w) -> void {
    if (depth == k) {
      mass[world_mask(rows, bits)] += w;
      return;
    }
    self(self, depth + 1, bits, w * no[depth]);
    self(self, depth + 1, bits | (std::uint64_t{1} << depth), w * yes[depth]);
  };
  walk(walk, 0, 0, Integer(1));

  Expansion out;
  for (const auto& [m, num] : mass) {
    if (num == 0) continue;
    out.dist.probs.emplace(world_of(r.rows, m), Rational(num, scale));
  }
  out.db.tuple_set = tuples_of(r.rows);
  out.db.probs.emplace();
  for (const auto& [w, p] : out.dist.probs) {
    out.db.worlds.push_back(w);
    out.db.probs->push_back(p);
  }
  return out;
}

std::vector<ValidWorld> expand_epr(const EprRelation& q, std::size_t cap) {
  require(validate_epr(q));
  VarSet names = event_vars(q);
  check_expansion(names.size(), cap);
  auto index = index_variables(names);
  auto rows = compile_rows(q.rows, index);
  std::vector<std::pair<Evaluator, Evaluator>> constraints;
  for (const auto& c : q.constraints) {
    constraints.emplace_back(Evaluator(c.lhs, index), Evaluator(c.rhs, index));
  }
  std::map<RowMask, std::uint64_t> witness;
  const std::uint64_t total = std::uint64_t{1} << names.size();
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    bool valid = std::all_of(constraints.begin(), constraints.end(),
                             [bits](const auto& c) { return c.first(bits) == c.second(bits); });
    if (valid) witness.try_emplace(world_mask(rows, bits), bits);
  }
  if (witness.empty()) throw NoValidAssignment();
  std::map<World, Assignment> ordered;
  for (const auto& [m, bits] : witness) ordered.emplace(world_of(q.rows, m), assignment_of(names, bits));
  std::vector<ValidWorld> out;
  out.reserve(ordered.size());
  for (auto& [w, mu] : ordered) out.push_back({w, std::move(mu)});
  return out;
}

namespace {

PrRelation renamed(const PrRelation& r, std::string_view prefix) {
  PrRelation out;
  out.rows.reserve(r.rows.size());
  for (const auto& row : r.rows) out.rows.push_back({row.tuple, rename_vars(row.event, prefix)});
  for (const auto& [name, p] : r.var_probs) out.var_probs.emplace(qualified_name(prefix, name), p);
  return out;
}

template <class Visit>
void visit_vars(const Formula& f, Visit& visit) {
  switch (f.kind()) {
    case Formula::Kind::Variable: visit(f.name()); return;
    case Formula::Kind::True:
    case Formula::Kind::False: return;
    case Formula::Kind::Not: visit_vars(f.left(), visit); return;
    default:
      visit_vars(f.left(), visit);
      visit_vars(f.right(), visit);
  }
}

template <class Visit>
void visit_names(const PrRelation& r, Visit&& visit) {
  for (const auto& row : r.rows) visit_vars(row.event, visit);
  for (const auto& [name, p] : r.var_probs) visit(name);
}

bool has_vars(const PrRelation& r) {
  bool any = false;
  auto hit = [&any](const std::string&) { any = true; };
  for (const auto& row : r.rows) {
    visit_vars(row.event, hit);
    if (any) return true;
  }
  return false;
}

bool share_names(const PrRelation& r, const PrRelation& s) {
  std::unordered_set<std::string_view> a;
  a.reserve(r.rows.size() + r.var_probs.size());
  visit_names(r, [&a](const std::string& n) { a.insert(n); });
  bool overlap = false;
  visit_names(s, [&](const std::string& n) { overlap = overlap || a.contains(n); });
  return overlap;
}

// Rows in tuple order as (canonical key, row index). Sorting the keys in one
// contiguous array keeps large inputs cache friendly; equal keys fall back to
// the full tuple order. Rejects what validate_pr rejects.
using KeyedOrder = std::vector<std::pair<std::string, std::size_t>>;

bool key_less(const PrRelation& x, const KeyedOrder::value_type& a, const PrRelation& y,
              const KeyedOrder::value_type& b) {
  if (int c = a.first.compare(b.first); c != 0) return c < 0;
  return x.rows[a.second].tuple < y.rows[b.second].tuple;
}

KeyedOrder checked_order(const PrRelation& r) {
  std::vector<std::string> v;
  validate_probs(r.var_probs, [&r] { return event_vars(r); }, v);
  KeyedOrder order;
  order.reserve(r.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) order.emplace_back(canonical_key(r.rows[i].tuple), i);
  std::sort(order.begin(), order.end(),
            [&r](const auto& a, const auto& b) { return key_less(r, a, r, b); });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Tuple& t = r.rows[order[i].second].tuple;
    if (t.values.empty()) v.insert(v.begin(), "empty tuple");
    if (i > 0 && order[i].first == order[i - 1].first && t == r.rows[order[i - 1].second].tuple) {
      v.insert(v.begin(), "duplicate tuple " + to_string(t));
    }
  }
  if (!v.empty()) throw ValidationError(v.front());
  return order;
}

}  // namespace

std::pair<PrRelation, PrRelation> make_disjoint(const PrRelation& r, const PrRelation& s) {
  if (!share_names(r, s)) return {r, s};
  return {renamed(r, "s1"), renamed(s, "s2")};
}

EprRelation integrate_pr(const PrRelation& r_in, const PrRelation& s_in) {
  const auto ro = checked_order(r_in);
  const auto so = checked_order(s_in);
  std::optional<std::pair<PrRelation, PrRelation>> copies;
  if (share_names(r_in, s_in)) copies.emplace(renamed(r_in, "s1"), renamed(s_in, "s2"));
  const PrRelation& r = copies ? copies->first : r_in;
  const PrRelation& s = copies ? copies->second : s_in;

  EprRelation q;
  q.rows.reserve(r.rows.size() + s.rows.size());
  std::size_t i = 0, j = 0;
  while (i < ro.size() || j < so.size()) {
    if (j == so.size() || (i < ro.size() && key_less(r, ro[i], s, so[j]))) {
      q.rows.push_back(r.rows[ro[i++].second]);
    } else if (i == ro.size() || key_less(s, so[j], r, ro[i])) {
      q.rows.push_back(s.rows[so[j++].second]);
    } else {
      const PrTuple& from_r = r.rows[ro[i++].second];
      const PrTuple& from_s = s.rows[so[j++].second];
      q.rows.push_back(from_s);
      q.constraints.push_back({from_r.event, from_s.event});
    }
  }
  // Probabilities are all-or-nothing; a source without them leaves q without.
  auto priced = [](const PrRelation& x) { return !x.var_probs.empty() || !has_vars(x); };
  if (priced(r) && priced(s)) {
    q.var_probs = r.var_probs;
    q.var_probs.insert(s.var_probs.begin(), s.var_probs.end());
  }
  return q;
}

namespace {

std::vector<Formula> row_literals(const std::vector<PrTuple>& rows, const World& w) {
  std::vector<Formula> parts;
  std::size_t inside = 0;
  for (const auto& row : rows) {
    if (w.contains(row.tuple)) {
      parts.push_back(row.event);
      ++inside;
    } else {
      parts.push_back(Formula::Not(row.event));
    }
  }
  if (inside != w.size()) {
    throw ValidationError("world " + to_string(w) + " is not a subset of the relation's tuples");
  }
  return parts;
}

}  // namespace

Formula evf(const PrRelation& r, const World& w) { return conjoin(row_literals(r.rows, w)); }

Formula evf(const EprRelation& q, const World& w) {
  std::vector<Formula> parts;
  for (const auto& c : q.constraints) parts.push_back(Formula::Iff(c.lhs, c.rhs));
  auto lits = row_literals(q.rows, w);
  parts.insert(parts.end(), lits.begin(), lits.end());
  return conjoin(parts);
}

PrRelation encode_pw(const UncertainDB& u, std::string_view var_prefix) {
  require_valid(u);
  if (!u.probs) throw ValidationError("encoding needs world probabilities");
  const std::size_t n = u.worlds.size();
  PrRelation r;
  std::vector<Formula> chain;  // x1 .. x(n-1)
  Rational remaining = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::string name = std::string(var_prefix) + std::to_string(i + 1);
    chain.push_back(Formula::Var(name));
    r.var_probs.emplace(name, (*u.probs)[i] / remaining);
    remaining -= (*u.probs)[i];
  }
  std::vector<Formula> selectors;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Formula> parts;
    for (std::size_t k = 0; k < i && k < chain.size(); ++k) parts.push_back(Formula::Not(chain[k]));
    if (i < chain.size()) parts.push_back(chain[i]);
    selectors.push_back(conjoin(parts));
  }
  for (const auto& t : u.tuple_set) {
    std::vector<Formula> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (u.worlds[i].contains(t)) members.push_back(selectors[i]);
    }
    r.rows.push_back({t, disjoin(members)});
  }
  return r;
}

}  // namespace probint
