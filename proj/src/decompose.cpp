#include "probint/decompose.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "probint/error.hpp"
#include "probint/union_find.hpp"

namespace probint {

namespace {

// Row matched by each constraint, or nullopt when some constraint matches
// zero or several rows, or two constraints share a row.
std::optional<std::vector<std::size_t>> match_constraints(const EprRelation& q,
                                                          std::size_t* work) {
  std::unordered_map<Formula, std::vector<std::size_t>, FormulaHash> by_formula;
  for (std::size_t i = 0; i < q.rows.size(); ++i) by_formula[q.rows[i].event].push_back(i);
  std::vector<std::size_t> matched;
  std::vector<bool> taken(q.rows.size(), false);
  for (const auto& c : q.constraints) {
    if (work) ++*work;
    std::vector<std::size_t> hits;
    if (auto it = by_formula.find(c.lhs); it != by_formula.end()) hits = it->second;
    if (!(c.lhs == c.rhs)) {
      if (auto it = by_formula.find(c.rhs); it != by_formula.end()) {
        hits.insert(hits.end(), it->second.begin(), it->second.end());
      }
    }
    if (hits.size() != 1 || taken[hits.front()]) return std::nullopt;
    taken[hits.front()] = true;
    matched.push_back(hits.front());
  }
  return matched;
}

// Lookups rather than std::includes: `a` is a formula's few variables, `b`
// can hold every variable of the relation.
bool subset_of(const VarSet& a, const VarSet& b) {
  return std::all_of(a.begin(), a.end(), [&b](const std::string& n) { return b.contains(n); });
}

std::string render(const VarSet& s) {
  std::string out = "{";
  for (const auto& n : s) {
    if (out.size() > 1) out += ",";
    out += n;
  }
  return out + "}";
}

}  // namespace

PartitionResult partition(const EprRelation& q) {
  PartitionResult result;
  const VarSet names = event_vars(q);
  std::unordered_map<std::string, std::size_t> index;
  std::vector<const std::string*> by_index;
  for (const auto& n : names) {
    index.emplace(n, by_index.size());
    by_index.push_back(&n);
  }
  UnionFind uf(names.size());

  // Step 1: variables that must travel together.
  auto join_all = [&](const Formula& f) {
    VarSet vs = vars(f);
    if (vs.empty()) return;
    std::size_t first = index.at(*vs.begin());
    for (const auto& n : vs) uf.unite(first, index.at(n));
  };
  for (const auto& row : q.rows) {
    ++result.work;
    join_all(row.event);
  }
  for (const auto& c : q.constraints) {
    ++result.work;
    join_all(c.lhs);
    join_all(c.rhs);
  }

  // Groups numbered by their smallest variable; `names` is sorted.
  std::vector<std::size_t> group_of_root(names.size(), SIZE_MAX);
  std::vector<VarSet> groups;
  std::vector<std::size_t> group_of_var(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::size_t root = uf.find(i);
    if (group_of_root[root] == SIZE_MAX) {
      group_of_root[root] = groups.size();
      groups.emplace_back();
    }
    group_of_var[i] = group_of_root[root];
    groups[group_of_var[i]].insert(*by_index[i]);
  }

  // Step 2: link groups across constraints, then 2-color.
  std::vector<std::vector<std::size_t>> adjacent(groups.size());
  auto group_of = [&](const Formula& f) -> std::optional<std::size_t> {
    VarSet vs = vars(f);
    if (vs.empty()) return std::nullopt;
    return group_of_var[index.at(*vs.begin())];
  };
  for (const auto& c : q.constraints) {
    auto gl = group_of(c.lhs);
    auto gr = group_of(c.rhs);
    if (!gl || !gr) continue;
    ++result.work;
    if (*gl == *gr && !result.failure) {
      result.failure = "variable group " + render(groups[*gl]) +
                       " appears on both sides of constraint " + to_string(c.lhs) +
                       " <-> " + to_string(c.rhs) + " and would be labeled both V and W";
    }
    adjacent[*gl].push_back(*gr);
    adjacent[*gr].push_back(*gl);
  }

  enum class Label { None, V, W };
  std::vector<Label> label(groups.size(), Label::None);
  for (std::size_t seed = 0; seed < groups.size(); ++seed) {
    if (label[seed] != Label::None || adjacent[seed].empty()) continue;
    label[seed] = Label::V;
    std::deque<std::size_t> queue{seed};
    while (!queue.empty()) {
      std::size_t g = queue.front();
      queue.pop_front();
      Label other = label[g] == Label::V ? Label::W : Label::V;
      for (std::size_t h : adjacent[g]) {
        ++result.work;
        if (label[h] == Label::None) {
          label[h] = other;
          queue.push_back(h);
        } else if (label[h] != other && !result.failure) {
          result.failure = "variable group " + render(groups[h]) + " would be labeled both V and W";
        }
      }
    }
  }

  for (std::size_t g = 0; g < groups.size(); ++g) {
    switch (label[g]) {
      case Label::V: result.v1.insert(groups[g].begin(), groups[g].end()); break;
      case Label::W: result.w1.insert(groups[g].begin(), groups[g].end()); break;
      case Label::None: result.free_groups.push_back(groups[g]); break;
    }
  }
  result.condition3_ok = match_constraints(q, &result.work).has_value();
  result.work += uf.finds();
  return result;
}

bool check_integrated(const EprRelation& q, const VarSet& v, const VarSet& w) {
  for (const auto& n : v) {
    if (w.contains(n)) return false;
  }
  for (const auto& n : event_vars(q)) {
    if (!v.contains(n) && !w.contains(n)) return false;
  }
  for (const auto& row : q.rows) {
    VarSet vs = vars(row.event);
    if (!subset_of(vs, v) && !subset_of(vs, w)) return false;
  }
  for (const auto& c : q.constraints) {
    VarSet l = vars(c.lhs);
    VarSet r = vars(c.rhs);
    bool straddles = (subset_of(l, v) && subset_of(r, w)) || (subset_of(l, w) && subset_of(r, v));
    if (!straddles) return false;
  }
  return match_constraints(q, nullptr).has_value();
}

PrPair build_pair(const EprRelation& q, const VarSet& v, const VarSet& w, std::size_t* work) {
  if (!check_integrated(q, v, w)) {
    throw NotIntegrated("partition " + render(v) + " / " + render(w) +
                        " does not satisfy the integration conditions");
  }
  std::size_t steps = 0;
  const auto matched = *match_constraints(q, &steps);

  enum class Side { R, S };
  auto side_of_vars = [&](const VarSet& vs) -> std::optional<Side> {
    if (vs.empty()) return std::nullopt;
    return subset_of(vs, v) ? Side::R : Side::S;
  };
  auto opposite = [](Side s) { return s == Side::R ? Side::S : Side::R; };

  // Partner formula of each matched row.
  std::vector<std::optional<Formula>> partner(q.rows.size());
  for (std::size_t k = 0; k < q.constraints.size(); ++k) {
    ++steps;
    const auto& c = q.constraints[k];
    const std::size_t row = matched[k];
    partner[row] = q.rows[row].event == c.lhs ? c.rhs : c.lhs;
  }

  PrPair pair;
  for (std::size_t i = 0; i < q.rows.size(); ++i) {
    ++steps;
    const PrTuple& row = q.rows[i];
    Side side = Side::R;
    if (auto own = side_of_vars(vars(row.event))) {
      side = *own;
    } else if (partner[i]) {
      if (auto theirs = side_of_vars(vars(*partner[i]))) side = opposite(*theirs);
    }
    (side == Side::R ? pair.r : pair.s).rows.push_back(row);
    if (partner[i]) {
      (side == Side::R ? pair.s : pair.r).rows.push_back({row.tuple, *partner[i]});
    }
  }

  auto by_tuple = [](const PrTuple& a, const PrTuple& b) { return a.tuple < b.tuple; };
  std::sort(pair.r.rows.begin(), pair.r.rows.end(), by_tuple);
  std::sort(pair.s.rows.begin(), pair.s.rows.end(), by_tuple);
  for (const auto& [name, p] : q.var_probs) {
    if (v.contains(name)) pair.r.var_probs.emplace(name, p);
    else if (w.contains(name)) pair.s.var_probs.emplace(name, p);
  }
  if (work) *work += steps;
  return pair;
}

std::vector<std::pair<VarSet, VarSet>> enumerate_partitions(const EprRelation& q,
                                                            std::size_t limit) {
  PartitionResult p = partition(q);
  if (p.failure) throw NotIntegrated(*p.failure);
  if (!p.condition3_ok) {
    throw NotIntegrated("constraints do not match rows one-to-one");
  }
  const std::size_t free = p.free_groups.size();
  std::size_t count = limit;
  if (free < 64) count = std::min<std::size_t>(limit, std::size_t{1} << free);
  std::vector<std::pair<VarSet, VarSet>> out;
  out.reserve(std::min<std::size_t>(count, 1024));
  for (std::size_t counter = 0; counter < count; ++counter) {
    VarSet v = p.v1;
    VarSet w = p.w1;
    for (std::size_t k = 0; k < free; ++k) {
      bool to_v = k < 64 && ((counter >> k) & 1U);
      (to_v ? v : w).insert(p.free_groups[k].begin(), p.free_groups[k].end());
    }
    out.emplace_back(std::move(v), std::move(w));
  }
  return out;
}

std::vector<PrPair> enumerate_pairs(const EprRelation& q, std::size_t limit) {
  std::vector<PrPair> out;
  for (const auto& [v, w] : enumerate_partitions(q, limit)) out.push_back(build_pair(q, v, w));
  return out;
}

}  // namespace probint
