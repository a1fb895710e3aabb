#include "probint/pwdb.hpp"

#include <map>
#include <sstream>

#include "probint/error.hpp"
#include "probint/union_find.hpp"

namespace probint {

std::string canonical_key(const Tuple& t) {
  std::string key;
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    if (i > 0) key += '\x1f';
    key += t.values[i];
  }
  return key;
}

namespace {

// Walks the characters of canonical_key(t) without building it. Returns -1
// at the end.
struct KeyCursor {
  const Tuple& t;
  std::size_t value = 0;
  std::size_t offset = 0;

  int next() {
    if (value >= t.values.size()) return -1;
    const std::string& v = t.values[value];
    if (offset < v.size()) return static_cast<unsigned char>(v[offset++]);
    if (value + 1 < t.values.size()) {
      ++value;
      offset = 0;
      return 0x1f;
    }
    value = t.values.size();
    return -1;
  }
};

std::strong_ordering key_order(const Tuple& a, const Tuple& b) {
  KeyCursor ca{a}, cb{b};
  while (true) {
    int x = ca.next();
    int y = cb.next();
    if (x != y) return x < y ? std::strong_ordering::less : std::strong_ordering::greater;
    if (x < 0) break;
  }
  // Keys collide only when values contain the separator; fall back to the
  // element-wise order so the ordering stays consistent with ==.
  return a.values <=> b.values;
}

}  // namespace

// Same order as key_order, compared value by value. Only a value that is a
// prefix of its counterpart and followed by a separator byte needs the slow
// walk.
std::strong_ordering operator<=>(const Tuple& a, const Tuple& b) {
  const std::size_t na = a.values.size(), nb = b.values.size();
  auto ord = [](int x, int y) { return x < y ? std::strong_ordering::less : std::strong_ordering::greater; };
  for (std::size_t i = 0; i < na && i < nb; ++i) {
    std::string_view x = a.values[i], y = b.values[i];
    std::size_t common = std::min(x.size(), y.size());
    int c = x.substr(0, common).compare(y.substr(0, common));
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (x.size() == y.size()) continue;
    int nx = x.size() > common ? static_cast<unsigned char>(x[common]) : (i + 1 < na ? 0x1f : -1);
    int ny = y.size() > common ? static_cast<unsigned char>(y[common]) : (i + 1 < nb ? 0x1f : -1);
    if (nx != ny) return ord(nx, ny);
    return key_order(a, b);
  }
  if (na != nb) return na < nb ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string to_string(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    if (i > 0) out += ", ";
    out += t.values[i];
  }
  return out + ")";
}

std::ostream& operator<<(std::ostream& os, const Tuple& t) { return os << to_string(t); }

std::string to_string(const World& w) {
  std::string out = "{";
  bool first = true;
  for (const auto& t : w) {
    if (!first) out += ", ";
    first = false;
    out += to_string(t);
  }
  return out + "}";
}

ValidationReport validate_udb(const UncertainDB& u) {
  ValidationReport report;
  auto& v = report.violations;
  if (u.worlds.empty()) v.push_back("no possible worlds");
  for (const auto& t : u.tuple_set) {
    if (t.values.empty()) v.push_back("empty tuple in tuple set");
  }
  std::set<World> seen;
  for (std::size_t i = 0; i < u.worlds.size(); ++i) {
    for (const auto& t : u.worlds[i]) {
      if (!u.tuple_set.contains(t)) {
        v.push_back("world " + std::to_string(i) + " contains " + to_string(t) +
                    " outside the tuple set");
      }
    }
    if (!seen.insert(u.worlds[i]).second) {
      v.push_back("world " + std::to_string(i) + " duplicates an earlier world");
    }
  }
  if (u.probs) {
    if (u.probs->size() != u.worlds.size()) {
      v.push_back(std::to_string(u.probs->size()) + " probabilities for " +
                  std::to_string(u.worlds.size()) + " worlds");
    }
    Rational sum = 0;
    for (std::size_t i = 0; i < u.probs->size(); ++i) {
      const Rational& p = (*u.probs)[i];
      if (p <= 0 || p > 1) {
        v.push_back("probability of world " + std::to_string(i) + " is " +
                    to_fraction_string(p) + ", outside (0, 1]");
      }
      sum += p;
    }
    if (sum != 1) v.push_back("probabilities sum to " + to_fraction_string(sum) + " ≠ 1");
  }
  return report;
}

void require_valid(const UncertainDB& u) {
  auto report = validate_udb(u);
  if (!report.ok()) throw ValidationError(report.violations.front());
}

bool compatible(const World& di, const World& dj, const TupleSet& t1, const TupleSet& t2) {
  const TupleSet& small = t1.size() <= t2.size() ? t1 : t2;
  const TupleSet& large = t1.size() <= t2.size() ? t2 : t1;
  for (const auto& t : small) {
    if (large.contains(t) && di.contains(t) != dj.contains(t)) return false;
  }
  return true;
}

namespace {

World world_union(const World& a, const World& b) {
  World out = a;
  out.insert(b.begin(), b.end());
  return out;
}

TupleSet tuple_union(const TupleSet& a, const TupleSet& b) {
  TupleSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

}  // namespace

UncertainDB integrate_pw(const UncertainDB& s1, const UncertainDB& s2) {
  UncertainDB out;
  out.tuple_set = tuple_union(s1.tuple_set, s2.tuple_set);
  std::set<World> seen;
  for (const auto& di : s1.worlds) {
    for (const auto& dj : s2.worlds) {
      if (!compatible(di, dj, s1.tuple_set, s2.tuple_set)) continue;
      World q = world_union(di, dj);
      if (seen.insert(q).second) out.worlds.push_back(std::move(q));
    }
  }
  if (out.worlds.empty()) throw EmptyIntegration();
  return out;
}

CompatibilityGraph compatibility_graph(const UncertainDB& s1, const UncertainDB& s2) {
  CompatibilityGraph g;
  g.left_count = s1.worlds.size();
  g.right_count = s2.worlds.size();
  const std::size_t n = g.left_count;
  UnionFind uf(n + g.right_count);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < g.right_count; ++j) {
      if (compatible(s1.worlds[i], s2.worlds[j], s1.tuple_set, s2.tuple_set)) {
        g.edges.emplace_back(i, j);
        uf.unite(i, n + j);
      }
    }
  }
  std::map<std::size_t, std::size_t> root_to_component;
  auto component_of = [&](std::size_t node) {
    auto [it, fresh] = root_to_component.try_emplace(uf.find(node), g.components.size());
    if (fresh) g.components.emplace_back();
    return it->second;
  };
  g.left_component.resize(n);
  g.right_component.resize(g.right_count);
  for (std::size_t i = 0; i < n; ++i) {
    g.left_component[i] = component_of(i);
    g.components[g.left_component[i]].left.push_back(i);
  }
  for (std::size_t j = 0; j < g.right_count; ++j) {
    g.right_component[j] = component_of(n + j);
    g.components[g.right_component[j]].right.push_back(j);
  }
  for (const auto& [i, j] : g.edges) ++g.components[g.left_component[i]].edges;
  return g;
}

std::vector<ComponentCheck> check_prob_constraints(const UncertainDB& s1,
                                                   const UncertainDB& s2,
                                                   const CompatibilityGraph& graph) {
  if (!s1.probs || !s2.probs) {
    throw ValidationError("probabilistic constraints need probabilities on both sources");
  }
  std::vector<ComponentCheck> out;
  out.reserve(graph.components.size());
  for (const auto& comp : graph.components) {
    ComponentCheck c;
    c.summary.left = comp.left;
    c.summary.right = comp.right;
    for (auto i : comp.left) c.left_sum += (*s1.probs)[i];
    for (auto j : comp.right) c.right_sum += (*s2.probs)[j];
    if (comp.edges == 0) {
      std::string who = comp.left.empty() ? "second-source world " + std::to_string(comp.right.front())
                                          : "first-source world " + std::to_string(comp.left.front());
      c.violation = who + " is compatible with no world of the other source";
    } else if (c.left_sum != c.right_sum) {
      c.violation = "side sums differ: " + to_fraction_string(c.left_sum) + " vs " +
                    to_fraction_string(c.right_sum);
    } else {
      c.summary.constant = c.left_sum;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<JointWorld> joint_pairs(const UncertainDB& s1, const UncertainDB& s2,
                                    std::vector<ComponentCheck>* checks_out) {
  require_valid(s1);
  require_valid(s2);
  CompatibilityGraph graph = compatibility_graph(s1, s2);
  if (graph.edges.empty()) throw EmptyIntegration();
  std::vector<ComponentCheck> checks = check_prob_constraints(s1, s2, graph);
  for (std::size_t c = 0; c < checks.size(); ++c) {
    if (checks[c].violation) throw ProbConstraintViolation(c, *checks[c].violation);
  }
  std::vector<JointWorld> out;
  out.reserve(graph.edges.size());
  for (const auto& [i, j] : graph.edges) {
    std::size_t c = graph.left_component[i];
    Rational p = (*s1.probs)[i] * (*s2.probs)[j] / checks[c].summary.constant;
    out.push_back({i, j, c, world_union(s1.worlds[i], s2.worlds[j]), std::move(p)});
  }
  if (checks_out) *checks_out = std::move(checks);
  return out;
}

UncertainDB integrate_pw_prob(const UncertainDB& s1, const UncertainDB& s2) {
  std::vector<JointWorld> joint = joint_pairs(s1, s2);
  UncertainDB out;
  out.tuple_set = tuple_union(s1.tuple_set, s2.tuple_set);
  out.probs.emplace();
  std::map<World, std::size_t> slot;
  for (auto& jw : joint) {
    auto [it, fresh] = slot.try_emplace(jw.world, out.worlds.size());
    if (fresh) {
      out.worlds.push_back(std::move(jw.world));
      out.probs->push_back(std::move(jw.prob));
    } else {
      (*out.probs)[it->second] += jw.prob;
    }
  }
  return out;
}

}  // namespace probint

