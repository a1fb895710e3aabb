#include "probint/probcalc.hpp"

#include "probint/error.hpp"

namespace probint {

namespace {

void require_full_probs(const EprRelation& q) {
  for (const auto& name : event_vars(q)) {
    if (!q.var_probs.contains(name)) {
      throw ValidationError("variable " + name + " has no probability");
    }
  }
}

}  // namespace

Distribution pair_distribution(const PrPair& pair, std::size_t cap) {
  return to_distribution(integrate_pw_prob(expand_pr(pair.r, cap).db, expand_pr(pair.s, cap).db));
}

IntegratedDistribution epr_distribution(const EprRelation& q, std::size_t cap) {
  require_full_probs(q);
  auto choices = enumerate_partitions(q, 1);
  const auto& [v, w] = choices.front();

  IntegratedDistribution out;
  out.pair_used = build_pair(q, v, w);
  Expansion r = expand_pr(out.pair_used.r, cap);
  Expansion s = expand_pr(out.pair_used.s, cap);
  std::vector<ComponentCheck> checks;
  out.joint = joint_pairs(r.db, s.db, &checks);
  for (auto& c : checks) out.components.push_back(std::move(c.summary));
  for (const auto& jw : out.joint) out.distribution.probs[jw.world] += jw.prob;
  return out;
}

CrossCheckReport cross_check_report(const EprRelation& q, std::size_t cap, std::size_t limit) {
  CrossCheckReport report;
  const Distribution reference = epr_distribution(q, cap).distribution;

  std::set<World> valid;
  for (auto& vw : expand_epr(q, cap)) valid.insert(std::move(vw.world));
  std::set<World> produced;
  for (const auto& [world, p] : reference.probs) produced.insert(world);
  if (valid != produced) {
    report.matches_valid_worlds = false;
    report.mismatches.push_back("distribution worlds differ from constraint-satisfying worlds");
  }

  const auto pairs = enumerate_pairs(q, limit);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    ++report.pairs_checked;
    if (pair_distribution(pairs[k], cap) != reference) {
      report.mismatches.push_back("pair " + std::to_string(k) + " yields a different distribution");
    }
  }
  report.ok = report.mismatches.empty();
  return report;
}

bool cross_check(const EprRelation& q, std::size_t cap) { return cross_check_report(q, cap).ok; }

}  // namespace probint
