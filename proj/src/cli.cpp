#include "probint/cli.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "probint/document.hpp"
#include "probint/error.hpp"
#include "probint/generator.hpp"
#include "probint/probcalc.hpp"

namespace probint {

namespace {

enum class Format { Json, Table };

struct Globals {
  std::size_t cap = kDefaultExpansionCap;
  std::string format;  // empty: command default

  Format resolve(Format fallback) const {
    if (format == "json") return Format::Json;
    if (format == "table") return Format::Table;
    return fallback;
  }
};

std::string prob_cell(const Rational& p) { return to_fraction_string(p) + "  " + to_decimal_string(p); }

Json prob_json(const Rational& p) {
  return Json{{"fraction", to_fraction_string(p)}, {"decimal", to_decimal_string(p)}};
}

Json world_json(const World& w) {
  Json arr = Json::array();
  for (const auto& t : w) arr.push_back(t.values);
  return arr;
}

Json indices_json(const std::vector<std::size_t>& v) {
  Json arr = Json::array();
  for (auto i : v) arr.push_back(i);
  return arr;
}

std::string render_indices(const std::vector<std::size_t>& v, char side) {
  std::string out;
  for (auto i : v) {
    if (!out.empty()) out += ",";
    out += side + std::to_string(i + 1);
  }
  return out.empty() ? "-" : out;
}

void print_distribution(std::ostream& out, const Distribution& d) {
  std::size_t n = 0;
  for (const auto& [w, p] : d.probs) {
    out << std::setw(3) << ++n << "  " << std::left << std::setw(24) << prob_cell(p)
        << std::right << "  " << to_string(w) << "\n";
  }
  out << "total  " << prob_cell(d.total()) << "\n";
}

void print_worlds(std::ostream& out, const std::vector<World>& worlds) {
  std::size_t n = 0;
  for (const auto& w : worlds) out << std::setw(3) << ++n << "  " << to_string(w) << "\n";
}

Json distribution_json(const Distribution& d) {
  Json arr = Json::array();
  for (const auto& [w, p] : d.probs) {
    Json e = prob_json(p);
    e["world"] = world_json(w);
    arr.push_back(std::move(e));
  }
  return arr;
}

Json worlds_json(const std::vector<World>& worlds) {
  Json arr = Json::array();
  for (const auto& w : worlds) arr.push_back(world_json(w));
  return arr;
}

void print_components(std::ostream& out, const std::vector<ComponentCheck>& checks,
                      const CompatibilityGraph& g) {
  out << "component  first      second     edges  bipartite  left-sum  right-sum  verdict\n";
  for (std::size_t c = 0; c < checks.size(); ++c) {
    const auto& k = checks[c];
    const auto& comp = g.components[c];
    out << std::left << std::setw(11) << c << std::setw(11) << render_indices(comp.left, 'D')
        << std::setw(11) << render_indices(comp.right, 'E') << std::setw(7) << comp.edges
        << std::setw(11) << (comp.complete_bipartite() ? "yes" : "NO") << std::setw(10)
        << to_fraction_string(k.left_sum) << std::setw(11) << to_fraction_string(k.right_sum)
        << std::right << (k.violation ? "FAIL: " + *k.violation : "balanced at " + to_fraction_string(k.left_sum))
        << "\n";
  }
}

UncertainDB as_udb(const Document& doc, std::size_t cap, bool with_probs) {
  if (auto* u = std::get_if<UncertainDB>(&doc)) return *u;
  if (auto* r = std::get_if<PrRelation>(&doc)) {
    if (with_probs && !r->var_probs.empty()) return expand_pr(*r, cap).db;
    return possible_worlds(*r, cap);
  }
  throw ValidationError("expected a pw or pr source, got an epr document");
}

const EprRelation& as_epr(const Document& doc) {
  if (auto* q = std::get_if<EprRelation>(&doc)) return *q;
  throw ValidationError("expected an epr document, got " + model_name(doc));
}

// Component report for a pair whose probabilistic constraints fail.
void report_pair_components(std::ostream& err, const PrPair& pair, std::size_t cap) {
  UncertainDB a = expand_pr(pair.r, cap).db;
  UncertainDB b = expand_pr(pair.s, cap).db;
  CompatibilityGraph g = compatibility_graph(a, b);
  print_components(err, check_prob_constraints(a, b, g), g);
}

int cmd_expand(const Globals& g, const std::string& path, bool worlds_only, std::ostream& out) {
  Document doc = load_document(path);
  Format fmt = g.resolve(Format::Table);
  std::optional<Distribution> dist;
  std::vector<World> worlds;
  if (auto* u = std::get_if<UncertainDB>(&doc)) {
    if (u->probs) dist = to_distribution(*u);
    worlds = u->worlds;
  } else if (auto* r = std::get_if<PrRelation>(&doc)) {
    if (!r->var_probs.empty() && !worlds_only) {
      dist = expand_pr(*r, g.cap).dist;
    } else {
      worlds = possible_worlds(*r, g.cap).worlds;
    }
  } else {
    for (auto& vw : expand_epr(std::get<EprRelation>(doc), g.cap)) worlds.push_back(std::move(vw.world));
  }
  if (worlds_only && dist) {
    for (const auto& [w, p] : dist->probs) worlds.push_back(w);
    dist.reset();
  }
  if (fmt == Format::Json) {
    Json j{{"model", model_name(doc)}};
    if (dist) j["distribution"] = distribution_json(*dist);
    else j["worlds"] = worlds_json(worlds);
    out << dump(j);
  } else if (dist) {
    print_distribution(out, *dist);
  } else {
    print_worlds(out, worlds);
  }
  return kExitOk;
}

int cmd_integrate(const Globals& g, const std::string& a_path, const std::string& b_path,
                  std::string model, bool with_probs, std::ostream& out) {
  Document a = load_document(a_path);
  Document b = load_document(b_path);
  if (model.empty()) {
    model = model_name(a) == "pw" || model_name(b) == "pw" ? "pw" : "pr";
  }
  Format fmt = g.resolve(Format::Json);
  if (model == "pr") {
    auto* r = std::get_if<PrRelation>(&a);
    auto* s = std::get_if<PrRelation>(&b);
    if (!r || !s) throw ValidationError("--model pr needs two pr documents");
    EprRelation q = integrate_pr(*r, *s);
    if (fmt == Format::Json) {
      out << dump(to_json(q));
    } else {
      for (const auto& c : q.constraints) out << "constraint  " << to_string(c.lhs) << " <-> " << to_string(c.rhs) << "\n";
      for (const auto& row : q.rows) out << to_string(row.tuple) << " @ " << to_string(row.event) << "\n";
    }
    return kExitOk;
  }
  UncertainDB s1 = as_udb(a, g.cap, with_probs);
  UncertainDB s2 = as_udb(b, g.cap, with_probs);
  UncertainDB u = with_probs ? integrate_pw_prob(s1, s2) : integrate_pw(s1, s2);
  if (fmt == Format::Json) {
    out << dump(to_json(u));
  } else if (u.probs) {
    print_distribution(out, to_distribution(u));
  } else {
    print_worlds(out, u.worlds);
  }
  return kExitOk;
}

int cmd_prob(const Globals& g, const std::string& path, std::ostream& out, std::ostream& err) {
  const Document doc = load_document(path);
  const EprRelation& q = as_epr(doc);
  Format fmt = g.resolve(Format::Table);
  IntegratedDistribution result;
  try {
    result = epr_distribution(q, g.cap);
  } catch (const ProbConstraintViolation&) {
    auto parts = enumerate_partitions(q, 1);
    report_pair_components(err, build_pair(q, parts.front().first, parts.front().second), g.cap);
    throw;
  }
  if (fmt == Format::Json) {
    Json comps = Json::array();
    for (const auto& c : result.components) {
      comps.push_back({{"first", indices_json(c.left)},
                       {"second", indices_json(c.right)},
                       {"constant", to_fraction_string(c.constant)}});
    }
    Json j{{"distribution", distribution_json(result.distribution)},
           {"components", std::move(comps)},
           {"pair", {{"r", to_json(result.pair_used.r)}, {"s", to_json(result.pair_used.s)}}}};
    out << dump(j);
    return kExitOk;
  }
  print_distribution(out, result.distribution);
  out << "\ncomponents\n";
  for (std::size_t c = 0; c < result.components.size(); ++c) {
    const auto& comp = result.components[c];
    out << "  " << c << "  first " << render_indices(comp.left, 'D') << "  second "
        << render_indices(comp.right, 'E') << "  P = " << prob_cell(comp.constant) << "\n";
  }
  out << "\npair used\n";
  for (const auto* rel : {&result.pair_used.r, &result.pair_used.s}) {
    out << (rel == &result.pair_used.r ? "  r:" : "  s:") << "\n";
    for (const auto& row : rel->rows) out << "    " << to_string(row.tuple) << " @ " << to_string(row.event) << "\n";
  }
  return kExitOk;
}

int cmd_check(const Globals& g, const std::vector<std::string>& paths, std::ostream& out) {
  if (paths.size() == 1) {
    const Document doc = load_document(paths.front());
    const EprRelation& q = as_epr(doc);
    CrossCheckReport rep;
    try {
      rep = cross_check_report(q, g.cap);
    } catch (const ProbConstraintViolation& e) {
      out << "cross-check: FAIL (" << e.what() << ")\n";
      return kExitCheckFailed;
    }
    out << "pairs checked: " << rep.pairs_checked << "\n";
    out << "worlds match valid assignments: " << (rep.matches_valid_worlds ? "yes" : "NO") << "\n";
    for (const auto& m : rep.mismatches) out << "mismatch: " << m << "\n";
    out << "cross-check: " << (rep.ok ? "PASS" : "FAIL") << "\n";
    return rep.ok ? kExitOk : kExitCheckFailed;
  }
  if (paths.size() != 2) throw ValidationError("check takes one epr file or two source files");
  const Document a = load_document(paths[0]);
  const Document b = load_document(paths[1]);
  UncertainDB s1 = as_udb(a, g.cap, true);
  UncertainDB s2 = as_udb(b, g.cap, true);
  CompatibilityGraph graph = compatibility_graph(s1, s2);
  bool ok = !graph.edges.empty();
  if (!ok) out << "no compatible pair of worlds\n";
  for (const auto& c : graph.components) ok = ok && c.complete_bipartite();
  if (s1.probs && s2.probs) {
    auto checks = check_prob_constraints(s1, s2, graph);
    print_components(out, checks, graph);
    for (const auto& c : checks) ok = ok && !c.violation;
  } else {
    out << "component  first      second     edges  bipartite\n";
    for (std::size_t c = 0; c < graph.components.size(); ++c) {
      const auto& comp = graph.components[c];
      out << std::left << std::setw(11) << c << std::setw(11) << render_indices(comp.left, 'D')
          << std::setw(11) << render_indices(comp.right, 'E') << std::setw(7) << comp.edges
          << (comp.complete_bipartite() ? "yes" : "NO") << std::right << "\n";
    }
    out << "(no probabilities; balance not checked)\n";
  }
  out << "verdict: " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

Json names_json(const VarSet& s) {
  Json arr = Json::array();
  for (const auto& n : s) arr.push_back(n);
  return arr;
}

int cmd_decompose(const Globals& g, const std::string& path, bool all, std::size_t limit,
                  std::ostream& out) {
  const Document doc = load_document(path);
  const EprRelation& q = as_epr(doc);
  auto parts = enumerate_partitions(q, all ? limit : 1);
  Format fmt = g.resolve(Format::Json);
  Json pairs = Json::array();
  std::size_t n = 0;
  for (const auto& [v, w] : parts) {
    PrPair pair = build_pair(q, v, w);
    if (fmt == Format::Json) {
      pairs.push_back({{"v", names_json(v)}, {"w", names_json(w)}, {"r", to_json(pair.r)}, {"s", to_json(pair.s)}});
      continue;
    }
    out << "pair " << ++n << "\n";
    for (const auto* rel : {&pair.r, &pair.s}) {
      out << (rel == &pair.r ? "  r:" : "  s:") << "\n";
      for (const auto& row : rel->rows) out << "    " << to_string(row.tuple) << " @ " << to_string(row.event) << "\n";
    }
  }
  if (fmt == Format::Json) out << dump(Json{{"pairs", std::move(pairs)}});
  return kExitOk;
}

int cmd_gen(const Globals& g, std::uint64_t seed, const GenParams& params, const std::string& out_dir,
            std::ostream& out) {
  GeneratedPair pair = generate_pair(seed, params);
  if (!out_dir.empty()) {
    for (const auto& [name, rel] : {std::pair{"r.json", &pair.r}, std::pair{"s.json", &pair.s}}) {
      std::string file = out_dir + "/" + name;
      std::ofstream f(file);
      if (!f) throw ValidationError("cannot write " + file);
      f << dump(to_json(*rel));
    }
    return kExitOk;
  }
  if (g.resolve(Format::Json) == Format::Table) {
    for (const auto* rel : {&pair.r, &pair.s}) {
      out << (rel == &pair.r ? "r:" : "s:") << "\n";
      for (const auto& row : rel->rows) out << "  " << to_string(row.tuple) << " @ " << to_string(row.event) << "\n";
      for (const auto& [v, p] : rel->var_probs) out << "  P(" << v << ") = " << to_fraction_string(p) << "\n";
    }
    return kExitOk;
  }
  out << dump(Json{{"r", to_json(pair.r)}, {"s", to_json(pair.s)}});
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integration of probabilistic uncertain databases", "probint"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--cap", g.cap, "Largest number of variables enumerated")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "table"}));

  std::string input, second, model;
  std::vector<std::string> paths;
  bool worlds_only = false, with_probs = false, all = false;
  std::size_t limit = 1024;
  std::uint64_t seed = 0;
  GenParams params;
  std::string out_dir;

  auto* expand = app.add_subcommand("expand", "List the possible worlds of a document");
  expand->add_option("input", input)->required();
  expand->add_flag("--worlds-only", worlds_only, "Omit probabilities");

  auto* integrate = app.add_subcommand("integrate", "Integrate two sources");
  integrate->add_option("a", input)->required();
  integrate->add_option("b", second)->required();
  integrate->add_option("--model", model)->check(CLI::IsMember({"pw", "pr"}));
  integrate->add_flag("--with-probs", with_probs, "pw: carry probabilities under partial independence");

  auto* prob = app.add_subcommand("prob", "Distribution of an integrated epr-relation");
  prob->add_option("q", input)->required();

  auto* check = app.add_subcommand("check", "Check probabilistic constraints or cross-check an epr");
  check->add_option("inputs", paths)->required()->expected(1, 2);

  auto* decompose = app.add_subcommand("decompose", "Split an epr-relation into pr-relation pairs");
  decompose->add_option("q", input)->required();
  decompose->add_flag("--all", all, "Every pair, not just the first");
  decompose->add_option("--limit", limit, "Most pairs listed with --all")->capture_default_str();

  auto* gen = app.add_subcommand("gen", "Random pair of pr-relations");
  gen->add_option("seed", seed)->required();
  gen->add_option("--tuples", params.max_tuples)->capture_default_str();
  gen->add_option("--vars", params.max_vars)->capture_default_str();
  gen->add_option("--depth", params.max_depth)->capture_default_str();
  gen->add_option("--overlap", params.overlap, "Chance of reusing a tuple of r in s")->capture_default_str();
  gen->add_flag("--balanced", params.balanced, "Make probabilistic constraints hold");
  gen->add_option("-o,--out-dir", out_dir, "Write r.json and s.json here");

  // CLI11 wants argv-style input.
  std::vector<const char*> argv{"probint"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*expand) return cmd_expand(g, input, worlds_only, out);
    if (*integrate) return cmd_integrate(g, input, second, model, with_probs, out);
    if (*prob) return cmd_prob(g, input, out, err);
    if (*check) return cmd_check(g, paths, out);
    if (*decompose) return cmd_decompose(g, input, all, limit, out);
    if (*gen) return cmd_gen(g, seed, params, out_dir, out);
  } catch (const ExpansionTooLarge& e) {
    err << "error: " << e.what() << "\n";
    return kExitTooLarge;
  } catch (const EmptyIntegration& e) {
    err << "error: " << e.what() << "\n";
    return kExitEmpty;
  } catch (const NoValidAssignment& e) {
    err << "error: " << e.what() << "\n";
    return kExitEmpty;
  } catch (const ProbConstraintViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnbalanced;
  } catch (const NotIntegrated& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotIntegrated;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace probint
