#include "probint/document.hpp"

#include <fstream>
#include <sstream>

#include "probint/error.hpp"

namespace probint {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ValidationError("document: " + what); }

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing key '") + key + "'");
  return *it;
}

Tuple parse_tuple(const Json& j) {
  if (!j.is_array() || j.empty()) bad("a tuple must be a non-empty array of strings");
  Tuple t;
  for (const auto& v : j) {
    if (!v.is_string()) bad("tuple values must be strings");
    t.values.push_back(v.get<std::string>());
  }
  return t;
}

Rational parse_prob(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  bad("probabilities must be strings such as \"0.35\" or \"9/13\"");
}

Formula parse_event(const Json& j) {
  if (!j.is_string()) bad("event formulas must be strings");
  return parse_formula(j.get<std::string>());
}

std::vector<PrTuple> parse_rows(const Json& j) {
  if (!j.is_array()) bad("'rows' must be an array");
  std::vector<PrTuple> rows;
  for (const auto& row : j) {
    if (!row.is_object()) bad("each row must be an object");
    rows.push_back({parse_tuple(field(row, "tuple")), parse_event(field(row, "event"))});
  }
  return rows;
}

VarProbs parse_var_probs(const Json& j) {
  VarProbs out;
  auto it = j.find("var_probs");
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_object()) bad("'var_probs' must be an object");
  for (const auto& [name, p] : it->items()) out.emplace(name, parse_prob(p));
  return out;
}

void check(const ValidationReport& report) {
  if (report.ok()) return;
  std::string msg;
  for (const auto& v : report.violations) msg += (msg.empty() ? "" : "; ") + v;
  throw ValidationError(msg);
}

UncertainDB parse_pw(const Json& j) {
  UncertainDB u;
  const Json& tuples = field(j, "tuples");
  if (!tuples.is_array()) bad("'tuples' must be an array");
  std::vector<Tuple> listed;
  for (const auto& t : tuples) {
    listed.push_back(parse_tuple(t));
    if (!u.tuple_set.insert(listed.back()).second) bad("duplicate tuple " + to_string(listed.back()));
  }
  const Json& worlds = field(j, "worlds");
  if (!worlds.is_array()) bad("'worlds' must be an array");
  std::size_t with_prob = 0;
  std::vector<Rational> probs;
  for (const auto& w : worlds) {
    const Json* members = &w;
    if (w.is_object()) {
      members = &field(w, "tuples");
      if (auto p = w.find("prob"); p != w.end()) {
        probs.push_back(parse_prob(*p));
        ++with_prob;
      }
    }
    if (!members->is_array()) bad("a world must list tuple indices");
    World world;
    for (const auto& idx : *members) {
      if (!idx.is_number_unsigned() || idx.get<std::size_t>() >= listed.size()) {
        bad("world refers to a tuple index out of range");
      }
      world.insert(listed[idx.get<std::size_t>()]);
    }
    u.worlds.push_back(std::move(world));
  }
  if (with_prob != 0 && with_prob != u.worlds.size()) bad("either every world has a prob or none does");
  if (with_prob != 0) u.probs = std::move(probs);
  check(validate_udb(u));
  return u;
}

Json prob_json(const Rational& p) { return to_fraction_string(p); }

Json tuple_json(const Tuple& t) { return Json(t.values); }

Json rows_json(const std::vector<PrTuple>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    out.push_back({{"tuple", tuple_json(row.tuple)}, {"event", to_string(row.event)}});
  }
  return out;
}

Json var_probs_json(const VarProbs& probs) {
  Json out = Json::object();
  for (const auto& [name, p] : probs) out[name] = prob_json(p);
  return out;
}

}  // namespace

std::string model_name(const Document& doc) {
  switch (doc.index()) {
    case 0: return "pw";
    case 1: return "pr";
    default: return "epr";
  }
}

Document parse_document(const Json& j) {
  if (!j.is_object()) bad("top level must be an object");
  const Json& model = field(j, "model");
  if (!model.is_string()) bad("'model' must be a string");
  const std::string m = model.get<std::string>();
  if (m == "pw") return parse_pw(j);
  if (m == "pr") {
    PrRelation r{parse_rows(field(j, "rows")), parse_var_probs(j)};
    check(validate_pr(r));
    return r;
  }
  if (m == "epr") {
    EprRelation q;
    q.rows = parse_rows(field(j, "rows"));
    if (auto it = j.find("constraints"); it != j.end()) {
      if (!it->is_array()) bad("'constraints' must be an array");
      for (const auto& c : *it) {
        if (!c.is_object()) bad("each constraint must be an object");
        q.constraints.push_back({parse_event(field(c, "lhs")), parse_event(field(c, "rhs"))});
      }
    }
    q.var_probs = parse_var_probs(j);
    check(validate_epr(q));
    return q;
  }
  bad("unknown model '" + m + "' (expected pw, pr or epr)");
}

Document parse_document_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  return parse_document(j);
}

Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_document_text(buf.str());
}

Json to_json(const UncertainDB& u) {
  Json j;
  j["model"] = "pw";
  Json tuples = Json::array();
  std::map<Tuple, std::size_t> index;
  for (const auto& t : u.tuple_set) {
    index.emplace(t, index.size());
    tuples.push_back(tuple_json(t));
  }
  j["tuples"] = std::move(tuples);
  Json worlds = Json::array();
  for (std::size_t i = 0; i < u.worlds.size(); ++i) {
    Json members = Json::array();
    for (const auto& t : u.worlds[i]) members.push_back(index.at(t));
    Json w = {{"tuples", std::move(members)}};
    if (u.probs) w["prob"] = prob_json((*u.probs)[i]);
    worlds.push_back(std::move(w));
  }
  j["worlds"] = std::move(worlds);
  return j;
}

Json to_json(const PrRelation& r) {
  Json j;
  j["model"] = "pr";
  j["rows"] = rows_json(r.rows);
  j["var_probs"] = var_probs_json(r.var_probs);
  return j;
}

Json to_json(const EprRelation& q) {
  Json j;
  j["model"] = "epr";
  j["rows"] = rows_json(q.rows);
  Json cs = Json::array();
  for (const auto& c : q.constraints) cs.push_back({{"lhs", to_string(c.lhs)}, {"rhs", to_string(c.rhs)}});
  j["constraints"] = std::move(cs);
  j["var_probs"] = var_probs_json(q.var_probs);
  return j;
}

Json to_json(const Document& doc) {
  return std::visit([](const auto& d) { return to_json(d); }, doc);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace probint
