#include "doctest.h"
#include "probint/document.hpp"
#include "probint/error.hpp"
#include "probint/generator.hpp"
#include "support.hpp"

using namespace probint;
using testing::bob;
using testing::Q;

namespace {

bool same_udb(const UncertainDB& a, const UncertainDB& b) {
  return a.tuple_set == b.tuple_set && a.worlds == b.worlds && a.probs == b.probs;
}

}  // namespace

TEST_CASE("pw document round trip") {
  UncertainDB u = testing::courses_s_prime();
  Document back = parse_document_text(dump(to_json(u)));
  REQUIRE(std::holds_alternative<UncertainDB>(back));
  CHECK(same_udb(std::get<UncertainDB>(back), u));

  UncertainDB plain = u;
  plain.probs.reset();
  CHECK(same_udb(std::get<UncertainDB>(parse_document_text(dump(to_json(plain)))), plain));
}

TEST_CASE("pr and epr documents round trip") {
  PrRelation r = testing::courses_r1();
  CHECK(std::get<PrRelation>(parse_document_text(dump(to_json(r)))) == r);
  EprRelation q = integrate_pr(testing::courses_r1(), testing::courses_r2());
  CHECK(std::get<EprRelation>(parse_document_text(dump(to_json(q)))) == q);
  EprRelation renamed = integrate_pr(testing::andy(), testing::andy());
  CHECK(std::get<EprRelation>(parse_document_text(dump(to_json(renamed)))) == renamed);
}

TEST_CASE("property: generated documents round trip") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto pair = generate_pair(seed);
    CHECK(std::get<PrRelation>(parse_document(to_json(pair.r))) == pair.r);
    EprRelation q = integrate_pr(pair.r, pair.s);
    CHECK(std::get<EprRelation>(parse_document(to_json(q))) == q);
  }
}

TEST_CASE("probability spellings") {
  auto doc = parse_document_text(R"({"model":"pr","rows":[{"tuple":["t"],"event":"x & y"}],
                                     "var_probs":{"x":"0.35","y":"9/13"}})");
  auto r = std::get<PrRelation>(doc);
  CHECK(r.var_probs.at("x") == Q("7/20"));
  CHECK(r.var_probs.at("y") == Q("9/13"));
  CHECK(Q("0.05") == Rational(1, 20));
  CHECK(Q(".5") == Rational(1, 2));
  CHECK(Q("3") == 3);
  CHECK(Q("-1/2") == Rational(-1, 2));
  CHECK_THROWS_AS(Q("1/0"), ValidationError);
  CHECK_THROWS_AS(Q("abc"), ValidationError);
  CHECK_THROWS_AS(Q("1."), ValidationError);
  CHECK(to_decimal_string(Q("21/160")) == "0.131250");
  CHECK(to_decimal_string(Q("1/3")) == "0.333333");
  CHECK(to_decimal_string(Q("2/3")) == "0.666667");
  CHECK(to_fraction_string(Q("0.45")) == "9/20");
}

TEST_CASE("bare-array worlds") {
  auto doc = parse_document_text(R"({"model":"pw","tuples":[["a"],["b"]],"worlds":[[0],[0,1]]})");
  auto u = std::get<UncertainDB>(doc);
  CHECK(u.worlds.size() == 2);
  CHECK_FALSE(u.probs);
}

TEST_CASE("malformed documents") {
  const char* bad[] = {
      "not json",
      R"({"model":"xx"})",
      R"({"tuples":[]})",
      R"({"model":"pw","tuples":[["a"]],"worlds":[[3]]})",
      R"({"model":"pw","tuples":[["a"]],"worlds":[{"tuples":[0],"prob":"1/2"},{"tuples":[]}]})",
      R"({"model":"pw","tuples":[["a"]],"worlds":[{"tuples":[0],"prob":"1/2"},{"tuples":[],"prob":"1/3"}]})",
      R"({"model":"pr","rows":[{"tuple":["t"],"event":"x"}],"var_probs":{"x":0.5}})",
      R"({"model":"pr","rows":[{"tuple":["t"],"event":"x"}],"var_probs":{"x":"3/2"}})",
      R"({"model":"pr","rows":[{"tuple":["t"],"event":"x"},{"tuple":["t"],"event":"y"}]})",
      R"({"model":"pr","rows":[{"tuple":["t"],"event":"x & y"}],"var_probs":{"x":"1/2"}})",
      R"({"model":"epr","rows":[],"constraints":[{"lhs":"a"}]})",
  };
  for (const char* text : bad) {
    INFO(text);
    CHECK_THROWS_AS(parse_document_text(text), Error);
  }
  CHECK_THROWS_AS(parse_document_text(R"({"model":"pr","rows":[{"tuple":["t"],"event":"x &"}]})"), ParseError);
  CHECK_THROWS_AS(load_document("/nonexistent/file.json"), ValidationError);
}

TEST_CASE("model names") {
  CHECK(model_name(Document{testing::courses_s()}) == "pw");
  CHECK(model_name(Document{testing::courses_r1()}) == "pr");
  CHECK(model_name(Document{EprRelation{}}) == "epr");
}
