#include <string>

#include "doctest.h"
#include "polattn/errors.hpp"
#include "polattn/experiments.hpp"
#include "polattn/scenario_io.hpp"

using namespace polattn;

namespace {

const char* kMinimal = R"({
  "schema_version": 1,
  "policies": {"beta": [0.01, 0.2, 0.4]},
  "utility": {"voter": "absolute_loss", "office_rent": 8, "winner_weight": 12, "loser_weight": 1},
  "candidates": {"beta": [{"type": 0.3, "prob": 0.5}, {"type": 0.8, "prob": 0.5}]},
  "electorate": [{"type": -0.001, "weight": 0.25}, {"type": 0, "weight": 0.5}, {"type": 0.001, "weight": 0.25}],
  "attention": {"mu": 10}
})";

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("minimal document parses with mirrored alpha side") {
  const Scenario s = parse_scenario(kMinimal);
  CHECK(s.beta_policies.size() == 3);
  CHECK(s.alpha_policies.mirrors(s.beta_policies));
  CHECK(s.alpha_candidate.mirrors(s.beta_candidate));
  CHECK(s.mu == 10);
  CHECK(s.utility.candidate().loser_sign == -1);
  CHECK_FALSE(s.news.has_value());
  CHECK(s.eta == 1.0);
}

TEST_CASE("round trip through the canonical dump") {
  for (const Scenario& s : {table1_scenario(), figure2_scenario(1.0), figure3_scenario(0.65), example3_scenario(0.5, 1.0)}) {
    const std::string text = dump_scenario(s);
    const Scenario back = parse_scenario(text);
    CHECK(dump_scenario(back) == text);
    CHECK(scenario_hash(back) == scenario_hash(s));
  }
}

TEST_CASE("hash is stable and sensitive") {
  const std::string h = scenario_hash(figure2_scenario(10.0));
  CHECK(h.size() == 16);
  CHECK(h == scenario_hash(figure2_scenario(10.0)));
  CHECK(h != scenario_hash(figure2_scenario(1.0)));
  // FNV-1a 64 reference values.
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("diagnostics carry line and pointer") {
  const std::string bad_mu = replace(kMinimal, "\"mu\": 10", "\"mu\": \"ten\"");
  const std::string e1 = error_of(bad_mu);
  CHECK(e1.find("line 7") != std::string::npos);
  CHECK(e1.find("/attention/mu") != std::string::npos);

  const std::string e2 = error_of(replace(kMinimal, "\"prob\": 0.5}]", "\"prob\": 0.6}]"));
  CHECK_FALSE(e2.empty());

  const std::string e3 = error_of(replace(kMinimal, "\"attention\"", "\"attentoin\""));
  CHECK(e3.find("attentoin") != std::string::npos);

  const std::string e4 = error_of(replace(kMinimal, "\"weight\": 0.5}", "\"weight\": 0.5, \"extra\": 1}"));
  CHECK(e4.find("line 6") != std::string::npos);
  CHECK(e4.find("/electorate/1") != std::string::npos);

  const std::string e5 = error_of(replace(kMinimal, "\"schema_version\": 1", "\"schema_version\": 2"));
  CHECK(e5.find("/schema_version") != std::string::npos);

  const std::string e6 = error_of("{\n  \"schema_version\": 1,\n  oops\n}");
  CHECK(e6.find("line 3") != std::string::npos);
}

TEST_CASE("optional sections") {
  std::string doc = replace(kMinimal, "\"attention\": {\"mu\": 10}",
                            "\"attention\": {\"mu\": 10},\n  \"news\": {\"family\": \"slant\", \"xi\": 0.6},\n"
                            "  \"commitment\": {\"eta\": 0.5},\n  \"dissemination\": {\"cost\": 0.1},\n"
                            "  \"assignment\": {\"beta\": [0.01, 0.4]}");
  const Scenario s = parse_scenario(doc);
  REQUIRE(s.news.has_value());
  CHECK(s.news->slant_parameter().value() == 0.6);
  CHECK(s.eta == 0.5);
  CHECK(s.dissemination_cost.value() == 0.1);
  CHECK(s.assignment.value() == std::vector<double>{0.01, 0.4});
  CHECK(parse_scenario(dump_scenario(s)).eta == 0.5);

  const std::string issues = replace(kMinimal, "\"attention\": {\"mu\": 10}",
                                     "\"attention\": {\"mu\": 10},\n  \"issues\": {\"frontier\": \"hexagon\"}");
  CHECK(error_of(issues).find("/issues") != std::string::npos);
}

TEST_CASE("tabulated voter utility") {
  const std::string doc = replace(kMinimal, "\"voter\": \"absolute_loss\"",
                                  "\"voter\": \"table\", \"table\": {\"policies\": [-0.4, -0.2, -0.01, 0.01, 0.2, 0.4],"
                                  " \"types\": [-0.001, 0, 0.001], \"values\": [[-0.399, -0.4, -0.401], [-0.199, -0.2, -0.201],"
                                  " [-0.009, -0.01, -0.011], [-0.011, -0.01, -0.009], [-0.201, -0.2, -0.199], [-0.401, -0.4, -0.399]]}");
  const Scenario s = parse_scenario(doc);
  CHECK(s.utility.family() == VoterFamily::Tabulated);
  CHECK(s.utility.table()->at(0.2, 0.001) == -0.199);
}
