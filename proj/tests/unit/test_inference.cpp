#include <catch_amalgamated.hpp>

#include "fuzzyeval/fuzzy/inference.hpp"

using fuzzyeval::ConfigError;
using fuzzyeval::InferenceError;
using namespace fuzzyeval::fuzzy;

namespace {

LinguisticVariable three_terms(const std::string& name) {
  return LinguisticVariable(name, {0, 100},
                            {{"Low", MembershipFunction::trapezoidal(0, 0, 20, 40)},
                             {"Medium", MembershipFunction::trapezoidal(20, 40, 60, 80)},
                             {"High", MembershipFunction::trapezoidal(60, 80, 100, 100)}});
}

LinguisticVariable grade() {
  return LinguisticVariable("grade", {0, 100},
                            {{"Bad", MembershipFunction::triangular(0, 0, 50)},
                             {"Fair", MembershipFunction::triangular(0, 50, 100)},
                             {"Great", MembershipFunction::triangular(50, 100, 100)}});
}

Rule rule(int id, std::string a, std::string b, std::string out) {
  return Rule{id, {{"a", std::move(a), {}}, {"b", std::move(b), {}}}, {"grade", std::move(out), {}}};
}

}  // namespace

TEST_CASE("a single fully fired rule reproduces its consequent", "[infer]") {
  const std::vector<LinguisticVariable> vars{three_terms("a"), three_terms("b")};
  const auto out = grade();
  const std::vector<Rule> rules{rule(1, "High", "High", "Great"), rule(2, "Low", "Low", "Bad")};

  const auto trace = infer(vars, out, rules, {{"a", 100}, {"b", 90}});
  REQUIRE(trace.firings.size() == 2);
  CHECK(trace.firings[0] == RuleFiring{1, 1.0});
  CHECK(trace.firings[1] == RuleFiring{2, 0.0});
  const auto expected = SampledSet::sample({0, 100}, kDefaultResolution, out.term("Great").mf);
  CHECK(trace.aggregate == expected);
}

TEST_CASE("clipping and max aggregation", "[infer]") {
  const std::vector<LinguisticVariable> vars{three_terms("a"), three_terms("b")};
  const auto out = grade();
  const std::vector<Rule> rules{rule(1, "Medium", "Medium", "Fair"), rule(2, "High", "Medium", "Great")};

  // a = 70: Medium 0.5, High 0.5; b = 50: Medium 1.
  const auto trace = infer(vars, out, rules, {{"a", 70}, {"b", 50}}, {TNorm::minimum, 101});
  CHECK(trace.firings[0].strength == 0.5);
  CHECK(trace.firings[1].strength == 0.5);
  for (std::size_t i = 0; i < trace.aggregate.resolution(); ++i) {
    const double x = trace.aggregate.x(i);
    const double expect = std::max(std::min(0.5, out.term("Fair").mf(x)), std::min(0.5, out.term("Great").mf(x)));
    REQUIRE(trace.aggregate.mu(i) == expect);
  }
  CHECK(trace.aggregate.height() == 0.5);
}

TEST_CASE("product conjunction", "[infer]") {
  const std::vector<LinguisticVariable> vars{three_terms("a"), three_terms("b")};
  const std::vector<Rule> rules{rule(1, "Medium", "High", "Great")};
  // a = 70: Medium 0.5; b = 70: High 0.5.
  const auto min_trace = infer(vars, grade(), rules, {{"a", 70}, {"b", 70}}, {TNorm::minimum, 101});
  const auto prod_trace = infer(vars, grade(), rules, {{"a", 70}, {"b", 70}}, {TNorm::product, 101});
  CHECK(min_trace.firings[0].strength == 0.5);
  CHECK(prod_trace.firings[0].strength == 0.25);
}

TEST_CASE("hedged clauses modify degrees before the T-norm", "[infer]") {
  const std::vector<LinguisticVariable> vars{three_terms("a")};
  Rule r{1, {{"a", "High", Hedge{HedgeKind::very}}}, {"grade", "Great", {}}};
  Rule n{2, {{"a", "High", Hedge{HedgeKind::negation}}}, {"grade", "Bad", Hedge{HedgeKind::very}}};
  const std::vector<Rule> rules{r, n};
  // a = 70: High 0.5 -> very 0.25, not 0.5.
  const auto trace = infer(vars, grade(), rules, {{"a", 70}}, {TNorm::minimum, 101});
  CHECK(trace.firings[0].strength == 0.25);
  CHECK(trace.firings[1].strength == 0.5);
  // Consequent "very Bad" at x = 25: Bad = 0.5, squared 0.25, below the 0.5 clip.
  CHECK(trace.aggregate.mu(25) == 0.25);
}

TEST_CASE("inference error paths", "[infer]") {
  const std::vector<LinguisticVariable> vars{three_terms("a"), three_terms("b")};
  const auto out = grade();

  SECTION("no rule fires") {
    const std::vector<Rule> rules{rule(1, "High", "High", "Great")};
    CHECK_THROWS_AS(infer(vars, out, rules, {{"a", 0}, {"b", 0}}), InferenceError);
    CHECK_THROWS_WITH(infer(vars, out, rules, {{"a", 0}, {"b", 0}}), "no rule fired");
  }
  SECTION("empty rule base") {
    CHECK_THROWS_AS(infer(vars, out, std::vector<Rule>{}, {{"a", 0}, {"b", 0}}), ConfigError);
  }
  SECTION("unknown term") {
    const std::vector<Rule> rules{rule(1, "Huge", "High", "Great")};
    CHECK_THROWS_AS(infer(vars, out, rules, {{"a", 0}, {"b", 0}}), ConfigError);
  }
  SECTION("unknown output term") {
    const std::vector<Rule> rules{rule(1, "High", "High", "Superb")};
    CHECK_THROWS_AS(infer(vars, out, rules, {{"a", 0}, {"b", 0}}), ConfigError);
  }
  SECTION("unknown variable") {
    const std::vector<Rule> rules{Rule{1, {{"zzz", "High", {}}}, {"grade", "Great", {}}}};
    CHECK_THROWS_AS(infer(vars, out, rules, {{"a", 0}}), ConfigError);
  }
  SECTION("missing input") {
    const std::vector<Rule> rules{rule(1, "High", "High", "Great")};
    CHECK_THROWS_AS(infer(vars, out, rules, {{"a", 0}}), ConfigError);
  }
}

TEST_CASE("centroid defuzzification", "[centroid]") {
  SECTION("symmetric triangle about 50") {
    const auto s = SampledSet::sample({0, 100}, 1001, MembershipFunction::triangular(20, 50, 80));
    CHECK(defuzzify_centroid(s) == Catch::Approx(50.0).margin(s.step()));
  }
  SECTION("rectangular plateau on [20,40]") {
    const auto s = SampledSet::sample({0, 100}, 1001, MembershipFunction::trapezoidal(20, 20, 40, 40));
    CHECK(defuzzify_centroid(s) == Catch::Approx(30.0).margin(s.step()));
  }
  SECTION("single sample") {
    std::vector<double> mu(11, 0.0);
    mu[3] = 0.4;
    CHECK(defuzzify_centroid(SampledSet({0, 10}, mu)) == Catch::Approx(3.0).epsilon(1e-12));
  }
  SECTION("empty aggregate") {
    CHECK_THROWS_WITH(defuzzify_centroid(SampledSet::empty({0, 100}, 101)), "empty aggregate");
  }
}

TEST_CASE("inference is deterministic", "[infer][property]") {
  const std::vector<LinguisticVariable> vars{three_terms("a"), three_terms("b")};
  const std::vector<Rule> rules{rule(1, "Medium", "Medium", "Fair"), rule(2, "High", "Medium", "Great"),
                                rule(3, "Low", "Medium", "Bad")};
  for (double a = 0; a <= 100; a += 7.3) {
    const CrispInputs in{{"a", a}, {"b", 50}};
    const auto t1 = infer(vars, grade(), rules, in);
    const auto t2 = infer(vars, grade(), rules, in);
    REQUIRE(t1 == t2);
    REQUIRE(defuzzify_centroid(t1.aggregate) == defuzzify_centroid(t2.aggregate));
  }
}
