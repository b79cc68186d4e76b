#include <catch_amalgamated.hpp>

#include <random>

#include "fuzzyeval/fuzzy/linguistic_variable.hpp"
#include "fuzzyeval/fuzzy/membership.hpp"

using fuzzyeval::ConfigError;
using fuzzyeval::ContractError;
using namespace fuzzyeval::fuzzy;

TEST_CASE("triangular membership follows the piecewise definition", "[membership]") {
  const auto tri = MembershipFunction::triangular(0, 50, 100);
  CHECK(tri(50) == 1.0);
  CHECK(tri(25) == 0.5);
  CHECK(tri(75) == 0.5);
  CHECK(tri(0) == 0.0);
  CHECK(tri(100) == 0.0);
  CHECK(tri(-1) == 0.0);
  CHECK(tri(101) == 0.0);
  CHECK(tri.kind() == MfKind::triangular);
  CHECK(tri.params().size() == 3);
  CHECK(tri.params()[1] == 50.0);
}

TEST_CASE("trapezoidal membership follows the piecewise definition", "[membership]") {
  const auto trap = MembershipFunction::trapezoidal(20, 40, 60, 80);
  CHECK(trap(50) == 1.0);
  CHECK(trap(40) == 1.0);
  CHECK(trap(60) == 1.0);
  CHECK(trap(70) == 0.5);
  CHECK(trap(30) == 0.5);
  CHECK(trap(20) == 0.0);
  CHECK(trap(80) == 0.0);
  CHECK(trap(10) == 0.0);
  CHECK(trap.params().size() == 4);
}

TEST_CASE("degenerate flanks take the plateau value at the breakpoint", "[membership]") {
  const auto left_shoulder = MembershipFunction::trapezoidal(0, 0, 20, 40);
  CHECK(left_shoulder(0) == 1.0);
  CHECK(left_shoulder(-0.001) == 0.0);
  const auto right_shoulder = MembershipFunction::trapezoidal(60, 80, 100, 100);
  CHECK(right_shoulder(100) == 1.0);
  const auto spike = MembershipFunction::triangular(10, 10, 10);
  CHECK(spike(10) == 1.0);
  CHECK(spike(10.0001) == 0.0);
  const auto right_wall = MembershipFunction::triangular(0, 30, 30);
  CHECK(right_wall(30) == 1.0);
  CHECK(right_wall(15) == 0.5);
}

TEST_CASE("breakpoints must be ordered", "[membership]") {
  CHECK_THROWS_AS(MembershipFunction::triangular(0, 60, 50), ContractError);
  CHECK_THROWS_AS(MembershipFunction::trapezoidal(0, 10, 5, 20), ContractError);
  const double three[] = {1, 2, 3};
  CHECK_THROWS_AS(MembershipFunction::from_params(MfKind::trapezoidal, three), ContractError);
}

TEST_CASE("membership stays in [0,1], is zero outside the support and continuous", "[membership][property]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    double p[4] = {u(rng), u(rng), u(rng), u(rng)};
    std::sort(p, p + 4);
    const auto mf = trial % 2 ? MembershipFunction::trapezoidal(p[0], p[1], p[2], p[3])
                              : MembershipFunction::triangular(p[0], p[1], p[3]);
    for (int k = 0; k < 200; ++k) {
      const double x = -10.0 + 120.0 * k / 199.0;
      const double m = mf(x);
      REQUIRE(m >= 0.0);
      REQUIRE(m <= 1.0);
      if (x < mf.left() || x > mf.right()) REQUIRE(m == 0.0);
    }
    // Continuity away from vertical edges: small steps move mu by at most
    // step / (shortest non-zero flank).
    const double flank_l = mf.core_begin() - mf.left();
    const double flank_r = mf.right() - mf.core_end();
    if (flank_l > 1e-3 && flank_r > 1e-3) {
      const double h = 1e-4;
      const double bound = h / std::min(flank_l, flank_r) + 1e-12;
      for (int k = 0; k < 200; ++k) {
        const double x = u(rng);
        REQUIRE(std::abs(mf(x + h) - mf(x)) <= bound);
      }
    }
  }
}

namespace {

LinguisticVariable clean_code_reference() {
  return LinguisticVariable("clean_code", {0, 100},
                            {{"Low", MembershipFunction::trapezoidal(0, 0, 20, 40)},
                             {"Medium", MembershipFunction::trapezoidal(20, 40, 60, 80)},
                             {"High", MembershipFunction::trapezoidal(60, 80, 100, 100)}});
}

}  // namespace

TEST_CASE("fuzzify yields one degree per term", "[fuzzify]") {
  const auto v = clean_code_reference();

  SECTION("peak of a term maps to 1") {
    auto f = v.fuzzify(50);
    CHECK(*degree_of(f, "Medium") == 1.0);
    CHECK(*degree_of(f, "Low") == 0.0);
    CHECK(*degree_of(f, "High") == 0.0);
  }
  SECTION("domain minimum sits on the leftmost plateau") {
    auto f = v.fuzzify(0);
    CHECK(*degree_of(f, "Low") == 1.0);
    CHECK(*degree_of(f, "Medium") == 0.0);
  }
  SECTION("61 on the reference partition touches exactly Medium and High") {
    auto f = v.fuzzify(61);
    REQUIRE(f.size() == 3);
    CHECK(*degree_of(f, "Low") == 0.0);
    // (80 - 61) / 20 and (61 - 60) / 20
    CHECK(*degree_of(f, "Medium") == Catch::Approx(0.95).margin(1e-12));
    CHECK(*degree_of(f, "High") == Catch::Approx(0.05).margin(1e-12));
  }
  SECTION("out-of-domain inputs clamp to the endpoints") {
    CHECK(v.fuzzify(150) == v.fuzzify(100));
    CHECK(v.fuzzify(-3) == v.fuzzify(0));
  }
}

TEST_CASE("linguistic variable validation", "[fuzzify]") {
  CHECK_THROWS_AS(LinguisticVariable("x", {0, 100},
                                     {{"a", MembershipFunction::triangular(0, 0, 50)},
                                      {"a", MembershipFunction::triangular(50, 100, 100)}}),
                  ConfigError);
  CHECK_THROWS_AS(LinguisticVariable("x", {0, 100}, {{"a", MembershipFunction::triangular(-5, 50, 100)}}),
                  ConfigError);
  // Gap between 40 and 60.
  CHECK_THROWS_AS(LinguisticVariable("x", {0, 100},
                                     {{"lo", MembershipFunction::trapezoidal(0, 0, 20, 40)},
                                      {"hi", MembershipFunction::trapezoidal(60, 80, 100, 100)}}),
                  ConfigError);
  // Touching feet leave the single point 40 uncovered.
  CHECK_THROWS_AS(LinguisticVariable("x", {0, 100},
                                     {{"lo", MembershipFunction::trapezoidal(0, 0, 20, 40)},
                                      {"hi", MembershipFunction::trapezoidal(40, 60, 100, 100)}}),
                  ConfigError);
  CHECK_NOTHROW(clean_code_reference());
}
