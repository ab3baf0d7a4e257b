#include <doctest.h>

#include <cmath>
#include <random>

#include "vmvt/arcs.hpp"
#include "vmvt/errors.hpp"

using namespace vmvt;
using namespace vmvt::arcs;

TEST_CASE("f exponent") {
  CHECK(f_exponent(0.25) == 0.25);
  CHECK(f_exponent(1.0) == 1.0);
  CHECK(f_exponent(1.7) == 1.0);
  CHECK_THROWS_AS(f_exponent(2.5, 3), DomainError);
  CHECK_THROWS_AS(f_exponent(0.0), DomainError);
}

TEST_CASE("rational approximation") {
  CHECK(rational_approx(0.5, 10) == Rational{1, 2});
  CHECK(rational_approx((std::sqrt(5.0) - 1.0) / 2.0, 12) == Rational{5, 8});
  CHECK(rational_approx((std::sqrt(5.0) - 1.0) / 2.0, 13) == Rational{8, 13});
  CHECK(rational_approx(0.0, 50) == Rational{0, 1});
  CHECK(rational_approx(0.9999, 50) == Rational{1, 1});

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    double const alpha = u01(rng);
    Rational const r = rational_approx(alpha, 1000);
    REQUIRE(r.q >= 1);
    REQUIRE(r.q <= 1000);
    double const err = std::abs(alpha - r.value());
    CHECK(err <= 1.0 / (static_cast<double>(r.q) * 1001.0) * (1 + 1e-12));
    double best = 1.0;
    for (std::int64_t q = 1; q <= 1000; ++q) {
      double const qa = alpha * static_cast<double>(q);
      best = std::min(best, std::abs(qa - std::nearbyint(qa)));
    }
    double const mine = std::abs(alpha * static_cast<double>(r.q) - static_cast<double>(r.a));
    CHECK(mine <= best + 1e-12);
  }
}

TEST_CASE("classification") {
  Classification const zero = classify(0.0, 64, 0.5);
  CHECK(zero.major);
  CHECK(zero.witness == Rational{0, 1});
  double const inside = 0.5 + std::pow(64.0, -1.5) * std::pow(64.0, 0.5) / 4.0;
  Classification const half = classify(inside, 64, 0.5);
  CHECK(half.major);
  CHECK(half.witness == Rational{1, 2});
  CHECK_FALSE(classify(0.3, 64, 0.5).major);
}

TEST_CASE("dissection at N = 64, u = 1/2") {
  ArcDissection const D = build_dissection(64, 0.5);
  CHECK(D.Q == 8);
  CHECK(D.W == doctest::Approx(1.0 / 64.0));
  CHECK(D.disjointness_condition());
  CHECK(D.overlap_measure == 0.0);
  CHECK(D.total_measure <= 2.0 / 8.0);
  CHECK(D.total_measure <= 2.0 * D.Q * D.W);
  for (std::size_t k = 1; k < D.merged.size(); ++k) CHECK(D.merged[k - 1].hi < D.merged[k].lo);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int disagree = 0;
  for (int k = 0; k < 100000; ++k) {
    double const a = u01(rng);
    if (classify(a, 64, 0.5).major != D.contains(a)) ++disagree;
  }
  CHECK(disagree == 0);
}

TEST_CASE("overlapping dissection is reported") {
  ArcDissection const D = build_dissection(16, 1.0);
  CHECK(D.Q == 16);
  CHECK(D.W == doctest::Approx(1.0 / 16.0));
  CHECK_FALSE(D.disjointness_condition());
  CHECK(D.overlap_measure > 0.0);
  CHECK(D.total_measure <= 2.0 * D.Q * D.W);
  CHECK(D.total_measure <= 1.0);
}

TEST_CASE("dissection budgets") {
  CHECK_THROWS_AS(build_dissection(std::int64_t{1} << 40, 1.0), BudgetError);
  CHECK_THROWS_AS(build_dissection(0, 0.5), DomainError);
}
