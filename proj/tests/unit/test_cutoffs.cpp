#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vmvt/cutoffs.hpp"
#include "vmvt/errors.hpp"

using namespace vmvt;
using namespace vmvt::cutoffs;

namespace {
constexpr double kPhi0 = 1.0869040495212288886;      // exp(1/12)
constexpr double kPhiM01 = 1.0862232452531588573;    // phi(-0.1)
constexpr double kPhiHat0 = 3.4628633383826399152;
constexpr double kRatio50 = 1.86265174487e-8;        // phi_hat(50) / phi_hat(0)
constexpr double kRatio200 = 2.57122275904e-14;
}  // namespace

TEST_CASE("bump and Psi") {
  CHECK(bump(0.0) == doctest::Approx(kPhi0).epsilon(1e-15));
  CHECK(bump(-0.1) == doctest::Approx(kPhiM01).epsilon(1e-15));
  CHECK(bump(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bump(2.0) == 0.0);
  CHECK(psi(1.0, 0.5, 10) == 0.0);
  CHECK(psi(0.7, 0.0, 13) == doctest::Approx(kPhi0).epsilon(1e-15));
  CHECK(psi(2.0, 1.0 - 1e-3, 10) == doctest::Approx(psi(2.0, -1e-3, 10)).epsilon(1e-12));
  CHECK(psi(2.0, -1e-3, 10) == doctest::Approx(kPhiM01).epsilon(1e-12));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> b(-3.0, 3.0);
  for (int k = 0; k < 2000; ++k) {
    double const beta = b(rng);
    double const v = psi(0.4, beta, 8);
    CHECK(v >= 0.0);
    CHECK(v == doctest::Approx(oracle::psi_reference(0.4, beta, 8)).epsilon(1e-12));
    CHECK(v == doctest::Approx(psi(0.4, beta + 2.0, 8)).epsilon(1e-12));
    double const dist = std::abs(beta - std::nearbyint(beta));
    if (dist > 2.0 * std::pow(8.0, -0.4)) CHECK(v == 0.0);
  }
  CHECK_THROWS_AS(psi(0.0, 0.1, 10), DomainError);
  CHECK_THROWS_AS(psi(1.0, 0.1, 1), DomainError);
}

TEST_CASE("phi_hat frozen values and decay") {
  CHECK(phi_hat(0.0) == doctest::Approx(kPhiHat0).epsilon(1e-12));
  CHECK(phi_hat(3.7) == doctest::Approx(phi_hat(-3.7)).epsilon(1e-13));
  CHECK(phi_hat(50.0) / kPhiHat0 == doctest::Approx(kRatio50).epsilon(1e-4));
  CHECK(std::abs(phi_hat(200.0)) < 1e-12 * kPhiHat0);
  CHECK(phi_hat(200.0) / kPhiHat0 == doctest::Approx(kRatio200).epsilon(0.05));
}

TEST_CASE("phi_hat table tracks quadrature") {
  auto const& table = PhiHatTable::instance();
  CHECK(table(0.0) == doctest::Approx(kPhiHat0).epsilon(1e-12));
  double worst = 0.0;
  for (double xi = 0.0; xi < 300.0; xi += 0.731) worst = std::max(worst, std::abs(table(xi) - phi_hat(xi)));
  CHECK(worst < 1e-11);
  CHECK(table(-5.25) == table(5.25));
  CHECK(table(table.max_xi() + 1.0) == 0.0);
}

TEST_CASE("Psi Poisson side") {
  for (double beta : {0.0, 0.013, 0.21, 0.5, -0.377}) {
    CHECK(psi_fourier(0.6, beta, 20, 2000) == doctest::Approx(psi(0.6, beta, 20)).epsilon(1e-10));
  }
}

TEST_CASE("G kernel") {
  CutoffConfig const cfg{1.0, 100, 0.05};
  CHECK(g_exact(0.0, 0.0, 3, cfg, 1.0) == doctest::Approx(kPhi0).epsilon(1e-14));
  CHECK(g_exact(0.5, 0.0, 3, cfg, 1.0) == 0.0);

  CutoffConfig const c50{1.0, 50, 0.05};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  // phi_hat decays only like exp(-c sqrt(xi)); truncating at xi = 200 leaves
  // a relative tail near 1e-14.
  auto const J = static_cast<std::int64_t>(std::ceil(200.0 * std::pow(50.0, 0.75)));
  for (int k = 0; k < 20; ++k) {
    double const a = u01(rng), b = u01(rng);
    CHECK(std::abs(g_fourier(a, b, 3, c50, 0.8, J) - g_exact(a, b, 3, c50, 0.8)) < 1e-8);
  }
  double lowest = 1.0;
  for (int k = 0; k < 10000; ++k) lowest = std::min(lowest, g_exact(u01(rng), u01(rng), 3, c50, 0.8));
  CHECK(lowest >= 0.0);
  CHECK_THROWS_AS(g_exact(0.1, 0.1, 3, c50, 0.05), DomainError);
}

TEST_CASE("G majorant at alpha_d = 0") {
  double const u = 0.5, eps = 0.05;
  std::int64_t const N = 64;
  double const expected = std::pow(64.0, -u - 1 + eps) * (2 * 8 + 1) * 64.0;
  CHECK(g_bound(0.0, 3, u, N, eps) == doctest::Approx(expected).epsilon(1e-13));
}
