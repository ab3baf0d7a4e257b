#include "oracles.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace vmvt::oracle {

namespace {

using Float256 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double bump_ref(double x) {
  if (std::abs(x) >= 2.0) return 0.0;
  return std::exp(1.0 / 3.0 - 1.0 / (4.0 - x * x));
}

struct Grid {
  int size;
  double at(int k) const { return (k + 0.5) / size; }
};

// |sum_{n <= M} e(a3 n^3 + a2 n^2 + a1 n)|^2
double abs2_weyl3(double a3, double a2, double a1, std::int64_t M) {
  double re = 0.0, im = 0.0;
  for (std::int64_t n = 1; n <= M; ++n) {
    double const x = static_cast<double>(n);
    double const ph = a3 * x * x * x + a2 * x * x + a1 * x;
    re += std::cos(kTwoPi * ph);
    im += std::sin(kTwoPi * ph);
  }
  return re * re + im * im;
}

// F(gamma, alpha_2) = int |f_3(gamma, alpha_2, alpha_1; 2N)|^{2s} d alpha_1 on
// the (gamma, alpha_2) grid.
std::vector<double> alpha1_marginal(int s, std::int64_t N, Grid g3, Grid g2) {
  std::int64_t const M = 2 * N;
  Grid const g1{static_cast<int>(2 * s * M + 1)};
  std::vector<double> F(static_cast<std::size_t>(g3.size) * g2.size);
  for (int i = 0; i < g3.size; ++i) {
    for (int j = 0; j < g2.size; ++j) {
      double total = 0.0;
      for (int k = 0; k < g1.size; ++k) {
        total += std::pow(abs2_weyl3(g3.at(i), g2.at(j), g1.at(k), M), s);
      }
      F[static_cast<std::size_t>(i) * g2.size + j] = total / g1.size;
    }
  }
  return F;
}

// sum_y Psi_A(alpha_2 - 3 y alpha_3) on the (alpha_3, alpha_2) grid.
std::vector<double> cutoff_sum(std::int64_t N, double A, Grid g3, Grid g2) {
  std::vector<double> C(static_cast<std::size_t>(g3.size) * g2.size);
  for (int i = 0; i < g3.size; ++i) {
    for (int j = 0; j < g2.size; ++j) {
      double total = 0.0;
      for (std::int64_t y = 1; y <= N; ++y) {
        total += psi_reference(A, g2.at(j) - 3.0 * static_cast<double>(y) * g3.at(i), N);
      }
      C[static_cast<std::size_t>(i) * g2.size + j] = total;
    }
  }
  return C;
}

double shifted_quadrature(int s, std::int64_t N, double u, double eps, double scale) {
  Grid const g3{1024}, g2{512};
  std::vector<double> const F = alpha1_marginal(s, N, g3, g2);
  std::vector<double> const C = cutoff_sum(N, u - eps, g3, g2);
  // beta = alpha_3 - gamma runs over multiples of 1/1024, a shifted uniform
  // grid of the same period.
  std::vector<double> P(g3.size);
  for (int k = 0; k < g3.size; ++k) P[k] = psi_reference(u + 1.0, static_cast<double>(k) / g3.size, N);
  // P doubled so that P2[i - k + size] = P[(i - k) mod size].
  std::vector<double> P2(P);
  P2.insert(P2.end(), P.begin(), P.end());
  std::vector<double> column(g3.size);
  double total = 0.0;
  for (int j = 0; j < g2.size; ++j) {
    for (int k = 0; k < g3.size; ++k) column[k] = F[static_cast<std::size_t>(k) * g2.size + j];
    for (int i = 0; i < g3.size; ++i) {      // alpha_3
      double conv = 0.0;
      double const* p = P2.data() + i + g3.size;
      for (int k = 0; k < g3.size; ++k) conv += column[k] * p[-k];  // gamma
      total += conv * C[static_cast<std::size_t>(i) * g2.size + j];
    }
  }
  return scale * total / (static_cast<double>(g2.size) * g3.size * g3.size);
}

}  // namespace

std::complex<double> weyl_sum_256(std::vector<double> const& ascending, std::int64_t N) {
  Float256 const two_pi = 2 * boost::math::constants::pi<Float256>();
  Float256 re = 0, im = 0;
  for (std::int64_t n = 1; n <= N; ++n) {
    Float256 phase = 0;
    Float256 power = 1;
    for (double a : ascending) {
      power *= n;
      phase += Float256(a) * power;
    }
    phase -= floor(phase);
    re += cos(two_pi * phase);
    im += sin(two_pi * phase);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

double psi_reference(double A, double beta, std::int64_t N) {
  double const scale = std::pow(static_cast<double>(N), A);
  double const r = beta - std::floor(beta);
  double total = 0.0;
  for (int j = -3; j <= 3; ++j) total += bump_ref((r + j) * scale);
  return total;
}

double s_quadrature_d3(int s, std::int64_t N, double u) {
  Grid const g3{1024}, g2{512};
  std::int64_t const M = 2 * N;
  Grid const g1{static_cast<int>(2 * s * M + 1)};
  double total = 0.0;
  for (int i = 0; i < g3.size; ++i) {
    for (int j = 0; j < g2.size; ++j) {
      double cut = 0.0;
      for (std::int64_t y = 1; y <= N; ++y) {
        cut += psi_reference(u, g2.at(j) - 3.0 * static_cast<double>(y) * g3.at(i), N);
      }
      double inner = 0.0;
      for (int k = 0; k < g1.size; ++k) inner += std::pow(abs2_weyl3(g3.at(i), g2.at(j), g1.at(k), M), s);
      total += cut * inner / g1.size;
    }
  }
  return total / (static_cast<double>(g3.size) * g2.size);
}

double u_quadrature_d3(int s, std::int64_t N, double u, double eps) {
  return shifted_quadrature(s, N, u, eps, 1.0 / static_cast<double>(N));
}

double t_quadrature_d3(int s, std::int64_t N, double u, double eps) {
  return shifted_quadrature(s, N, u, eps, 1.0);
}

std::uint64_t count_nested(int s, std::int64_t N, std::vector<int> const& zero_powers) {
  std::vector<std::int64_t> n(2 * s, 1);
  std::uint64_t count = 0;
  for (;;) {
    bool ok = true;
    for (int i : zero_powers) {
      std::int64_t sigma = 0;
      for (int k = 0; k < 2 * s; ++k) {
        std::int64_t v = 1;
        for (int e = 0; e < i; ++e) v *= n[k];
        sigma += k < s ? v : -v;
      }
      if (sigma != 0) ok = false;
    }
    if (ok) ++count;
    int k = 0;
    while (k < 2 * s && n[k] == N) n[k++] = 1;
    if (k == 2 * s) break;
    ++n[k];
  }
  return count;
}

}  // namespace vmvt::oracle
