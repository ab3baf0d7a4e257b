#pragma once

// The fixed smooth bump phi, its periodization Psi_A, the Fourier transform
// phi_hat, and the y-averaged cutoff G(alpha_{d-1}, alpha_d).

#include <cstdint>
#include <vector>

namespace vmvt::cutoffs {

// phi(x) = exp(1/3 - 1/(4 - x^2)) on |x| < 2, zero elsewhere. Even, smooth,
// phi >= 1 on [-1, 1] with phi(+-1) = 1.
double bump(double x);

// sup phi = phi(0) = exp(1/12).
double bump_max();

inline constexpr double kDefaultEps = 0.05;

struct CutoffConfig {
  double A = 1.0;
  std::int64_t N = 2;
  double eps = kDefaultEps;

  void validate() const;  // N >= 2, A > 0, 0 < eps < 1/2
};

// Psi_A(beta; N) = sum_j phi((beta + j) N^A). 1-periodic; vanishes unless
// ||beta|| <= 2 N^-A.
double psi(double A, double beta, std::int64_t N);

// N^-A sum_{|j| <= J} phi_hat(j / N^A) e(beta j), the Poisson side of psi.
double psi_fourier(double A, double beta, std::int64_t N, std::int64_t J);

// phi_hat(xi) = int phi(x) e(-x xi) dx by adaptive Gauss-Kronrod quadrature
// to absolute tolerance kPhiHatTolerance. Real and even.
inline constexpr double kPhiHatTolerance = 1e-12;
double phi_hat(double xi);

// Grid-backed phi_hat for repeated queries. Nodes carry phi_hat and its first
// two derivatives; between nodes the quintic Hermite interpolant is used.
// Beyond max_xi() the table returns 0 (|phi_hat| < 1e-15 phi_hat(0) there).
class PhiHatTable {
 public:
  static PhiHatTable const& instance();

  double operator()(double xi) const;
  double step() const { return step_; }
  double max_xi() const { return max_xi_; }
  std::size_t size() const { return value_.size(); }

  // Table node k (xi = k * step()) of phi_hat, phi_hat', phi_hat''.
  double node_value(std::size_t k) const { return value_.at(k); }

 private:
  PhiHatTable();

  double step_;
  double max_xi_;
  std::vector<double> value_, first_, second_;
};

// G = N^-1 sum_{1 <= y <= N} Psi_{u - eps}(alpha_{d-1} - d y alpha_d).
// Requires u > eps so the cutoff width exponent is positive.
double g_exact(double alpha_dm1, double alpha_d, int d, CutoffConfig const& cfg, double u);

// Fourier-side evaluation of G with |j| <= J.
double g_fourier(double alpha_dm1, double alpha_d, int d, CutoffConfig const& cfg, double u,
                 std::int64_t J);

// N^{-u-1+eps} sum_{|j| <= N^u} |sum_{1 <= y <= N} e(d y j alpha_d)|, the
// majorant of G without its rapidly decaying tail.
double g_bound(double alpha_d, int d, double u, std::int64_t N, double eps);

}  // namespace vmvt::cutoffs
