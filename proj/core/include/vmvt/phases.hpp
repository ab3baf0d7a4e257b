#pragma once

// Weyl sums f_d(alpha; N) = sum_{n <= N} e(alpha_d n^d + ... + alpha_1 n),
// their shifted forms, and the Dirichlet kernel K(gamma) = sum_{z <= N} e(gamma z).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vmvt/phase_arith.hpp"

namespace vmvt::phases {

using Rational = boost::multiprecision::cpp_rational;

// Coefficients of a degree-d polynomial phase without constant term. Each
// coefficient only matters modulo 1.
class PhaseVector {
 public:
  // From the leading coefficient down: (alpha_d, ..., alpha_1).
  static PhaseVector from_descending(std::vector<double> coeffs);
  // alpha_i stored at index i - 1.
  static PhaseVector from_ascending(std::vector<double> coeffs);
  static PhaseVector zero(int degree);

  int degree() const { return static_cast<int>(ascending_.size()); }

  // alpha_power for 1 <= power <= degree().
  double coeff(int power) const { return ascending_.at(power - 1); }
  void set_coeff(int power, double value) { ascending_.at(power - 1) = value; }

  std::span<double const> ascending() const { return ascending_; }
  std::vector<double> descending() const;

  bool is_finite() const;

 private:
  explicit PhaseVector(std::vector<double> ascending);

  std::vector<double> ascending_;
};

enum class SumMethod {
  kAuto,        // recurrence once N > 4d, direct otherwise
  kDirect,      // every monomial reduced mod 1 independently
  kRecurrence,  // finite-difference table of phases, renormalized every 2^12 steps
};

// Terms per renormalization of the finite-difference table.
inline constexpr std::int64_t kRecurrenceBlock = std::int64_t{1} << 12;

// f_d(alpha; N), or f_d(alpha; N, gamma) = sum e(... + alpha_1 n + gamma n).
// Throws DomainError for N < 1 or nonfinite input, OverflowError if N^d does
// not fit the exact integer path.
Complex eval_f(PhaseVector const& alpha, std::int64_t N,
               std::optional<double> gamma = std::nullopt,
               SumMethod method = SumMethod::kAuto);

// Same sum with two-term coefficients (c_1, ..., c_d ascending), used where
// coefficients come out of an exact reduction and must not be rounded.
Complex eval_f(std::span<Phase const> coeffs_ascending, std::int64_t N,
               Phase gamma = {}, SumMethod method = SumMethod::kAuto);

// Phase of the n-th term, alpha_d n^d + ... + alpha_1 n mod 1.
Phase term_phase(PhaseVector const& alpha, std::int64_t n);

// K(gamma) = sum_{1 <= z <= N} e(gamma z). Closed form away from integers;
// direct summation when |sin(pi gamma)| < kKernelSeriesThreshold.
inline constexpr double kKernelSeriesThreshold = 1e-8;
Complex eval_K(double gamma, std::int64_t N);

// u(i, l) = binom(l, i) (-y)^(l - i) for 0 <= i <= l <= d, zero above the
// diagonal. These are the weights of Omega(n - y; alpha) = sum_i c_i n^i.
class ShiftWeights {
 public:
  ShiftWeights(int degree, std::int64_t y);

  int degree() const { return degree_; }
  std::int64_t y() const { return y_; }
  BigInt const& at(int i, int l) const { return weights_.at(index(i, l)); }

 private:
  std::size_t index(int i, int l) const {
    return static_cast<std::size_t>(i) * (degree_ + 1) + static_cast<std::size_t>(l);
  }

  int degree_;
  std::int64_t y_;
  std::vector<BigInt> weights_;
};

// c_i(alpha, y) = sum_{l=i}^{d} binom(l, i) (-y)^(l - i) alpha_l, i = 0..d,
// reduced mod 1 and kept as two-term phases.
struct ShiftedCoefficients {
  PhaseVector base;
  std::int64_t y;
  std::vector<Phase> c;  // c[i] for i = 0..d

  // (c_1, ..., c_d) as the coefficient vector of the shifted sum.
  std::span<Phase const> leading() const { return std::span(c).subspan(1); }
};

ShiftedCoefficients shift_coeffs(PhaseVector const& alpha, std::int64_t y);

// The same map over exact rationals; alpha_ascending[i - 1] = alpha_i.
std::vector<Rational> shift_coeffs_exact(std::span<Rational const> alpha_ascending,
                                         std::int64_t y);

// det(d c_i / d alpha_l)_{1 <= i, l <= d}, by fraction-free elimination.
BigInt shift_jacobian_determinant(int degree, std::int64_t y);

struct ShiftIdentityReport {
  double polynomial_error = 0.0;  // max_n ||Omega(n - y) - sum_i c_i n^i||_{R/Z}
  double reindex_error = 0.0;     // |sum_{y < n <= N + y} e(Omega(n - y)) - f(alpha; N)|
  double integral_error = 0.0;    // |int e(c_0 - gamma y) f(c; 2N, gamma) K(-gamma) - f(alpha; N)|
  bool integral_checked = false;

  double max_error() const;
};

// Integral route is evaluated exactly for N <= kShiftIntegralMaxN (the
// integrand is a trigonometric polynomial of degree < 4N in gamma).
inline constexpr std::int64_t kShiftIntegralMaxN = 4096;

ShiftIdentityReport shift_identity_report(PhaseVector const& alpha, std::int64_t y,
                                          std::int64_t N);

// Polynomial and reindexed-sum deviations; the integral route is in the report.
inline double verify_shift_identity(PhaseVector const& alpha, std::int64_t y,
                                    std::int64_t N) {
  ShiftIdentityReport const r = shift_identity_report(alpha, y, N);
  return r.polynomial_error > r.reindex_error ? r.polynomial_error : r.reindex_error;
}

// max_n |Omega(n - y; alpha) - sum_i c_i n^i| over 1 <= n <= N + y, exactly.
Rational verify_shift_identity_exact(std::span<Rational const> alpha_ascending,
                                     std::int64_t y, std::int64_t N);

}  // namespace vmvt::phases
