#include "vmvt/phases.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vmvt/errors.hpp"

namespace vmvt::phases {

namespace {

// Neumaier-compensated complex accumulator.
class ComplexSum {
 public:
  void add(Complex z) {
    add_part(re_, re_c_, z.real());
    add_part(im_, im_c_, z.imag());
  }
  Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    double const t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

void require_length(std::int64_t N) {
  if (N < 1) throw DomainError("Weyl sum length N must be >= 1, got " + std::to_string(N));
}

// P(n) = sum_i c_i n^i + gamma n modulo 1, exact up to two-term rounding.
Phase polynomial_phase(std::span<Phase const> coeffs, Phase gamma, Int128 n) {
  Phase acc = frac_mul(gamma, n);
  Int128 power = 1;
  for (Phase const& c : coeffs) {
    power = checked_mul(power, n);
    acc = add(acc, frac_mul(c, power));
  }
  return acc;
}

Complex sum_direct(std::span<Phase const> coeffs, Phase gamma, std::int64_t N) {
  ComplexSum sum;
  for (std::int64_t n = 1; n <= N; ++n) sum.add(unit(polynomial_phase(coeffs, gamma, n)));
  return sum.value();
}

// Forward differences D_k = Delta^k P(n0), k = 0..d, each mod 1. Delta^d P is
// constant, so D_0 walks P(n0), P(n0 + 1), ... by repeated addition.
Complex sum_recurrence(std::span<Phase const> coeffs, Phase gamma, std::int64_t N) {
  int const d = static_cast<int>(coeffs.size());
  std::vector<Phase> values(d + 1);
  std::vector<Phase> diff(d + 1);
  ComplexSum sum;
  for (std::int64_t start = 1; start <= N; start += kRecurrenceBlock) {
    for (int j = 0; j <= d; ++j) values[j] = polynomial_phase(coeffs, gamma, start + j);
    // Delta^k P(start) = sum_j (-1)^(k-j) binom(k, j) P(start + j).
    for (int k = 0; k <= d; ++k) {
      Phase acc{};
      std::int64_t binom = 1;
      for (int j = 0; j <= k; ++j) {
        std::int64_t const sign = ((k - j) % 2 == 0) ? 1 : -1;
        acc = add(acc, frac_mul(values[j], Int128{sign * binom}));
        binom = binom * (k - j) / (j + 1);
      }
      diff[k] = acc;
    }
    std::int64_t const stop = std::min(N, start + kRecurrenceBlock - 1);
    for (std::int64_t n = start; n <= stop; ++n) {
      sum.add(unit(diff[0]));
      for (int k = 0; k < d; ++k) diff[k] = add(diff[k], diff[k + 1]);
    }
  }
  return sum.value();
}

std::vector<Phase> to_phases(PhaseVector const& alpha) {
  std::vector<Phase> out;
  out.reserve(alpha.degree());
  for (double a : alpha.ascending()) out.push_back(phase_of(a));
  return out;
}

}  // namespace

PhaseVector::PhaseVector(std::vector<double> ascending) : ascending_(std::move(ascending)) {
  if (ascending_.size() < 2) {
    throw DomainError("phase polynomial degree must be >= 2, got " +
                      std::to_string(ascending_.size()));
  }
}

PhaseVector PhaseVector::from_descending(std::vector<double> coeffs) {
  std::reverse(coeffs.begin(), coeffs.end());
  return PhaseVector(std::move(coeffs));
}

PhaseVector PhaseVector::from_ascending(std::vector<double> coeffs) {
  return PhaseVector(std::move(coeffs));
}

PhaseVector PhaseVector::zero(int degree) {
  if (degree < 2) throw DomainError("phase polynomial degree must be >= 2");
  return PhaseVector(std::vector<double>(static_cast<std::size_t>(degree), 0.0));
}

std::vector<double> PhaseVector::descending() const {
  return {ascending_.rbegin(), ascending_.rend()};
}

bool PhaseVector::is_finite() const {
  return std::all_of(ascending_.begin(), ascending_.end(),
                     [](double a) { return std::isfinite(a); });
}

Complex eval_f(std::span<Phase const> coeffs, std::int64_t N, Phase gamma, SumMethod method) {
  require_length(N);
  if (coeffs.size() < 2) throw DomainError("phase polynomial degree must be >= 2");
  for (Phase const& c : coeffs) {
    if (!std::isfinite(c.hi) || !std::isfinite(c.lo)) throw DomainError("nonfinite coefficient");
  }
  if (!std::isfinite(gamma.hi) || !std::isfinite(gamma.lo)) throw DomainError("nonfinite gamma");
  // Fails early (OverflowError) if the exact path cannot represent (N + d)^d.
  checked_pow(Int128{N} + static_cast<Int128>(coeffs.size()), static_cast<int>(coeffs.size()));

  if (method == SumMethod::kAuto) {
    method = N > 4 * static_cast<std::int64_t>(coeffs.size()) ? SumMethod::kRecurrence
                                                                   : SumMethod::kDirect;
  }
  return method == SumMethod::kDirect ? sum_direct(coeffs, gamma, N)
                                      : sum_recurrence(coeffs, gamma, N);
}

Complex eval_f(PhaseVector const& alpha, std::int64_t N, std::optional<double> gamma,
               SumMethod method) {
  if (!alpha.is_finite()) throw DomainError("nonfinite Weyl sum coefficient");
  if (gamma && !std::isfinite(*gamma)) throw DomainError("nonfinite gamma");
  std::vector<Phase> const coeffs = to_phases(alpha);
  return eval_f(coeffs, N, gamma ? phase_of(*gamma) : Phase{}, method);
}

Phase term_phase(PhaseVector const& alpha, std::int64_t n) {
  std::vector<Phase> const coeffs = to_phases(alpha);
  return polynomial_phase(coeffs, Phase{}, n);
}

Complex eval_K(double gamma, std::int64_t N) {
  require_length(N);
  if (!std::isfinite(gamma)) throw DomainError("nonfinite gamma");
  double const theta = wrap(gamma);
  double const s = std::sin(std::numbers::pi * theta);
  if (std::abs(s) < kKernelSeriesThreshold) {
    ComplexSum sum;
    for (std::int64_t z = 1; z <= N; ++z) sum.add(unit(frac_mul(theta, z)));
    return sum.value();
  }
  // K = e(theta) (e(N theta) - 1) / (e(theta) - 1), with e(x) - 1 written as
  // -2 sin^2(pi x) + i sin(2 pi x) to avoid cancellation.
  auto minus_one = [](double x) {
    double const sp = std::sin(std::numbers::pi * x);
    return Complex{-2.0 * sp * sp, std::sin(2.0 * std::numbers::pi * x)};
  };
  double const n_theta = frac_mul(theta, N).value();
  return unit(theta) * minus_one(n_theta) / minus_one(theta);
}

ShiftWeights::ShiftWeights(int degree, std::int64_t y) : degree_(degree), y_(y) {
  if (degree < 1) throw DomainError("shift weights need degree >= 1");
  weights_.assign(static_cast<std::size_t>(degree + 1) * (degree + 1), BigInt{0});
  // Row l of Pascal's triangle times powers of -y.
  for (int l = 0; l <= degree; ++l) {
    BigInt binom = 1;
    for (int i = l; i >= 0; --i) {
      BigInt power = 1;
      for (int k = 0; k < l - i; ++k) power *= -y;
      weights_[index(i, l)] = binom * power;
      binom = binom * i / (l - i + 1);
    }
  }
}

ShiftedCoefficients shift_coeffs(PhaseVector const& alpha, std::int64_t y) {
  if (y < 1) throw DomainError("shift y must be >= 1");
  if (!alpha.is_finite()) throw DomainError("nonfinite coefficient");
  int const d = alpha.degree();
  ShiftWeights const w(d, y);
  std::vector<Phase> c(static_cast<std::size_t>(d + 1));
  for (int i = 0; i <= d; ++i) {
    Phase acc{};
    for (int l = std::max(i, 1); l <= d; ++l) acc = add(acc, frac_mul(alpha.coeff(l), w.at(i, l)));
    c[i] = acc;
  }
  return {alpha, y, std::move(c)};
}

std::vector<Rational> shift_coeffs_exact(std::span<Rational const> alpha, std::int64_t y) {
  if (y < 1) throw DomainError("shift y must be >= 1");
  int const d = static_cast<int>(alpha.size());
  ShiftWeights const w(d, y);
  std::vector<Rational> c(static_cast<std::size_t>(d + 1), Rational{0});
  for (int i = 0; i <= d; ++i) {
    for (int l = std::max(i, 1); l <= d; ++l) c[i] += Rational(w.at(i, l)) * alpha[l - 1];
  }
  return c;
}

BigInt shift_jacobian_determinant(int degree, std::int64_t y) {
  ShiftWeights const w(degree, y);
  std::vector<std::vector<BigInt>> m(degree, std::vector<BigInt>(degree));
  for (int i = 1; i <= degree; ++i) {
    for (int l = 1; l <= degree; ++l) m[i - 1][l - 1] = w.at(i, l);
  }
  // Bareiss fraction-free elimination; every division is exact.
  BigInt previous = 1;
  int sign = 1;
  for (int k = 0; k < degree; ++k) {
    if (m[k][k] == 0) {
      int p = k + 1;
      while (p < degree && m[p][k] == 0) ++p;
      if (p == degree) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < degree; ++i) {
      for (int j = k + 1; j < degree; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / previous;
      }
    }
    previous = m[k][k];
  }
  return sign * m[degree - 1][degree - 1];
}

double ShiftIdentityReport::max_error() const {
  return std::max({polynomial_error, reindex_error, integral_error});
}

ShiftIdentityReport shift_identity_report(PhaseVector const& alpha, std::int64_t y,
                                          std::int64_t N) {
  require_length(N);
  if (y < 1 || y > N) throw DomainError("shift identity needs 1 <= y <= N");
  ShiftedCoefficients const shifted = shift_coeffs(alpha, y);
  std::vector<Phase> const coeffs = to_phases(alpha);
  ShiftIdentityReport report;

  ComplexSum reindexed;
  for (std::int64_t n = 1; n <= N + y; ++n) {
    Phase const lhs = polynomial_phase(coeffs, Phase{}, Int128{n} - y);
    Phase rhs = shifted.c[0];
    Int128 power = 1;
    for (int i = 1; i <= alpha.degree(); ++i) {
      power = checked_mul(power, n);
      rhs = add(rhs, frac_mul(shifted.c[i], power));
    }
    report.polynomial_error =
        std::max(report.polynomial_error, std::abs(add(lhs, negate(rhs)).value()));
    if (n > y) reindexed.add(unit(lhs));
  }
  Complex const direct = eval_f(alpha, N);
  report.reindex_error = std::abs(reindexed.value() - direct);

  if (N <= kShiftIntegralMaxN) {
    // Picking out n - y = z needs the conjugate kernel K(-gamma). Frequencies
    // of the integrand lie in (-2N, 2N), so the M = 4N point rule is exact.
    std::int64_t const M = 4 * N;
    ComplexSum integral;
    for (std::int64_t k = 0; k < M; ++k) {
      double const gamma = (static_cast<double>(k) + 0.5) / static_cast<double>(M);
      Phase const prefactor = add(shifted.c[0], frac_mul(gamma, -y));
      Complex const term = unit(prefactor) * eval_f(shifted.leading(), 2 * N, phase_of(gamma)) *
                           eval_K(-gamma, N);
      integral.add(term);
    }
    report.integral_error = std::abs(integral.value() / static_cast<double>(M) - direct);
    report.integral_checked = true;
  }
  return report;
}

Rational verify_shift_identity_exact(std::span<Rational const> alpha, std::int64_t y,
                                     std::int64_t N) {
  std::vector<Rational> const c = shift_coeffs_exact(alpha, y);
  int const d = static_cast<int>(alpha.size());
  Rational worst = 0;
  for (std::int64_t n = 1; n <= N + y; ++n) {
    Rational lhs = 0;
    Rational rhs = 0;
    BigInt shifted_power = 1;
    BigInt power = 1;
    for (int i = 1; i <= d; ++i) {
      shifted_power *= (n - y);
      power *= n;
      lhs += alpha[i - 1] * Rational(shifted_power);
      rhs += c[i] * Rational(power);
    }
    rhs += c[0];
    Rational const diff = abs(lhs - rhs);
    if (diff > worst) worst = diff;
  }
  return worst;
}

}  // namespace vmvt::phases
