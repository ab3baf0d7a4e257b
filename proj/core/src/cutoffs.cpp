#include "vmvt/cutoffs.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vmvt/errors.hpp"
#include "vmvt/numeric.hpp"
#include "vmvt/phase_arith.hpp"
#include "vmvt/phases.hpp"

namespace vmvt::cutoffs {

namespace {

using phases::add;
using phases::frac_mul;
using phases::negate;
using phases::phase_of;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK qk15).
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// noise: absolute rounding noise of one integrand value, which bounds how far
// the Gauss-Kronrod difference can usefully be pushed on a panel.
template <class F>
double adaptive_gk15(F const& f, double a, double b, double tol, double noise, int depth) {
  double const center = 0.5 * (a + b);
  double const half = 0.5 * (b - a);
  double const fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int k = 0; k < 7; ++k) {
    double const dx = half * kNodes[k];
    double const pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[k] * pair;
    if (k % 2 == 1) gauss += kGaussWeights[k / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  double const floor = 16.0 * noise * half;
  if (std::abs(kronrod - gauss) <= std::max(tol, floor) || depth == 0) return kronrod;
  return adaptive_gk15(f, a, center, 0.5 * tol, noise, depth - 1) +
         adaptive_gk15(f, center, b, 0.5 * tol, noise, depth - 1);
}

// Breakpoints on [0, 2] for an integrand oscillating at frequency xi: uniform
// panels of at most a quarter period, refined geometrically towards x = 2
// where phi flattens out like exp(-1/(4(2 - x))).
std::vector<double> phi_breakpoints(double xi) {
  std::vector<double> pts;
  int const panels = std::max(8, static_cast<int>(std::ceil(8.0 * std::abs(xi))));
  double const edge = 1.75;
  for (int k = 0; k <= panels; ++k) pts.push_back(edge * k / panels);
  for (double gap = 0.125; gap > 1.0 / 64; gap *= 0.5) pts.push_back(2.0 - gap);
  pts.push_back(2.0);
  return pts;
}

}  // namespace

double bump(double x) {
  double const t = 4.0 - x * x;
  if (t <= 0.0) return 0.0;
  return std::exp(1.0 / 3.0 - 1.0 / t);
}

double bump_max() { return std::exp(1.0 / 12.0); }

void CutoffConfig::validate() const {
  if (N < 2) throw DomainError("cutoff scale N must be >= 2");
  if (!(A > 0.0)) throw DomainError("cutoff exponent A must be > 0");
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("eps must lie in (0, 1/2)");
}

double psi(double A, double beta, std::int64_t N) {
  if (!(A > 0.0)) throw DomainError("Psi_A needs A > 0");
  if (N < 2) throw DomainError("Psi_A needs N >= 2");
  double const scale = std::pow(static_cast<double>(N), A);  // 1 / width
  double const reach = 2.0 / scale;
  double const r = phases::wrap(beta);
  auto const first = static_cast<std::int64_t>(std::ceil(-reach - r));
  auto const last = static_cast<std::int64_t>(std::floor(reach - r));
  double total = 0.0;
  for (std::int64_t j = first; j <= last; ++j) total += bump((r + static_cast<double>(j)) * scale);
  return total;
}

double psi_fourier(double A, double beta, std::int64_t N, std::int64_t J) {
  if (!(A > 0.0)) throw DomainError("Psi_A needs A > 0");
  PhiHatTable const& table = PhiHatTable::instance();
  double const width = std::pow(static_cast<double>(N), -A);
  double const r = phases::wrap(beta);
  double total = 0.0;
  for (std::int64_t j = J; j >= 1; --j) {
    double const w = table(static_cast<double>(j) * width);
    if (w == 0.0) continue;
    total += w * std::cos(kTwoPi * frac_mul(r, j).value());
  }
  return width * (table(0.0) + 2.0 * total);
}

double phi_hat(double xi) {
  if (!std::isfinite(xi)) throw DomainError("nonfinite xi");
  // phi even => phi_hat(xi) = 2 int_0^2 phi(x) cos(2 pi x xi) dx.
  auto integrand = [xi](double x) { return bump(x) * std::cos(kTwoPi * x * xi); };
  std::vector<double> const pts = phi_breakpoints(xi);
  double const per_panel = 0.5 * kPhiHatTolerance / static_cast<double>(pts.size());
  // cos(2 pi x xi) is only known to about 4 pi |xi| ulp for x < 2.
  double const noise =
      std::numeric_limits<double>::epsilon() * (1.0 + 4.0 * std::numbers::pi * std::abs(xi));
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    total += adaptive_gk15(integrand, pts[k], pts[k + 1], per_panel, noise, 30);
  }
  return 2.0 * total;
}

PhiHatTable const& PhiHatTable::instance() {
  static PhiHatTable const table;
  return table;
}

// Nodes from the trapezoid sum on x = m / 1024. phi and all its derivatives
// vanish at +-2, so the sum equals the integral up to aliases
// phi_hat(1024 k +- xi), which are below double precision for xi <= max_xi.
PhiHatTable::PhiHatTable() : step_(1.0 / 256.0), max_xi_(384.0) {
  constexpr std::int64_t kSamplesPerUnit = 1024;
  constexpr std::int64_t kStepsPerUnit = 256;
  constexpr std::int64_t kPeriod = kSamplesPerUnit * kStepsPerUnit;
  constexpr double dx = 1.0 / kSamplesPerUnit;
  std::int64_t const samples = 2 * kSamplesPerUnit;  // x in [0, 2)
  std::vector<double> phi(samples), xphi(samples), x2phi(samples);
  for (std::int64_t m = 0; m < samples; ++m) {
    double const x = static_cast<double>(m) * dx;
    phi[m] = bump(x);
    xphi[m] = x * phi[m];
    x2phi[m] = x * x * phi[m];
  }
  std::vector<double> cos_table(kPeriod), sin_table(kPeriod);
  for (std::int64_t t = 0; t < kPeriod; ++t) {
    double const angle = kTwoPi * static_cast<double>(t) / kPeriod;
    cos_table[t] = std::cos(angle);
    sin_table[t] = std::sin(angle);
  }
  auto const nodes = static_cast<std::size_t>(max_xi_ * kStepsPerUnit) + 1;
  value_.resize(nodes);
  first_.resize(nodes);
  second_.resize(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    // x * xi = m k / kPeriod exactly, so trig values come from the table.
    double c0 = 0.0, s1 = 0.0, c2 = 0.0;
    auto const stride = static_cast<std::int64_t>(k) % kPeriod;
    std::int64_t t = 0;
    for (std::int64_t m = 1; m < samples; ++m) {
      t += stride;
      if (t >= kPeriod) t -= kPeriod;
      c0 += phi[m] * cos_table[t];
      s1 += xphi[m] * sin_table[t];
      c2 += x2phi[m] * cos_table[t];
    }
    value_[k] = dx * (phi[0] + 2.0 * c0);
    first_[k] = -kTwoPi * dx * 2.0 * s1;
    second_[k] = -kTwoPi * kTwoPi * dx * 2.0 * c2;
  }
}

double PhiHatTable::operator()(double xi) const {
  xi = std::abs(xi);
  if (!(xi < max_xi_)) return 0.0;
  double const pos = xi / step_;
  auto const k = static_cast<std::size_t>(pos);
  double const t = pos - static_cast<double>(k);
  double const t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  double const h = step_;
  double const h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  double const h10 = t - 6 * t3 + 8 * t4 - 3 * t5;
  double const h20 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  double const h01 = 10 * t3 - 15 * t4 + 6 * t5;
  double const h11 = -4 * t3 + 7 * t4 - 3 * t5;
  double const h21 = 0.5 * (t3 - 2 * t4 + t5);
  return value_[k] * h00 + h * first_[k] * h10 + h * h * second_[k] * h20 +
         value_[k + 1] * h01 + h * first_[k + 1] * h11 + h * h * second_[k + 1] * h21;
}

namespace {

// alpha_{d-1} - d y alpha_d reduced mod 1.
double g_argument(double alpha_dm1, double alpha_d, int d, std::int64_t y) {
  return add(phase_of(alpha_dm1), negate(frac_mul(alpha_d, static_cast<std::int64_t>(d) * y)))
      .value();
}

void check_g_inputs(CutoffConfig const& cfg, double u, int d) {
  cfg.validate();
  if (d < 2) throw DomainError("G needs degree d >= 2");
  if (!(u > cfg.eps)) {
    throw DomainError("G uses Psi_{u - eps} and needs u > eps (u = " + std::to_string(u) + ")");
  }
}

}  // namespace

double g_exact(double alpha_dm1, double alpha_d, int d, CutoffConfig const& cfg, double u) {
  check_g_inputs(cfg, u, d);
  double total = 0.0;
  for (std::int64_t y = 1; y <= cfg.N; ++y) {
    total += psi(u - cfg.eps, g_argument(alpha_dm1, alpha_d, d, y), cfg.N);
  }
  return total / static_cast<double>(cfg.N);
}

double g_fourier(double alpha_dm1, double alpha_d, int d, CutoffConfig const& cfg, double u,
                 std::int64_t J) {
  check_g_inputs(cfg, u, d);
  double total = 0.0;
  for (std::int64_t y = 1; y <= cfg.N; ++y) {
    total += psi_fourier(u - cfg.eps, g_argument(alpha_dm1, alpha_d, d, y), cfg.N, J);
  }
  return total / static_cast<double>(cfg.N);
}

double g_bound(double alpha_d, int d, double u, std::int64_t N, double eps) {
  if (!(u > 0.0)) throw DomainError("g_bound needs u > 0");
  if (N < 1) throw DomainError("g_bound needs N >= 1");
  std::int64_t const J = floor_pow(N, u);
  double total = 0.0;
  for (std::int64_t j = -J; j <= J; ++j) {
    double const gamma = frac_mul(alpha_d, static_cast<std::int64_t>(d) * j).value();
    total += std::abs(phases::eval_K(gamma, N));
  }
  return std::pow(static_cast<double>(N), -u - 1.0 + eps) * total;
}

}  // namespace vmvt::cutoffs
