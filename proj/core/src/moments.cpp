#include "vmvt/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "vmvt/cutoffs.hpp"
#include "vmvt/errors.hpp"
#include "vmvt/parallel.hpp"
#include "vmvt/phases.hpp"

namespace vmvt::moments {

namespace {

constexpr double kPi = std::numbers::pi;

// Compensated summation.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    double const t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double magnitude_power(Complex f, double p) {
  double const n2 = std::norm(f);
  if (p == 2.0) return n2;
  if (p == 4.0) return n2 * n2;
  return std::pow(n2, 0.5 * p);
}

}  // namespace

char const* to_string(Method m) {
  switch (m) {
    case Method::kExactEven: return "exact";
    case Method::kMonteCarlo: return "mc";
    case Method::kQuadrature: return "quadrature";
  }
  return "?";
}

Method method_from_string(std::string const& name) {
  if (name == "exact" || name == "exact_even") return Method::kExactEven;
  if (name == "mc" || name == "monte_carlo") return Method::kMonteCarlo;
  if (name == "quadrature") return Method::kQuadrature;
  throw DomainError("unknown moment method '" + name + "'");
}

std::optional<int> MomentSpec::half_order() const {
  double const s = 0.5 * p;
  if (s >= 1.0 && s == std::floor(s) && s <= counting::kMaxHalfSize) return static_cast<int>(s);
  return std::nullopt;
}

double MomentSpec::box_measure() const { return std::pow(static_cast<double>(N), -u); }

void MomentSpec::validate() const {
  if (d < 2) throw DomainError("moment needs d >= 2");
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("moment needs p > 0");
  if (!(u > 0.0) || u > static_cast<double>(d - 1)) throw DomainError("moment needs 0 < u <= d - 1");
  if (N < 1) throw DomainError("moment needs N >= 1");
  int const r = restricted();
  if (r < 1 || r > d) throw DomainError("restricted power must lie in 1..d");
  if (method == Method::kExactEven && !half_order()) {
    throw DomainError("exact even moments need p = 2s with integer s >= 1");
  }
}

BoxKernel::BoxKernel(double u, std::int64_t N) : width_(std::pow(static_cast<double>(N), -u)) {}

Complex BoxKernel::operator()(std::int64_t b) const {
  if (b == 0) return {width_, 0.0};
  // (e(theta) - 1) / (2 pi i b) with theta = b * width reduced exactly.
  double const theta = phases::frac_mul(width_, static_cast<phases::Int128>(b)).value();
  double const sh = std::sin(kPi * theta);
  double const bd = static_cast<double>(b);
  return {std::sin(2.0 * kPi * theta) / (2.0 * kPi * bd), sh * sh / (kPi * bd)};
}

counting::SystemSpec exact_even_system(MomentSpec const& spec) {
  spec.validate();
  counting::SystemSpec sys;
  sys.d = spec.d;
  sys.s = *spec.half_order();
  sys.N = spec.N;
  sys.range = counting::VariableRange::kOneToN;
  int const r = spec.restricted();
  for (int i = 1; i <= spec.d; ++i) {
    if (i != r) sys.zero_powers.push_back(i);
  }
  sys.profile_power = r;
  return sys;
}

MomentResult moment_from_profile(counting::FrequencyProfile const& profile, double u) {
  BoxKernel const K(u, profile.spec.N);
  KahanSum re, im;
  for (auto const& [b, c] : profile.entries) {
    Complex const k = K(b);
    double const w = static_cast<double>(c);
    re.add(w * k.real());
    im.add(w * k.imag());
  }
  MomentResult out;
  out.value = re.value();
  out.imag_residual = std::abs(im.value());
  out.profile_entries = profile.entries.size();
  out.method = Method::kExactEven;
  return out;
}

MomentResult moment_exact_even(MomentSpec const& spec, counting::Options const& opts) {
  counting::FrequencyProfile const prof = counting::profile(exact_even_system(spec), opts);
  return moment_from_profile(prof, spec.u);
}

double mc_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t dim) {
  std::uint64_t const h = splitmix(splitmix(seed ^ splitmix(index)) + dim);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

MomentResult moment_mc(MomentSpec const& spec, McOptions const& opts) {
  spec.validate();
  if (opts.samples < kMcMinSamples) throw DomainError("Monte Carlo needs at least 1000 samples");
  double const width = spec.box_measure();
  int const r = spec.restricted();
  std::uint64_t const chunks = (opts.samples + kMcChunk - 1) / kMcChunk;
  using Buckets = std::array<double, kMcBuckets>;
  std::vector<Buckets> partial(chunks);
  parallel_for(chunks, opts.workers, [&](std::size_t c) {
    Buckets acc{};
    phases::PhaseVector alpha = phases::PhaseVector::zero(spec.d);
    std::uint64_t const begin = c * kMcChunk;
    std::uint64_t const end = std::min(opts.samples, begin + kMcChunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      for (int k = 1; k <= spec.d; ++k) {
        double x = mc_uniform(opts.seed, i, static_cast<std::uint64_t>(k));
        if (k == r) x *= width;
        alpha.set_coeff(k, x);
      }
      acc[i % kMcBuckets] += magnitude_power(phases::eval_f(alpha, spec.N), spec.p);
    }
    partial[c] = acc;
  });
  Buckets sum{};
  for (Buckets const& b : partial) {
    for (int k = 0; k < kMcBuckets; ++k) sum[k] += b[k];
  }
  std::array<double, kMcBuckets> means{};
  for (int k = 0; k < kMcBuckets; ++k) {
    // Bucket k holds the samples i = k mod 32 below `samples`.
    std::uint64_t const n = opts.samples / kMcBuckets + (static_cast<std::uint64_t>(k) < opts.samples % kMcBuckets ? 1 : 0);
    means[k] = sum[k] / static_cast<double>(n);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= kMcBuckets;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= kMcBuckets - 1;
  std::array<double, kMcBuckets> sorted = means;
  std::sort(sorted.begin(), sorted.end());
  double const median = 0.5 * (sorted[kMcBuckets / 2 - 1] + sorted[kMcBuckets / 2]);

  MomentResult out;
  out.value = width * median;
  // Asymptotic standard error of a median of k means: sqrt(pi/2) sd / sqrt(k).
  out.std_error = width * std::sqrt(0.5 * kPi) * std::sqrt(var / kMcBuckets);
  out.samples = opts.samples;
  out.method = Method::kMonteCarlo;
  return out;
}

namespace {

// Grid tables E[k * N + (n - 1)] = e(alpha_k n^i) for one axis.
std::vector<Complex> axis_table(int power, std::int64_t N, std::int64_t M, double lo, double len) {
  std::vector<Complex> t(static_cast<std::size_t>(M * N));
  for (std::int64_t k = 0; k < M; ++k) {
    double const alpha = lo + len * (static_cast<double>(k) + 0.5) / static_cast<double>(M);
    for (std::int64_t n = 1; n <= N; ++n) {
      auto const np = static_cast<phases::Int128>(phases::checked_pow(n, power));
      t[static_cast<std::size_t>(k * N + n - 1)] = phases::unit(phases::frac_mul(alpha, np));
    }
  }
  return t;
}

}  // namespace

MomentResult moment_quadrature(MomentSpec const& spec, QuadratureOptions const& opts) {
  spec.validate();
  if (opts.resolution < 1) throw DomainError("quadrature resolution must be >= 1");
  int const d = spec.d;
  int const r = spec.restricted();
  std::int64_t const N = spec.N;
  double const width = spec.box_measure();
  double const half = std::max(1.0, std::ceil(0.5 * spec.p));
  unsigned const workers = resolve_workers(opts.workers);

  // Periodic axes: every power except r.
  std::vector<int> axes;
  std::vector<std::int64_t> M;
  std::vector<std::vector<Complex>> tables;
  double periodic_points = 1.0;
  for (int i = 1; i <= d; ++i) {
    if (i == r) continue;
    double const m = opts.resolution * half * std::pow(static_cast<double>(N), i);
    if (m > opts.max_points) throw BudgetError("quadrature refused: axis too fine");
    axes.push_back(i);
    M.push_back(static_cast<std::int64_t>(m));
    periodic_points *= m;
  }
  double const freq_r = half * std::pow(static_cast<double>(N), r) * width;
  auto Mr = static_cast<std::int64_t>(std::max(8.0, std::ceil(opts.resolution * freq_r)));

  for (std::size_t a = 0; a < axes.size(); ++a) tables.push_back(axis_table(axes[a], N, M[a], 0.0, 1.0));
  std::size_t const outer = static_cast<std::size_t>(periodic_points);

  auto pass = [&](std::int64_t mr) {
    if (periodic_points * static_cast<double>(mr) > opts.max_points) {
      std::ostringstream os;
      os << "quadrature refused: " << periodic_points * static_cast<double>(mr)
         << " points exceed the budget of " << opts.max_points;
      throw BudgetError(os.str());
    }
    std::vector<Complex> const rt = axis_table(r, N, mr, 0.0, width);
    std::vector<double> slot(outer, 0.0);
    parallel_for(outer, workers, [&](std::size_t idx) {
      std::vector<Complex> prod(static_cast<std::size_t>(N), Complex(1.0, 0.0));
      std::size_t rest = idx;
      for (std::size_t a = 0; a < axes.size(); ++a) {
        auto const k = static_cast<std::int64_t>(rest % static_cast<std::size_t>(M[a]));
        rest /= static_cast<std::size_t>(M[a]);
        Complex const* row = tables[a].data() + k * N;
        for (std::int64_t n = 0; n < N; ++n) prod[n] *= row[n];
      }
      KahanSum acc;
      for (std::int64_t k = 0; k < mr; ++k) {
        Complex const* row = rt.data() + k * N;
        Complex f(0.0, 0.0);
        for (std::int64_t n = 0; n < N; ++n) f += prod[n] * row[n];
        acc.add(magnitude_power(f, spec.p));
      }
      slot[idx] = acc.value();
    });
    KahanSum total;
    for (double v : slot) total.add(v);
    return total.value() * width / (periodic_points * static_cast<double>(mr));
  };

  // Romberg table on the midpoint sequence mr, 2 mr, 4 mr, ...
  std::vector<std::vector<double>> R;
  double prev = 0.0;
  for (int level = 0; level < 16; ++level) {
    std::vector<double> row{pass(Mr)};
    for (int j = 1; j <= level; ++j) {
      double const f = std::pow(4.0, j);
      row.push_back(row[j - 1] + (row[j - 1] - R[level - 1][j - 1]) / (f - 1.0));
    }
    double const best = row.back();
    R.push_back(std::move(row));
    if (level > 0 && std::abs(best - prev) <= opts.rel_tol * std::abs(best)) {
      MomentResult out;
      out.value = std::max(0.0, best);
      out.samples = static_cast<std::uint64_t>(periodic_points) * static_cast<std::uint64_t>(Mr);
      out.method = Method::kQuadrature;
      return out;
    }
    prev = best;
    Mr *= 2;
  }
  throw BudgetError("quadrature did not converge within 16 doublings");
}

MomentResult compute_moment(MomentSpec const& spec, MomentOptions const& opts) {
  switch (spec.method) {
    case Method::kExactEven: return moment_exact_even(spec, opts.counting);
    case Method::kMonteCarlo: return moment_mc(spec, opts.mc);
    case Method::kQuadrature: return moment_quadrature(spec, opts.quadrature);
  }
  throw DomainError("unknown moment method");
}

counting::JointProfile weighted_count_profile(int d, int s, std::int64_t N,
                                              counting::Options const& opts) {
  if (d < 2) throw DomainError("weighted counts need d >= 2");
  counting::SystemSpec sys;
  sys.d = d;
  sys.s = s;
  sys.N = N;
  sys.range = counting::VariableRange::kOneToTwoN;
  for (int i = 1; i <= d - 2; ++i) sys.zero_powers.push_back(i);
  return counting::joint_profile(sys, d - 1, d, opts);
}

namespace {

// Y(a, b) of the weighted-count formulas.
double shift_count(std::int64_t a, std::int64_t b, int d, std::int64_t N) {
  if (a == 0) return b == 0 ? static_cast<double>(N) : 0.0;
  std::int64_t const den = static_cast<std::int64_t>(d) * a;
  if ((-b) % den != 0) return 0.0;
  std::int64_t const y = -b / den;
  return (y >= 1 && y <= N) ? 1.0 : 0.0;
}

}  // namespace

double weighted_count_S(counting::JointProfile const& joint, double u) {
  int const d = joint.spec.d;
  std::int64_t const N = joint.spec.N;
  if (!(u > 0.0)) throw DomainError("S needs u > 0");
  auto const& phi = cutoffs::PhiHatTable::instance();
  double const Nd = static_cast<double>(N);
  double const scale = std::pow(Nd, u);
  KahanSum acc;
  for (auto const& e : joint.entries) {
    double const y = shift_count(e.a, e.b, d, N);
    if (y == 0.0) continue;
    acc.add(static_cast<double>(e.count) * y * phi(static_cast<double>(e.a) / scale));
  }
  return acc.value() / scale;
}

double weighted_count_U(counting::JointProfile const& joint, double u, double eps) {
  int const d = joint.spec.d;
  std::int64_t const N = joint.spec.N;
  if (!(eps > 0.0) || !(u > eps)) throw DomainError("U needs 0 < eps < u");
  auto const& phi = cutoffs::PhiHatTable::instance();
  double const Nd = static_cast<double>(N);
  double const beta_scale = std::pow(Nd, u + 1.0);
  double const g_scale = std::pow(Nd, u - eps);
  KahanSum acc;
  for (auto const& e : joint.entries) {
    double const y = shift_count(e.a, e.b, d, N);
    if (y == 0.0) continue;
    acc.add(static_cast<double>(e.count) * y * phi(static_cast<double>(e.b) / beta_scale) *
            phi(static_cast<double>(e.a) / g_scale));
  }
  return acc.value() / (Nd * beta_scale * g_scale);
}

double weighted_count_S(int d, int s, std::int64_t N, double u, counting::Options const& opts) {
  return weighted_count_S(weighted_count_profile(d, s, N, opts), u);
}

double weighted_count_U(int d, int s, std::int64_t N, double u, double eps,
                        counting::Options const& opts) {
  return weighted_count_U(weighted_count_profile(d, s, N, opts), u, eps);
}

double weighted_count_T(int d, int s, std::int64_t N, double u, double eps,
                        counting::Options const& opts) {
  return static_cast<double>(N) * weighted_count_U(d, s, N, u, eps, opts);
}

}  // namespace vmvt::moments
