// One PASS/FAIL line per acceptance criterion; exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vmvt/arcs.hpp"
#include "vmvt/counting.hpp"
#include "vmvt/cutoffs.hpp"
#include "vmvt/experiments.hpp"
#include "vmvt/moments.hpp"
#include "vmvt/numeric.hpp"
#include "vmvt/phases.hpp"

using namespace vmvt;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, std::string const& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

counting::SystemSpec full(int d, int s, std::int64_t N) {
  counting::SystemSpec spec;
  spec.d = d;
  spec.s = s;
  spec.N = N;
  for (int i = 1; i <= d; ++i) spec.zero_powers.push_back(i);
  return spec;
}

moments::MomentSpec moment(int d, int s, double u, std::int64_t N, int r = 0) {
  moments::MomentSpec m;
  m.d = d;
  m.p = 2.0 * s;
  m.u = u;
  m.N = N;
  m.restricted_power = r;
  return m;
}

// Every profile built here goes through this, so symmetry is checked on all.
std::size_t g_profiles = 0, g_asymmetric = 0;
counting::FrequencyProfile tracked(counting::FrequencyProfile p) {
  ++g_profiles;
  if (!p.symmetric()) ++g_asymmetric;
  return p;
}

void criterion1(Check& c) {
  auto const t0 = Clock::now();
  int systems = 0;
  struct Range {
    int d, s;
    std::int64_t hi;
  };
  for (Range r : {Range{2, 2, 8}, Range{2, 3, 6}, Range{3, 2, 8}}) {
    for (std::int64_t N = 1; N <= r.hi; ++N) {
      auto const spec = full(r.d, r.s, N);
      auto const m = counting::count_mitm(spec).count, b = counting::count_brute(spec).count;
      c.require(m == b, "d=" + std::to_string(r.d) + " s=" + std::to_string(r.s) + " N=" + std::to_string(N));
      ++systems;
    }
  }
  counting::SystemSpec w;
  w.d = 3;
  w.s = 5;
  w.N = 4;
  w.zero_powers = {1, 3};
  w.window = counting::Window{2, 4};
  auto const wm = counting::count_mitm(w).count;
  c.require(wm == counting::count_brute(w).count, "windowed system");
  c.require(wm == 31504, "windowed frozen value 31504");
  ++systems;

  counting::SystemSpec ps = full(3, 2, 8);
  ps.zero_powers = {1, 3};
  ps.profile_power = 2;
  c.require(tracked(counting::profile(ps)).entries == tracked(counting::profile_brute(ps)).entries,
            "profile histogram");
  double const secs = seconds_since(t0);
  c.require(secs < 60.0, "runtime < 60 s");
  c.detail << systems << " counts + 1 profile equal, window count " << wm << ", " << format_double(secs) << " s";
}

void criterion2(Check& c) {
  for (std::int64_t N = 1; N <= 8; ++N) {
    c.require(counting::count_brute(full(2, 2, N)).count == static_cast<counting::Count>(2 * N * N - N),
              "brute 2N^2-N at N=" + std::to_string(N));
  }
  for (std::int64_t N = 1; N <= 64; ++N) {
    c.require(counting::count_mitm(full(2, 2, N)).count == static_cast<counting::Count>(2 * N * N - N),
              "mitm 2N^2-N at N=" + std::to_string(N));
  }
  double worst = 0.0;
  for (int d : {2, 3}) {
    for (double u : {0.25, 0.5, 1.0}) {
      for (std::int64_t N : {16, 64}) {
        auto const spec = moment(d, 1, u, N);
        auto const p = tracked(counting::profile(moments::exact_even_system(spec)));
        double const v = moments::moment_from_profile(p, u).value;
        worst = std::max(worst, rel(v, std::pow(static_cast<double>(N), 1.0 - u)));
      }
    }
  }
  c.require(worst <= 1e-9, "I_2 = N^{1-u} to 1e-9");
  c.detail << "2N^2-N for N<=64, max rel error of I_2 " << format_double(worst);
}

void criterion3(Check& c) {
  auto const q_spec = [] {
    auto m = moment(2, 2, 0.5, 4, 1);
    m.method = moments::Method::kQuadrature;
    return m;
  }();
  double const exact = moments::moment_exact_even(q_spec).value;
  double const quad = moments::moment_quadrature(q_spec).value;
  c.require(rel(quad, exact) <= 1e-6, "exact vs quadrature 1e-6");
  c.detail << "quad rel " << format_double(rel(quad, exact));

  struct McCase {
    int d, s;
    std::int64_t N;
    double u;
    std::uint64_t samples;
  };
  for (McCase k : {McCase{3, 2, 8, 1.0, 1u << 20}, McCase{2, 3, 32, 0.5, 1u << 22}}) {
    auto spec = moment(k.d, k.s, k.u, k.N);
    double const ex = moments::moment_exact_even(spec).value;
    spec.method = moments::Method::kMonteCarlo;
    moments::McOptions opts;
    opts.samples = k.samples;
    auto const mc = moments::moment_mc(spec, opts);
    double const z = (mc.value - ex) / mc.std_error;
    c.require(std::abs(z) <= 4.0, "mc within 4 stderr at d=" + std::to_string(k.d));
    c.detail << ", mc z(d=" << k.d << ",N=" << k.N << ") " << format_double(z);
  }

  double const S = moments::weighted_count_S(3, 1, 2, 1.0);
  double const U = moments::weighted_count_U(3, 1, 2, 1.0, 0.05);
  double const T = moments::weighted_count_T(3, 1, 2, 1.0, 0.05);
  double const Sq = oracle::s_quadrature_d3(1, 2, 1.0);
  double const Uq = oracle::u_quadrature_d3(1, 2, 1.0, 0.05);
  double const Tq = oracle::t_quadrature_d3(1, 2, 1.0, 0.05);
  c.require(rel(S, Sq) <= 1e-5, "S vs quadrature");
  c.require(rel(U, Uq) <= 1e-5, "U vs quadrature");
  c.require(rel(T, 2.0 * U) <= 1e-5, "T = N U");
  c.require(rel(Tq, 2.0 * U) <= 1e-5, "quadrature T = N U");
  c.detail << ", S rel " << format_double(rel(S, Sq)) << ", U rel " << format_double(rel(U, Uq))
           << ", T/(NU)-1 " << format_double(rel(Tq, 2.0 * U));
}

void check_profiles(int d, int s, double u, std::vector<std::int64_t> const& grid) {
  for (std::int64_t N : grid) tracked(counting::profile(moments::exact_even_system(moment(d, s, u, N))));
}

void criterion4(Check& c) {
  auto const t0 = Clock::now();
  std::vector<std::int64_t> const grid = {32, 64, 128, 256, 512};
  auto const six = experiments::sweep_moment(moment(2, 3, 0.5, 1), grid);
  c.require(six.fit.slope >= 2.65 && six.fit.slope <= 3.35, "p=6 slope in [2.65, 3.35]");
  auto const two = experiments::sweep_moment(moment(2, 1, 0.5, 1), grid);
  c.require(std::abs(two.fit.slope - 0.5) <= 1e-6, "p=2 slope 0.5 +- 1e-6");
  double const secs = seconds_since(t0);
  c.require(secs < 600.0, "runtime < 10 min");
  check_profiles(2, 3, 0.5, grid);
  c.detail << "p=6 slope " << format_double(six.fit.slope) << ", p=2 slope " << format_double(two.fit.slope) << ", "
           << format_double(secs) << " s";
}

void criterion5(Check& c) {
  auto const t0 = Clock::now();
  std::vector<std::int64_t> const grid = {8, 16, 32, 64};
  auto const r = experiments::sweep_moment(moment(3, 2, 1.0, 1), grid);
  c.require(r.fit.slope >= 0.6 && r.fit.slope <= 1.4, "slope in [0.6, 1.4]");
  double const secs = seconds_since(t0);
  c.require(secs < 300.0, "runtime < 5 min");
  check_profiles(3, 2, 1.0, grid);
  c.detail << "slope " << format_double(r.fit.slope) << ", " << format_double(secs) << " s";
}

void criterion6(Check& c) {
  auto const t0 = Clock::now();
  std::vector<std::int64_t> const grid = {8, 12, 16, 20, 24};
  experiments::WindowedOptions opts;
  opts.ratio_diagnostic = false;
  auto const r = experiments::sweep_windowed(grid, opts);
  for (auto const& row : r.rows) {
    c.require(row.value >= std::pow(static_cast<double>(row.N), 5.0), "count >= N^5 at N=" + std::to_string(row.N));
  }
  c.require(r.fit.slope >= 4.6 && r.fit.slope <= 5.6, "slope in [4.6, 5.6]");
  double const secs = seconds_since(t0);
  c.require(secs < 900.0, "runtime < 15 min");
  c.detail << "counts";
  for (auto const& row : r.rows) c.detail << ' ' << static_cast<std::uint64_t>(row.value);
  c.detail << ", slope " << format_double(r.fit.slope) << ", " << format_double(secs) << " s";
}

void criterion7(Check& c) {
  auto const D = arcs::build_dissection(64, 0.5);
  double const bound = 2.0 * std::pow(64.0, -0.5);
  c.require(D.overlap_measure == 0.0, "overlap = 0");
  c.require(D.total_measure <= bound, "measure bound");
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int disagree = 0;
  for (int k = 0; k < 100000; ++k) {
    double const a = u01(rng);
    if (arcs::classify(a, 64, 0.5).major != D.contains(a)) ++disagree;
  }
  c.require(disagree == 0, "classify vs union");
  c.detail << D.arcs.size() << " arcs, measure " << format_double(D.total_measure) << " <= "
           << format_double(bound) << ", " << disagree << " disagreements in 1e5";
}

void criterion8(Check& c) {
  std::mt19937_64 rng(888);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  double shift = 0.0;
  bool det = true;
  for (int d = 2; d <= 6; ++d) {
    for (std::int64_t y : {1, 5, 17, 64}) {
      std::vector<double> a(d);
      for (double& x : a) x = u01(rng);
      shift = std::max(shift, phases::verify_shift_identity(phases::PhaseVector::from_ascending(a), y, 64));
      det = det && phases::shift_jacobian_determinant(d, y) == 1;
    }
  }
  c.require(shift <= 1e-9, "shift identity");
  c.require(det, "Jacobian = 1");

  std::uniform_int_distribution<std::int64_t> pickN(1, 10000);
  double worst_k = 0.0;
  for (int k = 0; k < 10000; ++k) {
    double const g = u01(rng) * 2.0 - 1.0;
    std::int64_t const N = k % 10 == 0 ? pickN(rng) : pickN(rng) % 300 + 1;
    phases::Complex direct = 0.0;
    for (std::int64_t z = 1; z <= N; ++z) direct += phases::unit(phases::frac_mul(g, z));
    worst_k = std::max(worst_k, std::abs(phases::eval_K(g, N) - direct));
  }
  c.require(worst_k <= 1e-10, "Dirichlet closed form");

  bool psi_ok = true;
  for (int k = 0; k < 10000; ++k) {
    double const beta = u01(rng) * 4.0 - 2.0;
    double const A = 0.2 + u01(rng);
    double const v = cutoffs::psi(A, beta, 20);
    if (v < 0.0 || std::abs(v - cutoffs::psi(A, beta + 1.0, 20)) > 1e-12) psi_ok = false;
    if (std::abs(beta - std::nearbyint(beta)) > 2.0 * std::pow(20.0, -A) && v != 0.0) psi_ok = false;
  }
  c.require(psi_ok, "Psi periodicity and support");

  cutoffs::CutoffConfig const cfg{1.0, 50, 0.05};
  double min_g = 1.0;
  for (int k = 0; k < 10000; ++k) min_g = std::min(min_g, cutoffs::g_exact(u01(rng), u01(rng), 3, cfg, 0.8));
  c.require(min_g >= 0.0, "G >= 0");
  c.require(g_asymmetric == 0, "r(b) = r(-b)");
  c.detail << "shift " << format_double(shift) << ", K " << format_double(worst_k) << ", min G "
           << format_double(min_g) << ", " << g_profiles << " profiles symmetric";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    char const* label;
    std::function<void(Check&)> run;
  };
  std::vector<Criterion> const all = {
      {1, "oracle equivalence", criterion1},
      {2, "closed forms", criterion2},
      {3, "method agreement", criterion3},
      {4, "d=2 u=1/2 slopes", criterion4},
      {5, "d=3 u=1 p=4 slope", criterion5},
      {6, "windowed d=3 s=5 count", criterion6},
      {7, "arc dissection", criterion7},
      {8, "identity suite", criterion8},
  };
  int failed = 0;
  for (auto const& k : all) {
    Check c;
    try {
      k.run(c);
    } catch (std::exception const& e) {
      c.ok = false;
      c.detail << " [exception: " << e.what() << "]";
    }
    if (!c.ok) ++failed;
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << k.id << " (" << k.label << "): " << c.detail.str()
              << std::endl;
  }
  std::cout << failed << " of " << all.size() << " criteria failed" << std::endl;
  return failed;
}
