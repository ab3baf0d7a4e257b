#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>

#include "cli.hpp"
#include "vmvt/arcs.hpp"
#include "vmvt/counting.hpp"
#include "vmvt/cutoffs.hpp"
#include "vmvt/numeric.hpp"
#include "vmvt/phases.hpp"

namespace vmvt::cli {

namespace {

class Reporter {
 public:
  explicit Reporter(std::ostream& out) : out_(out) {}

  void check(std::string const& name, bool ok, std::string const& detail) {
    out_ << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    out_.flush();
    if (!ok) ++failures_;
  }
  int failures() const { return failures_; }

 private:
  std::ostream& out_;
  int failures_ = 0;
};

counting::SystemSpec full_system(int d, int s, std::int64_t N) {
  counting::SystemSpec spec;
  spec.d = d;
  spec.s = s;
  spec.N = N;
  for (int i = 1; i <= d; ++i) spec.zero_powers.push_back(i);
  return spec;
}

void mitm_vs_brute(Reporter& rep, unsigned workers) {
  struct Case {
    int d, s;
    std::int64_t lo, hi;
  };
  counting::Options opts;
  opts.workers = workers;
  int cases = 0, bad = 0;
  for (Case c : {Case{2, 2, 1, 8}, Case{2, 3, 1, 6}, Case{3, 2, 1, 8}}) {
    for (std::int64_t N = c.lo; N <= c.hi; ++N) {
      auto const spec = full_system(c.d, c.s, N);
      ++cases;
      if (counting::count_mitm(spec, opts).count != counting::count_brute(spec).count) ++bad;
    }
  }
  counting::SystemSpec win = counting::SystemSpec{};
  win.d = 3;
  win.s = 5;
  win.N = 4;
  win.zero_powers = {1, 3};
  win.window = counting::Window{2, 4};
  auto const m = counting::count_mitm(win, opts).count;
  auto const b = counting::count_brute(win).count;
  ++cases;
  if (m != b) ++bad;
  rep.check("mitm_equals_brute", bad == 0,
            std::to_string(cases - bad) + "/" + std::to_string(cases) + " systems, window count " +
                std::to_string(m));

  counting::SystemSpec ps = full_system(3, 2, 8);
  ps.zero_powers = {1, 3};
  ps.profile_power = 2;
  auto const fast = counting::profile(ps, opts);
  auto const slow = counting::profile_brute(ps);
  rep.check("profile_equals_brute", fast.entries == slow.entries && fast.symmetric(),
            std::to_string(fast.entries.size()) + " entries, total " + std::to_string(fast.total()));
}

void closed_form(Reporter& rep, unsigned workers) {
  counting::Options opts;
  opts.workers = workers;
  std::int64_t first_bad = 0;
  for (std::int64_t N = 1; N <= 64; ++N) {
    auto const c = counting::count_mitm(full_system(2, 2, N), opts).count;
    if (c != static_cast<counting::Count>(2 * N * N - N) && first_bad == 0) first_bad = N;
  }
  rep.check("quadratic_closed_form", first_bad == 0,
            first_bad == 0 ? "count = 2N^2 - N for N <= 64" : "mismatch at N = " + std::to_string(first_bad));
}

void identities(Reporter& rep) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit01(0.0, 1.0);

  double worst_shift = 0.0;
  bool jacobian_ok = true;
  for (int d = 2; d <= 5; ++d) {
    for (std::int64_t y : {1, 2, 7, 31}) {
      std::vector<double> a(d);
      for (double& x : a) x = unit01(rng);
      auto const alpha = phases::PhaseVector::from_ascending(a);
      worst_shift = std::max(worst_shift, phases::verify_shift_identity(alpha, y, 64));
      if (phases::shift_jacobian_determinant(d, y) != 1) jacobian_ok = false;
    }
  }
  rep.check("shift_identity", worst_shift <= 1e-9, "max error " + format_double(worst_shift));
  rep.check("shift_jacobian", jacobian_ok, "det = 1 for d = 2..5");

  double worst_k = 0.0;
  std::uniform_int_distribution<std::int64_t> pickN(1, 200);
  for (int k = 0; k < 10000; ++k) {
    double const gamma = unit01(rng) - 0.5;
    std::int64_t const N = pickN(rng);
    phases::Complex direct = 0.0;
    for (std::int64_t z = 1; z <= N; ++z) direct += phases::unit(phases::frac_mul(gamma, z));
    worst_k = std::max(worst_k, std::abs(phases::eval_K(gamma, N) - direct));
  }
  rep.check("dirichlet_closed_form", worst_k <= 1e-10, "max error " + format_double(worst_k));

  auto const D = arcs::build_dissection(64, 0.5);
  int disagree = 0;
  for (int k = 0; k < 100000; ++k) {
    double const alpha = unit01(rng);
    if (arcs::classify(alpha, 64, 0.5).major != D.contains(alpha)) ++disagree;
  }
  bool const arcs_ok = D.overlap_measure == 0.0 && D.total_measure <= 2.0 / 8.0 && disagree == 0;
  rep.check("arc_dissection", arcs_ok,
            "overlap " + format_double(D.overlap_measure) + ", measure " +
                format_double(D.total_measure) + ", disagreements " + std::to_string(disagree));

  double worst_psi = 0.0;
  bool support_ok = true;
  for (int k = 0; k < 1000; ++k) {
    double const beta = unit01(rng);
    double const v = cutoffs::psi(0.5, beta, 16);
    worst_psi = std::max(worst_psi, std::abs(v - cutoffs::psi(0.5, beta + 3.0, 16)));
    double const dist = std::abs(phases::wrap(beta));
    if (dist >= 2.0 / 4.0 && v != 0.0) support_ok = false;
    if (v < 0.0) support_ok = false;
  }
  rep.check("psi_periodic_supported", worst_psi <= 1e-12 && support_ok,
            "periodicity error " + format_double(worst_psi));

  cutoffs::CutoffConfig const cfg{1.0, 12, 0.05};
  double min_g = 1.0;
  for (int k = 0; k < 10000; ++k) {
    min_g = std::min(min_g, cutoffs::g_exact(unit01(rng), unit01(rng), 3, cfg, 0.8));
  }
  rep.check("g_nonnegative", min_g >= 0.0, "min G " + format_double(min_g));
}

}  // namespace

int run_selftest(std::ostream& out, unsigned workers) {
  auto const t0 = std::chrono::steady_clock::now();
  Reporter rep(out);
  mitm_vs_brute(rep, workers);
  closed_form(rep, workers);
  identities(rep);
  double const s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << "# selftest: " << rep.failures() << " failure(s) in " << format_double(s) << " s\n";
  return rep.failures();
}

}  // namespace vmvt::cli
