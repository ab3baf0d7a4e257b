#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "vmvt/arcs.hpp"
#include "vmvt/counting.hpp"
#include "vmvt/cutoffs.hpp"
#include "vmvt/errors.hpp"
#include "vmvt/experiments.hpp"
#include "vmvt/moments.hpp"
#include "vmvt/numeric.hpp"
#include "vmvt/parallel.hpp"

namespace vmvt::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::string quote(std::string const& arg) {
  bool plain = !arg.empty();
  for (char c : arg) {
    bool const ok = std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_.,/=:+-").find(c) != std::string_view::npos;
    if (!ok) plain = false;
  }
  if (plain) return arg;
  std::string q = "'";
  for (char c : arg) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

std::string argv_line(std::vector<std::string> const& argv) {
  std::string line = "vmvt";
  for (std::size_t k = 1; k < argv.size(); ++k) line += " " + quote(argv[k]);
  return line;
}

std::string join(std::vector<int> const& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

std::string join(std::vector<std::int64_t> const& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

struct Common {
  unsigned workers = 0;
  std::string out_path;
  bool no_timing = false;
};

void add_common(CLI::App* app, Common& c, bool timing_flag) {
  app->add_option("--workers", c.workers, "worker threads (default: $VMVT_THREADS or all cores)");
  app->add_option("--out", c.out_path, "write data to this file instead of stdout");
  if (timing_flag) app->add_flag("--no-timing", c.no_timing, "write 0 in the runtime column");
}

struct SystemArgs {
  int d = 2;
  int s = 1;
  std::int64_t N = 1;
  std::vector<int> zero;
  std::string range = "n";
  std::optional<int> window_power;
  std::optional<std::int64_t> window_h;
  std::string method = "mitm";
};

void add_system(CLI::App* app, SystemArgs& a) {
  app->add_option("--d", a.d, "degree")->required();
  app->add_option("--s", a.s, "half-tuple size")->required();
  app->add_option("--n", a.N, "range bound N")->required();
  app->add_option("--zero", a.zero, "powers with sigma_i = 0, comma separated")->delimiter(',');
  app->add_option("--range", a.range, "variable range: n for [1,N], 2n for [1,2N]")
      ->check(CLI::IsMember({"n", "2n"}));
  app->add_option("--method", a.method, "mitm or brute")->check(CLI::IsMember({"mitm", "brute"}));
}

counting::SystemSpec to_system(SystemArgs const& a) {
  counting::SystemSpec s;
  s.d = a.d;
  s.s = a.s;
  s.N = a.N;
  s.zero_powers = a.zero;
  s.range = a.range == "2n" ? counting::VariableRange::kOneToTwoN : counting::VariableRange::kOneToN;
  if (a.window_power.has_value() != a.window_h.has_value()) {
    throw DomainError("--window-power and --window-h go together");
  }
  if (a.window_power) s.window = counting::Window{*a.window_power, *a.window_h};
  return s;
}

class Output {
 public:
  Output(Common const& c, std::ostream& fallback) {
    if (!c.out_path.empty()) {
      file_ = std::make_unique<std::ofstream>(c.out_path);
      if (!*file_) throw DomainError("cannot open " + c.out_path);
    }
    out_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

void header(std::ostream& out, std::string const& cmd, std::vector<std::string> const& argv) {
  out << "# vmvt " << cmd << "\n# argv: " << argv_line(argv) << '\n';
}

// ------------------------------------------------------------------ commands

int cmd_count(SystemArgs const& a, Common const& c, bool check_diagonal,
              std::vector<std::string> const& argv, std::ostream& stdout_) {
  counting::SystemSpec const spec = to_system(a);
  spec.validate();
  counting::Options opts;
  opts.workers = c.workers;
  counting::CountResult const r =
      a.method == "brute" ? counting::count_brute(spec) : counting::count_mitm(spec, opts);
  Output o(c, stdout_);
  std::ostream& out = *o;
  header(out, "count", argv);
  out << "# system: " << spec.describe() << '\n';
  out << "# workers: " << resolve_workers(c.workers) << '\n';
  double const diagonal = std::pow(static_cast<double>(spec.upper()), spec.s);
  bool const holds = static_cast<double>(r.count) >= diagonal;
  out << "# diagonal_bound: " << format_double(diagonal) << " holds=" << (holds ? "true" : "false") << '\n';
  out << "count,method,records,runtime_ms\n";
  out << r.count << ',' << counting::to_string(r.method) << ',' << r.records << ','
      << (c.no_timing ? std::string("0") : format_double(r.elapsed_ms)) << '\n';
  return check_diagonal && !holds ? kExitVerdictFailed : kExitOk;
}

int cmd_profile(SystemArgs const& a, int i0, Common const& c, std::string const& dump,
                std::string const& encoding, std::vector<std::string> const& argv,
                std::ostream& stdout_) {
  counting::SystemSpec spec = to_system(a);
  spec.profile_power = i0;
  spec.validate();
  counting::Options opts;
  opts.workers = c.workers;
  counting::FrequencyProfile const p =
      a.method == "brute" ? counting::profile_brute(spec) : counting::profile(spec, opts);
  if (!dump.empty()) {
    counting::write_profile_file(dump, p, encoding == "fixed" ? counting::ProfileEncoding::kFixed
                                                              : counting::ProfileEncoding::kVarint);
  }
  Output o(c, stdout_);
  std::ostream& out = *o;
  header(out, "profile", argv);
  out << "# system: " << spec.describe() << '\n';
  out << "# total: " << p.total() << " symmetric=" << (p.symmetric() ? "true" : "false") << '\n';
  out << "b,count\n";
  for (auto const& [b, n] : p.entries) out << b << ',' << n << '\n';
  return p.symmetric() ? kExitOk : kExitVerdictFailed;
}

struct MomentArgs {
  int d = 2;
  std::optional<int> s;
  std::optional<double> p;
  double u = 0.5;
  std::int64_t N = 0;
  int restricted_power = 0;
  std::string method = "exact";
  std::uint64_t samples = std::uint64_t{1} << 20;
  std::uint64_t seed = 1;
  int resolution = 8;
};

void add_moment(CLI::App* app, MomentArgs& a, bool need_n) {
  app->add_option("--d", a.d, "degree")->required();
  auto* s = app->add_option("--s", a.s, "half order, p = 2s");
  auto* p = app->add_option("--p", a.p, "moment order p > 0");
  s->excludes(p);
  app->add_option("--u", a.u, "box exponent, restricted coefficient in [0, N^-u)")->required();
  if (need_n) app->add_option("--n", a.N, "N");
  app->add_option("--restricted-power", a.restricted_power, "restricted coefficient index (default d-1)");
  app->add_option("--method", a.method, "exact, mc or quadrature")
      ->check(CLI::IsMember({"exact", "mc", "quadrature"}));
  app->add_option("--samples", a.samples, "Monte Carlo samples");
  app->add_option("--seed", a.seed, "Monte Carlo seed");
  app->add_option("--resolution", a.resolution, "quadrature points per unit frequency");
}

moments::MomentSpec to_moment(MomentArgs const& a) {
  moments::MomentSpec m;
  m.d = a.d;
  if (a.s) m.p = 2.0 * *a.s;
  else if (a.p) m.p = *a.p;
  else throw DomainError("give --s or --p");
  m.u = a.u;
  m.N = a.N;
  m.restricted_power = a.restricted_power;
  m.method = moments::method_from_string(a.method);
  return m;
}

moments::MomentOptions moment_options(MomentArgs const& a, unsigned workers) {
  moments::MomentOptions o;
  o.counting.workers = workers;
  o.mc.samples = a.samples;
  o.mc.seed = a.seed;
  o.mc.workers = workers;
  o.quadrature.resolution = a.resolution;
  o.quadrature.workers = workers;
  return o;
}

int cmd_moment(MomentArgs const& a, Common const& c, std::string const& profile_in,
               std::string const& profile_out, std::vector<std::string> const& argv,
               std::ostream& stdout_) {
  moments::MomentSpec spec;
  moments::MomentResult r;
  auto const t0 = Clock::now();
  if (!profile_in.empty()) {
    counting::FrequencyProfile const p = counting::read_profile_file(profile_in);
    spec = to_moment(a);
    if (spec.N == 0) spec.N = p.spec.N;
    moments::MomentSpec expect = spec;
    expect.method = moments::Method::kExactEven;
    counting::SystemSpec const want = moments::exact_even_system(expect);
    if (want.d != p.spec.d || want.s != p.spec.s || want.N != p.spec.N ||
        want.zero_powers != p.spec.zero_powers || want.profile_power != p.spec.profile_power ||
        p.spec.range != counting::VariableRange::kOneToN) {
      throw DomainError("profile dump does not match the requested moment");
    }
    r = moments::moment_from_profile(p, spec.u);
  } else {
    spec = to_moment(a);
    if (spec.N < 1) throw DomainError("--n is required");
    moments::MomentOptions const opts = moment_options(a, c.workers);
    if (!profile_out.empty()) {
      if (spec.method != moments::Method::kExactEven) throw DomainError("--profile-out needs --method exact");
      counting::FrequencyProfile const p = counting::profile(moments::exact_even_system(spec), opts.counting);
      counting::write_profile_file(profile_out, p);
      r = moments::moment_from_profile(p, spec.u);
    } else {
      r = moments::compute_moment(spec, opts);
    }
  }
  double const ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  Output o(c, stdout_);
  std::ostream& out = *o;
  header(out, "moment", argv);
  out << "# config: d=" << spec.d << " p=" << format_double(spec.p) << " u=" << format_double(spec.u)
      << " N=" << spec.N << " restricted_power=" << spec.restricted() << " method="
      << moments::to_string(r.method) << '\n';
  if (r.method == moments::Method::kMonteCarlo) {
    out << "# samples=" << r.samples << " seed=" << a.seed << '\n';
  }
  out << "# imag_residual: " << format_double(r.imag_residual) << '\n';
  experiments::write_csv_header(out);
  experiments::SweepRow row{spec.N, r.value, r.std_error, moments::to_string(r.method), ms, {}};
  experiments::write_csv_row(out, row, !c.no_timing);
  return kExitOk;
}

int cmd_sweep(MomentArgs const& a, Common const& c, std::vector<std::int64_t> const& grid,
              std::optional<double> tolerance, bool windowed, double lo, double hi, bool no_ratio,
              std::vector<std::string> const& argv, std::ostream& stdout_) {
  Output o(c, stdout_);
  std::ostream& out = *o;
  header(out, "sweep", argv);
  auto emit = [&](experiments::SweepRow const& row) {
    experiments::write_csv_row(out, row, !c.no_timing);
    out.flush();
  };
  experiments::SweepResult r;
  if (windowed) {
    out << "# config: windowed system d=3 s=5 zero={1,3} window=(2,H=N) grid=" << join(grid)
        << " slope_window=[" << format_double(lo) << "," << format_double(hi) << "]\n";
    experiments::write_csv_header(out);
    experiments::WindowedOptions opts;
    opts.slope_lo = lo;
    opts.slope_hi = hi;
    opts.ratio_diagnostic = !no_ratio;
    opts.counting.workers = c.workers;
    opts.on_row = emit;
    r = experiments::sweep_windowed(grid, opts);
  } else {
    moments::MomentSpec spec = to_moment(a);
    out << "# config: d=" << spec.d << " p=" << format_double(spec.p) << " u=" << format_double(spec.u)
        << " restricted_power=" << spec.restricted() << " method=" << moments::to_string(spec.method)
        << " grid=" << join(grid) << '\n';
    if (spec.method == moments::Method::kMonteCarlo) {
      out << "# samples=" << a.samples << " seed=" << a.seed << '\n';
    }
    experiments::write_csv_header(out);
    experiments::SweepOptions opts;
    opts.tolerance = tolerance;
    opts.moment = moment_options(a, c.workers);
    opts.on_row = emit;
    r = experiments::sweep_moment(spec, grid, opts);
  }
  experiments::write_summary(out, r);
  return r.verdict == experiments::Verdict::kOutsideTol ? kExitVerdictFailed : kExitOk;
}

int cmd_arcs(std::int64_t N, double u, std::vector<double> const& probes, Common const& c,
             std::vector<std::string> const& argv, std::ostream& stdout_) {
  arcs::ArcDissection const D = arcs::build_dissection(N, u);
  Output o(c, stdout_);
  std::ostream& out = *o;
  header(out, "arcs", argv);
  out << "q,a,center,halfwidth\n";
  for (arcs::Arc const& arc : D.arcs) {
    out << arc.center.q << ',' << arc.center.a << ',' << format_double(arc.center.value()) << ','
        << format_double(D.W / static_cast<double>(arc.center.q)) << '\n';
  }
  out << "# summary: N=" << D.N << " u=" << format_double(D.u) << " f=" << format_double(D.f)
      << " Q=" << D.Q << " W=" << format_double(D.W) << " arcs=" << D.arcs.size()
      << " total_measure=" << format_double(D.total_measure)
      << " overlap_measure=" << format_double(D.overlap_measure)
      << " union_bound=" << format_double(2.0 * static_cast<double>(D.Q) * D.W)
      << " disjointness_condition=" << (D.disjointness_condition() ? "true" : "false") << '\n';
  for (double alpha : probes) {
    arcs::Classification const k = arcs::classify(alpha, N, u);
    out << "# classify: alpha=" << format_double(alpha) << ' '
        << (k.major ? "major " + std::to_string(k.witness.a) + "/" + std::to_string(k.witness.q)
                    : std::string("minor"))
        << '\n';
  }
  return kExitOk;
}

struct KernelArgs {
  std::string table = "phi-hat";
  double A = 1.0;
  std::int64_t N = 10;
  double u = 0.8;
  double eps = cutoffs::kDefaultEps;
  int d = 3;
  double alpha_dm1 = 0.0;
  int points = 65;
  double max = 64.0;
};

int cmd_kernels(KernelArgs const& k, Common const& c, std::vector<std::string> const& argv,
                std::ostream& stdout_) {
  if (k.points < 2) throw DomainError("--points must be >= 2");
  Output o(c, stdout_);
  std::ostream& out = *o;
  header(out, "kernels", argv);
  auto grid = [&](double lo, double hi, int i, bool closed) {
    int const den = closed ? k.points - 1 : k.points;
    return lo + (hi - lo) * static_cast<double>(i) / den;
  };
  if (k.table == "phi") {
    out << "x,phi\n";
    for (int i = 0; i < k.points; ++i) {
      double const x = grid(-2.5, 2.5, i, true);
      out << format_double(x) << ',' << format_double(cutoffs::bump(x)) << '\n';
    }
  } else if (k.table == "phi-hat") {
    auto const& table = cutoffs::PhiHatTable::instance();
    out << "xi,phi_hat,phi_hat_table\n";
    for (int i = 0; i < k.points; ++i) {
      double const xi = grid(0.0, k.max, i, true);
      out << format_double(xi) << ',' << format_double(cutoffs::phi_hat(xi)) << ','
          << format_double(table(xi)) << '\n';
    }
  } else if (k.table == "psi") {
    out << "# A=" << format_double(k.A) << " N=" << k.N << '\n' << "beta,psi\n";
    for (int i = 0; i < k.points; ++i) {
      double const beta = grid(0.0, 1.0, i, false);
      out << format_double(beta) << ',' << format_double(cutoffs::psi(k.A, beta, k.N)) << '\n';
    }
  } else {
    cutoffs::CutoffConfig const cfg{1.0, k.N, k.eps};
    out << "# d=" << k.d << " N=" << k.N << " u=" << format_double(k.u) << " eps=" << format_double(k.eps)
        << " alpha_dm1=" << format_double(k.alpha_dm1) << '\n' << "alpha_d,g_exact,g_bound\n";
    for (int i = 0; i < k.points; ++i) {
      double const ad = grid(0.0, 1.0, i, false);
      out << format_double(ad) << ',' << format_double(cutoffs::g_exact(k.alpha_dm1, ad, k.d, cfg, k.u))
          << ',' << format_double(cutoffs::g_bound(ad, k.d, k.u, k.N, k.eps)) << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int run(std::vector<std::string> const& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weyl sums, restricted moments and power-sum counts", "vmvt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "vmvt 0.1.0");

  Common common;
  int result = kExitOk;
  std::function<int()> action;

  // count
  SystemArgs count_args;
  bool check_diagonal = false;
  auto* count = app.add_subcommand("count", "exact solution count of a power-sum system");
  add_system(count, count_args);
  add_common(count, common, true);
  count->add_option("--window-power", count_args.window_power, "power of the windowed constraint");
  count->add_option("--window-h", count_args.window_h, "half-width H of the window");
  count->add_flag("--check-diagonal", check_diagonal, "exit 1 unless count >= upper^s");
  count->callback([&] {
    action = [&] { return cmd_count(count_args, common, check_diagonal, argv, out); };
  });

  // profile
  SystemArgs prof_args;
  int i0 = 1;
  std::string dump, encoding = "varint";
  auto* prof = app.add_subcommand("profile", "frequency profile r(b) of one power sum");
  add_system(prof, prof_args);
  add_common(prof, common, false);
  prof->add_option("--i0", i0, "profiled power")->required();
  prof->add_option("--dump", dump, "write the binary profile dump here");
  prof->add_option("--encoding", encoding, "count encoding of the dump")
      ->check(CLI::IsMember({"varint", "fixed"}));
  prof->callback([&] {
    action = [&] { return cmd_profile(prof_args, i0, common, dump, encoding, argv, out); };
  });

  // moment
  MomentArgs mom_args;
  std::string profile_in, profile_out;
  auto* mom = app.add_subcommand("moment", "restricted-box moment I_{p,d}(u; N)");
  add_moment(mom, mom_args, true);
  add_common(mom, common, true);
  mom->add_option("--profile-in", profile_in, "re-kernel a dumped profile instead of counting");
  mom->add_option("--profile-out", profile_out, "dump the profile used by the exact method");
  mom->callback([&] {
    action = [&] { return cmd_moment(mom_args, common, profile_in, profile_out, argv, out); };
  });

  // sweep
  MomentArgs sweep_args;
  std::vector<std::int64_t> grid;
  std::optional<double> tolerance;
  bool windowed = false, no_ratio = false;
  double slope_lo = 4.6, slope_hi = 5.6;
  auto* sweep = app.add_subcommand("sweep", "N-grid sweep with a log-log slope fit");
  sweep->add_option("--d", sweep_args.d, "degree");
  auto* s_opt = sweep->add_option("--s", sweep_args.s, "half order, p = 2s");
  auto* p_opt = sweep->add_option("--p", sweep_args.p, "moment order p > 0");
  s_opt->excludes(p_opt);
  sweep->add_option("--u", sweep_args.u, "box exponent");
  sweep->add_option("--restricted-power", sweep_args.restricted_power, "restricted coefficient index");
  sweep->add_option("--method", sweep_args.method, "exact, mc or quadrature")
      ->check(CLI::IsMember({"exact", "mc", "quadrature"}));
  sweep->add_option("--samples", sweep_args.samples, "Monte Carlo samples per point");
  sweep->add_option("--seed", sweep_args.seed, "Monte Carlo seed");
  sweep->add_option("--resolution", sweep_args.resolution, "quadrature resolution");
  sweep->add_option("--grid", grid, "strictly increasing N values, comma separated")
      ->delimiter(',')
      ->required();
  sweep->add_option("--tolerance", tolerance, "slope tolerance (default 0.35 exact, 0.5 mc)");
  sweep->add_flag("--windowed", windowed, "count the windowed d=3, s=5 system instead");
  sweep->add_option("--slope-lo", slope_lo, "windowed slope window, lower end");
  sweep->add_option("--slope-hi", slope_hi, "windowed slope window, upper end");
  sweep->add_flag("--no-ratio", no_ratio, "skip the count ratio diagnostic");
  add_common(sweep, common, true);
  sweep->callback([&] {
    action = [&] {
      return cmd_sweep(sweep_args, common, grid, tolerance, windowed, slope_lo, slope_hi, no_ratio,
                       argv, out);
    };
  });

  // arcs
  std::int64_t arcs_n = 0;
  double arcs_u = 0.5;
  std::vector<double> probes;
  auto* arc = app.add_subcommand("arcs", "major arc dissection for (N, u)");
  arc->add_option("--n", arcs_n, "N")->required();
  arc->add_option("--u", arcs_u, "u")->required();
  arc->add_option("--classify", probes, "alpha values to classify")->delimiter(',');
  add_common(arc, common, false);
  arc->callback([&] { action = [&] { return cmd_arcs(arcs_n, arcs_u, probes, common, argv, out); }; });

  // kernels
  KernelArgs kargs;
  auto* ker = app.add_subcommand("kernels", "tables of phi, phi_hat, Psi_A and G");
  ker->add_option("--table", kargs.table, "phi, phi-hat, psi or g")
      ->check(CLI::IsMember({"phi", "phi-hat", "psi", "g"}));
  ker->add_option("--a", kargs.A, "Psi exponent A");
  ker->add_option("--n", kargs.N, "N");
  ker->add_option("--u", kargs.u, "u (G table)");
  ker->add_option("--eps", kargs.eps, "eps (G table)");
  ker->add_option("--d", kargs.d, "degree (G table)");
  ker->add_option("--alpha-dm1", kargs.alpha_dm1, "alpha_{d-1} (G table)");
  ker->add_option("--points", kargs.points, "table rows");
  ker->add_option("--max", kargs.max, "largest xi (phi-hat table)");
  add_common(ker, common, false);
  ker->callback([&] { action = [&] { return cmd_kernels(kargs, common, argv, out); }; });

  // selftest
  auto* self = app.add_subcommand("selftest", "oracle-equivalence suite");
  add_common(self, common, false);
  self->callback([&] {
    action = [&] {
      Output o(common, out);
      return run_selftest(*o, common.workers) == 0 ? kExitOk : kExitVerdictFailed;
    };
  });

  std::vector<std::string> rev(argv.rbegin(), argv.rend() - (argv.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (CLI::ParseError const& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "vmvt: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    result = action ? action() : kExitUsage;
  } catch (BudgetError const& e) {
    err << "vmvt: " << e.what() << '\n';
    return kExitBudget;
  } catch (OverflowError const& e) {
    err << "vmvt: " << e.what() << '\n';
    return kExitBudget;
  } catch (DomainError const& e) {
    err << "vmvt: " << e.what() << '\n';
    return kExitUsage;
  } catch (std::bad_alloc const&) {
    err << "vmvt: out of memory\n";
    return kExitBudget;
  } catch (std::exception const& e) {
    err << "vmvt: " << e.what() << '\n';
    return kExitUsage;
  }
  return result;
}

}  // namespace vmvt::cli
