#include "vmvt/experiments.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "vmvt/arcs.hpp"
#include "vmvt/cutoffs.hpp"
#include "vmvt/errors.hpp"
#include "vmvt/numeric.hpp"

namespace vmvt::experiments {

namespace {

using Clock = std::chrono::steady_clock;

void check_prediction_domain(int d, double p, double u) {
  if (d < 2) throw DomainError("prediction needs d >= 2");
  if (!(p > 0.0)) throw DomainError("prediction needs p > 0");
  if (!(u > 0.0) || u > static_cast<double>(d - 1)) throw DomainError("prediction needs 0 < u <= d - 1");
}

void check_grid(std::vector<std::int64_t> const& grid) {
  if (grid.size() < 3) throw DomainError("a sweep needs at least 3 grid points");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (grid[k] <= grid[k - 1]) throw DomainError("sweep grid must be strictly increasing");
  }
  if (grid.front() < 2) throw DomainError("sweep grid must start at N >= 2");
}

void fit_rows(SweepResult& r, bool weighted) {
  std::vector<double> n, v, e;
  for (SweepRow const& row : r.rows) {
    n.push_back(static_cast<double>(row.N));
    v.push_back(row.value);
    e.push_back(row.std_error);
  }
  r.fit = fit_slope(n, v, weighted ? std::span<double const>(e) : std::span<double const>());
}

std::string json_number(std::optional<double> v) { return v ? format_double(*v) : "null"; }

}  // namespace

char const* to_string(Regime r) {
  switch (r) {
    case Regime::kCrossoverMax: return "crossover_max";
    case Regime::kAboveThreshold: return "above_threshold";
    case Regime::kNoPrediction: return "no_prediction";
  }
  return "?";
}

char const* to_string(Verdict v) {
  switch (v) {
    case Verdict::kWithinTol: return "within_tol";
    case Verdict::kOutsideTol: return "outside_tol";
    case Verdict::kNoPrediction: return "no_prediction";
  }
  return "?";
}

ExponentPrediction predict_exponent(int d, double p, double u) {
  check_prediction_domain(d, p, u);
  double const diag = p - d * (d + 1) / 2.0;
  ExponentPrediction e{d, p, u, std::nullopt, Regime::kNoPrediction};
  if (u <= 1.0) {
    e.exponent = std::max(diag, p / 2.0 - u);
    e.regime = Regime::kCrossoverMax;
  } else if (p >= d * (d + 1) - 2.0 * d / (d + 1 - u)) {
    e.exponent = diag;
    e.regime = Regime::kAboveThreshold;
  }
  return e;
}

ExponentPrediction predict_exponent_leading_box(int d, double p, double u) {
  check_prediction_domain(d, p, u);
  return {d, p, u, std::max(p - d * (d + 1) / 2.0, p / 2.0 - u), Regime::kCrossoverMax};
}

ExponentPrediction predict_for(moments::MomentSpec const& spec) {
  int const r = spec.restricted();
  if (r == spec.d) return predict_exponent_leading_box(spec.d, spec.p, spec.u);
  if (r == spec.d - 1) return predict_exponent(spec.d, spec.p, spec.u);
  return {spec.d, spec.p, spec.u, std::nullopt, Regime::kNoPrediction};
}

SlopeFit fit_slope(std::span<double const> N, std::span<double const> values,
                   std::span<double const> std_errors) {
  std::size_t const n = N.size();
  if (n < 3 || values.size() != n) throw DomainError("slope fit needs >= 3 matching points");
  if (!std_errors.empty() && std_errors.size() != n) throw DomainError("stderr length mismatch");
  std::vector<double> x(n), y(n), w(n, 1.0);
  bool weighted = !std_errors.empty();
  for (std::size_t k = 0; k < n; ++k) {
    if (!(N[k] > 0.0) || !(values[k] > 0.0)) throw DomainError("slope fit needs positive N and values");
    x[k] = std::log(N[k]);
    y[k] = std::log(values[k]);
    if (weighted) {
      if (!(std_errors[k] > 0.0)) {
        weighted = false;
      } else {
        double const rel = std_errors[k] / values[k];
        w[k] = 1.0 / (rel * rel);
      }
    }
  }
  if (!weighted) std::fill(w.begin(), w.end(), 1.0);
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sw += w[k];
    sx += w[k] * x[k];
    sy += w[k] * y[k];
  }
  double const mx = sx / sw, my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += w[k] * (x[k] - mx) * (x[k] - mx);
    sxy += w[k] * (x[k] - mx) * (y[k] - my);
  }
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (weighted) {
    f.slope_stderr = std::sqrt(1.0 / sxx);
  } else {
    double ssr = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double const r = y[k] - f.intercept - f.slope * x[k];
      ssr += r * r;
    }
    f.slope_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  }
  return f;
}

SweepResult sweep_moment(moments::MomentSpec const& tmpl, std::vector<std::int64_t> const& grid,
                         SweepOptions const& opts) {
  check_grid(grid);
  SweepResult r;
  r.prediction = predict_for(tmpl);
  bool const mc = tmpl.method == moments::Method::kMonteCarlo;
  r.tolerance = opts.tolerance.value_or(mc ? kMcTolerance : kExactTolerance);
  r.label = "scaled-down property check at desk-scale N";
  for (std::int64_t N : grid) {
    moments::MomentSpec spec = tmpl;
    spec.N = N;
    auto const t0 = Clock::now();
    moments::MomentResult const m = moments::compute_moment(spec, opts.moment);
    SweepRow row;
    row.N = N;
    row.value = m.value;
    row.std_error = m.std_error;
    row.method = moments::to_string(spec.method);
    row.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    r.rows.push_back(row);
    if (opts.on_row) opts.on_row(row);
  }
  fit_rows(r, mc);
  if (r.prediction.exponent) {
    r.target = *r.prediction.exponent;
    r.verdict = std::abs(r.fit.slope - r.target) <= r.tolerance ? Verdict::kWithinTol
                                                                : Verdict::kOutsideTol;
  }
  return r;
}

counting::SystemSpec windowed_system(std::int64_t N) {
  counting::SystemSpec sys;
  sys.d = 3;
  sys.s = 5;
  sys.N = N;
  sys.zero_powers = {1, 3};
  sys.window = counting::Window{2, N};
  return sys;
}

SweepResult sweep_windowed(std::vector<std::int64_t> const& grid, WindowedOptions const& opts) {
  check_grid(grid);
  if (!(opts.slope_lo < opts.slope_hi)) throw DomainError("empty slope window");
  SweepResult r;
  r.prediction = {3, 10.0, 1.0, 5.0, Regime::kCrossoverMax};
  r.target = 0.5 * (opts.slope_lo + opts.slope_hi);
  r.tolerance = 0.5 * (opts.slope_hi - opts.slope_lo);
  r.label = "scaled-down property check at desk-scale N";
  bool lower_ok = true;
  for (std::int64_t N : grid) {
    auto const t0 = Clock::now();
    counting::CountResult const c = counting::count_mitm(windowed_system(N), opts.counting);
    SweepRow row;
    row.N = N;
    row.value = static_cast<double>(c.count);
    row.method = "mitm";
    row.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    auto const floor_count = static_cast<counting::Count>(std::pow(static_cast<double>(N), 5.0));
    if (c.count < floor_count) lower_ok = false;
    if (opts.ratio_diagnostic) {
      moments::MomentSpec ms;
      ms.d = 3;
      ms.p = 10.0;
      ms.u = 1.0;
      ms.N = N;
      double const I = moments::moment_exact_even(ms, opts.counting).value;
      row.diagnostic = row.value / (static_cast<double>(N) * I);
    }
    r.rows.push_back(row);
    if (opts.on_row) opts.on_row(row);
  }
  fit_rows(r, false);
  r.lower_bound_ok = lower_ok;
  bool const in_window = r.fit.slope >= opts.slope_lo && r.fit.slope <= opts.slope_hi;
  r.verdict = in_window && lower_ok ? Verdict::kWithinTol : Verdict::kOutsideTol;
  return r;
}

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, SweepRow const& row, bool timing) {
  out << row.N << ',' << format_double(row.value) << ',' << format_double(row.std_error) << ','
      << row.method << ',' << (timing ? format_double(row.runtime_ms) : std::string("0")) << '\n';
}

void write_summary(std::ostream& out, SweepResult const& r) {
  out << "# {\n";
  out << "#   \"fitted_slope\": " << format_double(r.fit.slope) << ",\n";
  out << "#   \"slope_stderr\": " << format_double(r.fit.slope_stderr) << ",\n";
  out << "#   \"predicted_exponent\": " << json_number(r.prediction.exponent) << ",\n";
  out << "#   \"regime\": \"" << to_string(r.prediction.regime) << "\",\n";
  out << "#   \"target\": " << format_double(r.target) << ",\n";
  out << "#   \"tolerance\": " << format_double(r.tolerance) << ",\n";
  if (r.lower_bound_ok) {
    out << "#   \"lower_bound_ok\": " << (*r.lower_bound_ok ? "true" : "false") << ",\n";
  }
  bool any_diag = false;
  for (SweepRow const& row : r.rows) any_diag = any_diag || row.diagnostic.has_value();
  if (any_diag) {
    out << "#   \"diagnostic\": [";
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
      out << (k ? ", " : "") << json_number(r.rows[k].diagnostic);
    }
    out << "],\n";
  }
  out << "#   \"verdict\": \"" << to_string(r.verdict) << "\",\n";
  out << "#   \"label\": \"" << r.label << "\"\n";
  out << "# }\n";
}

SmoothedRatio smoothed_ratio(int d, int s, std::int64_t N, double u, counting::Options const& opts) {
  if (N < 2) throw DomainError("ratio needs N >= 2");
  moments::MomentSpec ms;
  ms.d = d;
  ms.p = 2.0 * s;
  ms.u = u;
  ms.N = N;
  SmoothedRatio out;
  out.moment = moments::moment_exact_even(ms, opts).value;
  out.weighted_S = moments::weighted_count_S(d, s, N, u, opts);
  double const L = std::log(static_cast<double>(N));
  out.ratio = out.moment / (std::pow(L, 2.0 * s) * out.weighted_S / static_cast<double>(N));
  return out;
}

MinorArcDiagnostic g_minor_arc_diagnostic(int d, std::int64_t N, double u, std::uint64_t samples,
                                          std::uint64_t seed, double eps) {
  MinorArcDiagnostic out;
  out.f = arcs::f_exponent(u, d);
  cutoffs::CutoffConfig const cfg{1.0, N, eps};
  for (std::uint64_t i = 0; out.points < samples && i < 1000 * samples; ++i) {
    double const ad = moments::mc_uniform(seed, i, 0);
    if (arcs::classify(ad, N, u).major) continue;
    double const adm1 = moments::mc_uniform(seed, i, 1);
    out.max_g = std::max(out.max_g, cutoffs::g_exact(adm1, ad, d, cfg, u));
    ++out.points;
  }
  out.constant = out.max_g * std::pow(static_cast<double>(N), out.f - 0.1);
  return out;
}

}  // namespace vmvt::experiments
