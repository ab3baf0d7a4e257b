#pragma once

// Grid sweeps, log-log slope fits and predicted growth exponents.
//
// Verdicts are scaled-down property checks at desk-scale N, not statements
// about the N -> infinity limit.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vmvt/counting.hpp"
#include "vmvt/moments.hpp"

namespace vmvt::experiments {

enum class Regime { kCrossoverMax, kAboveThreshold, kNoPrediction };
char const* to_string(Regime r);

struct ExponentPrediction {
  int d = 2;
  double p = 2.0;
  double u = 0.5;
  std::optional<double> exponent;
  Regime regime = Regime::kNoPrediction;
};

// Box restricting alpha_{d-1}:
//   0 < u <= 1:                                   max(p - d(d+1)/2, p/2 - u)
//   1 < u <= d-1 and p >= d(d+1) - 2d/(d+1-u):    p - d(d+1)/2
//   otherwise no prediction.
ExponentPrediction predict_exponent(int d, double p, double u);

// Box restricting alpha_d, 0 < u <= d - 1: max(p - d(d+1)/2, p/2 - u).
ExponentPrediction predict_exponent_leading_box(int d, double p, double u);

// Prediction matching the restricted power of a moment spec.
ExponentPrediction predict_for(moments::MomentSpec const& spec);

struct SlopeFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
};

// Least squares on (ln N, ln value). With standard errors given, each point is
// weighted by (value / stderr)^2; zero errors fall back to the unweighted fit.
SlopeFit fit_slope(std::span<double const> N, std::span<double const> values,
                   std::span<double const> std_errors = {});

struct SweepRow {
  std::int64_t N = 0;
  double value = 0.0;
  double std_error = 0.0;
  std::string method;
  double runtime_ms = 0.0;
  std::optional<double> diagnostic;  // sweep-specific monitored ratio
};

enum class Verdict { kWithinTol, kOutsideTol, kNoPrediction };
char const* to_string(Verdict v);

struct SweepResult {
  std::vector<SweepRow> rows;
  SlopeFit fit;
  ExponentPrediction prediction;
  double target = 0.0;     // centre of the acceptance window
  double tolerance = 0.0;  // half-width of the acceptance window
  Verdict verdict = Verdict::kNoPrediction;
  std::optional<bool> lower_bound_ok;  // windowed sweep only
  std::string label;
};

inline constexpr double kExactTolerance = 0.35;
inline constexpr double kMcTolerance = 0.5;

struct SweepOptions {
  std::optional<double> tolerance;  // default by method
  moments::MomentOptions moment;
  std::function<void(SweepRow const&)> on_row;
};

// Throws DomainError unless the grid is strictly increasing with >= 3 points.
// Rows already computed are passed to on_row before an error propagates.
SweepResult sweep_moment(moments::MomentSpec const& tmpl, std::vector<std::int64_t> const& grid,
                         SweepOptions const& opts = {});

struct WindowedOptions {
  double slope_lo = 4.6;
  double slope_hi = 5.6;
  bool ratio_diagnostic = true;  // count / (N I_{10,3}(1; N)) per row
  counting::Options counting;
  std::function<void(SweepRow const&)> on_row;
};

// Windowed system d = 3, s = 5, sigma_1 = sigma_3 = 0, |sigma_2| <= N.
counting::SystemSpec windowed_system(std::int64_t N);
SweepResult sweep_windowed(std::vector<std::int64_t> const& grid,
                           WindowedOptions const& opts = {});

// CSV: header "N,value,stderr,method,runtime_ms". With timing off the
// runtime column is written as 0 so repeated runs are byte-identical.
inline constexpr char const* kCsvHeader = "N,value,stderr,method,runtime_ms";
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, SweepRow const& row, bool timing = true);
// Summary block; every line starts with "# ".
void write_summary(std::ostream& out, SweepResult const& result);

// I_{2s,d}(u; N) / (N^-1 (ln N)^{2s} S_{2s}(u)). Monitored only.
struct SmoothedRatio {
  double moment = 0.0;
  double weighted_S = 0.0;
  double ratio = 0.0;
};
SmoothedRatio smoothed_ratio(int d, int s, std::int64_t N, double u,
                            counting::Options const& opts = {});

// Samples alpha_d on the minor arcs (no q <= N^f(u) with ||q alpha_d|| <= W)
// and alpha_{d-1} uniformly; reports max G and C = max G * N^(f(u) - 0.1).
struct MinorArcDiagnostic {
  std::uint64_t points = 0;
  double max_g = 0.0;
  double constant = 0.0;
  double f = 0.0;
};
MinorArcDiagnostic g_minor_arc_diagnostic(int d, std::int64_t N, double u, std::uint64_t samples,
                                          std::uint64_t seed, double eps = 0.05);

}  // namespace vmvt::experiments
