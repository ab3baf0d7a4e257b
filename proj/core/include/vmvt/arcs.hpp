#pragma once

// Major/minor arc dissection of [0, 1) for the leading coefficient.
//
// For scale N and box exponent u the dissection uses Q = floor(N^f(u)) and
// the q-independent half-width W = N^f(u) / N^(1+u) on ||q alpha||, so the arc
// around a/q is |alpha - a/q| <= W / q.

#include <cstdint>
#include <optional>
#include <vector>

namespace vmvt::arcs {

// f(u) = u on (0, 1], 1 on [1, d - 1].
double f_exponent(double u);
double f_exponent(double u, int d);  // also checks u <= d - 1

struct Rational {
  std::int64_t a = 0;
  std::int64_t q = 1;

  double value() const { return static_cast<double>(a) / static_cast<double>(q); }
  friend bool operator==(Rational const&, Rational const&) = default;
};

// Last continued-fraction convergent a/q of alpha with q <= Q, computed on the
// exact binary value of alpha. It minimizes |q alpha - a| over q <= Q and
// satisfies |alpha - a/q| <= 1 / (q (Q + 1)).
Rational rational_approx(double alpha, std::int64_t Q);

struct Classification {
  bool major = false;
  Rational witness;  // smallest q with ||q alpha|| <= W, if major
};

// Scans q = 1..Q with early exit. alpha is reduced mod 1 first.
Classification classify(double alpha_d, std::int64_t N, double u);

struct Arc {
  Rational center;
  double lo = 0.0;  // center - W/q, may be < 0 for 0/1
  double hi = 0.0;  // center + W/q
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr std::int64_t kMaxArcDenominator = 100000;
inline constexpr std::int64_t kMaxArcCount = 50'000'000;

struct ArcDissection {
  std::int64_t N = 0;
  double u = 0.0;
  double f = 0.0;
  std::int64_t Q = 0;
  double W = 0.0;
  std::vector<Arc> arcs;          // 0/1 stands for 0/1 and 1/1 together
  std::vector<Interval> merged;   // disjoint, sorted, inside [0, 1]
  double total_measure = 0.0;     // measure of the union
  double overlap_measure = 0.0;   // sum of arc lengths minus the union

  bool contains(double alpha) const;
  // 4 N^(2 f) <= N^(1 + u): arcs are pairwise disjoint.
  bool disjointness_condition() const;
};

// Throws BudgetError if Q > kMaxArcDenominator or the arc count would exceed
// kMaxArcCount.
ArcDissection build_dissection(std::int64_t N, double u);

}  // namespace vmvt::arcs
