#include "vmvt/arcs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vmvt/errors.hpp"
#include "vmvt/numeric.hpp"
#include "vmvt/phase_arith.hpp"

namespace vmvt::arcs {

namespace {

using U128 = unsigned __int128;

double reduce_unit(double alpha) {
  if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
  double r = alpha - std::floor(alpha);
  if (r >= 1.0) r = 0.0;
  return r;
}

struct Scale {
  double f;
  std::int64_t Q;
  double W;
};

Scale scale_of(std::int64_t N, double u) {
  if (N < 1) throw DomainError("arcs need N >= 1");
  double const f = f_exponent(u);
  double const Nd = static_cast<double>(N);
  return {f, std::max<std::int64_t>(1, floor_pow(N, f)), std::pow(Nd, f) / std::pow(Nd, 1.0 + u)};
}

double circle_distance(double alpha, std::int64_t q) {
  return std::abs(phases::frac_mul(alpha, q).value());
}

}  // namespace

double f_exponent(double u) {
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("f(u) needs u > 0");
  return u <= 1.0 ? u : 1.0;
}

double f_exponent(double u, int d) {
  if (d < 2) throw DomainError("f(u) needs d >= 2");
  if (u > static_cast<double>(d - 1)) throw DomainError("f(u) needs u <= d - 1");
  return f_exponent(u);
}

Rational rational_approx(double alpha, std::int64_t Q) {
  if (Q < 1) throw DomainError("rational_approx needs Q >= 1");
  alpha = reduce_unit(alpha);
  double const Qd = static_cast<double>(Q);
  // Every q <= Q with a != 0 has |q alpha - a| >= 1 - Q alpha > alpha here.
  if (alpha * (Qd + 1.0) < 1.0) return {0, 1};
  if ((1.0 - alpha) * (Qd + 1.0) < 1.0) return {1, 1};
  // alpha = num / 2^k exactly, with k <= 53 + 64 since alpha >= 1 / (Q + 1).
  int exponent = 0;
  double const mant = std::frexp(alpha, &exponent);
  auto num = static_cast<U128>(std::ldexp(mant, 53));
  int const shift = 53 - exponent;
  U128 den = U128{1} << shift;
  U128 const g = [&] {
    U128 a = num, b = den;
    while (b != 0) { U128 t = a % b; a = b; b = t; }
    return a;
  }();
  num /= g;
  den /= g;
  // Convergents p_k / q_k of num / den.
  U128 p_prev = 1, q_prev = 0, p = 0, q = 1;  // p_{-1}/q_{-1}, p_0/q_0 with a_0 = 0
  U128 x = num, y = den;                     // remainder pair, alpha = x / y
  while (x != 0) {
    U128 const a = y / x;
    U128 const r = y % x;
    U128 const q_next = a * q + q_prev;
    if (q_next > static_cast<U128>(Q)) break;
    U128 const p_next = a * p + p_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    y = x;
    x = r;
  }
  return {static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)};
}

Classification classify(double alpha_d, std::int64_t N, double u) {
  alpha_d = reduce_unit(alpha_d);
  Scale const sc = scale_of(N, u);
  for (std::int64_t q = 1; q <= sc.Q; ++q) {
    if (circle_distance(alpha_d, q) <= sc.W) {
      auto const a = static_cast<std::int64_t>(std::nearbyint(alpha_d * static_cast<double>(q)));
      return {true, {a, q}};
    }
  }
  return {};
}

bool ArcDissection::contains(double alpha) const {
  alpha = reduce_unit(alpha);
  auto it = std::upper_bound(merged.begin(), merged.end(), alpha,
                             [](double x, Interval const& iv) { return x < iv.lo; });
  if (it == merged.begin()) return false;
  --it;
  return alpha <= it->hi;
}

bool ArcDissection::disjointness_condition() const {
  double const Nd = static_cast<double>(N);
  return 4.0 * std::pow(Nd, 2.0 * f) <= std::pow(Nd, 1.0 + u);
}

ArcDissection build_dissection(std::int64_t N, double u) {
  Scale const sc = scale_of(N, u);
  if (sc.Q > kMaxArcDenominator) {
    throw BudgetError("arc dissection refused: Q = " + std::to_string(sc.Q) + " exceeds " +
                      std::to_string(kMaxArcDenominator));
  }
  // sum_{q <= Q} phi(q) ~ 3 Q^2 / pi^2; the exact total is bounded by Q (Q + 1) / 2.
  double const estimate = 3.0 * static_cast<double>(sc.Q) * static_cast<double>(sc.Q) / 9.8696;
  if (estimate > static_cast<double>(kMaxArcCount)) {
    throw BudgetError("arc dissection refused: about " + std::to_string(std::llround(estimate)) +
                      " arcs exceed the budget of " + std::to_string(kMaxArcCount));
  }

  ArcDissection out;
  out.N = N;
  out.u = u;
  out.f = sc.f;
  out.Q = sc.Q;
  out.W = sc.W;
  out.arcs.push_back({{0, 1}, -sc.W, sc.W});
  for (std::int64_t q = 2; q <= sc.Q; ++q) {
    double const half = sc.W / static_cast<double>(q);
    for (std::int64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      double const c = static_cast<double>(a) / static_cast<double>(q);
      out.arcs.push_back({{a, q}, c - half, c + half});
    }
  }

  // Pieces inside [0, 1]; arcs crossing 0 or 1 wrap around.
  std::vector<Interval> pieces;
  pieces.reserve(out.arcs.size() + 2);
  for (Arc const& arc : out.arcs) {
    double const len = arc.hi - arc.lo;
    if (len >= 1.0) {
      pieces.push_back({0.0, 1.0});
      continue;
    }
    if (arc.lo < 0.0) {
      pieces.push_back({0.0, arc.hi});
      pieces.push_back({1.0 + arc.lo, 1.0});
    } else if (arc.hi > 1.0) {
      pieces.push_back({arc.lo, 1.0});
      pieces.push_back({0.0, arc.hi - 1.0});
    } else {
      pieces.push_back({arc.lo, arc.hi});
    }
  }
  std::sort(pieces.begin(), pieces.end(),
            [](Interval const& x, Interval const& y) { return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi); });

  // Sweep: each piece adds its length minus the part already covered.
  double overlap = 0.0;
  for (Interval const& p : pieces) {
    if (out.merged.empty() || p.lo > out.merged.back().hi) {
      out.merged.push_back(p);
      continue;
    }
    Interval& cur = out.merged.back();
    overlap += std::min(cur.hi, p.hi) - p.lo;
    cur.hi = std::max(cur.hi, p.hi);
  }
  double measure = 0.0;
  for (Interval const& iv : out.merged) measure += iv.hi - iv.lo;
  out.total_measure = measure;
  out.overlap_measure = overlap;
  return out;
}

}  // namespace vmvt::arcs
