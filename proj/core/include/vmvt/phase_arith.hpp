#pragma once

// Phase arithmetic modulo 1.
//
// A phase is an element of R/Z. It is stored as an unevaluated two-term sum
// hi + lo with hi in [-1/2, 1/2] and |lo| <= ulp(hi), which keeps roughly 106
// bits of the fractional part. Products x * m with a double x and an integer m
// are reduced exactly: the error-free product (TwoProd) of x and each 32-bit
// limb of m is wrapped term by term, so no integer part is ever formed.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include <boost/multiprecision/cpp_int.hpp>

namespace vmvt::phases {

using Complex = std::complex<double>;
using BigInt = boost::multiprecision::cpp_int;
using Int128 = __int128;

struct Phase {
  double hi = 0.0;
  double lo = 0.0;

  double value() const { return hi + lo; }
};

// x minus the nearest integer. Exact for every finite double.
inline double wrap(double x) { return x - std::nearbyint(x); }

inline Phase add(Phase a, Phase b) {
  double const s = a.hi + b.hi;
  double const bv = s - a.hi;
  double const err = (a.hi - (s - bv)) + (b.hi - bv);
  double const w = wrap(s);
  double const lo = err + a.lo + b.lo;
  double const hi = w + lo;
  double const hv = hi - w;
  double const rest = (w - (hi - hv)) + (lo - hv);
  double const k = std::nearbyint(hi);
  return {hi - k, rest};
}

inline Phase negate(Phase a) { return {-a.hi, -a.lo}; }

inline Phase phase_of(double x) { return {wrap(x), 0.0}; }

// (x * m) mod 1 for |m| < 2^53, exact up to the final two-term rounding.
inline Phase frac_mul(double x, std::int64_t m) {
  x = wrap(x);
  double const md = static_cast<double>(m);
  double const p = x * md;
  double const e = std::fma(x, md, -p);
  return add(phase_of(p), phase_of(e));
}

Phase frac_mul(double x, Int128 m);
Phase frac_mul(double x, BigInt const& m);

inline Phase frac_mul(Phase x, Int128 m) {
  return add(frac_mul(x.hi, m), frac_mul(x.lo, m));
}

// e(theta) = exp(2 pi i theta).
inline Complex unit(double theta) {
  double const angle = 2.0 * std::numbers::pi * wrap(theta);
  return {std::cos(angle), std::sin(angle)};
}

inline Complex unit(Phase theta) { return unit(theta.value()); }

// Checked 128-bit integer arithmetic. Throws OverflowError instead of wrapping.
Int128 checked_mul(Int128 a, Int128 b);
Int128 checked_add(Int128 a, Int128 b);
Int128 checked_pow(Int128 base, int exponent);

}  // namespace vmvt::phases
