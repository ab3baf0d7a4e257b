#include "vmvt/phase_arith.hpp"

#include "vmvt/errors.hpp"

namespace vmvt::phases {

namespace {

constexpr Int128 kTwo53 = Int128{1} << 53;

}  // namespace

Phase frac_mul(double x, Int128 m) {
  if (m > -kTwo53 && m < kTwo53) return frac_mul(x, static_cast<std::int64_t>(m));
  x = wrap(x);
  // m = high * 2^32 + low with 0 <= low < 2^32; x * 2^32 is exact.
  Int128 const low = m & Int128{0xffffffff};
  Int128 const high = (m - low) / (Int128{1} << 32);
  return add(frac_mul(wrap(std::ldexp(x, 32)), high),
             frac_mul(x, static_cast<std::int64_t>(low)));
}

Phase frac_mul(double x, BigInt const& m) {
  static BigInt const kLimit = BigInt{1} << 120;
  if (m < 0) return negate(frac_mul(x, BigInt{-m}));
  if (m < kLimit) return frac_mul(x, static_cast<Int128>(m));
  x = wrap(x);
  BigInt const low = m & ((BigInt{1} << 64) - 1);
  BigInt const high = m >> 64;
  return add(frac_mul(wrap(std::ldexp(x, 64)), high),
             frac_mul(x, static_cast<Int128>(low)));
}

Int128 checked_mul(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit product overflow");
  return r;
}

Int128 checked_add(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit sum overflow");
  return r;
}

Int128 checked_pow(Int128 base, int exponent) {
  Int128 r = 1;
  for (int i = 0; i < exponent; ++i) r = checked_mul(r, base);
  return r;
}

}  // namespace vmvt::phases
