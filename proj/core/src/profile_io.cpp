#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "vmvt/counting.hpp"
#include "vmvt/errors.hpp"

namespace vmvt::counting {

namespace {

constexpr std::array<char, 8> kMagic = {'V', 'M', 'V', 'T', 'P', 'R', 'O', 'F'};

void put_u8(std::ostream& out, std::uint8_t v) { out.put(static_cast<char>(v)); }

void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  for (int k = 0; k < bytes; ++k) put_u8(out, static_cast<std::uint8_t>(v >> (8 * k)));
}

void put_varint(std::ostream& out, std::uint64_t v) {
  while (v >= 0x80) {
    put_u8(out, static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  put_u8(out, static_cast<std::uint8_t>(v));
}

std::uint8_t get_u8(std::istream& in) {
  int const c = in.get();
  if (c == std::char_traits<char>::eof()) throw DomainError("profile dump truncated");
  return static_cast<std::uint8_t>(c);
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int k = 0; k < bytes; ++k) v |= static_cast<std::uint64_t>(get_u8(in)) << (8 * k);
  return v;
}

std::uint64_t get_varint(std::istream& in) {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    std::uint8_t const b = get_u8(in);
    v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
    if (!(b & 0x80)) return v;
  }
  throw DomainError("profile dump has an overlong varint");
}

}  // namespace

void write_profile(std::ostream& out, FrequencyProfile const& profile, ProfileEncoding encoding) {
  SystemSpec const& spec = profile.spec;
  if (!spec.profile_power) throw DomainError("profile dump needs a profile power");
  out.write(kMagic.data(), kMagic.size());
  put_u8(out, kProfileFormatVersion);
  put_u8(out, static_cast<std::uint8_t>(encoding));
  put_u8(out, static_cast<std::uint8_t>(spec.d));
  put_u8(out, static_cast<std::uint8_t>(spec.s));
  put_u8(out, static_cast<std::uint8_t>(*spec.profile_power));
  put_u8(out, spec.range == VariableRange::kOneToN ? 0 : 1);
  std::uint16_t mask = 0;
  for (int p : spec.zero_powers) mask = static_cast<std::uint16_t>(mask | (1u << (p - 1)));
  put_le(out, mask, 2);
  put_le(out, static_cast<std::uint64_t>(spec.N), 8);
  put_le(out, profile.entries.size(), 8);
  for (auto const& [b, c] : profile.entries) {
    put_le(out, static_cast<std::uint64_t>(b), 8);
    if (encoding == ProfileEncoding::kFixed) {
      put_le(out, c, 8);
    } else {
      put_varint(out, c);
    }
  }
  if (!out) throw DomainError("profile dump write failed");
}

FrequencyProfile read_profile(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw DomainError("not a profile dump (bad magic)");
  std::uint8_t const version = get_u8(in);
  if (version != kProfileFormatVersion) {
    throw DomainError("unsupported profile dump version " + std::to_string(version));
  }
  std::uint8_t const encoding = get_u8(in);
  if (encoding > 1) throw DomainError("unknown profile count encoding");
  FrequencyProfile p;
  p.spec.d = get_u8(in);
  p.spec.s = get_u8(in);
  p.spec.profile_power = static_cast<int>(get_u8(in));
  std::uint8_t const range = get_u8(in);
  if (range > 1) throw DomainError("unknown variable range in profile dump");
  p.spec.range = range == 0 ? VariableRange::kOneToN : VariableRange::kOneToTwoN;
  auto const mask = static_cast<std::uint16_t>(get_le(in, 2));
  for (int i = 1; i <= 16; ++i) {
    if (mask & (1u << (i - 1))) p.spec.zero_powers.push_back(i);
  }
  p.spec.N = static_cast<std::int64_t>(get_le(in, 8));
  p.spec.validate();
  std::uint64_t const n = get_le(in, 8);
  p.entries.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, 1u << 24)));
  std::int64_t prev = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    auto const b = static_cast<std::int64_t>(get_le(in, 8));
    Count const c = encoding == 0 ? get_le(in, 8) : get_varint(in);
    if (k > 0 && b <= prev) throw DomainError("profile dump entries out of order");
    prev = b;
    p.entries.emplace_back(b, c);
  }
  return p;
}

void write_profile_file(std::string const& path, FrequencyProfile const& profile,
                        ProfileEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path + " for writing");
  write_profile(out, profile, encoding);
}

FrequencyProfile read_profile_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  return read_profile(in);
}

}  // namespace vmvt::counting
