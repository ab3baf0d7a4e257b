#pragma once

// Exact counts for power-sum systems
//   sigma_i(n) = n_1^i + ... + n_s^i - n_{s+1}^i - ... - n_{2s}^i
// over 2s-tuples with entries in [1, N] or [1, 2N].
//
// The meet-in-the-middle engine enumerates multisets of size s (each standing
// for s! / prod m_j! ordered tuples), packs the half power sums into a sort
// key, sorts, and reduces each group of equal key.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vmvt::counting {

// Within the enumeration budgets every count is below (upper^s)^2 <= 2.5e17,
// so 64-bit unsigned counts cannot overflow.
using Count = std::uint64_t;

enum class VariableRange { kOneToN, kOneToTwoN };

struct Window {
  int power = 0;
  std::int64_t H = 0;  // |sigma_power| <= H
};

struct SystemSpec {
  int d = 2;
  int s = 1;
  std::int64_t N = 1;
  VariableRange range = VariableRange::kOneToN;
  std::vector<int> zero_powers;
  std::optional<int> profile_power;
  std::optional<Window> window;

  // Throws DomainError for inconsistent specs and OverflowError when s * upper^d
  // does not fit in 62 bits.
  void validate() const;
  std::int64_t upper() const { return range == VariableRange::kOneToN ? N : 2 * N; }
  std::string describe() const;
};

enum class CountMethod { kBrute, kMitm };
char const* to_string(CountMethod m);

struct CountResult {
  Count count = 0;
  double elapsed_ms = 0.0;
  CountMethod method = CountMethod::kMitm;
  std::uint64_t records = 0;  // enumerated tuples (brute) or multisets (mitm)
};

// r(b) = #{tuples meeting the zero constraints with sigma_{i0} = b}.
struct FrequencyProfile {
  SystemSpec spec;
  std::vector<std::pair<std::int64_t, Count>> entries;  // sorted by b, counts > 0

  Count at(std::int64_t b) const;
  Count total() const;
  bool symmetric() const;
};

struct JointEntry {
  std::int64_t a = 0;
  std::int64_t b = 0;
  Count count = 0;
  friend bool operator==(JointEntry const&, JointEntry const&) = default;
};

// Histogram of (sigma_{power_a}, sigma_{power_b}) under the zero constraints.
struct JointProfile {
  SystemSpec spec;
  int power_a = 0;
  int power_b = 0;
  std::vector<JointEntry> entries;  // sorted by (a, b), counts > 0

  Count total() const;
};

struct Options {
  unsigned workers = 0;                                   // 0: default_workers()
  std::uint64_t memory_budget = std::uint64_t{3} << 30;   // bytes
};

inline constexpr double kBruteBudget = 1e8;       // upper^(2s)
inline constexpr double kHalfBudget = 5e8;        // upper^s
inline constexpr double kPairWorkBudget = 2e10;   // sum of squared group sizes
inline constexpr int kMaxDegree = 8;
inline constexpr int kMaxHalfSize = 20;

// Multisets of size s from [1, U]: binom(U + s - 1, s).
std::uint64_t multiset_count(std::int64_t U, int s);

CountResult count_brute(SystemSpec const& spec);
CountResult count_mitm(SystemSpec const& spec, Options const& opts = {});

FrequencyProfile profile(SystemSpec const& spec, Options const& opts = {});
FrequencyProfile profile_brute(SystemSpec const& spec);

JointProfile joint_profile(SystemSpec const& spec, int power_a, int power_b,
                           Options const& opts = {});
JointProfile joint_profile_brute(SystemSpec const& spec, int power_a, int power_b);

// Binary dump, little-endian:
//   "VMVTPROF" | u8 version | u8 encoding | u8 d | u8 s | u8 i0 | u8 range |
//   u16 zero-power bitmask | i64 N | u64 entry count | entries
// Each entry is an i64 b followed by the count as u64 (encoding 0) or as an
// unsigned LEB128 varint (encoding 1).
enum class ProfileEncoding : std::uint8_t { kFixed = 0, kVarint = 1 };
inline constexpr std::uint8_t kProfileFormatVersion = 1;

void write_profile(std::ostream& out, FrequencyProfile const& profile,
                   ProfileEncoding encoding = ProfileEncoding::kVarint);
FrequencyProfile read_profile(std::istream& in);
void write_profile_file(std::string const& path, FrequencyProfile const& profile,
                        ProfileEncoding encoding = ProfileEncoding::kVarint);
FrequencyProfile read_profile_file(std::string const& path);

}  // namespace vmvt::counting
