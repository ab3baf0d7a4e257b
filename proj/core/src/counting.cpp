#include "vmvt/counting.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <span>
#include <sstream>
#include <string>

#include "vmvt/errors.hpp"
#include "vmvt/parallel.hpp"
#include "vmvt/phase_arith.hpp"

namespace vmvt::counting {

namespace {

using Clock = std::chrono::steady_clock;
using u64 = std::uint64_t;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool has_power(std::vector<int> const& v, int p) { return std::find(v.begin(), v.end(), p) != v.end(); }

// pw(i, n) = n^i for 0 <= i <= d, 0 <= n <= U.
class PowerTable {
 public:
  PowerTable(int d, std::int64_t U) : stride_(static_cast<std::size_t>(U) + 1), data_((d + 1) * stride_) {
    for (std::int64_t n = 0; n <= U; ++n) {
      std::int64_t v = 1;
      for (int i = 0; i <= d; ++i) {
        data_[i * stride_ + static_cast<std::size_t>(n)] = v;
        v *= n;
      }
    }
  }
  std::int64_t operator()(int i, std::int64_t n) const {
    return data_[i * stride_ + static_cast<std::size_t>(n)];
  }

 private:
  std::size_t stride_;
  std::vector<std::int64_t> data_;
};

std::vector<u64> const& factorials() {
  static std::vector<u64> const f = [] {
    std::vector<u64> v(kMaxHalfSize + 1, 1);
    for (int k = 1; k <= kMaxHalfSize; ++k) v[k] = v[k - 1] * static_cast<u64>(k);
    return v;
  }();
  return f;
}

// ---------------------------------------------------------------- brute force

// Calls leaf(sums) for every ordered 2s-tuple, sums[k] = sigma_{powers[k]}.
template <class Leaf>
void enumerate_ordered(SystemSpec const& spec, std::vector<int> const& powers, Leaf&& leaf) {
  std::int64_t const U = spec.upper();
  int const len = 2 * spec.s;
  std::size_t const m = powers.size();
  PowerTable const pw(spec.d, U);
  std::vector<std::int64_t> sums((len + 1) * m, 0);
  std::vector<std::int64_t> idx(len, 0);
  // Iterative odometer; level k holds the partial sums after k entries.
  int k = 0;
  idx[0] = 0;
  while (k >= 0) {
    if (idx[k] == U) {
      --k;
      continue;
    }
    std::int64_t const n = ++idx[k];
    int const sign = k < spec.s ? 1 : -1;
    for (std::size_t f = 0; f < m; ++f) {
      sums[(k + 1) * m + f] = sums[k * m + f] + sign * pw(powers[f], n);
    }
    if (k + 1 == len) {
      leaf(std::span<std::int64_t const>(sums.data() + len * m, m));
    } else {
      ++k;
      idx[k] = 0;
    }
  }
}

void check_brute_budget(SystemSpec const& spec) {
  double const tuples = std::pow(static_cast<double>(spec.upper()), 2.0 * spec.s);
  if (tuples > kBruteBudget) {
    std::ostringstream os;
    os << "brute-force enumeration refused: " << tuples << " tuples exceed the budget of "
       << kBruteBudget;
    throw BudgetError(os.str());
  }
}

// ---------------------------------------------------------------- packed keys

struct Field {
  int power = 0;
  std::int64_t offset = 0;  // stored value = half sum - offset
  int width = 0;
  int shift = 0;
};

struct Layout {
  std::vector<Field> keys;    // most significant first
  std::vector<Field> values;  // below the keys, values[0] above values[1]
  int value_bits = 0;
  int total_bits = 0;
};

Layout make_layout(SystemSpec const& spec, std::vector<int> key_powers,
                   std::vector<int> const& value_powers) {
  std::sort(key_powers.begin(), key_powers.end());
  std::int64_t const U = spec.upper();
  auto field_for = [&](int p) {
    Field f;
    f.power = p;
    f.offset = spec.s;
    auto const max_stored = static_cast<u64>(spec.s * (static_cast<std::int64_t>(
                                                          phases::checked_pow(U, p)) - 1));
    f.width = static_cast<int>(std::bit_width(max_stored));
    return f;
  };
  Layout L;
  for (int p : key_powers) L.keys.push_back(field_for(p));
  for (int p : value_powers) L.values.push_back(field_for(p));
  int shift = 0;
  for (auto it = L.values.rbegin(); it != L.values.rend(); ++it) {
    it->shift = shift;
    shift += it->width;
  }
  L.value_bits = shift;
  for (auto it = L.keys.rbegin(); it != L.keys.rend(); ++it) {
    it->shift = shift;
    shift += it->width;
  }
  L.total_bits = shift;
  return L;
}

// Word 0 is the most significant, so std::array's lexicographic order is the
// numeric order of the packed value.
template <std::size_t W>
using Word = std::array<u64, W>;

template <std::size_t W>
void put_bits(Word<W>& w, int shift, int width, u64 v) {
  if (width == 0) return;
  int const wi = shift / 64, bi = shift % 64;
  w[W - 1 - wi] |= v << bi;
  if (bi + width > 64) w[W - 2 - wi] |= v >> (64 - bi);
}

template <std::size_t W>
u64 get_bits(Word<W> const& w, int shift, int width) {
  if (width == 0) return 0;
  int const wi = shift / 64, bi = shift % 64;
  u64 v = w[W - 1 - wi] >> bi;
  if (bi + width > 64) v |= w[W - 2 - wi] << (64 - bi);
  return width == 64 ? v : v & ((u64{1} << width) - 1);
}

template <std::size_t W>
struct Record {
  Word<W> w{};
  u64 weight = 0;
};

template <std::size_t W>
class KeyMask {
 public:
  explicit KeyMask(int value_bits) {
    for (std::size_t idx = 0; idx < W; ++idx) {
      int const low = 64 * static_cast<int>(W - 1 - idx);
      if (low >= value_bits) {
        mask_[idx] = ~u64{0};
      } else if (low + 64 <= value_bits) {
        mask_[idx] = 0;
      } else {
        mask_[idx] = ~u64{0} << (value_bits - low);
      }
    }
  }
  bool same_key(Word<W> const& a, Word<W> const& b) const {
    for (std::size_t idx = 0; idx < W; ++idx) {
      if ((a[idx] ^ b[idx]) & mask_[idx]) return false;
    }
    return true;
  }

 private:
  Word<W> mask_{};
};

// Fills out[0..) with every multiset whose smallest entry is `first`.
template <std::size_t W>
class MultisetFiller {
 public:
  MultisetFiller(SystemSpec const& spec, Layout const& L, PowerTable const& pw)
      : s_(spec.s), U_(spec.upper()), pw_(pw) {
    for (Field const& f : L.keys) fields_.push_back(f);
    for (Field const& f : L.values) fields_.push_back(f);
    sums_.assign((s_ + 1) * fields_.size(), 0);
    n_.assign(s_, 0);
  }

  void fill(std::int64_t first, Record<W>* out) {
    out_ = out;
    place(0, first, first);
  }

 private:
  void place(int depth, std::int64_t lo, std::int64_t hi) {
    std::size_t const m = fields_.size();
    for (std::int64_t n = lo; n <= hi; ++n) {
      n_[depth] = n;
      for (std::size_t f = 0; f < m; ++f) {
        sums_[(depth + 1) * m + f] = sums_[depth * m + f] + pw_(fields_[f].power, n);
      }
      if (depth + 1 == s_) {
        emit();
      } else {
        place(depth + 1, n, U_);
      }
    }
  }

  void emit() {
    std::size_t const m = fields_.size();
    Record<W> r;
    for (std::size_t f = 0; f < m; ++f) {
      auto const v = static_cast<u64>(sums_[s_ * m + f] - fields_[f].offset);
      put_bits(r.w, fields_[f].shift, fields_[f].width, v);
    }
    auto const& fact = factorials();
    u64 denom = 1;
    int run = 1;
    for (int k = 1; k < s_; ++k) {
      if (n_[k] == n_[k - 1]) {
        ++run;
      } else {
        denom *= fact[run];
        run = 1;
      }
    }
    denom *= fact[run];
    r.weight = fact[s_] / denom;
    *out_++ = r;
  }

  int s_;
  std::int64_t U_;
  PowerTable const& pw_;
  std::vector<Field> fields_;
  std::vector<std::int64_t> sums_;
  std::vector<std::int64_t> n_;
  Record<W>* out_ = nullptr;
};

template <std::size_t W>
void parallel_sort(std::vector<Record<W>>& v, unsigned workers) {
  auto less = [](Record<W> const& a, Record<W> const& b) { return a.w < b.w; };
  std::size_t parts = std::min<std::size_t>(workers, std::max<std::size_t>(1, v.size() >> 16));
  if (parts <= 1) {
    std::sort(v.begin(), v.end(), less);
    return;
  }
  std::vector<std::size_t> bounds(parts + 1);
  for (std::size_t k = 0; k <= parts; ++k) bounds[k] = v.size() * k / parts;
  parallel_for(parts, workers, [&](std::size_t k) {
    std::sort(v.begin() + bounds[k], v.begin() + bounds[k + 1], less);
  });
  while (bounds.size() > 2) {
    std::size_t const runs = bounds.size() - 1;
    parallel_for(runs / 2, workers, [&](std::size_t k) {
      std::inplace_merge(v.begin() + bounds[2 * k], v.begin() + bounds[2 * k + 1],
                         v.begin() + bounds[2 * k + 2], less);
    });
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < bounds.size(); k += 2) next.push_back(bounds[k]);
    if (next.back() != bounds.back()) next.push_back(bounds.back());
    bounds = std::move(next);
  }
}

// Sorted, aggregated multiset records of one layout.
template <std::size_t W>
struct Table {
  std::vector<Record<W>> records;
  KeyMask<W> mask;
  std::vector<std::size_t> chunks;  // chunk boundaries, each on a group start
};

// binom(U + s - 1, s) in floating point, for budget checks that must not overflow.
double multiset_estimate(std::int64_t U, int s) {
  double c = 1.0;
  for (int k = 1; k <= s; ++k) c = c * static_cast<double>(U - 1 + k) / k;
  return c;
}

template <std::size_t W>
Table<W> build_table(SystemSpec const& spec, Layout const& L, Options const& opts) {
  unsigned const workers = resolve_workers(opts.workers);
  std::int64_t const U = spec.upper();
  double const estimate = multiset_estimate(U, spec.s);
  if (estimate > kHalfBudget) {
    std::ostringstream os;
    os << "half enumeration refused: about " << estimate << " multisets exceed the budget of "
       << kHalfBudget;
    throw BudgetError(os.str());
  }
  u64 const total = multiset_count(U, spec.s);
  double const bytes = static_cast<double>(total) * sizeof(Record<W>);
  if (bytes > static_cast<double>(opts.memory_budget)) {
    std::ostringstream os;
    os << "half enumeration refused: needs about " << std::llround(bytes / (1 << 20))
       << " MiB for " << total << " records, budget is " << (opts.memory_budget >> 20) << " MiB";
    throw BudgetError(os.str());
  }

  PowerTable const pw(spec.d, U);
  Table<W> t{std::vector<Record<W>>(total), KeyMask<W>(L.value_bits), {}};
  std::vector<u64> offset(static_cast<std::size_t>(U) + 1, 0);
  for (std::int64_t a = 1; a <= U; ++a) {
    offset[a] = offset[a - 1] + multiset_count(U - a + 1, spec.s - 1);
  }
  parallel_for(static_cast<std::size_t>(U), workers, [&](std::size_t i) {
    MultisetFiller<W> filler(spec, L, pw);
    filler.fill(static_cast<std::int64_t>(i) + 1, t.records.data() + offset[i]);
  });

  parallel_sort(t.records, workers);

  std::size_t j = 0;
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    if (j > 0 && t.records[j - 1].w == t.records[i].w) {
      t.records[j - 1].weight += t.records[i].weight;
    } else {
      t.records[j++] = t.records[i];
    }
  }
  t.records.resize(j);

  std::size_t const n = t.records.size();
  std::size_t const parts = std::max<std::size_t>(1, std::min<std::size_t>(4 * workers, n));
  t.chunks.push_back(0);
  for (std::size_t k = 1; k < parts; ++k) {
    std::size_t pos = std::max(n * k / parts, t.chunks.back());
    while (pos > 0 && pos < n && t.mask.same_key(t.records[pos - 1].w, t.records[pos].w)) ++pos;
    if (pos > t.chunks.back() && pos < n) t.chunks.push_back(pos);
  }
  t.chunks.push_back(n);
  return t;
}

// Calls fn(begin, end) for every key group in chunk k.
template <std::size_t W, class Fn>
void for_each_group(Table<W> const& t, std::size_t k, Fn&& fn) {
  std::size_t i = t.chunks[k];
  std::size_t const stop = t.chunks[k + 1];
  while (i < stop) {
    std::size_t j = i + 1;
    while (j < stop && t.mask.same_key(t.records[i].w, t.records[j].w)) ++j;
    fn(i, j);
    i = j;
  }
}

template <std::size_t W>
void check_pair_work(Table<W> const& t, unsigned workers) {
  std::size_t const parts = t.chunks.size() - 1;
  std::vector<double> work(parts, 0.0);
  parallel_for(parts, workers, [&](std::size_t k) {
    for_each_group(t, k, [&](std::size_t b, std::size_t e) {
      double const g = static_cast<double>(e - b);
      work[k] += g * g;
    });
  });
  double total = 0.0;
  for (double w : work) total += w;
  if (total > kPairWorkBudget) {
    std::ostringstream os;
    os << "profile refused: about " << total << " pair operations exceed the budget of "
       << kPairWorkBudget;
    throw BudgetError(os.str());
  }
}

template <std::size_t W>
Count reduce_count(Table<W> const& t, Layout const& L, std::optional<Window> const& window,
                   unsigned workers) {
  std::size_t const parts = t.chunks.size() - 1;
  std::vector<Count> partial(parts, 0);
  parallel_for(parts, workers, [&](std::size_t k) {
    Count acc = 0;
    std::vector<std::int64_t> v;
    std::vector<Count> prefix;
    for_each_group(t, k, [&](std::size_t b, std::size_t e) {
      if (!window) {
        Count g = 0;
        for (std::size_t i = b; i < e; ++i) g += t.records[i].weight;
        acc += g * g;
        return;
      }
      Field const& f = L.values[0];
      std::size_t const m = e - b;
      v.resize(m);
      prefix.assign(m + 1, 0);
      for (std::size_t i = 0; i < m; ++i) {
        v[i] = static_cast<std::int64_t>(get_bits(t.records[b + i].w, f.shift, f.width));
        prefix[i + 1] = prefix[i] + t.records[b + i].weight;
      }
      std::size_t lo = 0, hi = 0;
      for (std::size_t i = 0; i < m; ++i) {
        while (v[lo] < v[i] - window->H) ++lo;
        while (hi < m && v[hi] <= v[i] + window->H) ++hi;
        acc += t.records[b + i].weight * (prefix[hi] - prefix[lo]);
      }
    });
    partial[k] = acc;
  });
  Count total = 0;
  for (Count c : partial) total += c;
  return total;
}

template <class Entry, class Less, class Same, class Merge>
void sort_compress(std::vector<Entry>& v, Less less, Same same, Merge merge) {
  std::sort(v.begin(), v.end(), less);
  std::size_t j = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (j > 0 && same(v[j - 1], v[i])) {
      merge(v[j - 1], v[i]);
    } else {
      v[j++] = v[i];
    }
  }
  v.resize(j);
}

constexpr std::size_t kDenseProfileLimit = std::size_t{1} << 22;
constexpr std::size_t kSparseFlush = std::size_t{1} << 22;

using Bin = std::pair<std::int64_t, Count>;

void compress_bins(std::vector<Bin>& v) {
  sort_compress(
      v, [](Bin const& a, Bin const& b) { return a.first < b.first; },
      [](Bin const& a, Bin const& b) { return a.first == b.first; },
      [](Bin& a, Bin const& b) { a.second += b.second; });
}

// Nonnegative half of the profile: r(b) for b >= 0.
template <std::size_t W>
std::vector<Bin> reduce_profile(Table<W> const& t, Layout const& L, unsigned workers) {
  Field const& f = L.values[0];
  std::size_t const parts = t.chunks.size() - 1;
  u64 const max_diff = f.width == 0 ? 0 : (f.width == 64 ? ~u64{0} : (u64{1} << f.width) - 1);
  bool const dense = max_diff + 1 <= kDenseProfileLimit;

  std::vector<std::vector<Count>> dense_part;
  std::vector<std::vector<Bin>> sparse_part(parts);
  if (dense) {
    // One dense histogram per worker slot; chunks are assigned round-robin.
    std::size_t const slots = std::min<std::size_t>(std::max(1u, workers), parts);
    dense_part.assign(slots, std::vector<Count>(max_diff + 1, 0));
    parallel_for(slots, workers, [&](std::size_t slot) {
      std::vector<Count>& h = dense_part[slot];
      std::vector<std::int64_t> v;
      for (std::size_t k = slot; k < parts; k += slots) {
        for_each_group(t, k, [&](std::size_t b, std::size_t e) {
          std::size_t const m = e - b;
          v.resize(m);
          for (std::size_t i = 0; i < m; ++i) {
            v[i] = static_cast<std::int64_t>(get_bits(t.records[b + i].w, f.shift, f.width));
          }
          for (std::size_t i = 0; i < m; ++i) {
            Count const wi = t.records[b + i].weight;
            h[0] += wi * wi;
            for (std::size_t j = 0; j < i; ++j) {
              h[static_cast<std::size_t>(v[i] - v[j])] += wi * t.records[b + j].weight;
            }
          }
        });
      }
    });
    std::vector<Bin> out;
    for (std::size_t b = 0; b <= max_diff; ++b) {
      Count c = 0;
      for (auto const& h : dense_part) c += h[b];
      if (c != 0) out.emplace_back(static_cast<std::int64_t>(b), c);
    }
    return out;
  }

  parallel_for(parts, workers, [&](std::size_t k) {
    std::vector<Bin>& bins = sparse_part[k];
    std::vector<std::int64_t> v;
    for_each_group(t, k, [&](std::size_t b, std::size_t e) {
      std::size_t const m = e - b;
      v.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        v[i] = static_cast<std::int64_t>(get_bits(t.records[b + i].w, f.shift, f.width));
      }
      for (std::size_t i = 0; i < m; ++i) {
        Count const wi = t.records[b + i].weight;
        bins.emplace_back(0, wi * wi);
        for (std::size_t j = 0; j < i; ++j) bins.emplace_back(v[i] - v[j], wi * t.records[b + j].weight);
        if (bins.size() > kSparseFlush) compress_bins(bins);
      }
    });
    compress_bins(bins);
  });
  std::vector<Bin> out;
  for (auto& part : sparse_part) {
    out.insert(out.end(), part.begin(), part.end());
    std::vector<Bin>().swap(part);
  }
  compress_bins(out);
  return out;
}

// Canonical half of the joint profile: (da, db) with da > 0, or da = 0 and db >= 0.
template <std::size_t W>
std::vector<JointEntry> reduce_joint(Table<W> const& t, Layout const& L, unsigned workers) {
  Field const& fa = L.values[0];
  Field const& fb = L.values[1];
  std::size_t const parts = t.chunks.size() - 1;
  std::vector<std::vector<JointEntry>> part(parts);
  auto less = [](JointEntry const& x, JointEntry const& y) {
    return x.a < y.a || (x.a == y.a && x.b < y.b);
  };
  auto same = [](JointEntry const& x, JointEntry const& y) { return x.a == y.a && x.b == y.b; };
  auto merge = [](JointEntry& x, JointEntry const& y) { x.count += y.count; };
  parallel_for(parts, workers, [&](std::size_t k) {
    std::vector<JointEntry>& out = part[k];
    std::vector<std::int64_t> va, vb;
    for_each_group(t, k, [&](std::size_t b, std::size_t e) {
      std::size_t const m = e - b;
      va.resize(m);
      vb.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        va[i] = static_cast<std::int64_t>(get_bits(t.records[b + i].w, fa.shift, fa.width));
        vb[i] = static_cast<std::int64_t>(get_bits(t.records[b + i].w, fb.shift, fb.width));
      }
      for (std::size_t i = 0; i < m; ++i) {
        Count const wi = t.records[b + i].weight;
        out.push_back({0, 0, wi * wi});
        for (std::size_t j = 0; j < i; ++j) {
          out.push_back({va[i] - va[j], vb[i] - vb[j], wi * t.records[b + j].weight});
        }
        if (out.size() > kSparseFlush) sort_compress(out, less, same, merge);
      }
    });
    sort_compress(out, less, same, merge);
  });
  std::vector<JointEntry> all;
  for (auto& p : part) {
    all.insert(all.end(), p.begin(), p.end());
    std::vector<JointEntry>().swap(p);
  }
  sort_compress(all, less, same, merge);
  return all;
}

// Runs fn.template operator()<W>() with the narrowest word count that fits L.
template <class Fn>
decltype(auto) dispatch_words(Layout const& L, Fn&& fn) {
  int const words = std::max(1, (L.total_bits + 63) / 64);
  if (words == 1) return fn.template operator()<1>();
  if (words == 2) return fn.template operator()<2>();
  if (words <= 4) return fn.template operator()<4>();
  if (words <= 8) return fn.template operator()<8>();
  throw BudgetError("packed key wider than 512 bits");
}

}  // namespace

char const* to_string(CountMethod m) { return m == CountMethod::kBrute ? "brute" : "mitm"; }

void SystemSpec::validate() const {
  if (d < 1 || d > kMaxDegree) throw DomainError("degree must lie in [1, " + std::to_string(kMaxDegree) + "]");
  if (s < 1 || s > kMaxHalfSize) throw DomainError("s must lie in [1, " + std::to_string(kMaxHalfSize) + "]");
  if (N < 1) throw DomainError("N must be >= 1");
  std::vector<int> used;
  auto claim = [&](int p, char const* what) {
    if (p < 1 || p > d) throw DomainError(std::string(what) + " power out of range 1..d");
    if (has_power(used, p)) throw DomainError("constraint powers must be distinct");
    used.push_back(p);
  };
  for (int p : zero_powers) claim(p, "zero");
  if (profile_power) claim(*profile_power, "profile");
  if (window) {
    claim(window->power, "window");
    if (window->H < 0) throw DomainError("window half-width must be >= 0");
  }
  // Half sums up to s * upper^d must fit comfortably in 62 bits.
  phases::Int128 const top = phases::checked_mul(s, phases::checked_pow(upper(), d));
  if (top >= (phases::Int128{1} << 62)) throw OverflowError("power sums exceed 62 bits");
}

std::string SystemSpec::describe() const {
  std::ostringstream os;
  os << "d=" << d << " s=" << s << " N=" << N
     << " range=" << (range == VariableRange::kOneToN ? "[1,N]" : "[1,2N]") << " zero={";
  for (std::size_t k = 0; k < zero_powers.size(); ++k) os << (k ? "," : "") << zero_powers[k];
  os << "}";
  if (profile_power) os << " profile=" << *profile_power;
  if (window) os << " window=(" << window->power << ",H=" << window->H << ")";
  return os.str();
}

Count FrequencyProfile::at(std::int64_t b) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), b,
                             [](auto const& e, std::int64_t x) { return e.first < x; });
  return it != entries.end() && it->first == b ? it->second : 0;
}

Count FrequencyProfile::total() const {
  Count t = 0;
  for (auto const& [b, c] : entries) t += c;
  return t;
}

bool FrequencyProfile::symmetric() const {
  for (auto const& [b, c] : entries) {
    if (at(-b) != c) return false;
  }
  return true;
}

Count JointProfile::total() const {
  Count t = 0;
  for (auto const& e : entries) t += e.count;
  return t;
}

std::uint64_t multiset_count(std::int64_t U, int s) {
  if (s == 0) return 1;
  if (U <= 0) return 0;
  // binom(U + s - 1, s) built incrementally; each step stays an exact binomial.
  phases::Int128 c = 1;
  for (int k = 1; k <= s; ++k) {
    c = phases::checked_mul(c, U - 1 + k) / k;
  }
  if (c > static_cast<phases::Int128>(~std::uint64_t{0})) throw OverflowError("multiset count overflow");
  return static_cast<std::uint64_t>(c);
}

CountResult count_brute(SystemSpec const& spec) {
  spec.validate();
  check_brute_budget(spec);
  auto const t0 = Clock::now();
  std::vector<int> powers = spec.zero_powers;
  std::size_t const zeros = powers.size();
  if (spec.window) powers.push_back(spec.window->power);
  Count count = 0;
  std::uint64_t tuples = 0;
  enumerate_ordered(spec, powers, [&](std::span<std::int64_t const> sums) {
    ++tuples;
    for (std::size_t k = 0; k < zeros; ++k) {
      if (sums[k] != 0) return;
    }
    if (spec.window && std::abs(sums[zeros]) > spec.window->H) return;
    ++count;
  });
  return {count, ms_since(t0), CountMethod::kBrute, tuples};
}

CountResult count_mitm(SystemSpec const& spec, Options const& opts) {
  spec.validate();
  auto const t0 = Clock::now();
  std::vector<int> values;
  if (spec.window) values.push_back(spec.window->power);
  Layout const L = make_layout(spec, spec.zero_powers, values);
  unsigned const workers = resolve_workers(opts.workers);
  return dispatch_words(L, [&]<std::size_t W>() {
    Table<W> const t = build_table<W>(spec, L, opts);
    Count const c = reduce_count(t, L, spec.window, workers);
    return CountResult{c, ms_since(t0), CountMethod::kMitm, multiset_count(spec.upper(), spec.s)};
  });
}

FrequencyProfile profile(SystemSpec const& spec, Options const& opts) {
  spec.validate();
  if (!spec.profile_power) throw DomainError("profile needs a profile power");
  if (spec.window) throw DomainError("profile does not combine with a window constraint");
  Layout const L = make_layout(spec, spec.zero_powers, {*spec.profile_power});
  unsigned const workers = resolve_workers(opts.workers);
  std::vector<Bin> half = dispatch_words(L, [&]<std::size_t W>() {
    Table<W> const t = build_table<W>(spec, L, opts);
    check_pair_work(t, workers);
    return reduce_profile(t, L, workers);
  });
  FrequencyProfile out;
  out.spec = spec;
  out.entries.reserve(2 * half.size());
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    if (it->first != 0) out.entries.emplace_back(-it->first, it->second);
  }
  for (Bin const& b : half) out.entries.push_back(b);
  return out;
}

FrequencyProfile profile_brute(SystemSpec const& spec) {
  spec.validate();
  if (!spec.profile_power) throw DomainError("profile needs a profile power");
  if (spec.window) throw DomainError("profile does not combine with a window constraint");
  check_brute_budget(spec);
  std::vector<int> powers = spec.zero_powers;
  std::size_t const zeros = powers.size();
  powers.push_back(*spec.profile_power);
  std::map<std::int64_t, Count> hist;
  enumerate_ordered(spec, powers, [&](std::span<std::int64_t const> sums) {
    for (std::size_t k = 0; k < zeros; ++k) {
      if (sums[k] != 0) return;
    }
    ++hist[sums[zeros]];
  });
  FrequencyProfile out;
  out.spec = spec;
  out.entries.assign(hist.begin(), hist.end());
  return out;
}

namespace {

void check_joint_powers(SystemSpec const& spec, int pa, int pb) {
  spec.validate();
  if (spec.window || spec.profile_power) {
    throw DomainError("joint profile takes zero constraints only");
  }
  for (int p : {pa, pb}) {
    if (p < 1 || p > spec.d || has_power(spec.zero_powers, p)) {
      throw DomainError("joint profile powers must be free powers in 1..d");
    }
  }
  if (pa == pb) throw DomainError("joint profile powers must differ");
}

}  // namespace

JointProfile joint_profile(SystemSpec const& spec, int power_a, int power_b, Options const& opts) {
  check_joint_powers(spec, power_a, power_b);
  Layout const L = make_layout(spec, spec.zero_powers, {power_a, power_b});
  unsigned const workers = resolve_workers(opts.workers);
  std::vector<JointEntry> half = dispatch_words(L, [&]<std::size_t W>() {
    Table<W> const t = build_table<W>(spec, L, opts);
    check_pair_work(t, workers);
    return reduce_joint(t, L, workers);
  });
  JointProfile out;
  out.spec = spec;
  out.power_a = power_a;
  out.power_b = power_b;
  out.entries.reserve(2 * half.size());
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    if (it->a != 0 || it->b != 0) out.entries.push_back({-it->a, -it->b, it->count});
  }
  for (JointEntry const& e : half) out.entries.push_back(e);
  std::sort(out.entries.begin(), out.entries.end(), [](JointEntry const& x, JointEntry const& y) {
    return x.a < y.a || (x.a == y.a && x.b < y.b);
  });
  return out;
}

JointProfile joint_profile_brute(SystemSpec const& spec, int power_a, int power_b) {
  check_joint_powers(spec, power_a, power_b);
  check_brute_budget(spec);
  std::vector<int> powers = spec.zero_powers;
  std::size_t const zeros = powers.size();
  powers.push_back(power_a);
  powers.push_back(power_b);
  std::map<std::pair<std::int64_t, std::int64_t>, Count> hist;
  enumerate_ordered(spec, powers, [&](std::span<std::int64_t const> sums) {
    for (std::size_t k = 0; k < zeros; ++k) {
      if (sums[k] != 0) return;
    }
    ++hist[{sums[zeros], sums[zeros + 1]}];
  });
  JointProfile out;
  out.spec = spec;
  out.power_a = power_a;
  out.power_b = power_b;
  for (auto const& [key, c] : hist) out.entries.push_back({key.first, key.second, c});
  return out;
}

}  // namespace vmvt::counting
