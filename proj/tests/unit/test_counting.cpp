#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "vmvt/counting.hpp"
#include "vmvt/errors.hpp"

using namespace vmvt;
using namespace vmvt::counting;

namespace {

SystemSpec full(int d, int s, std::int64_t N) {
  SystemSpec spec;
  spec.d = d;
  spec.s = s;
  spec.N = N;
  for (int i = 1; i <= d; ++i) spec.zero_powers.push_back(i);
  return spec;
}

constexpr Count kWindowCount = 31504;  // d=3, s=5, N=4, zero {1,3}, |sigma_2| <= 4

}  // namespace

TEST_CASE("multiset count") {
  CHECK(multiset_count(5, 2) == 15);
  CHECK(multiset_count(1, 7) == 1);
  CHECK(multiset_count(10, 3) == 220);
}

TEST_CASE("trivial systems") {
  for (std::int64_t N = 1; N <= 9; ++N) {
    CHECK(count_brute(full(3, 1, N)).count == static_cast<Count>(N));
    CHECK(count_mitm(full(3, 1, N)).count == static_cast<Count>(N));
  }
  CHECK(count_brute(full(2, 2, 5)).count == 45);
  CHECK(count_mitm(full(2, 2, 64)).count == 8128);
}

TEST_CASE("brute force matches nested enumeration") {
  for (std::int64_t N = 1; N <= 5; ++N) {
    CHECK(count_brute(full(2, 2, N)).count == oracle::count_nested(2, N, {1, 2}));
    CHECK(count_brute(full(3, 2, N)).count == oracle::count_nested(2, N, {1, 2, 3}));
  }
}

TEST_CASE("meet in the middle equals brute force") {
  for (std::int64_t N = 1; N <= 8; ++N) CHECK(count_mitm(full(2, 2, N)).count == count_brute(full(2, 2, N)).count);
  for (std::int64_t N = 1; N <= 6; ++N) CHECK(count_mitm(full(2, 3, N)).count == count_brute(full(2, 3, N)).count);
  for (std::int64_t N = 1; N <= 8; ++N) CHECK(count_mitm(full(3, 2, N)).count == count_brute(full(3, 2, N)).count);

  SystemSpec w;
  w.d = 3;
  w.s = 5;
  w.N = 4;
  w.zero_powers = {1, 3};
  w.window = Window{2, 4};
  CHECK(count_brute(w).count == kWindowCount);
  CHECK(count_mitm(w).count == kWindowCount);

  SystemSpec partial = full(3, 3, 5);
  partial.zero_powers = {2};
  partial.range = VariableRange::kOneToTwoN;
  CHECK(count_mitm(partial).count == count_brute(partial).count);
}

TEST_CASE("worker count does not change results") {
  SystemSpec spec = full(3, 3, 40);
  Options one, four;
  one.workers = 1;
  four.workers = 4;
  CHECK(count_mitm(spec, one).count == count_mitm(spec, four).count);
  spec.zero_powers = {1, 3};
  spec.profile_power = 2;
  CHECK(profile(spec, one).entries == profile(spec, four).entries);
}

TEST_CASE("closed form 2N^2 - N") {
  for (std::int64_t N = 1; N <= 64; ++N) {
    CHECK(count_mitm(full(2, 2, N)).count == static_cast<Count>(2 * N * N - N));
  }
}

TEST_CASE("diagonal lower bound") {
  SystemSpec spec;
  spec.d = 3;
  spec.s = 5;
  spec.N = 20;
  spec.zero_powers = {1, 3};
  spec.window = Window{2, 20};
  CHECK(count_mitm(spec).count >= 3200000u);
}

TEST_CASE("profiles") {
  SystemSpec sq;
  sq.d = 2;
  sq.s = 1;
  sq.N = 12;
  sq.zero_powers = {2};
  sq.profile_power = 1;
  auto const p = profile(sq);
  REQUIRE(p.entries.size() == 1);
  CHECK(p.at(0) == 12);
  CHECK(p.at(3) == 0);

  SystemSpec spec;
  spec.d = 3;
  spec.s = 2;
  spec.N = 8;
  spec.zero_powers = {1, 3};
  spec.profile_power = 2;
  CHECK(profile(spec).entries == profile_brute(spec).entries);

  SystemSpec rich = spec;
  rich.s = 3;
  rich.zero_powers = {1};
  rich.profile_power = 3;
  auto const fast = profile(rich);
  CHECK(fast.entries == profile_brute(rich).entries);
  CHECK(fast.symmetric());
  CHECK(fast.total() == count_mitm([&] {
          SystemSpec c = rich;
          c.profile_power.reset();
          return c;
        }()).count);
}

TEST_CASE("joint profile") {
  SystemSpec spec;
  spec.d = 3;
  spec.s = 2;
  spec.N = 6;
  spec.zero_powers = {1};
  auto const fast = joint_profile(spec, 2, 3);
  CHECK(fast.entries == joint_profile_brute(spec, 2, 3).entries);
}

TEST_CASE("profile dump round trip") {
  SystemSpec spec = full(3, 3, 10);
  spec.zero_powers = {1, 3};
  spec.profile_power = 2;
  auto const p = profile(spec);
  for (ProfileEncoding e : {ProfileEncoding::kFixed, ProfileEncoding::kVarint}) {
    std::stringstream buf;
    write_profile(buf, p, e);
    auto const q = read_profile(buf);
    CHECK(q.entries == p.entries);
    CHECK(q.spec.N == 10);
    CHECK(q.spec.zero_powers == spec.zero_powers);
    CHECK(q.spec.profile_power == spec.profile_power);
  }
  std::stringstream bad("VMVTPROX");
  CHECK_THROWS_AS(read_profile(bad), DomainError);
}

TEST_CASE("validation and budgets") {
  SystemSpec spec = full(3, 2, 5);
  spec.zero_powers = {1, 1};
  CHECK_THROWS_AS(count_mitm(spec), DomainError);
  spec.zero_powers = {4};
  CHECK_THROWS_AS(count_mitm(spec), DomainError);
  CHECK_THROWS_AS(count_brute(full(3, 5, 100)), BudgetError);
  CHECK_THROWS_AS(count_mitm(full(3, 10, 1000)), BudgetError);
  CHECK_THROWS_AS(count_mitm(full(8, 2, 1 << 20)), OverflowError);
  SystemSpec both = full(3, 2, 5);
  both.zero_powers = {1};
  both.profile_power = 2;
  both.window = Window{3, 10};
  CHECK_THROWS_AS(profile(both), DomainError);
  SystemSpec zero_n = full(2, 2, 0);
  CHECK_THROWS_AS(count_mitm(zero_n), DomainError);
}
