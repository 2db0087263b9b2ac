#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "erpm/combinatorics.hpp"
#include "test_oracles.hpp"

using namespace erpm;

namespace {

const std::vector<SizeBounds> kBoundsGrid = {
    SizeBounds::all(), SizeBounds{2, 5}, SizeBounds{3, 5}, SizeBounds{2, 2}, SizeBounds{1, 3}};

}  // namespace

TEST_CASE("bell numbers") {
  CHECK(bell(0) == 1);
  CHECK(bell(1) == 1);
  CHECK(bell(3) == 5);
  CHECK(bell(10) == 115975);
  CHECK(bell(12) == 4213597);
  CHECK(bell(15) == BigCount("1382958545"));
  CHECK_THROWS_AS(bell(-1), ValidationError);
}

TEST_CASE("bell(n) equals the sum of stirling2(n, m)") {
  for (int n = 1; n <= 15; ++n) {
    BigCount sum = 0;
    for (int m = 1; m <= n; ++m) sum += stirling2(n, m);
    CHECK(sum == bell(n));
  }
}

TEST_CASE("restricted bell numbers") {
  CHECK(bell_restricted(2, SizeBounds{3, 5}) == 0);
  CHECK(bell_restricted(3, SizeBounds{3, 5}) == 1);
  CHECK(bell_restricted(4, SizeBounds{2, 4}) == 4);
  CHECK(bell_restricted(0, SizeBounds{2, 5}) == 1);
  for (int n = 0; n <= 10; ++n) CHECK(bell_restricted(n, SizeBounds{1, std::max(n, 1)}) == bell(n));
}

TEST_CASE("stirling numbers of the second kind") {
  CHECK(stirling2(0, 0) == 1);
  CHECK(stirling2(3, 0) == 0);
  CHECK(stirling2(0, 3) == 0);
  for (int n = 1; n <= 8; ++n) CHECK(stirling2(n, 1) == 1);
  CHECK(stirling2(3, 2) == 3);
  CHECK(stirling2(10, 4) == 34105);
}

TEST_CASE("restricted stirling numbers") {
  const SizeBounds two{2, 2};
  CHECK(stirling2_restricted(3, 2, two) == 0);  // n < m * min
  CHECK(stirling2_restricted(4, 2, two) == 3);  // 4!/(2! (2!)^2)
  CHECK(stirling2_restricted(6, 3, two) == 15);
  for (int n = 0; n <= 10; ++n)
    for (int m = 0; m <= n; ++m)
      CHECK(stirling2_restricted(n, m, SizeBounds::all()) == stirling2(n, m));
}

TEST_CASE("sum over m of restricted stirling equals restricted bell") {
  for (const auto& b : kBoundsGrid)
    for (int n = 1; n <= 10; ++n) {
      BigCount sum = 0;
      for (int m = 1; m <= n; ++m) sum += stirling2_restricted(n, m, b);
      CHECK(sum == bell_restricted(n, b));
    }
}

TEST_CASE("counts agree with the enumeration oracle for n <= 10") {
  for (int n = 1; n <= 10; ++n) {
    const auto memberships = testing::all_memberships(n);
    for (const auto& b : kBoundsGrid) {
      long total = 0;
      std::vector<long> by_groups(n + 1, 0);
      for (const auto& m : memberships) {
        const Partition p{std::vector<int>(m)};
        if (!p.respects(b)) continue;
        ++total;
        ++by_groups[p.num_groups()];
      }
      CHECK(bell_restricted(n, b) == total);
      for (int groups = 1; groups <= n; ++groups)
        CHECK(stirling2_restricted(n, groups, b) == by_groups[groups]);
    }
  }
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(60, 30) == BigCount("118264581564861424"));
  CHECK(binomial(3, 5) == 0);
  CHECK(log_binomial(60, 30) == doctest::Approx(std::log(118264581564861424.0)).epsilon(1e-12));
}

TEST_CASE("restricted count table matches the free functions") {
  const SizeBounds b{2, 5};
  const RestrictedCountTable table(12, b);
  for (int n = 0; n <= 12; ++n) {
    CHECK(table.bell(n) == bell_restricted(n, b));
    for (int m = 0; m <= n; ++m) CHECK(table.stirling(n, m) == stirling2_restricted(n, m, b));
  }
}
