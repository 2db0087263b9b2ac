#include "erpm/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace erpm {

BigCount binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigCount out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

double log_binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

namespace {

// i ranges of the size-restricted recursions: when building size n+1 = target,
// the block of the newest element has size target - i, so i is confined to
// [max(0, target - max_size), min(target - 1, target - min_size)].
struct IndexRange {
  int lo, hi;
};

IndexRange restricted_range(int target, const SizeBounds& b) {
  const int lo = (b.max >= target) ? 0 : target - b.max;
  const int hi = std::min(target - 1, target - b.min);
  return {lo, hi};
}

}  // namespace

BigCount bell(int n) {
  if (n < 0) throw ValidationError("bell: n must be >= 0");
  std::vector<BigCount> b(n + 1);
  b[0] = 1;
  for (int target = 1; target <= n; ++target) {
    BigCount sum = 0;
    for (int i = 0; i < target; ++i) sum += binomial(target - 1, i) * b[i];
    b[target] = sum;
  }
  return b[n];
}

BigCount bell_restricted(int n, const SizeBounds& b) {
  if (n < 0) throw ValidationError("bell_restricted: n must be >= 0");
  b.validate();
  std::vector<BigCount> table(n + 1);
  table[0] = 1;
  for (int target = 1; target <= n; ++target) {
    const auto [lo, hi] = restricted_range(target, b);
    BigCount sum = 0;
    for (int i = lo; i <= hi; ++i) sum += binomial(target - 1, i) * table[i];
    table[target] = sum;
  }
  return table[n];
}

BigCount stirling2(int n, int m) {
  if (n < 0 || m < 0) throw ValidationError("stirling2: arguments must be >= 0");
  return stirling2_restricted(n, m, SizeBounds::all());
}

BigCount stirling2_restricted(int n, int m, const SizeBounds& b) {
  if (n < 0 || m < 0) throw ValidationError("stirling2_restricted: arguments must be >= 0");
  b.validate();
  if (m > n) return 0;
  // psi[i][j] for i <= n, j <= m; psi(0,0) = 1 seeds everything, including the
  // n = m*min base cases.
  std::vector<std::vector<BigCount>> psi(n + 1, std::vector<BigCount>(m + 1));
  psi[0][0] = 1;
  for (int target = 1; target <= n; ++target) {
    const auto [lo, hi] = restricted_range(target, b);
    for (int j = 1; j <= m; ++j) {
      BigCount sum = 0;
      for (int i = lo; i <= hi; ++i)
        if (i >= j - 1) sum += binomial(target - 1, i) * psi[i][j - 1];
      psi[target][j] = sum;
    }
  }
  return psi[n][m];
}

RestrictedCountTable::RestrictedCountTable(int n_max, SizeBounds bounds)
    : n_max_(n_max), bounds_(bounds) {
  bounds_.validate();
  bell_.resize(n_max + 1);
  bell_[0] = 1;
  for (int target = 1; target <= n_max; ++target) {
    const auto [lo, hi] = restricted_range(target, bounds_);
    BigCount sum = 0;
    for (int i = lo; i <= hi; ++i) sum += binomial(target - 1, i) * bell_[i];
    bell_[target] = sum;
  }
  stirling_.assign(n_max + 1, std::vector<BigCount>(n_max + 1));
  stirling_[0][0] = 1;
  for (int target = 1; target <= n_max; ++target) {
    const auto [lo, hi] = restricted_range(target, bounds_);
    for (int j = 1; j <= target; ++j) {
      BigCount sum = 0;
      for (int i = lo; i <= hi; ++i)
        if (i >= j - 1) sum += binomial(target - 1, i) * stirling_[i][j - 1];
      stirling_[target][j] = sum;
    }
  }
}

const BigCount& RestrictedCountTable::bell(int n) const {
  if (n < 0 || n > n_max_) throw ValidationError("count table: n out of range");
  return bell_[n];
}

const BigCount& RestrictedCountTable::stirling(int n, int m) const {
  if (n < 0 || n > n_max_ || m < 0) throw ValidationError("count table: index out of range");
  static const BigCount zero = 0;
  if (m > n_max_) return zero;
  return stirling_[n][m];
}

}  // namespace erpm
