#pragma once

#include <gmpxx.h>

#include <vector>

#include "erpm/partition.hpp"

namespace erpm {

/// Exact nonnegative integer count; arbitrary precision so no counting
/// operation ever rounds.
using BigCount = mpz_class;

/// Exact binomial coefficient C(n, k); 0 outside the triangle.
BigCount binomial(int n, int k);

/// Bell number B_n: partitions of an n-element set.
BigCount bell(int n);

/// Partitions of an n-element set with every block size in [b.min, b.max].
BigCount bell_restricted(int n, const SizeBounds& b);

/// Stirling number of the second kind: partitions of n elements into exactly
/// m blocks.
BigCount stirling2(int n, int m);

/// Size-restricted Stirling number: partitions of n elements into exactly m
/// blocks with every block size in [b.min, b.max].
BigCount stirling2_restricted(int n, int m, const SizeBounds& b);

/// Bottom-up tables for one bounds configuration, built once and then
/// read-only; share freely across threads.
class RestrictedCountTable {
 public:
  RestrictedCountTable(int n_max, SizeBounds bounds);

  const SizeBounds& bounds() const { return bounds_; }
  int n_max() const { return n_max_; }

  const BigCount& bell(int n) const;
  const BigCount& stirling(int n, int m) const;

 private:
  int n_max_;
  SizeBounds bounds_;
  std::vector<BigCount> bell_;                   // indexed by n
  std::vector<std::vector<BigCount>> stirling_;  // [n][m]
};

/// log C(n, k) in double precision, for log-space recursions.
double log_binomial(int n, int k);

}  // namespace erpm
