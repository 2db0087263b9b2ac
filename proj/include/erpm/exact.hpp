#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "erpm/statistics.hpp"

namespace erpm {

/// A fully specified exponential random partition model:
/// Pr(p) proportional to exp(alpha . s(p)) over partitions respecting bounds.
struct ModelSpec {
  std::vector<StatisticSpec> specs;
  std::vector<double> alpha;
  SizeBounds bounds;

  void validate(const CovariateStore& cov) const;
  bool size_only() const;
};

/// Exhaustive model distribution over an enumerable support. Partitions are
/// in lexicographic restricted-growth order, so lookup is a binary search.
struct ExactDistribution {
  std::vector<Partition> partitions;
  std::vector<double> probabilities;
  double log_kappa = 0.0;

  int index_of(const Partition& p) const;
  double probability(const Partition& p) const;
};

inline constexpr int kDefaultEnumerationCap = 12;

/// All partitions of n actors respecting the bounds, canonical and
/// duplicate-free, in lexicographic order. Count equals bell_restricted(n,b).
std::vector<Partition> enumerate_partitions(int n, const SizeBounds& b,
                                            int cap = kDefaultEnumerationCap);

ExactDistribution exact_distribution(const ModelSpec& m, const CovariateStore& cov,
                                     int cap = kDefaultEnumerationCap);

/// log of the normalizing constant for models whose statistics are functions
/// of block sizes, via the recursive sequence (restricted variant when bounds
/// bind). Exact up to floating-point error; computed in log space throughout.
double log_kappa_recursive(const std::vector<StatisticSpec>& specs,
                           const std::vector<double>& alpha, int n, const SizeBounds& b);

double kappa_recursive(const std::vector<StatisticSpec>& specs, const std::vector<double>& alpha,
                       int n, const SizeBounds& b);

/// Term-wise differentiation of the kappa recursion: log kappa, the exact
/// expected statistics d log kappa / d alpha, and their covariance matrix
/// (the Hessian of log kappa).
struct KappaDerivatives {
  double log_kappa;
  std::vector<double> expected;
  Eigen::MatrixXd covariance;
};

KappaDerivatives kappa_derivatives(const std::vector<StatisticSpec>& specs,
                                   const std::vector<double>& alpha, int n, const SizeBounds& b);

/// E_alpha[s]: from the derivative recursion for size-only models, otherwise
/// by enumeration (n <= cap).
std::vector<double> exact_expected_statistics(const ModelSpec& m, const CovariateStore& cov,
                                              int cap = kDefaultEnumerationCap);

struct NewtonOptions {
  double tolerance = 1e-9;       // on the moment residual, sup norm
  int max_iterations = 200;
  double max_step = 2.0;         // per-iteration sup-norm clamp
  double divergence_bound = 50;  // |alpha| beyond this reports MLE at infinity
};

/// Exact maximum-likelihood estimate for size-only models, solving
/// E_alpha[s] = s_obs by Newton-Raphson on the recursive kappa. The solution
/// is unique when it exists; a boundary s_obs raises MleAtInfinityError.
std::vector<double> newton_mle_size_only(const std::vector<StatisticSpec>& specs,
                                         const std::vector<double>& s_obs, int n,
                                         const SizeBounds& b, const NewtonOptions& opts = {});

/// One-dimensional solve: adjusts alpha[component] so that the expectation of
/// that statistic hits `target`, all other components held fixed.
double solve_size_component(const std::vector<StatisticSpec>& specs, std::vector<double> alpha,
                            int component, double target, int n, const SizeBounds& b,
                            const NewtonOptions& opts = {});

struct NeutralityReport {
  double max_deviation = 0.0;
  bool neutral(double tol = 1e-10) const { return max_deviation < tol; }
};

/// Checks the factorization of the conditional law given that no block
/// straddles the split, against the product of the projected models.
NeutralityReport neutrality_check(const ModelSpec& m, const CovariateStore& cov,
                                  std::span<const int> subset, int cap = kDefaultEnumerationCap);

/// Ewens normalizing constant via kappa_{n+1} = (lambda + n) kappa_n.
double ewens_log_kappa(double lambda, int n);

/// log of the unnormalized Ewens weight lambda^{#p} prod (#G - 1)!.
double ewens_log_weight(const Partition& p, double lambda);

/// Numerically stable log(sum(exp(x))).
double log_sum_exp(std::span<const double> x);

}  // namespace erpm
