#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "erpm/partition.hpp"

namespace erpm {

/// Actor attribute columns (NaN marks a missing value) plus named symmetric
/// dyadic covariate matrices with zero diagonal.
struct CovariateStore {
  int n = 0;
  std::map<std::string, std::vector<double>> attributes;
  std::map<std::string, std::vector<double>> dyadic;  // row-major n x n

  static CovariateStore empty(int n) { return CovariateStore{n, {}, {}}; }

  const std::vector<double>& attribute(const std::string& name) const;
  const std::vector<double>& dyadic_matrix(const std::string& name) const;
  double dyad(const std::string& name, int i, int j) const;

  void add_attribute(std::string name, std::vector<double> values);
  void add_dyadic(std::string name, std::vector<double> matrix);

  /// Restriction to a subset of actors, preserving subset order.
  CovariateStore restrict(std::span<const int> subset) const;
};

enum class StatKind {
  NumGroups,
  NumGroupsOfSize,
  SumLogFactorialSizes,
  SumSquaredSizes,
  DyadicHomophily,
  GroupHomophily,
  DyadicCovariate,
  DyadicSociability,
  GroupSociability,
};

/// Similarity index for dyadic homophily: 1{a_i == a_j}, or -|a_i - a_j|.
enum class Similarity { Match, NegAbsDiff };

/// Group-level similarity for group homophily.
enum class GroupForm { AllSameIndicator, Range, DistinctCount, Variance };

/// One sufficient statistic. Every kind is a sum over blocks of a real
/// function of the block, which is what the delta evaluation, the recursive
/// normalizing constant, and the neutrality property all rely on.
struct StatisticSpec {
  StatKind kind = StatKind::NumGroups;
  int size_k = 0;                              // NumGroupsOfSize
  std::string attribute;                       // homophily / sociability kinds
  std::string covariate;                       // DyadicCovariate
  Similarity similarity = Similarity::Match;   // DyadicHomophily
  GroupForm form = GroupForm::Range;           // GroupHomophily
  bool normalized = false;                     // per-block normalization

  static StatisticSpec num_groups() { return {}; }
  static StatisticSpec num_groups_of_size(int k);
  static StatisticSpec sum_log_factorial_sizes();
  static StatisticSpec sum_squared_sizes();
  static StatisticSpec dyadic_homophily(std::string attribute, Similarity sim);
  static StatisticSpec group_homophily(std::string attribute, GroupForm form);
  static StatisticSpec dyadic_covariate(std::string covariate);
  static StatisticSpec dyadic_sociability(std::string attribute);
  static StatisticSpec group_sociability(std::string attribute);

  /// Depends on the partition only through block sizes.
  bool size_only() const;
  /// f_k(s) for size-only kinds, the per-block value as a function of size.
  double size_value(int s) const;

  std::string name() const;

  /// Checks referenced attributes/covariates against the store.
  void validate(const CovariateStore& cov) const;

  bool operator==(const StatisticSpec&) const = default;
};

/// Per-block contribution of one statistic.
double block_value(const StatisticSpec& spec, std::span<const int> members,
                   const CovariateStore& cov);

/// Statistic vector s(p), one entry per spec.
std::vector<double> evaluate(const Partition& p, const std::vector<StatisticSpec>& specs,
                             const CovariateStore& cov);

/// Incremental evaluation: updates `cached` = evaluate(p, ...) to the value at
/// a neighboring partition by re-summing only the blocks the move touched.
std::vector<double> delta_evaluate(const Partition& p, const Partition& p_prime,
                                   const std::vector<StatisticSpec>& specs,
                                   const CovariateStore& cov, const std::vector<double>& cached);

/// Alias of evaluate, recorded as s_obs for estimation.
inline std::vector<double> observed_statistics(const Partition& p_obs,
                                               const std::vector<StatisticSpec>& specs,
                                               const CovariateStore& cov) {
  return evaluate(p_obs, specs, cov);
}

}  // namespace erpm
