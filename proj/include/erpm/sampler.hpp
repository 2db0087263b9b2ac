#pragma once

#include <cstdint>
#include <random>

#include "erpm/exact.hpp"

namespace erpm {

/// Mixture weights over the three proposal relations. Permute alone cannot
/// reach every partition, so at least one of merge/split and transfer must
/// carry positive weight.
struct ProposalMixture {
  double merge_split = 1.0;
  double permute = 0.0;
  double transfer = 0.0;

  static ProposalMixture merge_split_only() { return {1.0, 0.0, 0.0}; }
  static ProposalMixture uniform_all() { return {1.0 / 3, 1.0 / 3, 1.0 / 3}; }

  double weight(RelationKind r) const;
  double total() const { return merge_split + permute + transfer; }
  void validate() const;
};

/// reject_invalid targets the bounded support directly (out-of-bounds
/// proposals are rejected); full_space_retain runs the chain on the whole
/// space and only emits in-bounds draws.
enum class BoundsMode { RejectInvalid, FullSpaceRetain };

struct ChainConfig {
  ProposalMixture mixture;
  long burn_in = 0;
  long thinning = 1;
  std::uint64_t seed = 0;
  BoundsMode bounds_mode = BoundsMode::RejectInvalid;
  // cached statistics are recomputed from scratch this often to bound
  // floating-point drift of the delta updates
  long full_reevaluate_interval = 10000;
  // for restricted supports with n <= this, verify at startup that the
  // support is connected under the active relations
  int irreducibility_check_cap = 8;

  void validate() const;
};

/// One Metropolis-Hastings chain over partitions. Holds a mutable working
/// representation (blocks, cached per-block statistic contributions); the
/// ModelSpec and CovariateStore are shared read-only.
class Chain {
 public:
  Chain(ModelSpec model, const CovariateStore& cov, const ChainConfig& cfg, Partition initial);

  void step();
  void steps(long count);

  const std::vector<double>& stats() const { return totals_; }
  Partition partition() const;
  int n() const { return n_; }

  /// Replaces the parameter vector (the support and statistics are fixed).
  void set_alpha(std::span<const double> alpha);
  const std::vector<double>& alpha() const { return model_.alpha; }

  long proposal_count(RelationKind r) const { return proposals_[static_cast<int>(r)]; }
  long accept_count(RelationKind r) const { return accepts_[static_cast<int>(r)]; }

  /// Re-derives cached statistics from the current partition; called
  /// periodically and after set_alpha.
  void refresh_cache();

 private:
  struct BlockDelta;
  void apply_merge(int g1, int g2);
  void apply_split(int g, const std::vector<int>& part_b);
  void apply_transfer(int node, int dest);  // dest == num groups means a new block
  void apply_permute(int node_i, int node_j);
  double availability_mass(int num_groups, int singleton_count) const;
  std::uint64_t relation_count(RelationKind r) const;

  ModelSpec model_;
  const CovariateStore* cov_;
  ChainConfig cfg_;
  int n_;
  std::mt19937_64 rng_;

  std::vector<int> member_of_;           // group index per node
  std::vector<std::vector<int>> groups_; // member lists, compact
  std::vector<std::vector<double>> block_values_;  // [group][stat]
  std::vector<double> totals_;
  long steps_since_refresh_ = 0;
  long proposals_[3] = {0, 0, 0};
  long accepts_[3] = {0, 0, 0};
};

struct Sample {
  Partition partition;
  std::vector<double> stats;
};

/// num_samples thinned draws after burn-in. Under full_space_retain only the
/// in-bounds draws among them are returned. Identical seeds give identical
/// sequences.
std::vector<Sample> run_chain(const ModelSpec& m, const CovariateStore& cov,
                              const ChainConfig& cfg, long num_samples);

std::vector<Sample> run_chain_from(const ModelSpec& m, const CovariateStore& cov,
                                   const ChainConfig& cfg, long num_samples, Partition initial);

/// The acceptance ratio: min(1, exp(alpha . (s' - s)) * forward/backward),
/// where forward/backward are the distinct-neighbor counts of the chosen
/// relation and the availability masses correct for states where some
/// relations have empty neighbor sets.
double accept_probability(std::span<const double> alpha, std::span<const double> current_stats,
                          std::span<const double> candidate_stats, double forward_count,
                          double backward_count, double forward_avail, double backward_avail,
                          bool candidate_in_bounds, BoundsMode mode);

/// Explicit transition matrix of the chain on an enumerable support, row p ->
/// column p'. Built from the same proposal counts and acceptance ratio the
/// chain uses; rows sum to one.
Eigen::MatrixXd transition_matrix(const ModelSpec& m, const CovariateStore& cov,
                                  const ProposalMixture& mixture, BoundsMode mode,
                                  const std::vector<Partition>& states);

/// Per-statistic lag autocorrelation of a trace; a constant statistic is
/// reported as 0 with its flag set.
std::vector<double> autocorrelation(const std::vector<std::vector<double>>& trace, int lag,
                                    std::vector<bool>* constant_flags = nullptr);

/// Some partition with all block sizes in bounds, built from a random block
/// size composition (not uniform over the support; used for chain starts).
Partition random_valid_partition(int n, const SizeBounds& b, std::mt19937_64& rng);

}  // namespace erpm
