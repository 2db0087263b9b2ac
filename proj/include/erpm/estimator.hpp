#pragma once

#include "erpm/sampler.hpp"

namespace erpm {

/// Starting-parameter rule: zeros except the exactly solvable entries.
/// SizeOnlySolve fits the whole size-only sub-vector jointly by
/// Newton-Raphson on the recursive normalizing constant; NumGroupsOnly fits
/// just the num_groups entry. The joint solve is the default: it seeds the
/// chain in a region it can actually mix through when size statistics are
/// heavy-tailed.
enum class Alpha0Rule { SizeOnlySolve, NumGroupsOnly };

struct EstimationConfig {
  long m1 = 400;                  // phase-1 sample size
  int subphases = 4;              // R
  double gain = 0.1;              // a; subphase r uses a / 2^{r-1}
  double subphase_base = 100;     // minimum length ceil(base * 2^{4r/3})
  double subphase_max_factor = 20;
  long m3 = 1000;                 // phase-3 sample size
  double offdiag_damping = 0.2;   // multiplier on the off-diagonal of D0
  double max_step = 1.0;          // sup-norm clamp on one phase-2 update
  double divergence_bound = 50;   // |alpha| beyond this aborts with a degeneracy diagnostic
  double autocorr_threshold = 0.4;
  int max_thinning_doublings = 6;
  int max_restarts = 0;           // reruns from alpha_f when not converged
  long burn_in = -1;              // raw steps; -1 picks 100 n
  long thinning = -1;             // raw steps per draw; -1 picks 2 n
  Alpha0Rule alpha0_rule = Alpha0Rule::SizeOnlySolve;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Phase1Result {
  Eigen::MatrixXd d0;
  std::vector<double> alpha_start;  // the one-step updated parameter
  std::vector<double> mean_stats;
  long thinning = 1;  // after autocorrelation-driven doubling
};

struct SubphaseTrace {
  double gain = 0;
  long length = 0;
  std::vector<double> tail_average;
};

struct EstimationResult {
  std::vector<std::string> statistic_names;
  std::vector<double> s_obs;
  std::vector<double> alpha0;  // phase-1 starting parameter
  std::vector<double> alpha_hat;
  std::vector<double> standard_errors;
  std::vector<double> wald_ratios;
  std::vector<std::string> significance;  // "", "*", "**", "***"
  std::vector<double> convergence_ratios;
  bool converged = false;
  std::vector<double> phase3_mean_stats;
  Eigen::MatrixXd phase3_covariance;
  long thinning_used = 1;
  int restarts_used = 0;
  std::vector<SubphaseTrace> subphases;
  std::vector<std::vector<double>> phase2_alpha_trace;
  std::vector<std::vector<double>> phase3_stat_trace;
};

std::string significance_stars(double wald_ratio);

/// Three-phase Robbins-Monro solver for the moment equation E_alpha[s] =
/// s_obs. The model's alpha field is ignored; the starting point is zeros
/// with the num_groups entry solved exactly on the size-only sub-model.
class RobbinsMonroEstimator {
 public:
  RobbinsMonroEstimator(ModelSpec model, const CovariateStore& cov, EstimationConfig cfg,
                        ProposalMixture mixture, BoundsMode bounds_mode = BoundsMode::RejectInvalid);

  /// Runs all three phases from the given initial partition (usually the
  /// observed one). Deterministic given the config seed.
  EstimationResult estimate(const std::vector<double>& s_obs, const Partition& initial);

  /// Starting parameter rule: zeros except the num_groups entry, solved by
  /// Newton-Raphson on the size-only sub-model.
  std::vector<double> initial_alpha(const std::vector<double>& s_obs) const;

  Phase1Result phase1_scaling(Chain& chain, const std::vector<double>& alpha0,
                              const std::vector<double>& s_obs, long thinning) const;
  std::vector<SubphaseTrace> phase2_iterate(Chain& chain, std::vector<double> alpha,
                                            const Eigen::MatrixXd& d0,
                                            const std::vector<double>& s_obs, long thinning,
                                            std::vector<std::vector<double>>* trace) const;
  void phase3_assess(Chain& chain, const std::vector<double>& alpha_f,
                     const std::vector<double>& s_obs, long thinning,
                     EstimationResult* result) const;

  const ModelSpec& model() const { return model_; }

 private:
  ModelSpec model_;
  const CovariateStore* cov_;
  EstimationConfig cfg_;
  ChainConfig chain_cfg_;
};

}  // namespace erpm
