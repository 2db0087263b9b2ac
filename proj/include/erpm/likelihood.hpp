#pragma once

#include "erpm/sampler.hpp"

namespace erpm {

struct PathConfig {
  int bridges = 50;             // M
  long draws_per_bridge = 200;
  long burn_in = -1;            // raw steps before the first bridge; -1 picks 100 n
  long thinning = -1;           // raw steps per draw; -1 picks 2 n
  std::uint64_t seed = 0;

  void validate() const;
};

struct ReferenceLoglik {
  std::vector<double> alpha0;  // zeros except the num_groups entry
  double loglik = 0.0;
};

/// The exactly solvable reference: all parameters zero except num_groups,
/// which is fit by Newton-Raphson; its log-likelihood comes from the
/// recursive normalizing constant on the same (possibly restricted) support.
ReferenceLoglik reference_loglik(const std::vector<StatisticSpec>& specs,
                                 const std::vector<double>& s_obs, int n, const SizeBounds& b);

/// Bridge parameters: alpha_m = (m/M) alpha + (1 - m/M) alpha0, m = 1..M.
std::vector<std::vector<double>> bridge_parameters(const std::vector<double>& alpha,
                                                   const std::vector<double>& alpha0,
                                                   int bridges);

struct PathLoglik {
  double loglik = 0.0;
  double mc_standard_error = 0.0;
  double reference_loglik = 0.0;
  std::vector<double> alpha0;
  // consecutive bridge means jumped by much more than their spread; the
  // bridge distributions may not overlap and M should be increased
  bool overlap_warning = false;
};

/// Path-sampling estimate of the log-likelihood at the model's alpha, using
/// warm-started bridge chains from the reference model to the target.
PathLoglik path_sampling_loglik(const ModelSpec& m, const std::vector<double>& s_obs,
                                const CovariateStore& cov, const PathConfig& pc,
                                const ProposalMixture& mixture = ProposalMixture::uniform_all(),
                                BoundsMode bounds_mode = BoundsMode::RejectInvalid);

}  // namespace erpm
