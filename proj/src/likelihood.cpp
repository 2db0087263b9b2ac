#include "erpm/likelihood.hpp"

#include <cmath>

namespace erpm {

void PathConfig::validate() const {
  if (bridges < 2) throw ValidationError("path config: M must be >= 2");
  if (draws_per_bridge < 2)
    throw ValidationError("path config: draws_per_bridge must be >= 2");
}

ReferenceLoglik reference_loglik(const std::vector<StatisticSpec>& specs,
                                 const std::vector<double>& s_obs, int n, const SizeBounds& b) {
  if (s_obs.size() != specs.size())
    throw ValidationError("reference_loglik: s_obs length mismatch");
  int ng = -1;
  for (std::size_t k = 0; k < specs.size(); ++k)
    if (specs[k].kind == StatKind::NumGroups) {
      ng = static_cast<int>(k);
      break;
    }
  if (ng < 0)
    throw ValidationError("reference_loglik: the model must contain the num_groups statistic");

  ReferenceLoglik out;
  out.alpha0.assign(specs.size(), 0.0);
  out.alpha0[ng] = newton_mle_size_only({specs[ng]}, {s_obs[ng]}, n, b)[0];
  const double log_kappa = log_kappa_recursive({specs[ng]}, {out.alpha0[ng]}, n, b);
  out.loglik = out.alpha0[ng] * s_obs[ng] - log_kappa;
  return out;
}

std::vector<std::vector<double>> bridge_parameters(const std::vector<double>& alpha,
                                                   const std::vector<double>& alpha0,
                                                   int bridges) {
  if (alpha.size() != alpha0.size())
    throw ValidationError("bridge_parameters: alpha length mismatch");
  std::vector<std::vector<double>> out;
  out.reserve(bridges);
  for (int m = 1; m <= bridges; ++m) {
    const double t = static_cast<double>(m) / bridges;
    std::vector<double> a(alpha.size());
    for (std::size_t k = 0; k < alpha.size(); ++k)
      a[k] = t * alpha[k] + (1.0 - t) * alpha0[k];
    out.push_back(std::move(a));
  }
  return out;
}

PathLoglik path_sampling_loglik(const ModelSpec& m, const std::vector<double>& s_obs,
                                const CovariateStore& cov, const PathConfig& pc,
                                const ProposalMixture& mixture, BoundsMode bounds_mode) {
  m.validate(cov);
  pc.validate();
  const int K = static_cast<int>(m.specs.size());
  const auto reference = reference_loglik(m.specs, s_obs, cov.n, m.bounds);

  std::vector<double> delta(K);
  for (int k = 0; k < K; ++k) delta[k] = m.alpha[k] - reference.alpha0[k];

  const long thinning = pc.thinning > 0 ? pc.thinning : 2L * cov.n;
  const long settle = pc.burn_in > 0 ? pc.burn_in : 100L * cov.n;

  ChainConfig chain_cfg;
  chain_cfg.mixture = mixture;
  chain_cfg.bounds_mode = bounds_mode;
  chain_cfg.seed = pc.seed;
  std::mt19937_64 init_rng(pc.seed ^ 0x6a09e667f3bcc909ull);
  ModelSpec bridge_model = m;
  bridge_model.alpha = reference.alpha0;
  Chain chain(bridge_model, cov, chain_cfg,
              random_valid_partition(cov.n, bounds_mode == BoundsMode::RejectInvalid
                                                ? m.bounds
                                                : SizeBounds::all(),
                                     init_rng));
  chain.steps(settle);

  PathLoglik out;
  out.alpha0 = reference.alpha0;
  out.reference_loglik = reference.loglik;

  const auto bridges = bridge_parameters(m.alpha, reference.alpha0, pc.bridges);
  double lambda_hat = 0.0;
  double variance_of_sum = 0.0;
  double previous_mean = 0.0, previous_sd = 0.0;
  for (std::size_t b = 0; b < bridges.size(); ++b) {
    chain.set_alpha(bridges[b]);
    chain.steps(5 * thinning);  // short settle, bridges are warm-started
    double sum = 0.0, sum_sq = 0.0;
    for (long d = 0; d < pc.draws_per_bridge; ++d) {
      chain.steps(thinning);
      double projected = 0.0;
      for (int k = 0; k < K; ++k) projected += delta[k] * chain.stats()[k];
      sum += projected;
      sum_sq += projected * projected;
    }
    const double mean = sum / static_cast<double>(pc.draws_per_bridge);
    const double var =
        std::max(0.0, sum_sq / static_cast<double>(pc.draws_per_bridge) - mean * mean);
    const double sd = std::sqrt(var);
    lambda_hat += mean;
    variance_of_sum += var / static_cast<double>(pc.draws_per_bridge);
    if (b > 0 && std::abs(mean - previous_mean) >
                     10.0 * std::max({previous_sd, sd, 1e-12}))
      out.overlap_warning = true;
    previous_mean = mean;
    previous_sd = sd;
  }
  lambda_hat /= static_cast<double>(bridges.size());

  double delta_dot_obs = 0.0;
  for (int k = 0; k < K; ++k) delta_dot_obs += delta[k] * s_obs[k];
  out.loglik = reference.loglik + delta_dot_obs - lambda_hat;
  out.mc_standard_error = std::sqrt(variance_of_sum) / static_cast<double>(bridges.size());
  return out;
}

}  // namespace erpm
