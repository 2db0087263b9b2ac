#include "erpm/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace erpm {

namespace {

// draws `count` thinned samples into a count x K matrix
Eigen::MatrixXd draw_stats(Chain& chain, long count, long thinning) {
  const auto K = static_cast<Eigen::Index>(chain.stats().size());
  Eigen::MatrixXd out(count, K);
  for (long i = 0; i < count; ++i) {
    chain.steps(thinning);
    for (Eigen::Index k = 0; k < K; ++k) out(i, k) = chain.stats()[k];
  }
  return out;
}

double max_lag1_autocorrelation(const Eigen::MatrixXd& draws) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < draws.cols(); ++k) {
    const auto col = draws.col(k);
    const double mean = col.mean();
    double denom = 0, numer = 0;
    for (Eigen::Index t = 0; t < draws.rows(); ++t) {
      const double d = col(t) - mean;
      denom += d * d;
      if (t + 1 < draws.rows()) numer += d * (col(t + 1) - mean);
    }
    if (denom > 0) worst = std::max(worst, std::abs(numer / denom));
  }
  return worst;
}

void check_statistic_spread(const Eigen::MatrixXd& covariance,
                            const std::vector<StatisticSpec>& specs) {
  for (Eigen::Index k = 0; k < covariance.rows(); ++k)
    if (covariance(k, k) < 1e-12)
      throw DegeneracyError("collinear or degenerate statistic: " +
                            specs[static_cast<std::size_t>(k)].name() +
                            " has vanishing variance in the sampled draws; the statistic may be "
                            "constant on the support, or the chain is frozen at an extreme "
                            "parameter; respecify the model or relax the bounds");
}

}  // namespace

void EstimationConfig::validate() const {
  if (m1 < 2 || m3 < 2) throw ValidationError("estimation config: M1 and M3 must be >= 2");
  if (subphases < 1) throw ValidationError("estimation config: R must be >= 1");
  if (gain < 0) throw ValidationError("estimation config: gain must be >= 0");
  if (offdiag_damping < 0 || offdiag_damping > 1)
    throw ValidationError("estimation config: offdiag_damping must be in [0,1]");
  if (subphase_base < 1) throw ValidationError("estimation config: subphase_base must be >= 1");
  if (subphase_max_factor < 1)
    throw ValidationError("estimation config: subphase_max_factor must be >= 1");
}

std::string significance_stars(double wald_ratio) {
  const double w = std::abs(wald_ratio);
  if (w > 3.29) return "***";
  if (w > 2.58) return "**";
  if (w > 2.0) return "*";
  return "";
}

RobbinsMonroEstimator::RobbinsMonroEstimator(ModelSpec model, const CovariateStore& cov,
                                             EstimationConfig cfg, ProposalMixture mixture,
                                             BoundsMode bounds_mode)
    : model_(std::move(model)), cov_(&cov), cfg_(cfg) {
  cfg_.validate();
  model_.alpha.assign(model_.specs.size(), 0.0);
  model_.validate(cov);
  chain_cfg_.mixture = mixture;
  chain_cfg_.bounds_mode = bounds_mode;
  chain_cfg_.seed = cfg_.seed;
  chain_cfg_.validate();
}

std::vector<double> RobbinsMonroEstimator::initial_alpha(const std::vector<double>& s_obs) const {
  std::vector<double> alpha0(model_.specs.size(), 0.0);

  std::vector<int> size_idx;
  for (std::size_t k = 0; k < model_.specs.size(); ++k)
    if (model_.specs[k].size_only()) size_idx.push_back(static_cast<int>(k));

  if (cfg_.alpha0_rule == Alpha0Rule::SizeOnlySolve && !size_idx.empty()) {
    std::vector<StatisticSpec> sub;
    std::vector<double> sub_obs;
    for (int k : size_idx) {
      sub.push_back(model_.specs[k]);
      sub_obs.push_back(s_obs[k]);
    }
    try {
      const auto solved = newton_mle_size_only(sub, sub_obs, cov_->n, model_.bounds);
      for (std::size_t i = 0; i < size_idx.size(); ++i) alpha0[size_idx[i]] = solved[i];
      return alpha0;
    } catch (const DegeneracyError&) {
      // a fully size-only model with no finite MLE cannot be estimated at all
      if (size_idx.size() == model_.specs.size()) throw;
      // otherwise fall back to the num_groups-only rule below
    }
  }

  for (std::size_t k = 0; k < model_.specs.size(); ++k) {
    if (model_.specs[k].kind != StatKind::NumGroups) continue;
    try {
      alpha0[k] = newton_mle_size_only({model_.specs[k]}, {s_obs[k]}, cov_->n, model_.bounds)[0];
    } catch (const MleAtInfinityError&) {
      throw;  // the observed group count is on the boundary; no finite solution
    } catch (const DegeneracyError&) {
      // e.g. the bounds pin the number of groups; zero is a valid start
      alpha0[k] = 0.0;
    }
    break;
  }
  return alpha0;
}

Phase1Result RobbinsMonroEstimator::phase1_scaling(Chain& chain,
                                                   const std::vector<double>& alpha0,
                                                   const std::vector<double>& s_obs,
                                                   long thinning) const {
  const int K = static_cast<int>(model_.specs.size());
  chain.set_alpha(alpha0);

  Eigen::MatrixXd draws;
  for (int doubling = 0;; ++doubling) {
    draws = draw_stats(chain, cfg_.m1, thinning);
    if (max_lag1_autocorrelation(draws) < cfg_.autocorr_threshold ||
        doubling >= cfg_.max_thinning_doublings)
      break;
    thinning *= 2;
  }

  const Eigen::VectorXd mean = draws.colwise().mean();
  const Eigen::MatrixXd centered = draws.rowwise() - mean.transpose();
  Eigen::MatrixXd covariance =
      centered.transpose() * centered / static_cast<double>(draws.rows());
  check_statistic_spread(covariance, model_.specs);

  Phase1Result out;
  out.d0 = covariance;
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      if (i != j) out.d0(i, j) *= cfg_.offdiag_damping;

  Eigen::VectorXd gap(K);
  for (int k = 0; k < K; ++k) gap(k) = mean(k) - s_obs[k];
  const Eigen::VectorXd step = cfg_.gain * out.d0.ldlt().solve(gap);
  out.alpha_start.resize(K);
  for (int k = 0; k < K; ++k) out.alpha_start[k] = alpha0[k] - step(k);
  out.mean_stats.assign(mean.data(), mean.data() + K);
  out.thinning = thinning;
  return out;
}

std::vector<SubphaseTrace> RobbinsMonroEstimator::phase2_iterate(
    Chain& chain, std::vector<double> alpha, const Eigen::MatrixXd& d0,
    const std::vector<double>& s_obs, long thinning,
    std::vector<std::vector<double>>* trace) const {
  const int K = static_cast<int>(model_.specs.size());
  const Eigen::MatrixXd d0_inverse = d0.inverse();
  std::vector<SubphaseTrace> out;

  for (int r = 1; r <= cfg_.subphases; ++r) {
    const double gain_r = cfg_.gain / std::pow(2.0, r - 1);
    const long min_length =
        static_cast<long>(std::ceil(cfg_.subphase_base * std::pow(2.0, 4.0 * r / 3.0)));
    const long max_length = static_cast<long>(cfg_.subphase_max_factor * min_length);

    std::vector<double> alpha_sum(K, 0.0);
    std::vector<int> start_sign(K, 0);
    std::vector<bool> crossed(K, false);
    long length = 0;
    while (true) {
      chain.set_alpha(alpha);
      chain.steps(thinning);
      const auto& s = chain.stats();
      Eigen::VectorXd gap(K);
      for (int k = 0; k < K; ++k) gap(k) = s[k] - s_obs[k];
      Eigen::VectorXd step = gain_r * (d0_inverse * gap);
      const double norm = step.lpNorm<Eigen::Infinity>();
      if (norm > cfg_.max_step) step *= cfg_.max_step / norm;
      for (int k = 0; k < K; ++k) alpha[k] -= step(k);
      ++length;
      for (int k = 0; k < K; ++k) {
        const double diff = s[k] - s_obs[k];
        const int sign = diff > 0 ? 1 : (diff < 0 ? -1 : 0);
        if (sign == 0) crossed[k] = true;
        if (start_sign[k] == 0)
          start_sign[k] = sign;
        else if (sign != 0 && sign != start_sign[k])
          crossed[k] = true;
      }
      for (int k = 0; k < K; ++k) {
        alpha_sum[k] += alpha[k];
        if (std::abs(alpha[k]) > cfg_.divergence_bound)
          throw DegeneracyError(
              "parameter divergence in phase 2: the model is likely degenerate (mass on one "
              "block or all singletons); respecify the statistics");
      }
      if (trace) trace->push_back(alpha);
      const bool all_crossed = std::all_of(crossed.begin(), crossed.end(), [](bool c) { return c; });
      if ((length >= min_length && all_crossed) || length >= max_length) break;
    }

    SubphaseTrace sub;
    sub.gain = gain_r;
    sub.length = length;
    sub.tail_average.resize(K);
    for (int k = 0; k < K; ++k) sub.tail_average[k] = alpha_sum[k] / static_cast<double>(length);
    alpha = sub.tail_average;  // next subphase starts from the average
    out.push_back(std::move(sub));
  }
  return out;
}

void RobbinsMonroEstimator::phase3_assess(Chain& chain, const std::vector<double>& alpha_f,
                                          const std::vector<double>& s_obs, long thinning,
                                          EstimationResult* result) const {
  const int K = static_cast<int>(model_.specs.size());
  chain.set_alpha(alpha_f);
  const long settle = cfg_.burn_in > 0 ? cfg_.burn_in : 100L * chain.n();
  chain.steps(settle);
  const Eigen::MatrixXd draws = draw_stats(chain, cfg_.m3, thinning);

  const Eigen::VectorXd mean = draws.colwise().mean();
  const Eigen::MatrixXd centered = draws.rowwise() - mean.transpose();
  const Eigen::MatrixXd covariance =
      centered.transpose() * centered / static_cast<double>(draws.rows() - 1);
  check_statistic_spread(covariance, model_.specs);

  result->alpha_hat = alpha_f;
  result->phase3_mean_stats.assign(mean.data(), mean.data() + K);
  result->phase3_covariance = covariance;
  result->convergence_ratios.resize(K);
  for (int k = 0; k < K; ++k)
    result->convergence_ratios[k] = (mean(k) - s_obs[k]) / std::sqrt(covariance(k, k));
  result->converged = std::all_of(result->convergence_ratios.begin(),
                                  result->convergence_ratios.end(),
                                  [](double c) { return std::abs(c) <= 0.1; });

  // exponential-family identity: the parameter covariance is the inverse of
  // the statistic covariance at the solution
  const Eigen::MatrixXd parameter_covariance = covariance.inverse();
  result->standard_errors.resize(K);
  result->wald_ratios.resize(K);
  result->significance.resize(K);
  for (int k = 0; k < K; ++k) {
    result->standard_errors[k] = std::sqrt(parameter_covariance(k, k));
    result->wald_ratios[k] = alpha_f[k] / result->standard_errors[k];
    result->significance[k] = significance_stars(result->wald_ratios[k]);
  }
  result->phase3_stat_trace.resize(draws.rows());
  for (Eigen::Index i = 0; i < draws.rows(); ++i) {
    result->phase3_stat_trace[i].resize(K);
    for (int k = 0; k < K; ++k) result->phase3_stat_trace[i][k] = draws(i, k);
  }
}

EstimationResult RobbinsMonroEstimator::estimate(const std::vector<double>& s_obs,
                                                 const Partition& initial) {
  if (s_obs.size() != model_.specs.size())
    throw ValidationError("estimate: s_obs length does not match the statistic list");

  EstimationResult result;
  result.s_obs = s_obs;
  for (const auto& spec : model_.specs) result.statistic_names.push_back(spec.name());

  std::vector<double> alpha0 = initial_alpha(s_obs);
  Chain chain(model_, *cov_, chain_cfg_, initial);
  const long base_thinning = cfg_.thinning > 0 ? cfg_.thinning : 2L * chain.n();
  const long settle = cfg_.burn_in > 0 ? cfg_.burn_in : 100L * chain.n();

  for (int attempt = 0;; ++attempt) {
    result.alpha0 = alpha0;
    chain.set_alpha(alpha0);
    chain.steps(settle);

    const Phase1Result phase1 = phase1_scaling(chain, alpha0, s_obs, base_thinning);
    result.thinning_used = phase1.thinning;

    result.phase2_alpha_trace.clear();
    result.subphases = phase2_iterate(chain, phase1.alpha_start, phase1.d0, s_obs,
                                      phase1.thinning, &result.phase2_alpha_trace);
    const std::vector<double>& alpha_f = result.subphases.back().tail_average;

    phase3_assess(chain, alpha_f, s_obs, phase1.thinning, &result);
    result.restarts_used = attempt;
    if (result.converged || attempt >= cfg_.max_restarts) break;
    alpha0 = alpha_f;  // rerun from the final estimate
  }
  return result;
}

}  // namespace erpm
