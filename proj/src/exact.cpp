#include "erpm/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "erpm/combinatorics.hpp"

namespace erpm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

double log_sum_exp(std::span<const double> x) {
  double hi = kNegInf;
  for (double v : x) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - hi);
  return hi + std::log(sum);
}

void ModelSpec::validate(const CovariateStore& cov) const {
  if (specs.empty()) throw ValidationError("model: needs at least one statistic");
  if (alpha.size() != specs.size())
    throw ValidationError("model: alpha length does not match the statistic list");
  for (double a : alpha)
    if (!std::isfinite(a)) throw ValidationError("model: alpha must be finite");
  bounds.validate();
  for (const auto& spec : specs) spec.validate(cov);
}

bool ModelSpec::size_only() const {
  return std::all_of(specs.begin(), specs.end(),
                     [](const StatisticSpec& s) { return s.size_only(); });
}

int ExactDistribution::index_of(const Partition& p) const {
  auto it = std::lower_bound(partitions.begin(), partitions.end(), p);
  if (it == partitions.end() || *it != p) return -1;
  return static_cast<int>(it - partitions.begin());
}

double ExactDistribution::probability(const Partition& p) const {
  const int i = index_of(p);
  return i < 0 ? 0.0 : probabilities[i];
}

std::vector<Partition> enumerate_partitions(int n, const SizeBounds& b, int cap) {
  if (n < 1) throw ValidationError("enumerate_partitions: n must be >= 1");
  if (n > cap)
    throw ValidationError("enumerate_partitions: n = " + std::to_string(n) +
                          " exceeds the enumeration cap " + std::to_string(cap));
  b.validate();
  std::vector<Partition> out;
  // Restricted-growth successor iteration, lexicographic order.
  std::vector<int> a(n, 0), prefix_max(n, 0);
  while (true) {
    Partition p{std::vector<int>(a)};
    if (p.respects(b)) out.push_back(std::move(p));
    int i = n - 1;
    while (i > 0 && a[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return out;
}

ExactDistribution exact_distribution(const ModelSpec& m, const CovariateStore& cov, int cap) {
  m.validate(cov);
  ExactDistribution dist;
  dist.partitions = enumerate_partitions(cov.n, m.bounds, cap);
  if (dist.partitions.empty())
    throw ValidationError("exact_distribution: the bounds exclude every partition");
  std::vector<double> log_w(dist.partitions.size());
  for (std::size_t i = 0; i < dist.partitions.size(); ++i) {
    const auto s = evaluate(dist.partitions[i], m.specs, cov);
    double lw = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) lw += m.alpha[k] * s[k];
    log_w[i] = lw;
  }
  dist.log_kappa = log_sum_exp(log_w);
  dist.probabilities.resize(log_w.size());
  for (std::size_t i = 0; i < log_w.size(); ++i)
    dist.probabilities[i] = std::exp(log_w[i] - dist.log_kappa);
  return dist;
}

namespace {

void require_size_only(const std::vector<StatisticSpec>& specs) {
  for (const auto& spec : specs)
    if (!spec.size_only())
      throw ValidationError("statistic " + spec.name() + " is not a function of block sizes");
}

// Combined per-size exponent f(s) = sum_k alpha_k f_k(s).
std::vector<double> combined_size_values(const std::vector<StatisticSpec>& specs,
                                         const std::vector<double>& alpha, int n) {
  std::vector<double> f(n + 1, 0.0);
  for (int s = 1; s <= n; ++s)
    for (std::size_t k = 0; k < specs.size(); ++k) f[s] += alpha[k] * specs[k].size_value(s);
  return f;
}

struct RangeFn {
  const SizeBounds* b;
  // i range for building size `target`; the new element's block has size
  // target - i.
  std::pair<int, int> operator()(int target) const {
    const int lo = (b->max >= target) ? 0 : target - b->max;
    const int hi = std::min(target - 1, target - b->min);
    return {lo, hi};
  }
};

}  // namespace

double log_kappa_recursive(const std::vector<StatisticSpec>& specs,
                           const std::vector<double>& alpha, int n, const SizeBounds& b) {
  if (specs.size() != alpha.size())
    throw ValidationError("log_kappa_recursive: alpha length mismatch");
  if (n < 0) throw ValidationError("log_kappa_recursive: n must be >= 0");
  require_size_only(specs);
  b.validate();
  const auto f = combined_size_values(specs, alpha, n);
  const RangeFn range{&b};
  std::vector<double> logk(n + 1, kNegInf);
  logk[0] = 0.0;
  std::vector<double> terms;
  for (int target = 1; target <= n; ++target) {
    const auto [lo, hi] = range(target);
    terms.clear();
    for (int i = lo; i <= hi; ++i) {
      if (logk[i] == kNegInf) continue;
      terms.push_back(log_binomial(target - 1, i) + f[target - i] + logk[i]);
    }
    logk[target] = log_sum_exp(terms);
  }
  return logk[n];
}

double kappa_recursive(const std::vector<StatisticSpec>& specs, const std::vector<double>& alpha,
                       int n, const SizeBounds& b) {
  return std::exp(log_kappa_recursive(specs, alpha, n, b));
}

KappaDerivatives kappa_derivatives(const std::vector<StatisticSpec>& specs,
                                   const std::vector<double>& alpha, int n, const SizeBounds& b) {
  if (specs.size() != alpha.size())
    throw ValidationError("kappa_derivatives: alpha length mismatch");
  require_size_only(specs);
  b.validate();
  const int K = static_cast<int>(specs.size());
  // Per-size statistic values f_k(s).
  std::vector<std::vector<double>> fk(K, std::vector<double>(n + 1, 0.0));
  for (int k = 0; k < K; ++k)
    for (int s = 1; s <= n; ++s) fk[k][s] = specs[k].size_value(s);
  const auto f = combined_size_values(specs, alpha, n);
  const RangeFn range{&b};

  // Normalized recursion: logk[i], e[i] = grad log-scale expectations,
  // c[i] = second-moment matrices, all conditioned on kappa_i > 0.
  std::vector<double> logk(n + 1, kNegInf);
  std::vector<Eigen::VectorXd> e(n + 1, Eigen::VectorXd::Zero(K));
  std::vector<Eigen::MatrixXd> c(n + 1, Eigen::MatrixXd::Zero(K, K));
  logk[0] = 0.0;

  std::vector<double> terms;
  std::vector<int> term_index;
  for (int target = 1; target <= n; ++target) {
    const auto [lo, hi] = range(target);
    terms.clear();
    term_index.clear();
    for (int i = lo; i <= hi; ++i) {
      if (logk[i] == kNegInf) continue;
      terms.push_back(log_binomial(target - 1, i) + f[target - i] + logk[i]);
      term_index.push_back(i);
    }
    logk[target] = log_sum_exp(terms);
    if (logk[target] == kNegInf) continue;
    Eigen::VectorXd et = Eigen::VectorXd::Zero(K);
    Eigen::MatrixXd ct = Eigen::MatrixXd::Zero(K, K);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const int i = term_index[t];
      const double w = std::exp(terms[t] - logk[target]);
      Eigen::VectorXd fnew(K);
      for (int k = 0; k < K; ++k) fnew[k] = fk[k][target - i];
      et += w * (fnew + e[i]);
      ct += w * (fnew * fnew.transpose() + fnew * e[i].transpose() + e[i] * fnew.transpose() +
                 c[i]);
    }
    e[target] = et;
    c[target] = ct;
  }

  if (logk[n] == kNegInf)
    throw ValidationError("kappa_derivatives: the bounds exclude every partition");
  KappaDerivatives out;
  out.log_kappa = logk[n];
  out.expected.assign(e[n].data(), e[n].data() + K);
  out.covariance = c[n] - e[n] * e[n].transpose();
  return out;
}

std::vector<double> exact_expected_statistics(const ModelSpec& m, const CovariateStore& cov,
                                              int cap) {
  m.validate(cov);
  if (m.size_only()) {
    return kappa_derivatives(m.specs, m.alpha, cov.n, m.bounds).expected;
  }
  if (cov.n <= cap) {
    const auto dist = exact_distribution(m, cov, cap);
    std::vector<double> expected(m.specs.size(), 0.0);
    for (std::size_t i = 0; i < dist.partitions.size(); ++i) {
      const auto s = evaluate(dist.partitions[i], m.specs, cov);
      for (std::size_t k = 0; k < s.size(); ++k) expected[k] += dist.probabilities[i] * s[k];
    }
    return expected;
  }
  throw ValidationError(
      "exact_expected_statistics: model is not size-only and n exceeds the enumeration cap");
}

namespace {

void check_nondegenerate(const Eigen::MatrixXd& cov_matrix) {
  for (int k = 0; k < cov_matrix.rows(); ++k)
    if (cov_matrix(k, k) < 1e-13)
      throw DegeneracyError(
          "collinear or degenerate statistic: variance vanishes on the support");
}

}  // namespace

std::vector<double> newton_mle_size_only(const std::vector<StatisticSpec>& specs,
                                         const std::vector<double>& s_obs, int n,
                                         const SizeBounds& b, const NewtonOptions& opts) {
  require_size_only(specs);
  if (s_obs.size() != specs.size())
    throw ValidationError("newton_mle_size_only: s_obs length mismatch");
  const int K = static_cast<int>(specs.size());
  std::vector<double> alpha(K, 0.0);
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    const auto kd = kappa_derivatives(specs, alpha, n, b);
    check_nondegenerate(kd.covariance);
    Eigen::VectorXd residual(K);
    for (int k = 0; k < K; ++k) residual[k] = kd.expected[k] - s_obs[k];
    if (residual.lpNorm<Eigen::Infinity>() < opts.tolerance) {
      // A vanishing variance at the solution means the fitted distribution
      // has collapsed onto an extreme partition: s_obs is on the boundary of
      // the achievable set and the true maximizer is at infinity.
      for (int k = 0; k < K; ++k)
        if (kd.covariance(k, k) < 1e-6)
          throw MleAtInfinityError(
              "MLE at infinity: observed statistics lie on the boundary of the achievable set");
      return alpha;
    }
    Eigen::VectorXd step = kd.covariance.ldlt().solve(residual);
    if (!step.allFinite())
      throw MleAtInfinityError("newton_mle_size_only: singular statistic covariance");
    const double norm = step.lpNorm<Eigen::Infinity>();
    if (norm > opts.max_step) step *= opts.max_step / norm;
    for (int k = 0; k < K; ++k) alpha[k] -= step[k];
    for (int k = 0; k < K; ++k)
      if (std::abs(alpha[k]) > opts.divergence_bound)
        throw MleAtInfinityError(
            "MLE at infinity: observed statistics lie on the boundary of the achievable set");
  }
  throw MleAtInfinityError("newton_mle_size_only: no convergence, MLE may be at infinity");
}

double solve_size_component(const std::vector<StatisticSpec>& specs, std::vector<double> alpha,
                            int component, double target, int n, const SizeBounds& b,
                            const NewtonOptions& opts) {
  require_size_only(specs);
  if (component < 0 || component >= static_cast<int>(specs.size()))
    throw ValidationError("solve_size_component: component out of range");
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    const auto kd = kappa_derivatives(specs, alpha, n, b);
    const double residual = kd.expected[component] - target;
    if (std::abs(residual) < opts.tolerance) return alpha[component];
    const double variance = kd.covariance(component, component);
    if (variance < 1e-13)
      throw DegeneracyError("solve_size_component: statistic variance vanishes");
    double step = residual / variance;
    step = std::clamp(step, -opts.max_step, opts.max_step);
    alpha[component] -= step;
    if (std::abs(alpha[component]) > opts.divergence_bound)
      throw MleAtInfinityError("solve_size_component: target on the boundary");
  }
  throw MleAtInfinityError("solve_size_component: no convergence");
}

NeutralityReport neutrality_check(const ModelSpec& m, const CovariateStore& cov,
                                  std::span<const int> subset, int cap) {
  std::vector<int> inside(subset.begin(), subset.end());
  std::sort(inside.begin(), inside.end());
  if (inside.empty() || static_cast<int>(inside.size()) >= cov.n)
    throw ValidationError("neutrality_check: split must be a proper nonempty subset");
  std::vector<char> in_subset(cov.n, 0);
  for (int i : inside) in_subset[i] = 1;
  std::vector<int> outside;
  for (int i = 0; i < cov.n; ++i)
    if (!in_subset[i]) outside.push_back(i);

  const auto dist = exact_distribution(m, cov, cap);

  const CovariateStore cov_in = cov.restrict(inside);
  const CovariateStore cov_out = cov.restrict(outside);
  ModelSpec m_in = m, m_out = m;
  const auto dist_in = exact_distribution(m_in, cov_in, cap);
  const auto dist_out = exact_distribution(m_out, cov_out, cap);

  auto straddles = [&](const Partition& p) {
    const auto blocks = p.blocks();
    for (const auto& block : blocks) {
      bool any_in = false, any_out = false;
      for (int i : block) (in_subset[i] ? any_in : any_out) = true;
      if (any_in && any_out) return true;
    }
    return false;
  };

  double prob_event = 0.0;
  for (std::size_t i = 0; i < dist.partitions.size(); ++i)
    if (!straddles(dist.partitions[i])) prob_event += dist.probabilities[i];
  NeutralityReport report;
  if (prob_event == 0.0) return report;  // conditioning event empty, vacuously neutral

  for (std::size_t i = 0; i < dist.partitions.size(); ++i) {
    const Partition& p = dist.partitions[i];
    if (straddles(p)) continue;
    const double lhs = dist.probabilities[i] / prob_event;
    const double rhs = dist_in.probability(p.project(inside)) *
                       dist_out.probability(p.project(outside));
    report.max_deviation = std::max(report.max_deviation, std::abs(lhs - rhs));
  }
  return report;
}

double ewens_log_kappa(double lambda, int n) {
  if (lambda <= 0) throw ValidationError("ewens_log_kappa: lambda must be positive");
  if (n < 0) throw ValidationError("ewens_log_kappa: n must be >= 0");
  double log_kappa = 0.0;
  for (int i = 0; i < n; ++i) log_kappa += std::log(lambda + i);
  return log_kappa;
}

double ewens_log_weight(const Partition& p, double lambda) {
  double lw = p.num_groups() * std::log(lambda);
  for (int s : p.group_sizes()) lw += std::lgamma(static_cast<double>(s));
  return lw;
}

}  // namespace erpm
