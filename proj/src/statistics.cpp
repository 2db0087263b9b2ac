#include "erpm/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace erpm {

namespace {

bool is_missing(double v) { return std::isnan(v); }

}  // namespace

const std::vector<double>& CovariateStore::attribute(const std::string& name) const {
  auto it = attributes.find(name);
  if (it == attributes.end()) throw ValidationError("unknown actor attribute: " + name);
  return it->second;
}

const std::vector<double>& CovariateStore::dyadic_matrix(const std::string& name) const {
  auto it = dyadic.find(name);
  if (it == dyadic.end()) throw ValidationError("unknown dyadic covariate: " + name);
  return it->second;
}

double CovariateStore::dyad(const std::string& name, int i, int j) const {
  return dyadic_matrix(name)[static_cast<std::size_t>(i) * n + j];
}

void CovariateStore::add_attribute(std::string name, std::vector<double> values) {
  if (static_cast<int>(values.size()) != n)
    throw ValidationError("attribute " + name + ": expected " + std::to_string(n) + " values");
  attributes[std::move(name)] = std::move(values);
}

void CovariateStore::add_dyadic(std::string name, std::vector<double> matrix) {
  if (matrix.size() != static_cast<std::size_t>(n) * n)
    throw ValidationError("dyadic covariate " + name + ": expected an n x n matrix");
  for (int i = 0; i < n; ++i) {
    if (matrix[static_cast<std::size_t>(i) * n + i] != 0.0)
      throw ValidationError("dyadic covariate " + name + ": nonzero diagonal");
    for (int j = i + 1; j < n; ++j)
      if (matrix[static_cast<std::size_t>(i) * n + j] != matrix[static_cast<std::size_t>(j) * n + i])
        throw ValidationError("dyadic covariate " + name + ": matrix not symmetric");
  }
  dyadic[std::move(name)] = std::move(matrix);
}

CovariateStore CovariateStore::restrict(std::span<const int> subset) const {
  CovariateStore out;
  out.n = static_cast<int>(subset.size());
  for (const auto& [name, column] : attributes) {
    std::vector<double> sub;
    sub.reserve(subset.size());
    for (int i : subset) sub.push_back(column[i]);
    out.attributes[name] = std::move(sub);
  }
  for (const auto& [name, matrix] : dyadic) {
    std::vector<double> sub(subset.size() * subset.size());
    for (std::size_t a = 0; a < subset.size(); ++a)
      for (std::size_t b = 0; b < subset.size(); ++b)
        sub[a * subset.size() + b] = matrix[static_cast<std::size_t>(subset[a]) * n + subset[b]];
    out.dyadic[name] = std::move(sub);
  }
  return out;
}

StatisticSpec StatisticSpec::num_groups_of_size(int k) {
  StatisticSpec s;
  s.kind = StatKind::NumGroupsOfSize;
  s.size_k = k;
  return s;
}
StatisticSpec StatisticSpec::sum_log_factorial_sizes() {
  StatisticSpec s;
  s.kind = StatKind::SumLogFactorialSizes;
  return s;
}
StatisticSpec StatisticSpec::sum_squared_sizes() {
  StatisticSpec s;
  s.kind = StatKind::SumSquaredSizes;
  return s;
}
StatisticSpec StatisticSpec::dyadic_homophily(std::string attribute, Similarity sim) {
  StatisticSpec s;
  s.kind = StatKind::DyadicHomophily;
  s.attribute = std::move(attribute);
  s.similarity = sim;
  return s;
}
StatisticSpec StatisticSpec::group_homophily(std::string attribute, GroupForm form) {
  StatisticSpec s;
  s.kind = StatKind::GroupHomophily;
  s.attribute = std::move(attribute);
  s.form = form;
  return s;
}
StatisticSpec StatisticSpec::dyadic_covariate(std::string covariate) {
  StatisticSpec s;
  s.kind = StatKind::DyadicCovariate;
  s.covariate = std::move(covariate);
  return s;
}
StatisticSpec StatisticSpec::dyadic_sociability(std::string attribute) {
  StatisticSpec s;
  s.kind = StatKind::DyadicSociability;
  s.attribute = std::move(attribute);
  return s;
}
StatisticSpec StatisticSpec::group_sociability(std::string attribute) {
  StatisticSpec s;
  s.kind = StatKind::GroupSociability;
  s.attribute = std::move(attribute);
  return s;
}

bool StatisticSpec::size_only() const {
  switch (kind) {
    case StatKind::NumGroups:
    case StatKind::NumGroupsOfSize:
    case StatKind::SumLogFactorialSizes:
    case StatKind::SumSquaredSizes:
      return true;
    default:
      return false;
  }
}

double StatisticSpec::size_value(int s) const {
  switch (kind) {
    case StatKind::NumGroups: return 1.0;
    case StatKind::NumGroupsOfSize: return s == size_k ? 1.0 : 0.0;
    case StatKind::SumLogFactorialSizes: return std::lgamma(static_cast<double>(s));
    case StatKind::SumSquaredSizes: return static_cast<double>(s) * s;
    default:
      throw ValidationError("statistic " + name() + " is not a function of block sizes");
  }
}

std::string StatisticSpec::name() const {
  std::string base;
  switch (kind) {
    case StatKind::NumGroups: base = "num_groups"; break;
    case StatKind::NumGroupsOfSize: base = "num_groups_of_size_" + std::to_string(size_k); break;
    case StatKind::SumLogFactorialSizes: base = "sum_log_factorial_sizes"; break;
    case StatKind::SumSquaredSizes: base = "sum_squared_sizes"; break;
    case StatKind::DyadicHomophily:
      base = similarity == Similarity::Match ? "dyadic_homophily_match(" + attribute + ")"
                                             : "dyadic_homophily_neg_abs_diff(" + attribute + ")";
      break;
    case StatKind::GroupHomophily: {
      const char* f = form == GroupForm::AllSameIndicator ? "all_same"
                      : form == GroupForm::Range          ? "range"
                      : form == GroupForm::DistinctCount  ? "distinct_count"
                                                          : "variance";
      base = std::string("group_homophily_") + f + "(" + attribute + ")";
      break;
    }
    case StatKind::DyadicCovariate: base = "dyadic_covariate(" + covariate + ")"; break;
    case StatKind::DyadicSociability: base = "dyadic_sociability(" + attribute + ")"; break;
    case StatKind::GroupSociability: base = "group_sociability(" + attribute + ")"; break;
  }
  return normalized ? "normalized_" + base : base;
}

void StatisticSpec::validate(const CovariateStore& cov) const {
  switch (kind) {
    case StatKind::NumGroupsOfSize:
      if (size_k < 1) throw ValidationError("num_groups_of_size: k must be >= 1");
      break;
    case StatKind::DyadicHomophily:
    case StatKind::GroupHomophily:
    case StatKind::DyadicSociability:
    case StatKind::GroupSociability:
      cov.attribute(attribute);
      break;
    case StatKind::DyadicCovariate:
      cov.dyadic_matrix(covariate);
      break;
    default:
      break;
  }
  if (normalized && size_only())
    throw ValidationError("normalization applies to covariate statistics only: " + name());
}

namespace {

double dyadic_block_value(const StatisticSpec& spec, std::span<const int> members,
                          const CovariateStore& cov) {
  double sum = 0.0;
  if (spec.kind == StatKind::DyadicCovariate) {
    const auto& z = cov.dyadic_matrix(spec.covariate);
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        sum += z[static_cast<std::size_t>(members[a]) * cov.n + members[b]];
    return sum;
  }
  const auto& attr = cov.attribute(spec.attribute);
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const double x = attr[members[a]], y = attr[members[b]];
      if (is_missing(x) || is_missing(y)) continue;
      sum += spec.similarity == Similarity::Match ? (x == y ? 1.0 : 0.0) : -std::abs(x - y);
    }
  return sum;
}

double group_homophily_value(const StatisticSpec& spec, std::span<const int> members,
                             const CovariateStore& cov) {
  const auto& attr = cov.attribute(spec.attribute);
  std::vector<double> values;
  values.reserve(members.size());
  bool any_missing = false;
  for (int i : members) {
    if (is_missing(attr[i]))
      any_missing = true;
    else
      values.push_back(attr[i]);
  }
  switch (spec.form) {
    case GroupForm::AllSameIndicator: {
      if (values.empty()) return 1.0;
      for (double v : values)
        if (v != values.front()) return 0.0;
      return 1.0;
    }
    case GroupForm::Range: {
      if (values.size() < 2) return 0.0;
      auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      return *hi - *lo;
    }
    case GroupForm::DistinctCount: {
      // All missing values together form one extra category.
      std::set<double> distinct(values.begin(), values.end());
      return static_cast<double>(distinct.size()) + (any_missing ? 1.0 : 0.0);
    }
    case GroupForm::Variance: {
      if (values.size() < 2) return 0.0;
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      return ss / static_cast<double>(values.size());
    }
  }
  return 0.0;
}

}  // namespace

double block_value(const StatisticSpec& spec, std::span<const int> members,
                   const CovariateStore& cov) {
  const int s = static_cast<int>(members.size());
  double value = 0.0;
  switch (spec.kind) {
    case StatKind::NumGroups:
    case StatKind::NumGroupsOfSize:
    case StatKind::SumLogFactorialSizes:
    case StatKind::SumSquaredSizes:
      return spec.size_value(s);
    case StatKind::DyadicHomophily:
    case StatKind::DyadicCovariate:
      value = dyadic_block_value(spec, members, cov);
      break;
    case StatKind::GroupHomophily:
      value = group_homophily_value(spec, members, cov);
      break;
    case StatKind::DyadicSociability: {
      const auto& attr = cov.attribute(spec.attribute);
      double sum = 0.0;
      for (int i : members)
        if (!is_missing(attr[i])) sum += attr[i];
      value = (s - 1) * sum;
      break;
    }
    case StatKind::GroupSociability: {
      const auto& attr = cov.attribute(spec.attribute);
      double sum = 0.0;
      int count = 0;
      for (int i : members)
        if (!is_missing(attr[i])) {
          sum += attr[i];
          ++count;
        }
      value = count > 0 ? s * (sum / count) : 0.0;
      break;
    }
  }
  if (spec.normalized) {
    const bool dyadic = spec.kind == StatKind::DyadicHomophily ||
                        spec.kind == StatKind::DyadicCovariate ||
                        spec.kind == StatKind::DyadicSociability;
    const double denom = dyadic ? s * (s - 1) / 2.0 : static_cast<double>(s);
    value = denom > 0 ? value / denom : 0.0;
  }
  return value;
}

std::vector<double> evaluate(const Partition& p, const std::vector<StatisticSpec>& specs,
                             const CovariateStore& cov) {
  if (p.n() != cov.n)
    throw ValidationError("evaluate: partition has " + std::to_string(p.n()) +
                          " actors but covariate store has " + std::to_string(cov.n));
  std::vector<double> out(specs.size(), 0.0);
  for (const auto& block : p.blocks())
    for (std::size_t k = 0; k < specs.size(); ++k) out[k] += block_value(specs[k], block, cov);
  return out;
}

std::vector<double> delta_evaluate(const Partition& p, const Partition& p_prime,
                                   const std::vector<StatisticSpec>& specs,
                                   const CovariateStore& cov, const std::vector<double>& cached) {
  std::map<std::vector<int>, int> old_blocks;
  const auto blocks_p = p.blocks();
  for (std::size_t g = 0; g < blocks_p.size(); ++g) old_blocks.emplace(blocks_p[g], 1);

  std::vector<double> out = cached;
  for (const auto& block : p_prime.blocks()) {
    auto it = old_blocks.find(block);
    if (it != old_blocks.end()) {
      it->second = 0;  // shared block, no contribution to the delta
      continue;
    }
    for (std::size_t k = 0; k < specs.size(); ++k) out[k] += block_value(specs[k], block, cov);
  }
  for (const auto& [block, removed] : old_blocks) {
    if (!removed) continue;
    for (std::size_t k = 0; k < specs.size(); ++k) out[k] -= block_value(specs[k], block, cov);
  }
  return out;
}

}  // namespace erpm
