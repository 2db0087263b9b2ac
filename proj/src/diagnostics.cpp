#include "erpm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace erpm {

namespace {

bool is_missing(double v) { return std::isnan(v); }

// distinct rounded attribute values, the category/bucket axes of the report
std::vector<long> category_values(const std::vector<double>& attr) {
  std::set<long> values;
  for (double a : attr)
    if (!is_missing(a)) values.insert(std::lround(a));
  return {values.begin(), values.end()};
}

void append(std::vector<AuxValue>& out, std::string name, double value, bool defined = true) {
  out.push_back(AuxValue{std::move(name), defined ? value : 0.0, defined});
}

void size_histogram(const Partition& p, std::vector<AuxValue>& out) {
  std::vector<int> counts(p.n() + 1, 0);
  for (int s : p.group_sizes()) ++counts[s];
  for (int s = 1; s <= p.n(); ++s)
    append(out, "size_count_" + std::to_string(s), counts[s]);
}

void tie_difference_counts(const Partition& p, const std::vector<double>& attr,
                           const std::string& attr_name, std::vector<AuxValue>& out) {
  const auto categories = category_values(attr);
  long max_diff = 0;
  for (long c : categories) max_diff = std::max(max_diff, categories.back() - categories.front());
  std::map<long, long> counts;
  for (long d = 0; d <= max_diff; ++d) counts[d] = 0;
  for (const auto& block : p.blocks())
    for (std::size_t a = 0; a < block.size(); ++a)
      for (std::size_t b = a + 1; b < block.size(); ++b) {
        const double x = attr[block[a]], y = attr[block[b]];
        if (is_missing(x) || is_missing(y)) continue;
        ++counts[std::labs(std::lround(x) - std::lround(y))];
      }
  for (const auto& [d, c] : counts)
    append(out, "tie_diff_" + attr_name + "_" + std::to_string(d), static_cast<double>(c));
}

void icc(const Partition& p, const std::vector<double>& attr, const std::string& attr_name,
         std::vector<AuxValue>& out) {
  // one-way ANOVA form (MSB - MSW) / (MSB + (kbar - 1) MSW), kbar the mean
  // block size among blocks with at least two observed members
  std::vector<std::vector<double>> groups;
  for (const auto& block : p.blocks()) {
    std::vector<double> values;
    for (int i : block)
      if (!is_missing(attr[i])) values.push_back(attr[i]);
    if (!values.empty()) groups.push_back(std::move(values));
  }
  const std::string name = "icc_" + attr_name;
  long total = 0, multi = 0;
  double kbar = 0, grand = 0;
  for (const auto& g : groups) {
    total += static_cast<long>(g.size());
    if (g.size() >= 2) {
      ++multi;
      kbar += static_cast<double>(g.size());
    }
    for (double v : g) grand += v;
  }
  const long k = static_cast<long>(groups.size());
  if (k < 2 || total - k < 1 || multi == 0) {
    append(out, name, 0.0, false);
    return;
  }
  kbar /= static_cast<double>(multi);
  grand /= static_cast<double>(total);
  double ssb = 0, ssw = 0;
  for (const auto& g : groups) {
    double mean = 0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    ssb += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (double v : g) ssw += (v - mean) * (v - mean);
  }
  const double msb = ssb / static_cast<double>(k - 1);
  const double msw = ssw / static_cast<double>(total - k);
  const double denom = msb + (kbar - 1.0) * msw;
  if (denom == 0.0) {
    append(out, name, 0.0, false);
    return;
  }
  append(out, name, (msb - msw) / denom);
}

void attr_size_correlation(const Partition& p, const std::vector<double>& attr,
                           const std::string& attr_name, std::vector<AuxValue>& out) {
  const auto sizes = p.group_sizes();
  std::vector<double> xs, ys;
  for (int i = 0; i < p.n(); ++i) {
    if (is_missing(attr[i])) continue;
    xs.push_back(attr[i]);
    ys.push_back(static_cast<double>(sizes[p.group_of(i)]));
  }
  const std::string name = "attr_size_corr_" + attr_name;
  const std::size_t m = xs.size();
  if (m < 2) {
    append(out, name, 0.0, false);
    return;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0 || syy == 0) {
    append(out, name, 0.0, false);
    return;
  }
  append(out, name, sxy / std::sqrt(sxx * syy));
}

void same_tie_proportion(const Partition& p, const std::vector<double>& attr,
                         const std::string& attr_name, std::vector<AuxValue>& out) {
  long same = 0, total = 0;
  for (const auto& block : p.blocks())
    for (std::size_t a = 0; a < block.size(); ++a)
      for (std::size_t b = a + 1; b < block.size(); ++b) {
        const double x = attr[block[a]], y = attr[block[b]];
        if (is_missing(x) || is_missing(y)) continue;
        ++total;
        if (x == y) ++same;
      }
  const std::string name = "same_tie_prop_" + attr_name;
  if (total == 0)
    append(out, name, 0.0, false);
  else
    append(out, name, static_cast<double>(same) / static_cast<double>(total));
}

void mean_size_by_category(const Partition& p, const std::vector<double>& attr,
                           const std::string& attr_name, std::vector<AuxValue>& out) {
  const auto sizes = p.group_sizes();
  for (long c : category_values(attr)) {
    double sum = 0;
    long count = 0;
    for (int i = 0; i < p.n(); ++i) {
      if (is_missing(attr[i]) || std::lround(attr[i]) != c) continue;
      sum += static_cast<double>(sizes[p.group_of(i)]);
      ++count;
    }
    const std::string name = "mean_size_" + attr_name + "_" + std::to_string(c);
    if (count == 0)
      append(out, name, 0.0, false);
    else
      append(out, name, sum / static_cast<double>(count));
  }
}

}  // namespace

AuxiliarySpec AuxiliarySpec::parse(const std::string& text) {
  AuxiliarySpec spec;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (colon != std::string::npos) spec.attribute = text.substr(colon + 1);
  if (head == "size_hist")
    spec.kind = AuxKind::SizeHistogram;
  else if (head == "tie_diff")
    spec.kind = AuxKind::TieDifferenceCounts;
  else if (head == "icc")
    spec.kind = AuxKind::Icc;
  else if (head == "attr_size_corr")
    spec.kind = AuxKind::AttrSizeCorrelation;
  else if (head == "same_tie_prop")
    spec.kind = AuxKind::SameTieProportion;
  else if (head == "mean_size_by")
    spec.kind = AuxKind::MeanSizeByCategory;
  else
    throw ValidationError("unknown auxiliary statistic: " + text);
  if (spec.kind != AuxKind::SizeHistogram && spec.attribute.empty())
    throw ValidationError("auxiliary statistic " + head + " needs an attribute, e.g. " + head +
                          ":age");
  return spec;
}

std::string AuxiliarySpec::name() const {
  switch (kind) {
    case AuxKind::SizeHistogram: return "size_hist";
    case AuxKind::TieDifferenceCounts: return "tie_diff:" + attribute;
    case AuxKind::Icc: return "icc:" + attribute;
    case AuxKind::AttrSizeCorrelation: return "attr_size_corr:" + attribute;
    case AuxKind::SameTieProportion: return "same_tie_prop:" + attribute;
    case AuxKind::MeanSizeByCategory: return "mean_size_by:" + attribute;
  }
  return "?";
}

void AuxiliarySpec::validate(const CovariateStore& cov) const {
  if (kind != AuxKind::SizeHistogram) cov.attribute(attribute);
}

std::vector<AuxValue> auxiliary_statistics(const Partition& p, const CovariateStore& cov,
                                           const std::vector<AuxiliarySpec>& specs) {
  if (p.n() != cov.n)
    throw ValidationError("auxiliary_statistics: partition and covariate sizes differ");
  std::vector<AuxValue> out;
  for (const auto& spec : specs) {
    spec.validate(cov);
    switch (spec.kind) {
      case AuxKind::SizeHistogram:
        size_histogram(p, out);
        break;
      case AuxKind::TieDifferenceCounts:
        tie_difference_counts(p, cov.attribute(spec.attribute), spec.attribute, out);
        break;
      case AuxKind::Icc:
        icc(p, cov.attribute(spec.attribute), spec.attribute, out);
        break;
      case AuxKind::AttrSizeCorrelation:
        attr_size_correlation(p, cov.attribute(spec.attribute), spec.attribute, out);
        break;
      case AuxKind::SameTieProportion:
        same_tie_proportion(p, cov.attribute(spec.attribute), spec.attribute, out);
        break;
      case AuxKind::MeanSizeByCategory:
        mean_size_by_category(p, cov.attribute(spec.attribute), spec.attribute, out);
        break;
    }
  }
  return out;
}

double quantile_type7(std::span<const double> sorted_values, double q) {
  if (sorted_values.empty()) throw ValidationError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted_values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted_values.size()) return sorted_values.back();
  return sorted_values[lo] + (h - std::floor(h)) * (sorted_values[lo + 1] - sorted_values[lo]);
}

GofReport gof(const ModelSpec& fitted, const CovariateStore& cov, const Partition& p_obs,
              long num_sims, const std::vector<AuxiliarySpec>& aux, const ChainConfig& chain_cfg) {
  if (num_sims < 1) throw ValidationError("gof: num_sims must be >= 1");
  fitted.validate(cov);
  for (const auto& spec : aux) spec.validate(cov);

  const auto observed = auxiliary_statistics(p_obs, cov, aux);
  const auto samples = run_chain_from(fitted, cov, chain_cfg, num_sims, p_obs);

  std::vector<std::vector<double>> sims(observed.size());
  for (const auto& sample : samples) {
    const auto values = auxiliary_statistics(sample.partition, cov, aux);
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i].defined) sims[i].push_back(values[i].value);
  }

  GofReport report;
  report.num_sims = static_cast<long>(samples.size());
  for (std::size_t i = 0; i < observed.size(); ++i) {
    GofEntry entry;
    entry.name = observed[i].name;
    entry.observed = observed[i].value;
    entry.observed_defined = observed[i].defined;
    entry.values = sims[i];
    entry.defined_simulations = static_cast<long>(sims[i].size());
    if (!sims[i].empty()) {
      double mean = 0;
      for (double v : sims[i]) mean += v;
      mean /= static_cast<double>(sims[i].size());
      double ss = 0;
      for (double v : sims[i]) ss += (v - mean) * (v - mean);
      entry.mean = mean;
      entry.sd = sims[i].size() > 1
                     ? std::sqrt(ss / (static_cast<double>(sims[i].size()) - 1.0))
                     : 0.0;
      std::vector<double> sorted = sims[i];
      std::sort(sorted.begin(), sorted.end());
      entry.q025 = quantile_type7(sorted, 0.025);
      entry.q25 = quantile_type7(sorted, 0.25);
      entry.q50 = quantile_type7(sorted, 0.50);
      entry.q75 = quantile_type7(sorted, 0.75);
      entry.q975 = quantile_type7(sorted, 0.975);
      entry.outside_interval =
          entry.observed_defined && (entry.observed < entry.q025 || entry.observed > entry.q975);
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace erpm
