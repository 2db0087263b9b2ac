#pragma once

#include "erpm/sampler.hpp"

namespace erpm {

/// Auxiliary statistics for goodness of fit: not (necessarily) in the model,
/// compared between the observed partition and model simulations.
enum class AuxKind {
  SizeHistogram,        // number of groups of each size
  TieDifferenceCounts,  // within-group dyads per absolute attribute difference
  Icc,                  // one-way intraclass correlation of an attribute
  AttrSizeCorrelation,  // Pearson correlation of attribute and own-block size
  SameTieProportion,    // share of within-group dyads with equal attribute
  MeanSizeByCategory,   // mean block size per attribute category
};

struct AuxiliarySpec {
  AuxKind kind = AuxKind::SizeHistogram;
  std::string attribute;

  /// Parses "size_hist", "tie_diff:age", "icc:age", "attr_size_corr:age",
  /// "same_tie_prop:language", "mean_size_by:language".
  static AuxiliarySpec parse(const std::string& text);
  std::string name() const;
  void validate(const CovariateStore& cov) const;
};

struct AuxValue {
  std::string name;
  double value = 0.0;
  bool defined = true;
};

/// Expands each spec into its named values (a histogram spec yields one value
/// per size, etc.). Undefined statistics (e.g. ICC with a single block) carry
/// defined = false.
std::vector<AuxValue> auxiliary_statistics(const Partition& p, const CovariateStore& cov,
                                           const std::vector<AuxiliarySpec>& specs);

struct GofEntry {
  std::string name;
  double observed = 0.0;
  bool observed_defined = true;
  long defined_simulations = 0;
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q975 = 0.0;
  bool outside_interval = false;  // observed outside the central 95% band
  std::vector<double> values;     // raw simulated values for plotting
};

struct GofReport {
  long num_sims = 0;
  std::vector<GofEntry> entries;
};

/// Simulates num_sims partitions from the fitted model and summarizes each
/// auxiliary statistic against its observed value.
GofReport gof(const ModelSpec& fitted, const CovariateStore& cov, const Partition& p_obs,
              long num_sims, const std::vector<AuxiliarySpec>& aux, const ChainConfig& chain_cfg);

/// Type-7 quantile (linear interpolation) of already-sorted values.
double quantile_type7(std::span<const double> sorted_values, double q);

}  // namespace erpm
