#pragma once

#include <string>
#include <vector>

#include "erpm/diagnostics.hpp"
#include "erpm/estimator.hpp"
#include "erpm/likelihood.hpp"

namespace erpm {

/// An observed partition plus covariates, keyed by the actor ids of the
/// partition file (row order defines the actor indexing).
struct Dataset {
  Partition partition;
  CovariateStore covariates;
  std::vector<std::string> actor_ids;
};

/// partition CSV: header actor_id,group_id; group labels are arbitrary and
/// canonicalized. attributes CSV (optional, "" to skip): header
/// actor_id,<name>,...; empty or NA cells are missing. dyadic CSVs: header
/// actor_i,actor_j,value edge lists, symmetrized, absent pairs zero; the
/// covariate name is the file stem.
Dataset load_dataset(const std::string& partition_csv, const std::string& attributes_csv,
                     const std::vector<std::string>& dyadic_csvs);

/// Everything a run needs beyond the data: statistics, bounds, sampler and
/// estimation settings. Parsed from the documented JSON schema.
struct RunConfig {
  int schema_version = 1;
  std::vector<StatisticSpec> statistics;
  std::vector<double> alpha;  // used by enumerate/simulate/gof; zeros by default
  SizeBounds bounds;
  ProposalMixture mixture;
  bool mixture_given = false;  // otherwise defaulted from the statistic kinds
  BoundsMode bounds_mode = BoundsMode::RejectInvalid;
  long burn_in = -1;
  long thinning = -1;
  EstimationConfig estimation;
  PathConfig path;

  /// merge/split only for size-only models, the even three-way mixture when
  /// covariate statistics are present.
  ProposalMixture effective_mixture() const;
  ModelSpec model() const;
  void validate_against(const CovariateStore& cov) const;
};

RunConfig parse_model_config(const std::string& path);
RunConfig parse_model_config_text(const std::string& json_text);

/// The fully resolved configuration (defaults filled in), embedded in every
/// result file so runs can be replayed.
std::string resolved_config_json(const RunConfig& config);

/// A fit loaded back from a result JSON: the resolved config, the estimate,
/// and the data file paths recorded at estimation time.
struct LoadedFit {
  RunConfig config;
  std::vector<double> alpha_hat;
  std::vector<double> s_obs;
  std::uint64_t seed = 0;
  std::string partition_path;
  std::string attributes_path;
  std::vector<std::string> dyadic_paths;
};

LoadedFit load_fit_json(const std::string& path);

struct DataPaths {
  std::string partition;
  std::string attributes;
  std::vector<std::string> dyadic;
};

void write_estimation_result_json(const std::string& path, const EstimationResult& result,
                                  const RunConfig& config, std::uint64_t seed,
                                  const DataPaths& data);

/// Phase-2 parameter trace and phase-3 statistic draws, long format.
void write_trace_csv(const std::string& path, const EstimationResult& result);

/// Human-readable table in the estimate/significance/standard-error layout,
/// with convergence ratios and optional log-likelihood.
std::string format_result_table(const EstimationResult& result,
                                const double* loglik = nullptr);

/// exp(estimate), the probability-ratio interpretation of one parameter under
/// a unit statistic change; formatted to four significant digits.
double probability_ratio(double estimate);
std::string format_probability_ratio(double estimate);
std::string format_interpretation_lines(const EstimationResult& result);

void write_enumeration_csv(const std::string& path, const ExactDistribution& dist);
void write_samples_csv(const std::string& path, const std::vector<Sample>& samples,
                       const std::vector<StatisticSpec>& specs);
void write_gof_json(const std::string& path, const GofReport& report, const RunConfig& config,
                    std::uint64_t seed);
void write_gof_values_csv(const std::string& path, const GofReport& report);
void write_loglik_json(const std::string& path, const PathLoglik& result,
                       const RunConfig& config, std::uint64_t seed);

/// Re-emits a partition in the load_dataset format; loading it back gives the
/// same canonical partition.
void write_partition_csv(const std::string& path, const Partition& partition,
                         const std::vector<std::string>& actor_ids);

}  // namespace erpm
