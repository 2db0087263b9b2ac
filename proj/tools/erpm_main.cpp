#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "erpm/io.hpp"

namespace {

using namespace erpm;

// exit codes: 0 success, 1 validation error, 2 non-convergence, 3 degeneracy
constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kNonConverged = 2;
constexpr int kDegenerate = 3;

struct DataArgs {
  std::string partition;
  std::string attributes;
  std::vector<std::string> dyadic;

  void attach(CLI::App* cmd, bool partition_required) {
    auto* p = cmd->add_option("--partition", partition, "observed partition CSV");
    if (partition_required) p->required();
    cmd->add_option("--attributes", attributes, "actor attribute CSV");
    cmd->add_option("--dyadic", dyadic, "dyadic covariate CSV (repeatable)");
  }
};

ChainConfig chain_config_from(const RunConfig& config, int n, std::uint64_t seed) {
  ChainConfig cfg;
  cfg.mixture = config.effective_mixture();
  cfg.bounds_mode = config.bounds_mode;
  cfg.burn_in = config.burn_in >= 0 ? config.burn_in : 100L * n;
  cfg.thinning = config.thinning >= 1 ? config.thinning : 2L * n;
  cfg.seed = seed;
  return cfg;
}

int run_enumerate(const std::string& model_path, const DataArgs& data, int n_flag, int cap,
                  const std::string& out) {
  RunConfig config;
  if (!model_path.empty()) {
    config = parse_model_config(model_path);
  } else {
    config.statistics = {StatisticSpec::num_groups()};
    config.alpha = {0.0};
  }
  Dataset dataset{Partition::one_block(1), CovariateStore::empty(0), {}};
  int n = n_flag;
  if (!data.partition.empty()) {
    dataset = load_dataset(data.partition, data.attributes, data.dyadic);
    n = dataset.partition.n();
  } else {
    if (n <= 0) throw ValidationError("enumerate: pass --n or --partition");
    dataset.covariates = CovariateStore::empty(n);
  }
  config.validate_against(dataset.covariates);
  const auto dist = exact_distribution(config.model(), dataset.covariates, cap);
  write_enumeration_csv(out, dist);
  std::cout << dist.partitions.size() << " partitions, log kappa = " << dist.log_kappa << "\n"
            << "wrote " << out << "\n";
  return kOk;
}

int run_simulate(const std::string& model_path, const DataArgs& data, int n_flag, long samples,
                 long burn_in, long thinning, std::uint64_t seed, const std::string& out) {
  RunConfig config = parse_model_config(model_path);
  Dataset dataset{Partition::one_block(1), CovariateStore::empty(0), {}};
  bool have_observed = false;
  int n = n_flag;
  if (!data.partition.empty()) {
    dataset = load_dataset(data.partition, data.attributes, data.dyadic);
    n = dataset.partition.n();
    have_observed = true;
  } else {
    if (n <= 0) throw ValidationError("simulate: pass --n or --partition");
    dataset.covariates = CovariateStore::empty(n);
  }
  config.validate_against(dataset.covariates);

  ChainConfig cfg = chain_config_from(config, n, seed);
  if (burn_in >= 0) cfg.burn_in = burn_in;
  if (thinning >= 1) cfg.thinning = thinning;

  const ModelSpec model = config.model();
  const auto draws = have_observed ? run_chain_from(model, dataset.covariates, cfg, samples,
                                                    dataset.partition)
                                   : run_chain(model, dataset.covariates, cfg, samples);
  write_samples_csv(out, draws, model.specs);
  std::cout << draws.size() << " samples written to " << out << "\n";
  return kOk;
}

int run_estimate(const std::string& model_path, const DataArgs& data, std::uint64_t seed,
                 const std::string& out_dir) {
  RunConfig config = parse_model_config(model_path);
  const Dataset dataset = load_dataset(data.partition, data.attributes, data.dyadic);
  config.validate_against(dataset.covariates);
  if (config.bounds_mode == BoundsMode::RejectInvalid &&
      !dataset.partition.respects(config.bounds))
    throw ValidationError(
        "the observed partition violates the configured size bounds; adjust bounds.min/max");

  const auto s_obs = observed_statistics(dataset.partition, config.statistics, dataset.covariates);

  EstimationConfig est_cfg = config.estimation;
  est_cfg.seed = seed;
  est_cfg.burn_in = config.burn_in;
  est_cfg.thinning = config.thinning;
  RobbinsMonroEstimator estimator(config.model(), dataset.covariates, est_cfg,
                                  config.effective_mixture(), config.bounds_mode);
  const EstimationResult result = estimator.estimate(s_obs, dataset.partition);

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  const DataPaths paths{data.partition, data.attributes, data.dyadic};
  write_estimation_result_json((dir / "result.json").string(), result, config, seed, paths);
  write_trace_csv((dir / "trace.csv").string(), result);
  const std::string table = format_result_table(result);
  const std::string interpretation = format_interpretation_lines(result);
  std::ofstream table_file(dir / "table.txt");
  table_file << table << "\n" << interpretation;
  std::cout << table << "\n" << interpretation;
  std::cout << "wrote " << (dir / "result.json").string() << "\n";
  return result.converged ? kOk : kNonConverged;
}

int run_loglik(const std::string& fit_path, std::uint64_t seed, const std::string& out) {
  const LoadedFit fit = load_fit_json(fit_path);
  const Dataset dataset = load_dataset(fit.partition_path, fit.attributes_path, fit.dyadic_paths);
  fit.config.validate_against(dataset.covariates);

  ModelSpec model = fit.config.model();
  model.alpha = fit.alpha_hat;
  PathConfig pc = fit.config.path;
  pc.seed = seed;
  pc.burn_in = fit.config.burn_in;
  pc.thinning = fit.config.thinning;
  const auto result = path_sampling_loglik(model, fit.s_obs, dataset.covariates, pc,
                                           fit.config.effective_mixture(), fit.config.bounds_mode);
  write_loglik_json(out, result, fit.config, seed);
  std::cout << "log-likelihood: " << result.loglik << " (MC s.e. " << result.mc_standard_error
            << ", reference " << result.reference_loglik << ")\n";
  if (result.overlap_warning)
    std::cout << "warning: adjacent bridges overlap poorly; increase path.bridges\n";
  std::cout << "wrote " << out << "\n";
  return kOk;
}

int run_gof(const std::string& fit_path, long sims, const std::string& aux_list,
            std::uint64_t seed, const std::string& out_dir) {
  const LoadedFit fit = load_fit_json(fit_path);
  const Dataset dataset = load_dataset(fit.partition_path, fit.attributes_path, fit.dyadic_paths);
  fit.config.validate_against(dataset.covariates);

  std::vector<AuxiliarySpec> aux;
  std::stringstream stream(aux_list);
  std::string token;
  while (std::getline(stream, token, ','))
    if (!token.empty()) aux.push_back(AuxiliarySpec::parse(token));
  if (aux.empty()) throw ValidationError("gof: pass --aux with at least one statistic");

  ModelSpec model = fit.config.model();
  model.alpha = fit.alpha_hat;
  const ChainConfig cfg = chain_config_from(fit.config, dataset.partition.n(), seed);
  const GofReport report = gof(model, dataset.covariates, dataset.partition, sims, aux, cfg);

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_gof_json((dir / "gof_report.json").string(), report, fit.config, seed);
  write_gof_values_csv((dir / "gof_values.csv").string(), report);

  long flagged = 0;
  for (const auto& entry : report.entries)
    if (entry.outside_interval) {
      ++flagged;
      std::cout << entry.name << ": observed " << entry.observed
                << " outside the central 95% interval [" << entry.q025 << ", " << entry.q975
                << "]\n";
    }
  std::cout << report.entries.size() << " auxiliary values, " << flagged
            << " outside their interval; wrote " << (dir / "gof_report.json").string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exponential random partition models: exact computation, simulation, estimation"};
  app.require_subcommand(1);

  std::string model_path, fit_path, out, out_dir = ".";
  std::string aux_list;
  DataArgs enumerate_data, simulate_data, estimate_data;
  int n_flag = 0, cap = kDefaultEnumerationCap;
  long samples = 1000, sims = 1000, burn_in = -1, thinning = -1;
  std::uint64_t seed = 0;

  auto* enumerate_cmd =
      app.add_subcommand("enumerate", "enumerate partitions with exact probabilities");
  enumerate_cmd->add_option("--n", n_flag, "number of actors (when no partition file)");
  enumerate_cmd->add_option("--model", model_path, "model config JSON (uniform if omitted)");
  enumerate_data.attach(enumerate_cmd, false);
  enumerate_cmd->add_option("--cap", cap, "enumeration cap override");
  enumerate_cmd->add_option("--out", out, "output CSV")->default_val("enumeration.csv");

  auto* simulate_cmd = app.add_subcommand("simulate", "sample partitions from a model");
  simulate_cmd->add_option("--model", model_path, "model config JSON")->required();
  simulate_cmd->add_option("--n", n_flag, "number of actors (when no partition file)");
  simulate_cmd->add_option("--samples", samples, "number of thinned draws")->required();
  simulate_cmd->add_option("--burnin", burn_in, "burn-in steps");
  simulate_cmd->add_option("--thin", thinning, "thinning interval");
  simulate_cmd->add_option("--seed", seed, "random seed");
  simulate_cmd->add_option("--out", out, "trace CSV")->default_val("trace.csv");
  simulate_data.attach(simulate_cmd, false);

  auto* estimate_cmd = app.add_subcommand("estimate", "Robbins-Monro estimation");
  estimate_cmd->add_option("--model", model_path, "model config JSON")->required();
  estimate_cmd->add_option("--seed", seed, "random seed");
  estimate_cmd->add_option("--out-dir", out_dir, "output directory");
  estimate_data.attach(estimate_cmd, true);

  auto* loglik_cmd = app.add_subcommand("loglik", "path-sampling log-likelihood of a fit");
  loglik_cmd->add_option("--fit", fit_path, "result.json from estimate")->required();
  loglik_cmd->add_option("--seed", seed, "random seed");
  loglik_cmd->add_option("--out", out, "output JSON")->default_val("loglik.json");

  auto* gof_cmd = app.add_subcommand("gof", "goodness of fit via auxiliary statistics");
  gof_cmd->add_option("--fit", fit_path, "result.json from estimate")->required();
  gof_cmd->add_option("--sims", sims, "number of simulated partitions");
  gof_cmd->add_option("--aux", aux_list, "comma-separated auxiliary statistics")->required();
  gof_cmd->add_option("--seed", seed, "random seed");
  gof_cmd->add_option("--out-dir", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (enumerate_cmd->parsed()) return run_enumerate(model_path, enumerate_data, n_flag, cap, out);
    if (simulate_cmd->parsed())
      return run_simulate(model_path, simulate_data, n_flag, samples, burn_in, thinning, seed,
                          out);
    if (estimate_cmd->parsed()) return run_estimate(model_path, estimate_data, seed, out_dir);
    if (loglik_cmd->parsed()) return run_loglik(fit_path, seed, out);
    if (gof_cmd->parsed()) return run_gof(fit_path, sims, aux_list, seed, out_dir);
  } catch (const DegeneracyError& e) {
    std::cerr << "degeneracy: " << e.what() << "\n";
    return kDegenerate;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
