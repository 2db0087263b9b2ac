#include "erpm/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace erpm {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    std::size_t start = 0;
    while (start < cell.size() && cell[start] == ' ') ++start;
    cells.push_back(cell.substr(start));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw ValidationError(path + ": empty file");
  return rows;
}

bool missing_cell(const std::string& cell) { return cell.empty() || cell == "NA"; }

double parse_double(const std::string& cell, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(context + ": cannot parse number '" + cell + "'");
  }
}

}  // namespace

Dataset load_dataset(const std::string& partition_csv, const std::string& attributes_csv,
                     const std::vector<std::string>& dyadic_csvs) {
  const auto rows = read_csv(partition_csv);
  if (rows.front().size() != 2 || rows.front()[0] != "actor_id" || rows.front()[1] != "group_id")
    throw ValidationError(partition_csv + ": expected header actor_id,group_id");

  std::vector<std::string> actor_ids;
  std::vector<std::string> labels;
  std::map<std::string, int> index_of;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2)
      throw ValidationError(partition_csv + ": row " + std::to_string(r + 1) + " needs 2 cells");
    const std::string& id = rows[r][0];
    if (!index_of.emplace(id, static_cast<int>(actor_ids.size())).second)
      throw ValidationError(partition_csv + ": duplicate actor id " + id);
    actor_ids.push_back(id);
    labels.push_back(rows[r][1]);
  }
  Partition partition = canonicalize(labels);
  const int n = partition.n();
  CovariateStore cov = CovariateStore::empty(n);

  if (!attributes_csv.empty()) {
    const auto attr_rows = read_csv(attributes_csv);
    const auto& header = attr_rows.front();
    if (header.empty() || header[0] != "actor_id")
      throw ValidationError(attributes_csv + ": expected header actor_id,<attribute>,...");
    const std::size_t num_attrs = header.size() - 1;
    std::vector<std::vector<double>> columns(num_attrs,
                                             std::vector<double>(n, std::nan("")));
    std::set<std::string> seen;
    for (std::size_t r = 1; r < attr_rows.size(); ++r) {
      const auto& row = attr_rows[r];
      if (row.size() != header.size())
        throw ValidationError(attributes_csv + ": row " + std::to_string(r + 1) +
                              " does not match the header width");
      const auto it = index_of.find(row[0]);
      if (it == index_of.end())
        throw ValidationError(attributes_csv + ": unknown actor id " + row[0]);
      if (!seen.insert(row[0]).second)
        throw ValidationError(attributes_csv + ": duplicate actor id " + row[0]);
      for (std::size_t c = 1; c < row.size(); ++c)
        if (!missing_cell(row[c]))
          columns[c - 1][it->second] = parse_double(row[c], attributes_csv);
    }
    for (std::size_t c = 0; c < num_attrs; ++c)
      cov.add_attribute(header[c + 1], std::move(columns[c]));
  }

  for (const auto& path : dyadic_csvs) {
    const auto edge_rows = read_csv(path);
    if (edge_rows.front().size() != 3 || edge_rows.front()[0] != "actor_i" ||
        edge_rows.front()[1] != "actor_j" || edge_rows.front()[2] != "value")
      throw ValidationError(path + ": expected header actor_i,actor_j,value");
    std::vector<double> matrix(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<char> set_flag(static_cast<std::size_t>(n) * n, 0);
    for (std::size_t r = 1; r < edge_rows.size(); ++r) {
      const auto& row = edge_rows[r];
      if (row.size() != 3)
        throw ValidationError(path + ": row " + std::to_string(r + 1) + " needs 3 cells");
      const auto it_i = index_of.find(row[0]);
      const auto it_j = index_of.find(row[1]);
      if (it_i == index_of.end()) throw ValidationError(path + ": unknown actor id " + row[0]);
      if (it_j == index_of.end()) throw ValidationError(path + ": unknown actor id " + row[1]);
      const int i = it_i->second, j = it_j->second;
      if (i == j) throw ValidationError(path + ": self dyad for actor " + row[0]);
      const double value = parse_double(row[2], path);
      const std::size_t a = static_cast<std::size_t>(i) * n + j;
      const std::size_t b = static_cast<std::size_t>(j) * n + i;
      if ((set_flag[a] || set_flag[b]) && matrix[a] != value)
        throw ValidationError(path + ": conflicting values for dyad " + row[0] + "," + row[1]);
      matrix[a] = matrix[b] = value;
      set_flag[a] = set_flag[b] = 1;
    }
    cov.add_dyadic(std::filesystem::path(path).stem().string(), std::move(matrix));
  }

  return Dataset{std::move(partition), std::move(cov), std::move(actor_ids)};
}

namespace {

StatisticSpec parse_statistic(const json& j) {
  if (!j.contains("kind")) throw ValidationError("model config: statistic without a kind");
  const std::string kind = j.at("kind").get<std::string>();
  StatisticSpec spec;
  auto attribute = [&] {
    if (!j.contains("attribute"))
      throw ValidationError("model config: " + kind + " needs an attribute");
    return j.at("attribute").get<std::string>();
  };
  if (kind == "num_groups") {
    spec = StatisticSpec::num_groups();
  } else if (kind == "num_groups_of_size") {
    if (!j.contains("size")) throw ValidationError("model config: num_groups_of_size needs size");
    spec = StatisticSpec::num_groups_of_size(j.at("size").get<int>());
  } else if (kind == "sum_log_factorial_sizes") {
    spec = StatisticSpec::sum_log_factorial_sizes();
  } else if (kind == "sum_squared_sizes") {
    spec = StatisticSpec::sum_squared_sizes();
  } else if (kind == "dyadic_homophily") {
    const std::string similarity = j.value("similarity", "match");
    if (similarity != "match" && similarity != "neg_abs_diff")
      throw ValidationError("model config: unknown similarity " + similarity);
    spec = StatisticSpec::dyadic_homophily(
        attribute(), similarity == "match" ? Similarity::Match : Similarity::NegAbsDiff);
  } else if (kind == "group_homophily") {
    const std::string form = j.value("form", "range");
    GroupForm parsed;
    if (form == "all_same")
      parsed = GroupForm::AllSameIndicator;
    else if (form == "range")
      parsed = GroupForm::Range;
    else if (form == "distinct_count")
      parsed = GroupForm::DistinctCount;
    else if (form == "variance")
      parsed = GroupForm::Variance;
    else
      throw ValidationError("model config: unknown group homophily form " + form);
    spec = StatisticSpec::group_homophily(attribute(), parsed);
  } else if (kind == "dyadic_covariate") {
    if (!j.contains("covariate"))
      throw ValidationError("model config: dyadic_covariate needs a covariate");
    spec = StatisticSpec::dyadic_covariate(j.at("covariate").get<std::string>());
  } else if (kind == "dyadic_sociability") {
    spec = StatisticSpec::dyadic_sociability(attribute());
  } else if (kind == "group_sociability") {
    spec = StatisticSpec::group_sociability(attribute());
  } else {
    throw ValidationError("model config: unknown statistic kind " + kind);
  }
  spec.normalized = j.value("normalized", false);
  return spec;
}

json statistic_to_json(const StatisticSpec& spec, double alpha) {
  json j;
  switch (spec.kind) {
    case StatKind::NumGroups: j["kind"] = "num_groups"; break;
    case StatKind::NumGroupsOfSize:
      j["kind"] = "num_groups_of_size";
      j["size"] = spec.size_k;
      break;
    case StatKind::SumLogFactorialSizes: j["kind"] = "sum_log_factorial_sizes"; break;
    case StatKind::SumSquaredSizes: j["kind"] = "sum_squared_sizes"; break;
    case StatKind::DyadicHomophily:
      j["kind"] = "dyadic_homophily";
      j["attribute"] = spec.attribute;
      j["similarity"] = spec.similarity == Similarity::Match ? "match" : "neg_abs_diff";
      break;
    case StatKind::GroupHomophily:
      j["kind"] = "group_homophily";
      j["attribute"] = spec.attribute;
      j["form"] = spec.form == GroupForm::AllSameIndicator ? "all_same"
                  : spec.form == GroupForm::Range          ? "range"
                  : spec.form == GroupForm::DistinctCount  ? "distinct_count"
                                                           : "variance";
      break;
    case StatKind::DyadicCovariate:
      j["kind"] = "dyadic_covariate";
      j["covariate"] = spec.covariate;
      break;
    case StatKind::DyadicSociability:
      j["kind"] = "dyadic_sociability";
      j["attribute"] = spec.attribute;
      break;
    case StatKind::GroupSociability:
      j["kind"] = "group_sociability";
      j["attribute"] = spec.attribute;
      break;
  }
  if (spec.normalized) j["normalized"] = true;
  j["alpha"] = alpha;
  return j;
}

}  // namespace

ProposalMixture RunConfig::effective_mixture() const {
  if (mixture_given) return mixture;
  const bool size_only = std::all_of(statistics.begin(), statistics.end(),
                                     [](const StatisticSpec& s) { return s.size_only(); });
  return size_only ? ProposalMixture::merge_split_only() : ProposalMixture::uniform_all();
}

ModelSpec RunConfig::model() const { return ModelSpec{statistics, alpha, bounds}; }

void RunConfig::validate_against(const CovariateStore& cov) const {
  for (const auto& spec : statistics) spec.validate(cov);
}

RunConfig parse_model_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model config: invalid JSON: ") + e.what());
  }
  RunConfig config;
  config.schema_version = j.value("schema_version", 1);
  if (config.schema_version != 1)
    throw ValidationError("model config: unsupported schema_version");
  if (!j.contains("statistics") || !j.at("statistics").is_array() || j.at("statistics").empty())
    throw ValidationError("model config: needs a nonempty statistics array");
  for (const auto& stat : j.at("statistics")) {
    config.statistics.push_back(parse_statistic(stat));
    config.alpha.push_back(stat.value("alpha", 0.0));
  }
  if (j.contains("bounds")) {
    const auto& b = j.at("bounds");
    config.bounds.min = b.value("min", 1);
    if (b.contains("max") && !b.at("max").is_null()) config.bounds.max = b.at("max").get<int>();
    config.bounds.validate();
  }
  if (j.contains("sampler")) {
    const auto& s = j.at("sampler");
    if (s.contains("mixture")) {
      const auto& mix = s.at("mixture");
      config.mixture.merge_split = mix.value("merge_split", 0.0);
      config.mixture.permute = mix.value("permute", 0.0);
      config.mixture.transfer = mix.value("transfer", 0.0);
      config.mixture.validate();
      config.mixture_given = true;
    }
    config.burn_in = s.value("burn_in", -1);
    config.thinning = s.value("thinning", -1);
    const std::string mode = s.value("bounds_mode", "reject_invalid");
    if (mode == "reject_invalid")
      config.bounds_mode = BoundsMode::RejectInvalid;
    else if (mode == "full_space_retain")
      config.bounds_mode = BoundsMode::FullSpaceRetain;
    else
      throw ValidationError("model config: unknown bounds_mode " + mode);
  }
  if (j.contains("estimation")) {
    const auto& e = j.at("estimation");
    auto& est = config.estimation;
    est.m1 = e.value("m1", est.m1);
    est.subphases = e.value("subphases", est.subphases);
    est.gain = e.value("gain", est.gain);
    est.subphase_base = e.value("subphase_base", est.subphase_base);
    est.subphase_max_factor = e.value("subphase_max_factor", est.subphase_max_factor);
    est.m3 = e.value("m3", est.m3);
    est.offdiag_damping = e.value("offdiag_damping", est.offdiag_damping);
    est.divergence_bound = e.value("divergence_bound", est.divergence_bound);
    est.max_step = e.value("max_step", est.max_step);
    est.max_restarts = e.value("max_restarts", est.max_restarts);
    const std::string rule = e.value("alpha0_rule", "size_only_solve");
    if (rule == "size_only_solve")
      est.alpha0_rule = Alpha0Rule::SizeOnlySolve;
    else if (rule == "num_groups_only")
      est.alpha0_rule = Alpha0Rule::NumGroupsOnly;
    else
      throw ValidationError("model config: unknown alpha0_rule " + rule);
    est.validate();
  }
  if (j.contains("path")) {
    const auto& p = j.at("path");
    config.path.bridges = p.value("bridges", config.path.bridges);
    config.path.draws_per_bridge = p.value("draws_per_bridge", config.path.draws_per_bridge);
    config.path.validate();
  }
  return config;
}

RunConfig parse_model_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model_config_text(buffer.str());
}

namespace {

json config_to_json(const RunConfig& config) {
  json j;
  j["schema_version"] = config.schema_version;
  j["statistics"] = json::array();
  for (std::size_t k = 0; k < config.statistics.size(); ++k)
    j["statistics"].push_back(statistic_to_json(config.statistics[k], config.alpha[k]));
  j["bounds"]["min"] = config.bounds.min;
  if (config.bounds.max == SizeBounds::unbounded())
    j["bounds"]["max"] = nullptr;
  else
    j["bounds"]["max"] = config.bounds.max;
  const auto mixture = config.effective_mixture();
  j["sampler"]["mixture"] = {{"merge_split", mixture.merge_split},
                             {"permute", mixture.permute},
                             {"transfer", mixture.transfer}};
  j["sampler"]["burn_in"] = config.burn_in;
  j["sampler"]["thinning"] = config.thinning;
  j["sampler"]["bounds_mode"] =
      config.bounds_mode == BoundsMode::RejectInvalid ? "reject_invalid" : "full_space_retain";
  j["estimation"] = {{"m1", config.estimation.m1},
                     {"subphases", config.estimation.subphases},
                     {"gain", config.estimation.gain},
                     {"subphase_base", config.estimation.subphase_base},
                     {"subphase_max_factor", config.estimation.subphase_max_factor},
                     {"m3", config.estimation.m3},
                     {"offdiag_damping", config.estimation.offdiag_damping},
                     {"divergence_bound", config.estimation.divergence_bound},
                     {"max_step", config.estimation.max_step},
                     {"max_restarts", config.estimation.max_restarts},
                     {"alpha0_rule", config.estimation.alpha0_rule == Alpha0Rule::SizeOnlySolve
                                         ? "size_only_solve"
                                         : "num_groups_only"}};
  j["path"] = {{"bridges", config.path.bridges},
               {"draws_per_bridge", config.path.draws_per_bridge}};
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (!out) throw ValidationError("write failed for " + path);
}

}  // namespace

std::string resolved_config_json(const RunConfig& config) { return config_to_json(config).dump(2); }

void write_estimation_result_json(const std::string& path, const EstimationResult& result,
                                  const RunConfig& config, std::uint64_t seed,
                                  const DataPaths& data) {
  json j;
  j["schema_version"] = 1;
  j["command"] = "estimate";
  j["seed"] = seed;
  j["data"] = {{"partition", data.partition},
               {"attributes", data.attributes},
               {"dyadic", data.dyadic}};
  RunConfig fitted = config;
  fitted.alpha = result.alpha_hat;
  j["config"] = config_to_json(fitted);
  j["statistics"] = result.statistic_names;
  j["observed_statistics"] = result.s_obs;
  j["alpha0"] = result.alpha0;
  j["estimate"] = result.alpha_hat;
  j["standard_errors"] = result.standard_errors;
  j["wald_ratios"] = result.wald_ratios;
  j["significance"] = result.significance;
  j["convergence_ratios"] = result.convergence_ratios;
  j["converged"] = result.converged;
  j["thinning_used"] = result.thinning_used;
  j["restarts_used"] = result.restarts_used;
  std::vector<double> ratios;
  for (double a : result.alpha_hat) ratios.push_back(probability_ratio(a));
  j["probability_ratios"] = ratios;
  j["phase3_mean_stats"] = result.phase3_mean_stats;
  std::vector<std::vector<double>> covariance;
  for (Eigen::Index r = 0; r < result.phase3_covariance.rows(); ++r) {
    covariance.emplace_back();
    for (Eigen::Index c = 0; c < result.phase3_covariance.cols(); ++c)
      covariance.back().push_back(result.phase3_covariance(r, c));
  }
  j["phase3_covariance"] = covariance;
  j["subphases"] = json::array();
  for (const auto& sub : result.subphases)
    j["subphases"].push_back(
        {{"gain", sub.gain}, {"length", sub.length}, {"tail_average", sub.tail_average}});
  write_text(path, j.dump(2) + "\n");
}

LoadedFit load_fit_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("fit file: invalid JSON: ") + e.what());
  }
  LoadedFit fit;
  fit.config = parse_model_config_text(j.at("config").dump());
  fit.alpha_hat = j.at("estimate").get<std::vector<double>>();
  fit.s_obs = j.at("observed_statistics").get<std::vector<double>>();
  fit.seed = j.value("seed", 0ull);
  fit.partition_path = j.at("data").at("partition").get<std::string>();
  fit.attributes_path = j.at("data").at("attributes").get<std::string>();
  fit.dyadic_paths = j.at("data").at("dyadic").get<std::vector<std::string>>();
  return fit;
}

void write_trace_csv(const std::string& path, const EstimationResult& result) {
  std::ostringstream out;
  out << "phase,iteration";
  for (const auto& name : result.statistic_names) out << "," << name;
  out << "\n";
  long iteration = 0;
  for (const auto& alpha : result.phase2_alpha_trace) {
    out << "2," << iteration++;
    for (double a : alpha) out << "," << a;
    out << "\n";
  }
  iteration = 0;
  for (const auto& stats : result.phase3_stat_trace) {
    out << "3," << iteration++;
    for (double s : stats) out << "," << s;
    out << "\n";
  }
  write_text(path, out.str());
}

double probability_ratio(double estimate) { return std::exp(estimate); }

std::string format_probability_ratio(double estimate) {
  std::ostringstream out;
  out.precision(4);
  out << probability_ratio(estimate);
  return out.str();
}

std::string format_interpretation_lines(const EstimationResult& result) {
  std::ostringstream out;
  for (std::size_t k = 0; k < result.statistic_names.size(); ++k) {
    const double est = result.alpha_hat[k];
    out << result.statistic_names[k] << ": exp(" << std::abs(est) << ") = "
        << format_probability_ratio(std::abs(est))
        << "; a partition one unit higher on this statistic is that factor "
        << (est >= 0 ? "more" : "less") << " likely, other statistics equal\n";
  }
  return out.str();
}

std::string format_result_table(const EstimationResult& result, const double* loglik) {
  std::ostringstream out;
  std::size_t width = 24;
  for (const auto& name : result.statistic_names) width = std::max(width, name.size() + 2);
  out << std::left << std::setw(static_cast<int>(width)) << "Statistic"
      << std::right << std::setw(10) << "Est." << "  " << std::left << std::setw(4) << "Sig."
      << std::right << std::setw(10) << "S.e." << std::setw(10) << "Conv." << "\n";
  out << std::string(width + 36, '-') << "\n";
  for (std::size_t k = 0; k < result.statistic_names.size(); ++k) {
    out << std::left << std::setw(static_cast<int>(width)) << result.statistic_names[k]
        << std::right << std::setw(10) << std::fixed << std::setprecision(3)
        << result.alpha_hat[k] << "  " << std::left << std::setw(4)
        << (result.converged ? result.significance[k] : "") << std::right << "("
        << std::setw(7) << std::setprecision(3) << result.standard_errors[k] << ")"
        << std::setw(9) << std::setprecision(3) << result.convergence_ratios[k] << "\n";
    out.unsetf(std::ios::fixed);
  }
  out << std::string(width + 36, '-') << "\n";
  if (loglik) out << "Log-likelihood: " << std::setprecision(6) << *loglik << "\n";
  out << (result.converged ? "Converged: all |convergence ratios| <= 0.1"
                           : "NON-CONVERGED: a convergence ratio exceeds 0.1; rerun from the "
                             "reported estimate")
      << "\n";
  return out.str();
}

void write_enumeration_csv(const std::string& path, const ExactDistribution& dist) {
  std::ostringstream out;
  out << "index,membership,num_groups,probability\n";
  for (std::size_t i = 0; i < dist.partitions.size(); ++i) {
    out << i << ",";
    const auto& membership = dist.partitions[i].membership();
    for (std::size_t a = 0; a < membership.size(); ++a) {
      if (a) out << "|";
      out << membership[a];
    }
    out << "," << dist.partitions[i].num_groups() << "," << std::setprecision(17)
        << dist.probabilities[i] << "\n";
  }
  write_text(path, out.str());
}

void write_samples_csv(const std::string& path, const std::vector<Sample>& samples,
                       const std::vector<StatisticSpec>& specs) {
  std::ostringstream out;
  out << "sample";
  for (const auto& spec : specs) out << "," << spec.name();
  out << ",num_groups,membership\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << i;
    for (double v : samples[i].stats) out << "," << std::setprecision(17) << v;
    out << "," << samples[i].partition.num_groups() << ",";
    const auto& membership = samples[i].partition.membership();
    for (std::size_t a = 0; a < membership.size(); ++a) {
      if (a) out << "|";
      out << membership[a];
    }
    out << "\n";
  }
  write_text(path, out.str());
}

void write_gof_json(const std::string& path, const GofReport& report, const RunConfig& config,
                    std::uint64_t seed) {
  json j;
  j["seed"] = seed;
  j["config"] = config_to_json(config);
  j["num_sims"] = report.num_sims;
  j["entries"] = json::array();
  for (const auto& e : report.entries) {
    json entry;
    entry["name"] = e.name;
    entry["observed"] = e.observed;
    entry["observed_defined"] = e.observed_defined;
    entry["defined_simulations"] = e.defined_simulations;
    entry["mean"] = e.mean;
    entry["sd"] = e.sd;
    entry["quantiles"] = {{"q025", e.q025},
                          {"q25", e.q25},
                          {"q50", e.q50},
                          {"q75", e.q75},
                          {"q975", e.q975}};
    entry["outside_interval"] = e.outside_interval;
    j["entries"].push_back(std::move(entry));
  }
  write_text(path, j.dump(2) + "\n");
}

void write_gof_values_csv(const std::string& path, const GofReport& report) {
  std::ostringstream out;
  out << "statistic,replicate,value\n";
  for (const auto& e : report.entries)
    for (std::size_t r = 0; r < e.values.size(); ++r)
      out << e.name << "," << r << "," << std::setprecision(17) << e.values[r] << "\n";
  write_text(path, out.str());
}

void write_loglik_json(const std::string& path, const PathLoglik& result,
                       const RunConfig& config, std::uint64_t seed) {
  json j;
  j["seed"] = seed;
  j["config"] = config_to_json(config);
  j["loglik"] = result.loglik;
  j["mc_standard_error"] = result.mc_standard_error;
  j["reference_loglik"] = result.reference_loglik;
  j["alpha0"] = result.alpha0;
  j["overlap_warning"] = result.overlap_warning;
  write_text(path, j.dump(2) + "\n");
}

void write_partition_csv(const std::string& path, const Partition& partition,
                         const std::vector<std::string>& actor_ids) {
  if (static_cast<int>(actor_ids.size()) != partition.n())
    throw ValidationError("write_partition_csv: actor id count does not match the partition");
  std::ostringstream out;
  out << "actor_id,group_id\n";
  for (int i = 0; i < partition.n(); ++i)
    out << actor_ids[i] << "," << partition.group_of(i) << "\n";
  write_text(path, out.str());
}

}  // namespace erpm
