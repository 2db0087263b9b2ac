#include "erpm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <set>

#include "erpm/combinatorics.hpp"

namespace erpm {

namespace {

std::uint64_t choose2(std::uint64_t k) { return k * (k - 1) / 2; }

// Block-size bookkeeping backing the closed-form neighbor counts.
struct SizeSummary {
  int m = 0;
  int t1 = 0;  // singleton blocks
  int t2 = 0;  // size-2 blocks
  std::uint64_t sum_sq = 0;
  std::uint64_t split_sum = 0;  // sum of 2^{s-1}-1 over blocks

  void add(int s) {
    ++m;
    t1 += (s == 1);
    t2 += (s == 2);
    sum_sq += static_cast<std::uint64_t>(s) * s;
    split_sum += (1ull << (s - 1)) - 1;
  }
  void remove(int s) {
    --m;
    t1 -= (s == 1);
    t2 -= (s == 2);
    sum_sq -= static_cast<std::uint64_t>(s) * s;
    split_sum -= (1ull << (s - 1)) - 1;
  }
};

std::uint64_t count_for(RelationKind r, int n, const SizeSummary& s) {
  switch (r) {
    case RelationKind::MergeSplit:
      return choose2(s.m) + s.split_sum;
    case RelationKind::Transfer:
      return static_cast<std::uint64_t>(n) * (s.m - 1) + (n - s.t1) - s.t2 - choose2(s.t1);
    case RelationKind::Permute:
      return (static_cast<std::uint64_t>(n) * n - s.sum_sq) / 2 - choose2(s.t1) -
             2 * choose2(s.t2);
  }
  return 0;
}

bool permute_available(int n, const SizeSummary& s) { return s.m >= 2 && s.t1 < n; }

bool size_representable(int x, const SizeBounds& b) {
  if (x == 0) return true;
  if (x < b.min) return false;
  if (b.max == SizeBounds::unbounded()) return true;
  const int k_min = (x + b.max - 1) / b.max;
  const int k_max = x / b.min;
  return k_min <= k_max;
}

}  // namespace

double ProposalMixture::weight(RelationKind r) const {
  switch (r) {
    case RelationKind::MergeSplit: return merge_split;
    case RelationKind::Permute: return permute;
    case RelationKind::Transfer: return transfer;
  }
  return 0;
}

void ProposalMixture::validate() const {
  if (merge_split < 0 || permute < 0 || transfer < 0)
    throw ValidationError("proposal mixture: weights must be nonnegative");
  if (total() <= 0) throw ValidationError("proposal mixture: weights must not all be zero");
  if (merge_split <= 0 && transfer <= 0)
    throw ValidationError(
        "proposal mixture: permute alone preserves block sizes; merge/split or transfer must "
        "have positive weight");
}

void ChainConfig::validate() const {
  mixture.validate();
  if (burn_in < 0) throw ValidationError("chain config: burn_in must be >= 0");
  if (thinning < 1) throw ValidationError("chain config: thinning must be >= 1");
  if (full_reevaluate_interval < 1)
    throw ValidationError("chain config: full_reevaluate_interval must be >= 1");
}

double accept_probability(std::span<const double> alpha, std::span<const double> current_stats,
                          std::span<const double> candidate_stats, double forward_count,
                          double backward_count, double forward_avail, double backward_avail,
                          bool candidate_in_bounds, BoundsMode mode) {
  if (mode == BoundsMode::RejectInvalid && !candidate_in_bounds) return 0.0;
  double log_ratio = 0.0;
  for (std::size_t k = 0; k < alpha.size(); ++k)
    log_ratio += alpha[k] * (candidate_stats[k] - current_stats[k]);
  log_ratio += std::log(forward_count) - std::log(backward_count);
  log_ratio += std::log(forward_avail) - std::log(backward_avail);
  return log_ratio >= 0 ? 1.0 : std::exp(log_ratio);
}

Chain::Chain(ModelSpec model, const CovariateStore& cov, const ChainConfig& cfg,
             Partition initial)
    : model_(std::move(model)), cov_(&cov), cfg_(cfg), n_(initial.n()), rng_(cfg.seed) {
  model_.validate(cov);
  cfg_.validate();
  if (cov.n != n_) throw ValidationError("chain: partition and covariate sizes differ");
  if (n_ > 62) throw ValidationError("chain: n > 62 overflows the neighbor-count arithmetic");
  if (cfg_.bounds_mode == BoundsMode::RejectInvalid && !initial.respects(model_.bounds))
    throw ValidationError("chain: initial partition violates the size bounds");
  member_of_ = initial.membership();
  groups_ = initial.blocks();
  refresh_cache();
}

void Chain::refresh_cache() {
  const std::size_t K = model_.specs.size();
  block_values_.assign(groups_.size(), std::vector<double>(K, 0.0));
  totals_.assign(K, 0.0);
  for (std::size_t g = 0; g < groups_.size(); ++g)
    for (std::size_t k = 0; k < K; ++k) {
      block_values_[g][k] = block_value(model_.specs[k], groups_[g], *cov_);
      totals_[k] += block_values_[g][k];
    }
  steps_since_refresh_ = 0;
}

void Chain::set_alpha(std::span<const double> alpha) {
  if (alpha.size() != model_.specs.size())
    throw ValidationError("chain: alpha length does not match the statistic list");
  model_.alpha.assign(alpha.begin(), alpha.end());
}

Partition Chain::partition() const { return canonicalize(member_of_); }

double Chain::availability_mass(int num_groups, int singleton_count) const {
  const double w_total = cfg_.mixture.total();
  double mass = (cfg_.mixture.merge_split + cfg_.mixture.transfer) / w_total;
  if (num_groups >= 2 && singleton_count < n_) mass += cfg_.mixture.permute / w_total;
  return mass;
}

void Chain::steps(long count) {
  for (long i = 0; i < count; ++i) step();
}

void Chain::step() {
  if (n_ < 2) return;  // a single actor has a unique partition

  SizeSummary summary;
  for (const auto& g : groups_) summary.add(static_cast<int>(g.size()));

  // relation choice among those with nonempty neighbor sets
  const double w_total = cfg_.mixture.total();
  double avail[3];
  avail[0] = cfg_.mixture.merge_split / w_total;
  avail[1] = permute_available(n_, summary) ? cfg_.mixture.permute / w_total : 0.0;
  avail[2] = cfg_.mixture.transfer / w_total;
  const double mass = avail[0] + avail[1] + avail[2];
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double x = unit(rng_) * mass;
  RelationKind relation = RelationKind::Transfer;
  if (x < avail[0])
    relation = RelationKind::MergeSplit;
  else if (x < avail[0] + avail[1])
    relation = RelationKind::Permute;
  ++proposals_[static_cast<int>(relation)];
  ++steps_since_refresh_;
  if (steps_since_refresh_ >= cfg_.full_reevaluate_interval) refresh_cache();

  const std::uint64_t forward_count = count_for(relation, n_, summary);

  // sample a distinct neighbor uniformly; removed/added describe the move
  std::vector<int> removed;             // group ids
  std::vector<std::vector<int>> added;  // member lists
  auto uniform_index = [&](std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng_);
  };

  switch (relation) {
    case RelationKind::MergeSplit: {
      const std::uint64_t merges = choose2(summary.m);
      if (uniform_index(forward_count) < merges) {
        int g1 = static_cast<int>(uniform_index(summary.m));
        int g2 = static_cast<int>(uniform_index(summary.m - 1));
        if (g2 >= g1) ++g2;
        removed = {g1, g2};
        std::vector<int> merged = groups_[g1];
        merged.insert(merged.end(), groups_[g2].begin(), groups_[g2].end());
        added.push_back(std::move(merged));
      } else {
        std::uint64_t s = uniform_index(summary.split_sum);
        int g = 0;
        for (;; ++g) {
          const std::uint64_t w = (1ull << (groups_[g].size() - 1)) - 1;
          if (s < w) break;
          s -= w;
        }
        const std::uint64_t mask = s + 1;  // 1 .. 2^{size-1}-1, first member pinned to part a
        std::vector<int> part_a{groups_[g][0]}, part_b;
        for (std::size_t j = 1; j < groups_[g].size(); ++j)
          ((mask >> (j - 1)) & 1ull ? part_b : part_a).push_back(groups_[g][j]);
        removed = {g};
        added.push_back(std::move(part_a));
        added.push_back(std::move(part_b));
      }
      break;
    }
    case RelationKind::Transfer: {
      // raw moves are node x other-group plus node -> fresh singleton for
      // members of blocks >= 2; duplicate classes are downweighted by
      // rejection so distinct neighbors come out uniform
      const std::uint64_t to_existing = static_cast<std::uint64_t>(n_) * (summary.m - 1);
      const std::uint64_t raw = to_existing + (n_ - summary.t1);
      std::vector<int> movable;
      if (summary.t1 < n_)
        for (int i = 0; i < n_; ++i)
          if (groups_[member_of_[i]].size() >= 2) movable.push_back(i);
      int node = -1, dest = -1;  // dest == summary.m means a fresh singleton
      while (true) {
        const std::uint64_t u = uniform_index(raw);
        if (u < to_existing) {
          node = static_cast<int>(u / (summary.m - 1));
          dest = static_cast<int>(u % (summary.m - 1));
          if (dest >= member_of_[node]) ++dest;
        } else {
          node = movable[static_cast<std::size_t>(u - to_existing)];
          dest = summary.m;
        }
        const auto src_size = groups_[member_of_[node]].size();
        int duplicates = 1;
        if (dest == summary.m && src_size == 2) duplicates = 2;
        if (dest < summary.m && src_size == 1 && groups_[dest].size() == 1) duplicates = 2;
        if (duplicates == 1 || uniform_index(2) == 0) break;
      }
      const int src = member_of_[node];
      removed = {src};
      std::vector<int> new_src;
      for (int i : groups_[src])
        if (i != node) new_src.push_back(i);
      if (!new_src.empty()) added.push_back(std::move(new_src));
      if (dest == summary.m) {
        added.push_back({node});
      } else {
        removed.push_back(dest);
        std::vector<int> new_dest = groups_[dest];
        new_dest.push_back(node);
        added.push_back(std::move(new_dest));
      }
      break;
    }
    case RelationKind::Permute: {
      std::vector<int> large, single;  // nodes in blocks >= 2, singleton nodes
      for (int i = 0; i < n_; ++i)
        (groups_[member_of_[i]].size() >= 2 ? large : single).push_back(i);
      const std::uint64_t tt = (static_cast<std::uint64_t>(large.size()) * large.size() -
                                (summary.sum_sq - summary.t1)) /
                               2;
      const std::uint64_t ts = static_cast<std::uint64_t>(large.size()) * single.size();
      int node_i = -1, node_j = -1;
      while (true) {
        if (uniform_index(tt + ts) < tt) {
          do {
            node_i = large[static_cast<std::size_t>(uniform_index(large.size()))];
            node_j = large[static_cast<std::size_t>(uniform_index(large.size()))];
          } while (member_of_[node_i] == member_of_[node_j]);
        } else {
          node_i = large[static_cast<std::size_t>(uniform_index(large.size()))];
          node_j = single[static_cast<std::size_t>(uniform_index(single.size()))];
        }
        const bool both_pairs = groups_[member_of_[node_i]].size() == 2 &&
                                groups_[member_of_[node_j]].size() == 2;
        if (!both_pairs || uniform_index(2) == 0) break;
      }
      const int gi = member_of_[node_i], gj = member_of_[node_j];
      removed = {gi, gj};
      std::vector<int> new_i, new_j;
      for (int v : groups_[gi]) new_i.push_back(v == node_i ? node_j : v);
      for (int v : groups_[gj]) new_j.push_back(v == node_j ? node_i : v);
      added.push_back(std::move(new_i));
      added.push_back(std::move(new_j));
      break;
    }
  }

  // candidate summary, bounds check, statistic deltas
  SizeSummary cand_summary = summary;
  bool in_bounds = true;
  for (int g : removed) cand_summary.remove(static_cast<int>(groups_[g].size()));
  for (const auto& block : added) {
    cand_summary.add(static_cast<int>(block.size()));
    if (!model_.bounds.contains(static_cast<int>(block.size()))) in_bounds = false;
  }
  const std::uint64_t backward_count = count_for(relation, n_, cand_summary);

  const std::size_t K = model_.specs.size();
  std::vector<double> cand_stats = totals_;
  for (int g : removed)
    for (std::size_t k = 0; k < K; ++k) cand_stats[k] -= block_values_[g][k];
  for (const auto& block : added)
    for (std::size_t k = 0; k < K; ++k)
      cand_stats[k] += block_value(model_.specs[k], block, *cov_);

  const double a = accept_probability(
      model_.alpha, totals_, cand_stats, static_cast<double>(forward_count),
      static_cast<double>(backward_count), availability_mass(summary.m, summary.t1),
      availability_mass(cand_summary.m, cand_summary.t1), in_bounds, cfg_.bounds_mode);

  if (a < 1.0 && unit(rng_) >= a) return;  // rejected

  // apply: drop removed groups (largest index first), then add the new blocks
  std::sort(removed.rbegin(), removed.rend());
  for (int g : removed) {
    for (std::size_t k = 0; k < K; ++k) totals_[k] -= block_values_[g][k];
    const int last = static_cast<int>(groups_.size()) - 1;
    if (g != last) {
      groups_[g] = std::move(groups_[last]);
      block_values_[g] = std::move(block_values_[last]);
      for (int i : groups_[g]) member_of_[i] = g;
    }
    groups_.pop_back();
    block_values_.pop_back();
  }
  for (auto& block : added) {
    const int g = static_cast<int>(groups_.size());
    std::vector<double> values(K);
    for (std::size_t k = 0; k < K; ++k) {
      values[k] = block_value(model_.specs[k], block, *cov_);
      totals_[k] += values[k];
    }
    for (int i : block) member_of_[i] = g;
    groups_.push_back(std::move(block));
    block_values_.push_back(std::move(values));
  }
  ++accepts_[static_cast<int>(relation)];
}

std::uint64_t Chain::relation_count(RelationKind r) const {
  SizeSummary summary;
  for (const auto& g : groups_) summary.add(static_cast<int>(g.size()));
  return count_for(r, n_, summary);
}

namespace {

void check_irreducibility(const ModelSpec& m, const ChainConfig& cfg, const Partition& initial) {
  if (cfg.bounds_mode != BoundsMode::RejectInvalid) return;
  const int n = initial.n();
  if (!m.bounds.is_restrictive(n)) return;
  if (n > cfg.irreducibility_check_cap) {
    static bool warned = false;
    if (!warned) {
      warned = true;
      std::cerr << "erpm: n = " << n
                << " is above the irreducibility check cap; assuming the restricted support is "
                   "connected under the active relations\n";
    }
    return;
  }
  std::vector<RelationKind> active;
  for (RelationKind r : kAllRelations)
    if (cfg.mixture.weight(r) > 0) active.push_back(r);
  const auto support = enumerate_partitions(n, m.bounds, n);
  std::set<Partition> seen{initial};
  std::vector<Partition> frontier{initial};
  while (!frontier.empty() && seen.size() < support.size()) {
    const Partition p = frontier.back();
    frontier.pop_back();
    for (RelationKind r : active)
      for (const auto& q : neighbors(p, r)) {
        if (!q.respects(m.bounds)) continue;
        if (seen.insert(q).second) frontier.push_back(q);
      }
  }
  if (seen.size() != support.size())
    throw ValidationError(
        "restricted support unreachable from the initial partition under the chosen relations; "
        "add transfer/permute weight or use full_space_retain");
}

}  // namespace

std::vector<Sample> run_chain_from(const ModelSpec& m, const CovariateStore& cov,
                                   const ChainConfig& cfg, long num_samples, Partition initial) {
  check_irreducibility(m, cfg, initial);
  Chain chain(m, cov, cfg, std::move(initial));
  chain.steps(cfg.burn_in);
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(num_samples));
  for (long s = 0; s < num_samples; ++s) {
    chain.steps(cfg.thinning);
    Partition p = chain.partition();
    if (cfg.bounds_mode == BoundsMode::FullSpaceRetain && !p.respects(m.bounds)) continue;
    out.push_back(Sample{std::move(p), chain.stats()});
  }
  return out;
}

std::vector<Sample> run_chain(const ModelSpec& m, const CovariateStore& cov,
                              const ChainConfig& cfg, long num_samples) {
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  Partition initial = cfg.bounds_mode == BoundsMode::RejectInvalid
                          ? random_valid_partition(cov.n, m.bounds, rng)
                          : random_valid_partition(cov.n, SizeBounds::all(), rng);
  return run_chain_from(m, cov, cfg, num_samples, std::move(initial));
}

Eigen::MatrixXd transition_matrix(const ModelSpec& m, const CovariateStore& cov,
                                  const ProposalMixture& mixture, BoundsMode mode,
                                  const std::vector<Partition>& states) {
  mixture.validate();
  const int s = static_cast<int>(states.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(s, s);
  std::map<Partition, int> index;
  for (int i = 0; i < s; ++i) index.emplace(states[i], i);

  auto availability = [&](const Partition& p) {
    double mass = 0.0;
    for (RelationKind r : kAllRelations)
      if (mixture.weight(r) > 0 && has_neighbors(p, r))
        mass += mixture.weight(r) / mixture.total();
    return mass;
  };

  for (int i = 0; i < s; ++i) {
    const Partition& p = states[i];
    const auto stats_p = evaluate(p, m.specs, cov);
    const double avail_p = availability(p);
    double off_diagonal = 0.0;
    for (RelationKind r : kAllRelations) {
      const double w = mixture.weight(r) / mixture.total();
      if (w <= 0 || !has_neighbors(p, r)) continue;
      const double forward = static_cast<double>(neighbor_count(p, r));
      for (const auto& cand : neighbors(p, r)) {
        auto it = index.find(cand);
        if (it == index.end()) continue;  // off-support candidate, always rejected
        const auto stats_c = evaluate(cand, m.specs, cov);
        const double a = accept_probability(
            m.alpha, stats_p, stats_c, forward, static_cast<double>(neighbor_count(cand, r)),
            avail_p, availability(cand), cand.respects(m.bounds), mode);
        const double flow = (w / avail_p) * (1.0 / forward) * a;
        q(i, it->second) += flow;
        off_diagonal += flow;
      }
    }
    q(i, i) += 1.0 - off_diagonal;
  }
  return q;
}

std::vector<double> autocorrelation(const std::vector<std::vector<double>>& trace, int lag,
                                    std::vector<bool>* constant_flags) {
  if (lag < 1) throw ValidationError("autocorrelation: lag must be >= 1");
  if (static_cast<long>(trace.size()) <= lag)
    throw ValidationError("autocorrelation: trace shorter than the lag");
  const std::size_t K = trace.front().size();
  const std::size_t T = trace.size();
  std::vector<double> out(K, 0.0);
  if (constant_flags) constant_flags->assign(K, false);
  for (std::size_t k = 0; k < K; ++k) {
    double mean = 0.0;
    for (const auto& row : trace) mean += row[k];
    mean /= static_cast<double>(T);
    double denom = 0.0, numer = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const double d = trace[t][k] - mean;
      denom += d * d;
      if (t + lag < T) numer += d * (trace[t + lag][k] - mean);
    }
    if (denom == 0.0) {
      out[k] = 0.0;
      if (constant_flags) (*constant_flags)[k] = true;
    } else {
      out[k] = numer / denom;
    }
  }
  return out;
}

Partition random_valid_partition(int n, const SizeBounds& b, std::mt19937_64& rng) {
  b.validate();
  if (n < 1) throw ValidationError("random_valid_partition: n must be >= 1");
  if (!size_representable(n, b))
    throw ValidationError("no partition of " + std::to_string(n) +
                          " actors satisfies the size bounds");
  std::vector<int> sizes;
  int remaining = n;
  while (remaining > 0) {
    std::vector<int> feasible;
    const int hi = static_cast<int>(std::min<long long>(b.max, remaining));
    for (int s = b.min; s <= hi; ++s)
      if (size_representable(remaining - s, b)) feasible.push_back(s);
    sizes.push_back(
        feasible[std::uniform_int_distribution<std::size_t>(0, feasible.size() - 1)(rng)]);
    remaining -= sizes.back();
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> raw(n, 0);
  int pos = 0;
  for (std::size_t g = 0; g < sizes.size(); ++g)
    for (int j = 0; j < sizes[g]; ++j) raw[order[pos++]] = static_cast<int>(g);
  return canonicalize(raw);
}

}  // namespace erpm
