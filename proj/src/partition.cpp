#include "erpm/partition.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace erpm {

const char* to_string(RelationKind r) {
  switch (r) {
    case RelationKind::MergeSplit: return "merge_split";
    case RelationKind::Permute: return "permute";
    case RelationKind::Transfer: return "transfer";
  }
  return "?";
}

Partition::Partition(std::vector<int> membership) : membership_(std::move(membership)) {
  if (membership_.empty()) throw ValidationError("partition: empty membership");
  int max_seen = -1;
  for (int g : membership_) {
    if (g < 0 || g > max_seen + 1)
      throw ValidationError("partition: membership is not a restricted-growth string");
    max_seen = std::max(max_seen, g);
  }
  num_groups_ = max_seen + 1;
}

Partition Partition::singletons(int n) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) m[i] = i;
  return Partition(std::move(m));
}

Partition Partition::one_block(int n) { return Partition(std::vector<int>(n, 0)); }

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out(num_groups_);
  for (int i = 0; i < n(); ++i) out[membership_[i]].push_back(i);
  return out;
}

std::vector<int> Partition::group_sizes() const {
  std::vector<int> sizes(num_groups_, 0);
  for (int g : membership_) ++sizes[g];
  return sizes;
}

std::vector<int> Partition::block_sizes() const {
  std::vector<int> sizes = group_sizes();
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

std::vector<std::uint8_t> Partition::comembership_matrix() const {
  const int nn = n();
  std::vector<std::uint8_t> x(static_cast<std::size_t>(nn) * nn, 0);
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j)
      x[static_cast<std::size_t>(i) * nn + j] = (membership_[i] == membership_[j]) ? 1 : 0;
  return x;
}

bool Partition::respects(const SizeBounds& b) const {
  for (int s : group_sizes())
    if (!b.contains(s)) return false;
  return true;
}

Partition Partition::project(std::span<const int> subset) const {
  if (subset.empty()) throw ValidationError("project: empty subset");
  std::vector<int> raw;
  raw.reserve(subset.size());
  for (int i : subset) {
    if (i < 0 || i >= n()) throw ValidationError("project: actor index out of range");
    raw.push_back(membership_[i]);
  }
  return canonicalize(raw);
}

std::string Partition::to_string() const {
  std::string out;
  for (const auto& block : blocks()) {
    out += '{';
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(block[i] + 1);
    }
    out += '}';
  }
  return out;
}

std::size_t PartitionHash::operator()(const Partition& p) const {
  std::size_t h = 1469598103934665603ull;
  for (int g : p.membership()) {
    h ^= static_cast<std::size_t>(g) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

// Unordered nontrivial bipartitions of `block`: the first member stays in part
// A, the mask selects part B among the rest.
void for_each_split(const std::vector<int>& block,
                    const std::function<void(const std::vector<int>&, const std::vector<int>&)>& fn) {
  const int s = static_cast<int>(block.size());
  if (s < 2) return;
  std::vector<int> a, b;
  for (std::uint64_t mask = 1; mask < (1ull << (s - 1)); ++mask) {
    a.assign(1, block[0]);
    b.clear();
    for (int j = 1; j < s; ++j)
      ((mask >> (j - 1)) & 1ull ? b : a).push_back(block[j]);
    fn(a, b);
  }
}

}  // namespace

std::vector<Partition> neighbors(const Partition& p, RelationKind r) {
  const int n = p.n();
  const auto blocks = p.blocks();
  const int m = p.num_groups();
  std::set<Partition> out;

  auto add = [&](const std::vector<int>& raw) {
    Partition q = canonicalize(raw);
    if (q != p) out.insert(std::move(q));
  };

  switch (r) {
    case RelationKind::MergeSplit: {
      for (int g1 = 0; g1 < m; ++g1)
        for (int g2 = g1 + 1; g2 < m; ++g2) {
          std::vector<int> raw = p.membership();
          for (int i : blocks[g2]) raw[i] = g1;
          add(raw);
        }
      for (int g = 0; g < m; ++g)
        for_each_split(blocks[g], [&](const std::vector<int>&, const std::vector<int>& part_b) {
          std::vector<int> raw = p.membership();
          for (int i : part_b) raw[i] = m;
          add(raw);
        });
      break;
    }
    case RelationKind::Permute: {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          if (p.group_of(i) == p.group_of(j)) continue;
          std::vector<int> raw = p.membership();
          std::swap(raw[i], raw[j]);
          add(raw);
        }
      break;
    }
    case RelationKind::Transfer: {
      const auto sizes = p.group_sizes();
      for (int i = 0; i < n; ++i) {
        for (int g = 0; g < m; ++g) {
          if (g == p.group_of(i)) continue;
          std::vector<int> raw = p.membership();
          raw[i] = g;
          add(raw);
        }
        if (sizes[p.group_of(i)] >= 2) {
          std::vector<int> raw = p.membership();
          raw[i] = m;
          add(raw);
        }
      }
      break;
    }
  }
  return {out.begin(), out.end()};
}

std::uint64_t neighbor_count(const Partition& p, RelationKind r) {
  const int n = p.n();
  if (n > 62) throw ValidationError("neighbor_count: n > 62 would overflow 64-bit counts");
  const auto sizes = p.group_sizes();
  const std::uint64_t m = sizes.size();
  std::uint64_t singletons = 0, pairs = 0, sum_sq = 0;
  for (int s : sizes) {
    if (s == 1) ++singletons;
    if (s == 2) ++pairs;
    sum_sq += static_cast<std::uint64_t>(s) * s;
  }
  auto choose2 = [](std::uint64_t k) { return k * (k - 1) / 2; };

  switch (r) {
    case RelationKind::MergeSplit: {
      std::uint64_t count = choose2(m);
      for (int s : sizes) count += (1ull << (s - 1)) - 1;
      return count;
    }
    case RelationKind::Transfer: {
      // Raw moves: every actor to each of the other groups, plus to a fresh
      // singleton when its block has >= 2 members. Duplicates: the two members
      // of a size-2 block leaving to a fresh singleton coincide, and for a
      // pair of singleton blocks the two cross moves both merge them.
      const std::uint64_t raw =
          static_cast<std::uint64_t>(n) * (m - 1) + (static_cast<std::uint64_t>(n) - singletons);
      return raw - pairs - choose2(singletons);
    }
    case RelationKind::Permute: {
      // Raw swaps: unordered cross-block actor pairs. A swap of two singleton
      // blocks is the identity; the four swaps across a pair of size-2 blocks
      // yield only two distinct partitions.
      const std::uint64_t raw = (static_cast<std::uint64_t>(n) * n - sum_sq) / 2;
      return raw - choose2(singletons) - 2 * choose2(pairs);
    }
  }
  return 0;
}

bool has_neighbors(const Partition& p, RelationKind r) {
  if (p.n() < 2) return false;
  if (r != RelationKind::Permute) return true;
  if (p.num_groups() < 2) return false;
  for (int s : p.group_sizes())
    if (s >= 2) return true;
  return false;
}

}  // namespace erpm
