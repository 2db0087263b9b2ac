#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "erpm/errors.hpp"

namespace erpm {

/// Inclusive block-size bounds restricting the partition support.
struct SizeBounds {
  int min = 1;
  int max = unbounded();

  static constexpr int unbounded() { return std::numeric_limits<int>::max(); }
  static SizeBounds all() { return {}; }

  bool contains(int size) const { return size >= min && size <= max; }
  bool is_restrictive(int n) const { return min > 1 || max < n; }

  void validate() const {
    if (min < 1) throw ValidationError("size bounds: min must be >= 1");
    if (max < min) throw ValidationError("size bounds: max must be >= min");
  }

  bool operator==(const SizeBounds&) const = default;
};

/// The three symmetric proposal relations between partitions.
enum class RelationKind { MergeSplit, Permute, Transfer };

inline constexpr std::array<RelationKind, 3> kAllRelations = {
    RelationKind::MergeSplit, RelationKind::Permute, RelationKind::Transfer};

const char* to_string(RelationKind r);

/// A labeled set partition in canonical restricted-growth encoding:
/// membership[0] == 0 and membership[i] <= 1 + max(membership[0..i-1]).
/// Equal partitions have identical encodings, so equality and hashing are
/// plain vector operations. Immutable after construction.
class Partition {
 public:
  /// Validates that `membership` is a restricted-growth string.
  explicit Partition(std::vector<int> membership);

  static Partition singletons(int n);
  static Partition one_block(int n);

  int n() const { return static_cast<int>(membership_.size()); }
  int num_groups() const { return num_groups_; }
  const std::vector<int>& membership() const { return membership_; }
  int group_of(int actor) const { return membership_[actor]; }

  /// Member lists per group id, members in ascending order.
  std::vector<std::vector<int>> blocks() const;
  /// Block size per group id.
  std::vector<int> group_sizes() const;
  /// Block-size multiset, ascending.
  std::vector<int> block_sizes() const;
  /// Row-major n x n comembership indicator; diagonal all 1.
  std::vector<std::uint8_t> comembership_matrix() const;

  bool respects(const SizeBounds& b) const;

  /// Projection onto a subset of actors (indices into 0..n-1); the result is
  /// re-indexed in the order the subset lists them.
  Partition project(std::span<const int> subset) const;

  /// Short display form, e.g. "{1,2,5}{3,4}{6}" with 1-based actors.
  std::string to_string() const;

  bool operator==(const Partition&) const = default;
  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> membership_;
  int num_groups_ = 0;
};

struct PartitionHash {
  std::size_t operator()(const Partition& p) const;
};

/// Re-labels arbitrary group labels to the canonical restricted-growth
/// encoding (first-occurrence order). Two inputs describing the same set
/// partition yield identical outputs.
template <typename Label>
Partition canonicalize(std::span<const Label> raw) {
  if (raw.empty()) throw ValidationError("canonicalize: empty membership");
  std::unordered_map<Label, int> relabel;
  std::vector<int> membership;
  membership.reserve(raw.size());
  for (const Label& label : raw) {
    auto [it, inserted] = relabel.try_emplace(label, static_cast<int>(relabel.size()));
    membership.push_back(it->second);
  }
  return Partition(std::move(membership));
}

inline Partition canonicalize(const std::vector<int>& raw) {
  return canonicalize(std::span<const int>(raw));
}
inline Partition canonicalize(const std::vector<std::string>& raw) {
  return canonicalize(std::span<const std::string>(raw));
}

/// All distinct partitions p' with {p, p'} in the relation. Brute force;
/// intended for small n and as the oracle for neighbor_count.
std::vector<Partition> neighbors(const Partition& p, RelationKind r);

/// Closed-form count of distinct neighbors under the relation. Agrees with
/// |neighbors(p, r)| for every partition (exhaustively tested for n <= 7).
std::uint64_t neighbor_count(const Partition& p, RelationKind r);

/// Cheap emptiness test for the relation's neighbor set.
bool has_neighbors(const Partition& p, RelationKind r);

}  // namespace erpm
