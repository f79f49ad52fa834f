#pragma once

// Block computation of threshold functions: the coherent-strategy cost and
// its computation tree, an end-to-end simulator with real Huffman codes,
// and the protocol-partition entropy lower bound for small n.

#include "colloq/core/types.hpp"
#include "colloq/ordering.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace colloq::blockcoding {

inline constexpr int kMaxTreeNodes = 20;
inline constexpr int kMaxPartitionNodes = 3;

/// One subblock of the recursive split. The subblock is the set of
/// instances consistent with the bits broadcast on the path from the root.
struct TreeNode {
  ordering::DpState state;
  /// 0 at leaves.
  NodeId transmitter = 0;
  /// Probability that an instance falls in this subblock.
  double reach = 1.0;
  /// reach · H(p_transmitter): this node's share of the per-instance cost.
  double expected_cost = 0.0;
  /// Indices into ComputationTree::nodes, -1 at leaves.
  int child0 = -1;
  int child1 = -1;
  /// Function value on every instance of a leaf subblock; -1 inside.
  int value = -1;

  bool leaf() const { return transmitter == 0; }
};

/// The tree of subblocks, root at index 0. Children of a node split its
/// subblock by the transmitter's bit, so siblings are disjoint and cover the
/// parent.
struct ComputationTree {
  std::vector<TreeNode> nodes;

  double expected_cost() const;
  std::size_t leaves() const;
};

/// Builds the tree of an ordering policy. Node order is depth first with the
/// bit-0 child first, which is also the broadcast order.
ComputationTree build_tree(const ordering::PolicyTree& policy, const ProbProfile& profile);

struct CoherentResult {
  /// Bits per instance: the ordering DP with f = H.
  double bits = 0.0;
  ComputationTree tree;
};

/// 𝒞_U for Π_θ, with the tree realized by the k-th least likely rule.
/// Throws LimitError past kMaxTreeNodes.
CoherentResult coherent_cost(const ProbProfile& profile, int theta);

struct BlockOptions {
  /// Huffman chunk width in bits, 1..16.
  int chunk = 16;
};

struct BlockRun {
  std::uint64_t block_length = 0;
  std::uint64_t total_bits = 0;
  double bits_per_instance = 0.0;
  double coherent_bits = 0.0;
  /// Subblocks that carried at least one instance.
  std::size_t subblocks = 0;
  /// Instances whose decoded function value differs from the truth.
  std::uint64_t errors = 0;
  bool zero_error() const { return errors == 0; }
};

/// Draws N instances (instance-major, node 1 first) and runs the coherent
/// strategy: every tree node announces its subblock with SubblockCoder, in
/// tree order, into one bit stream. A separate receiver pass decodes the
/// stream, re-deriving every subblock from decoded bits only, and its
/// function block is compared with the truth.
BlockRun simulate_block(const ProbProfile& profile, int theta, std::uint64_t block_length, std::uint64_t seed,
                        const BlockOptions& options = {});

/// Subcube of {0,1}ⁿ: coordinates in `fixed` equal the matching bits of
/// `values`, the rest are free. Bit i-1 stands for node i.
struct Subcube {
  std::uint32_t fixed = 0;
  std::uint32_t values = 0;

  bool contains(std::uint32_t point) const { return (point & fixed) == values; }
  friend bool operator==(const Subcube&, const Subcube&) = default;
};

struct PartitionCandidate {
  std::vector<Subcube> parts;
  /// Product-measure probability of each part.
  std::vector<double> probabilities;
  double entropy = 0.0;
};

struct PartitionCheck {
  bool valid = true;
  std::string reason;
};

/// A valid partition covers every point of {0,1}ⁿ exactly once with parts on
/// which Π_θ is constant, each holding at most one point of weight θ−1 or θ.
PartitionCheck verify_partition(int n, int theta, const std::vector<Subcube>& parts);

/// Every valid partition, independent of the profile. Throws DomainError
/// past kMaxPartitionNodes.
const std::vector<std::vector<Subcube>>& valid_partitions(int n, int theta);

struct PartitionBound {
  double bits = 0.0;
  PartitionCandidate best;
  std::size_t candidates = 0;
};

/// 𝒞_L: the least entropy over valid partitions.
PartitionBound partition_lower_bound(const ProbProfile& profile, int theta);

struct ConjectureRow {
  int theta = 0;
  std::vector<double> probs;
  double lower = 0.0;
  double upper = 0.0;
  double diff() const { return upper - lower; }
};

struct ConjectureReport {
  std::vector<ConjectureRow> rows;
  double max_abs_diff = 0.0;
  bool holds(double tol = 1e-6) const { return max_abs_diff <= tol; }
};

/// Every n-tuple over `values`, each sorted into a profile.
std::vector<ProbProfile> probability_grid(const std::vector<double>& values, int n = kMaxPartitionNodes);

/// Compares 𝒞_L with 𝒞_U on every profile for one threshold.
ConjectureReport conjecture_check(int theta, const std::vector<ProbProfile>& profiles);

}  // namespace colloq::blockcoding
