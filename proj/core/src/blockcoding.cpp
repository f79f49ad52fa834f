#include "colloq/blockcoding.hpp"

#include "colloq/core/error.hpp"
#include "colloq/core/math.hpp"
#include "colloq/core/rng.hpp"
#include "colloq/huffman.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

namespace colloq::blockcoding {

namespace {

using ordering::DpState;

int leaf_value(DpState s) { return s.theta <= 0 ? 1 : 0; }

int build_subtree(const ordering::PolicyTree& policy, const ProbProfile& profile, DpState s, double reach,
                  ComputationTree& tree) {
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(TreeNode{s, 0, reach, 0.0, -1, -1, -1});
  if (s.terminal()) {
    tree.nodes[static_cast<std::size_t>(index)].value = leaf_value(s);
    return index;
  }
  const auto node = policy.choice(s);
  if (!node) throw DomainError("policy has no transmitter for a reachable state");
  const double p = profile.p(*node);
  const auto [zero, one] = ordering::children(s, *node);
  tree.nodes[static_cast<std::size_t>(index)].transmitter = *node;
  tree.nodes[static_cast<std::size_t>(index)].expected_cost = reach * binary_entropy(p);
  const int c0 = build_subtree(policy, profile, zero, reach * (1.0 - p), tree);
  const int c1 = build_subtree(policy, profile, one, reach * p, tree);
  tree.nodes[static_cast<std::size_t>(index)].child0 = c0;
  tree.nodes[static_cast<std::size_t>(index)].child1 = c1;
  return index;
}

std::uint32_t point_mask(int n, Subcube c) {
  std::uint32_t mask = 0;
  for (std::uint32_t x = 0; x < (std::uint32_t{1} << n); ++x) {
    if (c.contains(x)) mask |= std::uint32_t{1} << x;
  }
  return mask;
}

/// Why a single part is not allowed, or empty if it is.
std::string part_defect(int n, int theta, Subcube c) {
  int fooling = 0;
  int value = -1;
  for (std::uint32_t x = 0; x < (std::uint32_t{1} << n); ++x) {
    if (!c.contains(x)) continue;
    const int w = std::popcount(x);
    const int f = w >= theta ? 1 : 0;
    if (value >= 0 && f != value) return "part is not monochromatic";
    value = f;
    if (w == theta || w == theta - 1) ++fooling;
  }
  if (value < 0) return "part is empty";
  if (fooling > 1) return "part holds more than one fooling-set point";
  return {};
}

double subcube_probability(const ProbProfile& profile, Subcube c) {
  double q = 1.0;
  for (int i = 0; i < profile.size(); ++i) {
    if (((c.fixed >> i) & 1u) == 0) continue;
    const double p = profile.p(i + 1);
    q *= ((c.values >> i) & 1u) ? p : 1.0 - p;
  }
  return q;
}

double entropy_of(const std::vector<double>& q) {
  double h = 0.0;
  for (double v : q) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

std::vector<std::vector<Subcube>> search_partitions(int n, int theta) {
  std::vector<std::pair<Subcube, std::uint32_t>> allowed;
  const std::uint32_t all = (std::uint32_t{1} << n) - 1;
  for (std::uint32_t fixed = 0; fixed <= all; ++fixed) {
    for (std::uint32_t values = 0; values <= all; ++values) {
      if ((values & ~fixed) != 0) continue;
      const Subcube c{fixed, values};
      if (part_defect(n, theta, c).empty()) allowed.emplace_back(c, point_mask(n, c));
    }
  }
  const std::uint32_t cube = n == 5 ? ~std::uint32_t{0} : (std::uint32_t{1} << (std::uint32_t{1} << n)) - 1;
  std::vector<std::vector<Subcube>> out;
  std::vector<Subcube> current;
  std::function<void(std::uint32_t)> extend = [&](std::uint32_t covered) {
    if (covered == cube) {
      out.push_back(current);
      return;
    }
    const int first = std::countr_one(covered);
    for (const auto& [c, mask] : allowed) {
      if (((mask >> first) & 1u) == 0 || (mask & covered) != 0) continue;
      current.push_back(c);
      extend(covered | mask);
      current.pop_back();
    }
  };
  extend(0);
  return out;
}

}  // namespace

double ComputationTree::expected_cost() const {
  double total = 0.0;
  for (const auto& node : nodes) total += node.expected_cost;
  return total;
}

std::size_t ComputationTree::leaves() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& t) { return t.leaf(); }));
}

ComputationTree build_tree(const ordering::PolicyTree& policy, const ProbProfile& profile) {
  if (policy.n() != profile.size()) throw DomainError("policy and profile disagree on n");
  if (profile.size() > kMaxTreeNodes) {
    throw LimitError("computation trees are limited to n <= " + std::to_string(kMaxTreeNodes) + " nodes");
  }
  ComputationTree tree;
  build_subtree(policy, profile, policy.root(), 1.0, tree);
  return tree;
}

CoherentResult coherent_cost(const ProbProfile& profile, int theta) {
  auto table = ordering::solve_dp(profile, theta, CostKind::BinaryEntropy);
  CoherentResult out;
  out.bits = table.root_cost();
  out.tree = build_tree(ordering::rule_policy(profile, theta), profile);
  return out;
}

BlockRun simulate_block(const ProbProfile& profile, int theta, std::uint64_t block_length, std::uint64_t seed,
                        const BlockOptions& options) {
  if (block_length < 1) throw DomainError("block length N must be >= 1");
  const int n = profile.size();
  const CoherentResult coherent = coherent_cost(profile, theta);
  const huffman::SubblockCoder coder(options.chunk);

  const auto N = static_cast<std::size_t>(block_length);
  const auto stride = static_cast<std::size_t>(n);
  std::vector<std::uint8_t> x(N * stride);
  Rng rng(seed);
  for (std::size_t j = 0; j < N; ++j) {
    for (int i = 0; i < n; ++i) x[j * stride + static_cast<std::size_t>(i)] = rng.bernoulli(profile.p(i + 1)) ? 1 : 0;
  }

  BlockRun run;
  run.block_length = block_length;
  run.coherent_bits = coherent.bits;
  huffman::BitWriter stream;
  const auto& nodes = coherent.tree.nodes;

  std::function<void(int, const std::vector<std::uint32_t>&)> send = [&](int index,
                                                                           const std::vector<std::uint32_t>& members) {
    const TreeNode& t = nodes[static_cast<std::size_t>(index)];
    if (t.leaf()) return;
    std::vector<std::uint8_t> bits;
    bits.reserve(members.size());
    for (std::uint32_t m : members) bits.push_back(x[m * stride + static_cast<std::size_t>(t.transmitter - 1)]);
    coder.encode(bits, stream);
    if (!members.empty()) ++run.subblocks;
    std::vector<std::uint32_t> zeros;
    std::vector<std::uint32_t> ones;
    for (std::size_t r = 0; r < members.size(); ++r) (bits[r] ? ones : zeros).push_back(members[r]);
    send(t.child0, zeros);
    send(t.child1, ones);
  };

  std::vector<int> decoded(N, -1);
  std::optional<huffman::BitReader> reader;
  std::function<void(int, const std::vector<std::uint32_t>&)> receive =
      [&](int index, const std::vector<std::uint32_t>& members) {
        const TreeNode& t = nodes[static_cast<std::size_t>(index)];
        if (t.leaf()) {
          for (std::uint32_t m : members) decoded[m] = t.value;
          return;
        }
        const auto bits = coder.decode(members.size(), *reader);
        std::vector<std::uint32_t> zeros;
        std::vector<std::uint32_t> ones;
        for (std::size_t r = 0; r < members.size(); ++r) (bits[r] ? ones : zeros).push_back(members[r]);
        receive(t.child0, zeros);
        receive(t.child1, ones);
      };

  std::vector<std::uint32_t> everyone(N);
  for (std::size_t j = 0; j < N; ++j) everyone[j] = static_cast<std::uint32_t>(j);
  send(0, everyone);
  reader.emplace(stream);
  receive(0, everyone);
  if (!reader->exhausted()) throw Error("receiver did not consume the whole broadcast");

  for (std::size_t j = 0; j < N; ++j) {
    int ones = 0;
    for (std::size_t i = 0; i < stride; ++i) ones += x[j * stride + i];
    if (decoded[j] != (ones >= theta ? 1 : 0)) ++run.errors;
  }
  run.total_bits = stream.size();
  run.bits_per_instance = static_cast<double>(run.total_bits) / static_cast<double>(block_length);
  return run;
}

PartitionCheck verify_partition(int n, int theta, const std::vector<Subcube>& parts) {
  if (n < 1 || n > 5) return {false, "partition checks are limited to n <= 5"};
  std::uint32_t covered = 0;
  for (const Subcube& c : parts) {
    if ((c.values & ~c.fixed) != 0 || (c.fixed >> n) != 0) return {false, "malformed part"};
    if (auto defect = part_defect(n, theta, c); !defect.empty()) return {false, defect};
    const std::uint32_t mask = point_mask(n, c);
    if ((covered & mask) != 0) return {false, "parts overlap"};
    covered |= mask;
  }
  const std::uint32_t cube = n == 5 ? ~std::uint32_t{0} : (std::uint32_t{1} << (std::uint32_t{1} << n)) - 1;
  if (covered != cube) return {false, "parts do not cover the cube"};
  return {};
}

const std::vector<std::vector<Subcube>>& valid_partitions(int n, int theta) {
  if (n < 1 || n > kMaxPartitionNodes) {
    throw DomainError("partition search is exhaustive and limited to n <= " + std::to_string(kMaxPartitionNodes));
  }
  if (!(theta >= 1 && theta <= n)) throw DomainError("threshold requires 1 <= theta <= n");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::vector<std::vector<Subcube>>> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({n, theta});
  if (it == cache.end()) it = cache.emplace(std::make_pair(n, theta), search_partitions(n, theta)).first;
  return it->second;
}

PartitionBound partition_lower_bound(const ProbProfile& profile, int theta) {
  const auto& partitions = valid_partitions(profile.size(), theta);
  PartitionBound out;
  out.candidates = partitions.size();
  bool first = true;
  for (const auto& parts : partitions) {
    std::vector<double> q;
    q.reserve(parts.size());
    for (const Subcube& c : parts) q.push_back(subcube_probability(profile, c));
    const double h = entropy_of(q);
    if (first || h < out.bits) {
      out.bits = h;
      out.best = PartitionCandidate{parts, std::move(q), h};
      first = false;
    }
  }
  return out;
}

std::vector<ProbProfile> probability_grid(const std::vector<double>& values, int n) {
  if (values.empty() || n < 1) throw DomainError("probability grid needs values and n >= 1");
  std::vector<ProbProfile> out;
  std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
  while (true) {
    std::vector<double> probs;
    probs.reserve(digit.size());
    for (std::size_t d : digit) probs.push_back(values[d]);
    std::sort(probs.begin(), probs.end());
    out.emplace_back(std::move(probs));
    int pos = n - 1;
    while (pos >= 0 && ++digit[static_cast<std::size_t>(pos)] == values.size()) {
      digit[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

ConjectureReport conjecture_check(int theta, const std::vector<ProbProfile>& profiles) {
  ConjectureReport report;
  for (const auto& profile : profiles) {
    ConjectureRow row;
    row.theta = theta;
    row.probs.assign(profile.probs().begin(), profile.probs().end());
    row.lower = partition_lower_bound(profile, theta).bits;
    row.upper = ordering::solve_dp(profile, theta, CostKind::BinaryEntropy).root_cost();
    report.max_abs_diff = std::max(report.max_abs_diff, std::abs(row.diff()));
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace colloq::blockcoding
