#include "colloq/blockcoding.hpp"
#include "colloq/core.hpp"
#include "colloq/ordering.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <vector>

using namespace colloq;
using namespace colloq::blockcoding;

TEST_CASE("coherent cost examples") {
  const auto r = coherent_cost(ProbProfile({0.2, 0.6}), 1);
  CHECK(r.bits == doctest::Approx(binary_entropy(0.6) + 0.4 * binary_entropy(0.2)).epsilon(1e-12));
  CHECK(r.bits == doctest::Approx(1.2597).epsilon(1e-4));
  CHECK(r.tree.nodes.front().transmitter == 2);
  CHECK(coherent_cost(ProbProfile({0.35}), 1).bits == doctest::Approx(binary_entropy(0.35)));
  CHECK(coherent_cost(ProbProfile({0.1, 0.5, 0.8}), 2).tree.nodes.front().transmitter == 2);
}

TEST_CASE("coherent cost is the entropy-cost DP") {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 7;
    const ProbProfile profile(rng.sorted_uniforms(static_cast<std::size_t>(n)));
    for (int theta = 1; theta <= n; ++theta) {
      const auto r = coherent_cost(profile, theta);
      auto table = ordering::solve_dp(profile, theta, CostKind::BinaryEntropy);
      CHECK(r.bits == table.root_cost());
      CHECK(r.tree.expected_cost() == doctest::Approx(r.bits).epsilon(1e-12));
      // Leaf values agree with the residual threshold.
      for (const auto& node : r.tree.nodes) {
        if (!node.leaf()) continue;
        CHECK(node.value == (node.state.theta <= 0 ? 1 : 0));
      }
      // A binary tree: leaves = internal + 1.
      CHECK(r.tree.leaves() == r.tree.nodes.size() - r.tree.leaves() + 1);
    }
  }
}

TEST_CASE("block simulation") {
  const auto fair = simulate_block(ProbProfile({0.5, 0.5}), 2, std::uint64_t{1} << 16, 1);
  CHECK(fair.zero_error());
  CHECK(fair.coherent_bits == doctest::Approx(1.5));
  CHECK(std::abs(fair.bits_per_instance - 1.5) / 1.5 <= 0.03);

  const ProbProfile three({0.2, 0.45, 0.7});
  const auto a = simulate_block(three, 2, std::uint64_t{1} << 16, 77);
  CHECK(a.zero_error());
  CHECK(std::abs(a.bits_per_instance - a.coherent_bits) / a.coherent_bits <= 0.03);
  const auto b = simulate_block(three, 2, std::uint64_t{1} << 16, 77);
  CHECK(a.total_bits == b.total_bits);
  CHECK(a.subblocks == b.subblocks);

  // Node 1 never holds a one, so AND is settled after its header.
  const auto dead = simulate_block(ProbProfile({0.0, 0.5, 0.7}), 3, std::uint64_t{1} << 16, 4);
  CHECK(dead.zero_error());
  CHECK(dead.total_bits == static_cast<std::uint64_t>(std::bit_width(std::uint64_t{1} << 16)));

  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 6;
    const ProbProfile profile(rng.sorted_uniforms(static_cast<std::size_t>(n)));
    for (int theta = 1; theta <= n; ++theta) {
      const auto run = simulate_block(profile, theta, 1 + rng.uniform_int(0, 3000), rng.next(), {1 + trial % 16});
      CHECK(run.zero_error());
    }
  }
  CHECK_THROWS_AS(simulate_block(ProbProfile({0.5}), 1, 0, 1), DomainError);
}

TEST_CASE("partition lower bound") {
  const auto and2 = partition_lower_bound(ProbProfile({0.5, 0.5}), 2);
  CHECK(and2.bits == doctest::Approx(1.5));
  CHECK(and2.best.parts.size() == 3);
  CHECK(partition_lower_bound(ProbProfile({0.3}), 1).bits == doctest::Approx(binary_entropy(0.3)));
  CHECK_THROWS_AS(partition_lower_bound(ProbProfile({0.1, 0.2, 0.3, 0.4}), 2), DomainError);

  for (int n = 1; n <= 3; ++n) {
    for (int theta = 1; theta <= n; ++theta) {
      const auto& parts = valid_partitions(n, theta);
      CHECK_FALSE(parts.empty());
      for (const auto& p : parts) CHECK(verify_partition(n, theta, p).valid);
    }
  }
  // Bit i-1 of a point is node i.
  CHECK(verify_partition(2, 2, {{0b11, 0b11}, {0b11, 0b01}, {0b01, 0b00}}).valid);
  CHECK_FALSE(verify_partition(2, 2, {{0b00, 0b00}, {0b11, 0b11}}).valid);  // overlap
  CHECK_FALSE(verify_partition(2, 2, {{0b11, 0b11}, {0b01, 0b00}}).valid);  // gap
  CHECK_FALSE(verify_partition(2, 2, {{0b01, 0b01}, {0b01, 0b00}}).valid);  // {01, 11} is mixed
  CHECK_FALSE(verify_partition(2, 1, {{0b00, 0b00}}).valid);

  Rng rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 3;
    const ProbProfile profile(rng.sorted_uniforms(static_cast<std::size_t>(n)));
    for (int theta = 1; theta <= n; ++theta) {
      CHECK(partition_lower_bound(profile, theta).bits <= coherent_cost(profile, theta).bits + 1e-12);
    }
  }
}

TEST_CASE("lower and upper bounds meet for three nodes") {
  const auto one = conjecture_check(2, {ProbProfile({0.3, 0.5, 0.7})});
  CHECK(one.holds());
  std::vector<ProbProfile> symmetric{ProbProfile({0.2, 0.5, 0.8}), ProbProfile({0.5, 0.5, 0.5})};
  for (int theta = 1; theta <= 3; ++theta) CHECK(conjecture_check(theta, symmetric).holds());
  const auto grid = probability_grid({0.1, 0.3, 0.5, 0.7, 0.9}, 3);
  CHECK(grid.size() == 125);
  for (int theta = 1; theta <= 3; ++theta) {
    const auto report = conjecture_check(theta, grid);
    CHECK(report.rows.size() == 125);
    CHECK(report.max_abs_diff <= 1e-6);
  }
}
