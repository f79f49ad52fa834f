#include "colloq/approx.hpp"
#include "colloq/core.hpp"

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

using namespace colloq;
using namespace colloq::approx;

namespace {

// P(at least t ones among the nodes of s) by enumerating assignments.
double tail_by_enumeration(const ProbProfile& profile, NodeSet s, int t) {
  const auto ids = s.ids();
  double total = 0.0;
  for (std::uint32_t x = 0; x < (std::uint32_t{1} << ids.size()); ++x) {
    double prob = 1.0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const double p = profile.p(ids[k]);
      prob *= ((x >> k) & 1u) ? p : 1.0 - p;
    }
    if (std::popcount(x) >= t) total += prob;
  }
  return total;
}

double boundary(Metric metric, double q) { return metric == Metric::Error ? std::min(q, 1.0 - q) : binary_entropy(q); }

double naive_value(const ProbProfile& profile, NodeSet s, int t, int budget, Metric metric) {
  if (t <= 0 || t > s.size()) return 0.0;
  if (budget == 0) return boundary(metric, tail_by_enumeration(profile, s, t));
  double best = std::numeric_limits<double>::infinity();
  for (NodeId i : s.ids()) {
    const double p = profile.p(i);
    best = std::min(best, p * naive_value(profile, s.without(i), t - 1, budget - 1, metric) +
                              (1.0 - p) * naive_value(profile, s.without(i), t, budget - 1, metric));
  }
  return best;
}

double parity_entropy_by_enumeration(const ProbProfile& profile, NodeSet hidden) {
  double odd = 0.0;
  const auto ids = hidden.ids();
  for (std::uint32_t x = 0; x < (std::uint32_t{1} << ids.size()); ++x) {
    double prob = 1.0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const double p = profile.p(ids[k]);
      prob *= ((x >> k) & 1u) ? p : 1.0 - p;
    }
    if (std::popcount(x) % 2 == 1) odd += prob;
  }
  return binary_entropy(std::clamp(odd, 0.0, 1.0));
}

}  // namespace

TEST_CASE("counter-example profiles") {
  auto entropy = budget_dp(ProbProfile({0.7, 0.82, 0.84}), 2, 1, Metric::Entropy);
  const auto e = entropy.candidate_values(entropy.root());
  REQUIRE(e.size() == 3);
  CHECK(std::abs(e[0].second - 0.4002) <= 5e-4);
  CHECK(std::abs(e[2].second - 0.4121) <= 5e-4);
  // Node 2's value is the displayed two-branch formula evaluated directly.
  const double p1 = 0.7;
  const double p2 = 0.82;
  const double p3 = 0.84;
  CHECK(e[1].second ==
        doctest::Approx(p2 * binary_entropy((1 - p1) * (1 - p3)) + (1 - p2) * binary_entropy(p1 * p3)).epsilon(1e-12));
  CHECK(entropy.entry(entropy.root()).argmin == NodeSet(0b001));

  auto error = budget_dp(ProbProfile({0.6, 0.72, 0.84}), 2, 1, Metric::Error);
  const auto r = error.candidate_values(error.root());
  CHECK(std::abs(r[0].second - 0.1850) <= 5e-4);
  CHECK(std::abs(r[1].second - 0.1850) <= 5e-4);
  CHECK(std::abs(r[2].second - 0.1632) <= 5e-4);
  CHECK(std::abs(r[0].second - r[1].second) <= 1e-12);
  CHECK(r[2].second < r[0].second - 0.01);
  CHECK(error.entry(error.root()).argmin == NodeSet(0b100));
}

TEST_CASE("residual probability") {
  const ProbProfile profile({0.1, 0.82, 0.84});
  CHECK(residual_prob(profile, NodeSet(0b110), 2) == doctest::Approx(0.6888));
  CHECK(residual_prob(profile, NodeSet(0b111), 0) == 1.0);
  CHECK(residual_prob(profile, NodeSet{}, 1) == 0.0);
  Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const ProbProfile p(rng.sorted_uniforms(8));
    const NodeSet s(static_cast<std::uint32_t>(rng.uniform_int(0, 255)));
    for (int t = 0; t <= 9; ++t) CHECK(residual_prob(p, s, t) == doctest::Approx(tail_by_enumeration(p, s, t)));
  }
}

TEST_CASE("budget DP against the plain recursion") {
  Rng rng(71);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + trial % 5;
    const ProbProfile profile(rng.sorted_uniforms(static_cast<std::size_t>(n)));
    for (int theta = 1; theta <= n; ++theta) {
      for (Metric metric : {Metric::Error, Metric::Entropy}) {
        double previous = std::numeric_limits<double>::infinity();
        for (int budget = 0; budget <= n; ++budget) {
          auto table = budget_dp(profile, theta, budget, metric);
          const double v = table.root_value();
          CHECK(v == doctest::Approx(naive_value(profile, profile.all(), theta, budget, metric)).epsilon(1e-12));
          CHECK(v <= previous + 1e-12);
          CHECK(v >= 0.0);
          CHECK(v <= (metric == Metric::Error ? 0.5 : 1.0) + 1e-12);
          previous = v;
          if (budget == 0) CHECK(v == boundary(metric, residual_prob(profile, profile.all(), theta)));
          if (budget == n) CHECK(v == 0.0);
        }
      }
    }
  }
  CHECK_THROWS_AS(budget_dp(ProbProfile(std::vector<double>(21, 0.5)), 2, 1, Metric::Error), LimitError);
  CHECK_THROWS_AS(budget_dp(ProbProfile({0.5, 0.6}), 2, 3, Metric::Error), DomainError);
  CHECK(parse_metric("error") == Metric::Error);
  CHECK_THROWS_AS(parse_metric("loss"), DomainError);
}

TEST_CASE("parity examples") {
  const ProbProfile profile({0.1, 0.5, 0.7});
  const auto plan = parity_best_subset(profile, 2);
  CHECK(plan.transmitters == NodeSet(0b110));
  CHECK(plan.residual_entropy == doctest::Approx(binary_entropy(0.1)));
  CHECK(plan.residual_entropy == doctest::Approx(0.469).epsilon(1e-3));
  CHECK(parity_residual_entropy(profile, NodeSet(0b011)) == doctest::Approx(binary_entropy(0.7)));
  CHECK(parity_residual_entropy(profile, NodeSet(0b101)) == doctest::Approx(1.0));
  CHECK(parity_best_subset(profile, 0).residual_entropy ==
        doctest::Approx(parity_entropy_by_enumeration(profile, profile.all())));
  CHECK(parity_best_subset(profile, 3).residual_entropy == 0.0);
  CHECK_THROWS_AS(parity_best_subset(profile, 4), DomainError);
}

TEST_CASE("parity residual entropy depends on the hidden multiset only") {
  const ProbProfile a({0.1, 0.2, 0.3, 0.6});
  const ProbProfile b({0.2, 0.3, 0.5, 0.6});
  // Hidden {0.2, 0.3, 0.6} in both.
  CHECK(parity_residual_entropy(a, NodeSet(0b0001)) == doctest::Approx(parity_residual_entropy(b, NodeSet(0b0100))));
  Rng rng(81);
  for (int trial = 0; trial < 50; ++trial) {
    const ProbProfile p(rng.sorted_uniforms(7));
    const NodeSet s(static_cast<std::uint32_t>(rng.uniform_int(0, 127)));
    const NodeSet hidden(p.all().bits() & ~s.bits());
    CHECK(parity_residual_entropy(p, s) == doctest::Approx(parity_entropy_by_enumeration(p, hidden)));
  }
}

TEST_CASE("greedy parity equals brute force") {
  Rng rng(91);
  for (int n = 1; n <= 10; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const ProbProfile profile(rng.sorted_uniforms(static_cast<std::size_t>(n)));
      for (int budget = 0; budget <= n; ++budget) {
        CHECK(std::abs(parity_best_subset(profile, budget).residual_entropy -
                       parity_bruteforce(profile, budget).residual_entropy) <= 1e-12);
      }
    }
  }
  // Exchangeable nodes: every subset ties.
  const ProbProfile flat(std::vector<double>(6, 0.3));
  const double v = parity_residual_entropy(flat, NodeSet(0b000111));
  CHECK(parity_residual_entropy(flat, NodeSet(0b101010)) == doctest::Approx(v).epsilon(1e-14));
  CHECK(parity_bruteforce(flat, 3).residual_entropy == doctest::Approx(v).epsilon(1e-14));
  // A fair hidden bit makes the parity fair.
  const ProbProfile fair({0.1, 0.5, 0.9});
  CHECK(parity_residual_entropy(fair, NodeSet(0b101)) == doctest::Approx(1.0));
  CHECK(parity_residual_entropy(fair, NodeSet(0b001)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(parity_bruteforce(ProbProfile(std::vector<double>(21, 0.5)), 2), LimitError);
}
