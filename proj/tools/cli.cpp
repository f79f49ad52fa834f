#include "cli.hpp"

#include "colloq/approx.hpp"
#include "colloq/avgcase.hpp"
#include "colloq/blockcoding.hpp"
#include "colloq/core.hpp"
#include "colloq/ordering.hpp"
#include "colloq/worstcase.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace colloq::cli {

namespace {

using nlohmann::json;

std::string num(double v, int precision = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

std::string schema(const std::string& name) { return "colloq." + name + ".v1"; }

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') p = std::filesystem::path(dir) / p;
  }
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  return p;
}

void write_file(const std::string& path, const std::string& content) {
  const auto target = resolve_output(path);
  std::ofstream f(target, std::ios::binary);
  if (!f) throw Error("cannot open " + target.string() + " for writing");
  f << content;
}

/// Probabilities as typed by the user, with the sorted profile the modules
/// work on.
struct Input {
  std::vector<double> raw;
  RankedProfile ranked;

  int original(NodeId rank) const { return ranked.original_ids[static_cast<std::size_t>(rank - 1)]; }

  json node(NodeId rank) const { return json{{"rank", rank}, {"original", original(rank)}}; }

  json nodes(NodeSet s) const {
    auto out = json::array();
    for (NodeId id : s.ids()) out.push_back(node(id));
    return out;
  }

  std::string label(NodeId rank) const { return std::to_string(rank) + " (input #" + std::to_string(original(rank)) + ")"; }

  std::string labels(NodeSet s) const {
    std::string out = "{";
    bool first = true;
    for (NodeId id : s.ids()) {
      out += (first ? "" : ", ") + label(id);
      first = false;
    }
    return out + "}";
  }

  json ranking() const {
    auto out = json::array();
    for (int r = 1; r <= ranked.profile.size(); ++r) {
      out.push_back(json{{"rank", r}, {"original", original(r)}, {"p", ranked.profile.p(r)}});
    }
    return out;
  }
};

Input make_input(const std::vector<double>& probs) {
  if (probs.empty()) throw DomainError("--p needs at least one probability");
  return Input{probs, rank_profile(probs)};
}

std::string set_text(NodeSet s) {
  std::string out = "{";
  bool first = true;
  for (NodeId id : s.ids()) {
    out += (first ? "" : ",") + std::to_string(id);
    first = false;
  }
  return out + "}";
}

std::vector<CostFunction> costs_from(const std::string& name) {
  if (name == "all") return {CostKind::Unit, CostKind::BinaryEntropy, CostKind::PulseMin};
  return {parse_cost_kind(name)};
}

/// Flags shared by every command that takes a function.
struct SpecArgs {
  std::string kind;
  int n = 0;
  int theta = 0;
  int a = 0;
  int b = 0;
  int m = 1;
  std::vector<int> alphabet;

  void attach(CLI::App* cmd) {
    cmd->add_option("--kind", kind, "and|or|threshold|delta|interval|parity|max|general_threshold")
        ->required()
        ->check(CLI::IsMember({"and", "or", "threshold", "delta", "interval", "parity", "max", "general_threshold"}));
    cmd->add_option("--n", n, "node count");
    cmd->add_option("--theta", theta, "threshold");
    cmd->add_option("--a", a, "interval lower end");
    cmd->add_option("--b", b, "interval upper end");
    cmd->add_option("--m", m, "uniform alphabet size for max/general_threshold");
    cmd->add_option("--alphabet", alphabet, "per-node alphabet sizes")->delimiter(',');
  }

  std::vector<int> alphabet_or_uniform() const {
    if (!alphabet.empty()) return alphabet;
    if (n < 1) throw DomainError("--n or --alphabet is required");
    return std::vector<int>(static_cast<std::size_t>(n), m);
  }

  FunctionSpec build() const {
    if (kind == "and") return FunctionSpec::and_of(n);
    if (kind == "or") return FunctionSpec::or_of(n);
    if (kind == "threshold") return FunctionSpec::threshold(n, theta);
    if (kind == "delta") return FunctionSpec::delta(n, theta);
    if (kind == "interval") return FunctionSpec::interval(n, a, b);
    if (kind == "parity") return FunctionSpec::parity(n);
    if (kind == "max") return FunctionSpec::max(alphabet_or_uniform());
    return FunctionSpec::general_threshold(theta, alphabet_or_uniform());
  }
};

std::string spec_text(const FunctionSpec& spec) { return json(spec).dump(); }

void emit(std::ostream& out, bool as_json, const json& j, const std::string& text) {
  if (as_json) {
    out << j.dump(2) << "\n";
  } else {
    out << text;
  }
}

/// Writes CSV to the path if one was given, otherwise to out.
void emit_csv(std::ostream& out, const std::string& path, const std::string& csv) {
  if (path.empty() || path == "-") {
    out << csv;
  } else {
    write_file(path, csv);
  }
}

int cmd_complexity(const SpecArgs& args, bool as_json, std::ostream& out) {
  const FunctionSpec spec = args.build();
  const auto r = worstcase::complexity(spec);
  json j{{"schema", schema("complexity")}, {"function", spec}, {"lower_bits", r.lower_bits},
         {"upper_bits", r.upper_bits}, {"exact", r.exact}};
  std::ostringstream t;
  t << "function  " << spec_text(spec) << "\n"
    << "lower     " << num(r.lower_bits) << " bits\n"
    << "upper     " << num(r.upper_bits) << " bits\n"
    << "exact     " << (r.exact ? "yes" : "no") << "\n";
  emit(out, as_json, j, t.str());
  return kExitPass;
}

json policy_json(const ordering::PolicyTree& policy, const Input& in) {
  auto states = json::array();
  for (const auto& s : policy.reachable()) {
    const NodeId node = *policy.choice(s);
    states.push_back(json{{"remaining", s.remaining},
                          {"remaining_original", in.nodes(s.remaining)},
                          {"theta", s.theta},
                          {"transmitter", node},
                          {"transmitter_original", in.original(node)}});
  }
  return json{{"schema", schema("policy")}, {"n", policy.n()}, {"theta", policy.theta()}, {"states", states}};
}

int cmd_order(const std::vector<double>& probs, int theta, const std::string& cost_name, const std::string& emit_path,
              bool as_json, std::ostream& out) {
  const Input in = make_input(probs);
  const CostFunction cost = parse_cost_kind(cost_name);
  auto table = ordering::solve_dp(in.ranked.profile, theta, cost);
  const auto rule = ordering::rule_policy(in.ranked.profile, theta);
  const double rule_cost = ordering::policy_cost(rule, in.ranked.profile, cost);
  const auto root = table.root();
  const NodeId first = ordering::rule_choice(root);
  const NodeSet argmin = table.argmin(root);
  const json policy = policy_json(rule, in);
  if (!emit_path.empty()) write_file(emit_path, policy.dump(2) + "\n");

  json j{{"schema", schema("order")},
         {"theta", theta},
         {"cost", std::string(to_string(cost.kind))},
         {"ranking", in.ranking()},
         {"optimal_cost", table.root_cost()},
         {"rule_cost", rule_cost},
         {"root_transmitter", in.node(first)},
         {"root_argmin", in.nodes(argmin)},
         {"rule_in_argmin", argmin.contains(first)},
         {"policy", policy}};
  std::ostringstream t;
  t << "optimal expected cost  " << num(table.root_cost()) << "\n"
    << "rule policy cost       " << num(rule_cost) << "\n"
    << "first transmitter      node " << in.label(first) << "\n"
    << "optimal first choices  " << in.labels(argmin) << "\n"
    << "policy (rank ids):\n";
  for (const auto& s : rule.reachable()) {
    t << "  remaining " << set_text(s.remaining) << " theta " << s.theta << " -> node " << in.label(*rule.choice(s))
      << "\n";
  }
  emit(out, as_json, j, t.str());
  return kExitPass;
}

struct BlockArgs {
  std::vector<double> probs;
  int theta = 0;
  std::uint64_t block_length = 65536;
  std::uint64_t seed = 0;
  int runs = 1;
  int chunk = 16;
  std::string csv;
  bool csv_requested = false;
};

int cmd_block(const BlockArgs& a, bool as_json, std::ostream& out) {
  const Input in = make_input(a.probs);
  if (a.runs < 1) throw DomainError("--runs must be >= 1");
  const auto coherent = blockcoding::coherent_cost(in.ranked.profile, a.theta);
  std::ostringstream csv;
  csv << "run,seed,N,total_bits,bits_per_instance,coherent_bits,relative_gap,subblocks,errors\n";
  auto runs = json::array();
  std::ostringstream t;
  t << "coherent cost  " << num(coherent.bits) << " bits/instance, first transmitter node "
    << in.label(coherent.tree.nodes.front().transmitter) << "\n";
  bool all_ok = true;
  for (int r = 0; r < a.runs; ++r) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(r);
    const auto run = blockcoding::simulate_block(in.ranked.profile, a.theta, a.block_length, seed, {a.chunk});
    const double gap = (run.bits_per_instance - run.coherent_bits) / run.coherent_bits;
    all_ok = all_ok && run.zero_error();
    csv << r << "," << seed << "," << run.block_length << "," << run.total_bits << ","
        << num(run.bits_per_instance, 9) << "," << num(run.coherent_bits, 9) << "," << num(gap, 9) << ","
        << run.subblocks << "," << run.errors << "\n";
    runs.push_back(json{{"run", r},
                        {"seed", seed},
                        {"N", run.block_length},
                        {"total_bits", run.total_bits},
                        {"bits_per_instance", run.bits_per_instance},
                        {"relative_gap", gap},
                        {"subblocks", run.subblocks},
                        {"errors", run.errors}});
    t << "run " << r << " seed " << seed << ": " << num(run.bits_per_instance) << " bits/instance (gap "
      << num(100.0 * gap, 3) << "%), " << run.errors << " errors\n";
  }
  if (a.csv_requested) {
    emit_csv(out, a.csv, csv.str());
    if (a.csv.empty() || a.csv == "-") return all_ok ? kExitPass : kExitFailure;
  }
  json j{{"schema", schema("block")},
         {"theta", a.theta},
         {"ranking", in.ranking()},
         {"coherent_bits", coherent.bits},
         {"root_transmitter", in.node(coherent.tree.nodes.front().transmitter)},
         {"runs", runs},
         {"zero_error", all_ok}};
  emit(out, as_json, j, t.str());
  return all_ok ? kExitPass : kExitFailure;
}

struct AvgArgs {
  int n = 0;
  int theta = 0;
  double p = 0.5;
  std::uint64_t block_length = 65536;
  std::uint64_t seed = 0;
  int runs = 1;
  std::string mode = "idealized";
  std::string csv;
  bool csv_requested = false;
};

int cmd_avgcase(const AvgArgs& a, bool as_json, std::ostream& out) {
  if (a.runs < 1) throw DomainError("--runs must be >= 1");
  const auto mode = a.mode == "huffman" ? avgcase::DiscardMode::Huffman : avgcase::DiscardMode::Idealized;
  const auto analytic = avgcase::analytic_cost(a.n, a.theta, a.p, a.block_length);
  std::ostringstream csv;
  csv << "run,seed,n,theta,p,N,mode,total_bits,rate,analytic_rate,bound_rate,relative_gap,errors\n";
  auto runs = json::array();
  std::ostringstream t;
  t << "analytic rate  " << num(analytic.rate) << " bits/instance (R = " << num(analytic.r) << ")\n"
    << "bound          " << num(analytic.bound_rate) << " bits/instance\n";
  bool all_ok = true;
  for (int r = 0; r < a.runs; ++r) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(r);
    const auto run = avgcase::simulate_discard(a.n, a.theta, a.p, a.block_length, seed, mode);
    const double gap = (run.rate - run.analytic_rate) / run.analytic_rate;
    all_ok = all_ok && run.errors == 0;
    csv << r << "," << seed << "," << a.n << "," << a.theta << "," << num(a.p, 9) << "," << a.block_length << ","
        << a.mode << "," << num(run.total_bits, 3) << "," << num(run.rate, 9) << "," << num(run.analytic_rate, 9) << ","
        << num(analytic.bound_rate, 9) << "," << num(gap, 9) << "," << run.errors << "\n";
    runs.push_back(json{{"run", r},
                        {"seed", seed},
                        {"total_bits", run.total_bits},
                        {"rate", run.rate},
                        {"relative_gap", gap},
                        {"undetermined", run.undetermined},
                        {"errors", run.errors}});
    t << "run " << r << " seed " << seed << ": " << num(run.rate) << " bits/instance (gap " << num(100.0 * gap, 3)
      << "%), " << run.errors << " errors\n";
  }
  if (a.csv_requested) {
    emit_csv(out, a.csv, csv.str());
    if (a.csv.empty() || a.csv == "-") return all_ok ? kExitPass : kExitFailure;
  }
  json j{{"schema", schema("avgcase")},
         {"n", a.n},
         {"theta", a.theta},
         {"p", a.p},
         {"N", a.block_length},
         {"mode", a.mode},
         {"analytic_rate", analytic.rate},
         {"bound_rate", analytic.bound_rate},
         {"r", analytic.r},
         {"runs", runs},
         {"zero_error", all_ok}};
  emit(out, as_json, j, t.str());
  return all_ok ? kExitPass : kExitFailure;
}

int cmd_approx(const std::vector<double>& probs, int theta, int budget, const std::string& metric_name, bool as_json,
               std::ostream& out) {
  const Input in = make_input(probs);
  const auto metric = approx::parse_metric(metric_name);
  auto table = approx::budget_dp(in.ranked.profile, theta, budget, metric);
  const auto root = table.root();
  auto candidates = json::array();
  std::ostringstream t;
  t << "optimal " << approx::to_string(metric) << "  " << num(table.root_value()) << "\n";
  for (const auto& [id, v] : table.candidate_values(root)) {
    candidates.push_back(json{{"node", in.node(id)}, {"value", v}});
    t << "  node " << in.label(id) << " first: " << num(v) << "\n";
  }
  const NodeSet argmin = table.entry(root).argmin;
  t << "optimal first choices  " << in.labels(argmin) << "\n";
  json j{{"schema", schema("approx")},
         {"theta", theta},
         {"budget", budget},
         {"metric", std::string(approx::to_string(metric))},
         {"ranking", in.ranking()},
         {"value", table.root_value()},
         {"candidates", candidates},
         {"argmin", in.nodes(argmin)}};
  emit(out, as_json, j, t.str());
  return kExitPass;
}

int cmd_parity(const std::vector<double>& probs, int budget, bool as_json, std::ostream& out) {
  const Input in = make_input(probs);
  const auto greedy = approx::parity_best_subset(in.ranked.profile, budget);
  json j{{"schema", schema("parity")},
         {"budget", budget},
         {"ranking", in.ranking()},
         {"transmitters", in.nodes(greedy.transmitters)},
         {"residual_entropy", greedy.residual_entropy}};
  std::ostringstream t;
  t << "transmitters      " << in.labels(greedy.transmitters) << "\n"
    << "residual entropy  " << num(greedy.residual_entropy) << " bits\n";
  int code = kExitPass;
  if (in.ranked.profile.size() <= approx::kMaxBudgetNodes) {
    const auto brute = approx::parity_bruteforce(in.ranked.profile, budget);
    const bool match = std::abs(brute.residual_entropy - greedy.residual_entropy) <= 1e-12;
    j["bruteforce_entropy"] = brute.residual_entropy;
    j["matches_bruteforce"] = match;
    t << "brute force       " << num(brute.residual_entropy) << " bits (" << (match ? "match" : "MISMATCH") << ")\n";
    if (!match) code = kExitFailure;
  }
  emit(out, as_json, j, t.str());
  return code;
}

int cmd_kraft(int n, int theta, int block_length, bool rounded, bool as_json, std::ostream& out) {
  auto plan = worstcase::kraft_plan(n, theta, block_length);
  if (rounded) plan = plan.rounded();
  const double target = block_length * log2_binom(n + 1, theta);
  auto entries = json::array();
  std::ostringstream t;
  t << "ones  zeros  log2(count)  length  total\n";
  for (const auto& e : plan.entries) {
    entries.push_back(json{{"ones", e.ones},
                           {"zeros", e.zeros},
                           {"log2_multiplicity", e.log2_multiplicity},
                           {"length", e.length},
                           {"total_cost", e.total_cost}});
    t << e.ones << "  " << e.zeros << "  " << num(e.log2_multiplicity) << "  " << num(e.length) << "  "
      << num(e.total_cost) << "\n";
  }
  t << "kraft sum   " << num(plan.kraft_sum(), 12) << "\n"
    << "worst total " << num(plan.worst_case_total()) << " (N log2 C(n+1,theta) = " << num(target) << ")\n";
  json j{{"schema", schema("kraft")},   {"n", n},
         {"theta", theta},              {"N", block_length},
         {"rounded", rounded},          {"entries", entries},
         {"kraft_sum", plan.kraft_sum()}, {"worst_case_total", plan.worst_case_total()},
         {"target_total", target}};
  emit(out, as_json, j, t.str());
  return kExitPass;
}

// verify ---------------------------------------------------------------------

struct Verdict {
  bool pass = true;
  json details = json::object();
  std::string text;
};

int finish_verify(const std::string& check, const Verdict& v, bool as_json, std::ostream& out) {
  json j{{"schema", schema("verify")}, {"check", check}, {"pass", v.pass}, {"details", v.details}};
  emit(out, as_json, j, v.text + (v.pass ? "PASS " : "FAIL ") + check + "\n");
  return v.pass ? kExitPass : kExitFailure;
}

Verdict verify_rule(int n, int trials, std::uint64_t seed, const std::string& cost_name, std::optional<int> theta) {
  if (n < 1 || n > ordering::kMaxDpNodes) throw DomainError("--n must lie in 1..24");
  if (trials < 1) throw DomainError("--trials must be >= 1");
  Verdict v;
  auto per_cost = json::array();
  std::ostringstream t;
  Rng rng(seed);
  const auto costs = costs_from(cost_name);
  std::vector<std::size_t> checked(costs.size(), 0);
  std::vector<std::size_t> violations(costs.size(), 0);
  std::vector<json> examples(costs.size());
  for (int trial = 0; trial < trials; ++trial) {
    const ProbProfile profile(rng.sorted_uniforms(static_cast<std::size_t>(n)));
    for (int th = theta.value_or(1); th <= theta.value_or(n); ++th) {
      for (std::size_t c = 0; c < costs.size(); ++c) {
        const auto r = ordering::verify_rule(profile, th, costs[c]);
        checked[c] += r.states_checked;
        if (!r.holds) {
          ++violations[c];
          if (examples[c].is_null()) {
            examples[c] = json{{"probs", profile.probs()},
                               {"theta", th},
                               {"state", r.violation->state},
                               {"rule_node", r.violation->rule_node},
                               {"argmin", r.violation->argmin},
                               {"rule_cost", r.violation->rule_cost},
                               {"best_cost", r.violation->best_cost}};
          }
        }
      }
    }
  }
  for (std::size_t c = 0; c < costs.size(); ++c) {
    const std::string name(to_string(costs[c].kind));
    json row{{"cost", name}, {"states_checked", checked[c]}, {"violations", violations[c]}};
    if (!examples[c].is_null()) row["counterexample"] = examples[c];
    per_cost.push_back(row);
    t << name << ": " << checked[c] << " states, " << violations[c] << " violating instances\n";
    v.pass = v.pass && violations[c] == 0;
  }
  v.details = json{{"n", n}, {"trials", trials}, {"seed", seed}, {"costs", per_cost}};
  v.text = t.str();
  return v;
}

Verdict verify_appendix(int n, int samples, std::uint64_t seed, const std::string& cost_name) {
  if (n < 1 || n > 12) throw DomainError("--n must lie in 1..12");
  if (samples < 1) throw DomainError("--samples must be >= 1");
  Verdict v;
  auto per_cost = json::array();
  std::ostringstream t;
  std::uint64_t offset = 0;
  for (const auto& cost : costs_from(cost_name)) {
    const auto report = ordering::check_appendix_inequalities(n, cost, samples, seed + offset++);
    json slack = json::object();
    for (int k = 0; k < ordering::kInequalityCount; ++k) {
      const auto kind = static_cast<ordering::Inequality>(k);
      slack[ordering::to_string(kind)] = json{{"checked", report.counts[static_cast<std::size_t>(k)]},
                                              {"min_slack", report.min_slack[static_cast<std::size_t>(k)]}};
    }
    const std::string name(to_string(cost.kind));
    per_cost.push_back(json{{"cost", name}, {"checked", report.checked}, {"inequalities", slack},
                            {"min_slack", report.min_overall_slack()}, {"holds", report.holds()}});
    t << name << ": " << report.checked << " inequalities, min slack " << std::scientific << std::setprecision(3)
      << report.min_overall_slack() << std::defaultfloat << "\n";
    v.pass = v.pass && report.holds();
  }
  v.details = json{{"n", n}, {"samples", samples}, {"seed", seed}, {"costs", per_cost}};
  v.text = t.str();
  return v;
}

Verdict verify_conjecture(const std::string& grid, std::optional<int> theta) {
  std::vector<double> values;
  if (grid == "coarse") {
    values = {0.1, 0.3, 0.5, 0.7, 0.9};
  } else {
    for (int j = 0; j < 10; ++j) values.push_back(0.05 + 0.1 * j);
  }
  const auto profiles = blockcoding::probability_grid(values, 3);
  Verdict v;
  auto rows = json::array();
  std::ostringstream t;
  for (int th = theta.value_or(1); th <= theta.value_or(3); ++th) {
    const auto report = blockcoding::conjecture_check(th, profiles);
    rows.push_back(json{{"theta", th}, {"profiles", report.rows.size()}, {"max_abs_diff", report.max_abs_diff},
                        {"holds", report.holds()}});
    t << "theta " << th << ": " << report.rows.size() << " profiles, max |C_L - C_U| = " << std::scientific
      << std::setprecision(3) << report.max_abs_diff << std::defaultfloat << "\n";
    v.pass = v.pass && report.holds();
  }
  v.details = json{{"grid", grid}, {"thresholds", rows}};
  v.text = t.str();
  return v;
}

Verdict verify_counterexample() {
  struct Case {
    approx::Metric metric;
    std::vector<double> probs;
    std::vector<double> printed;
  };
  const std::vector<Case> cases{
      {approx::Metric::Entropy, {0.7, 0.82, 0.84}, {0.4002, 0.4991, 0.4121}},
      {approx::Metric::Error, {0.6, 0.72, 0.84}, {0.1850, 0.1850, 0.1632}},
  };
  constexpr double kTol = 5e-4;
  Verdict v;
  auto rows = json::array();
  std::ostringstream t;
  for (const auto& c : cases) {
    auto table = approx::budget_dp(ProbProfile(c.probs), 2, 1, c.metric);
    const auto values = table.candidate_values(table.root());
    for (const auto& [id, value] : values) {
      const double printed = c.printed[static_cast<std::size_t>(id - 1)];
      const double delta = value - printed;
      const bool ok = std::abs(delta) <= kTol;
      v.pass = v.pass && ok;
      rows.push_back(json{{"metric", std::string(approx::to_string(c.metric))}, {"node", id}, {"value", value},
                          {"printed", printed}, {"delta", delta}, {"within_tolerance", ok}});
      t << approx::to_string(c.metric) << " node " << id << ": " << num(value) << " printed " << num(printed, 4)
        << " delta " << std::showpos << num(delta) << std::noshowpos << (ok ? "" : "  <-- outside 5e-4") << "\n";
    }
    t << "  optimal first choices " << set_text(table.entry(table.root()).argmin) << "\n";
  }
  v.details = json{{"tolerance", kTol}, {"values", rows}};
  v.text = t.str();
  return v;
}

Verdict verify_taylor(int theta_max) {
  const auto report = avgcase::check_taylor_identity(theta_max, avgcase::default_taylor_grid());
  Verdict v;
  v.pass = report.polynomial_identity && report.max_abs_error <= 1e-9;
  v.details = json{{"theta_max", theta_max}, {"points", report.points}, {"max_abs_error", report.max_abs_error},
                   {"polynomial_identity", report.polynomial_identity}};
  v.text = "theta <= " + std::to_string(theta_max) + ", " + std::to_string(report.points) +
           " points, max error " + num(report.max_abs_error, 12) + ", polynomial identity " +
           (report.polynomial_identity ? "holds" : "FAILS") + "\n";
  return v;
}

Verdict verify_fooling(const SpecArgs& args) {
  const FunctionSpec spec = args.build();
  const auto set = worstcase::max_fooling_set(spec);
  const auto check = worstcase::is_fooling_set(spec, set.columns);
  const auto bounds = worstcase::complexity(spec);
  const double bits = set.lower_bound_bits();
  const bool matches = bounds.exact ? std::abs(bits - bounds.lower_bits) <= 1e-9
                                    : bits <= bounds.upper_bits + 1e-9 && std::abs(bits - bounds.lower_bits) <= 1e-9;
  Verdict v;
  v.pass = check.valid && matches;
  v.details = json{{"function", spec},     {"columns", set.size()},       {"log2_size", bits},
                   {"valid", check.valid}, {"lower_bits", bounds.lower_bits}, {"upper_bits", bounds.upper_bits},
                   {"matches_bound", matches}};
  if (check.witness) v.details["witness"] = json::array({check.witness->first, check.witness->second});
  v.text = spec_text(spec) + ": " + std::to_string(set.size()) + " columns, log2 = " + num(bits) +
           (check.valid ? ", valid" : ", INVALID") + ", bound " + num(bounds.lower_bits) + "\n";
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Computation of symmetric functions in collocated broadcast networks", "colloq"};
  app.require_subcommand(1);
  bool as_json = false;

  // complexity
  SpecArgs complexity_spec;
  auto* complexity = app.add_subcommand("complexity", "worst-case complexity in bits per instance");
  complexity_spec.attach(complexity);
  complexity->add_flag("--json", as_json, "JSON output");

  // order
  std::vector<double> order_p;
  int order_theta = 0;
  std::string order_cost = "unit";
  std::string order_emit;
  auto* order = app.add_subcommand("order", "optimal transmission order for a threshold function");
  order->add_option("--p", order_p, "probabilities, comma separated, any order")->required()->delimiter(',');
  order->add_option("--theta", order_theta, "threshold")->required();
  order->add_option("--cost", order_cost, "unit|entropy|pulse")
      ->check(CLI::IsMember({"unit", "entropy", "pulse"}));
  order->add_option("--emit", order_emit, "write the rule policy as JSON to this path");
  order->add_flag("--json", as_json, "JSON output");

  // block
  BlockArgs block_args;
  auto* block = app.add_subcommand("block", "simulate coherent block computation with Huffman codes");
  block->add_option("--p", block_args.probs, "probabilities, comma separated")->required()->delimiter(',');
  block->add_option("--theta", block_args.theta, "threshold")->required();
  block->add_option("--N", block_args.block_length, "block length")->check(CLI::PositiveNumber);
  block->add_option("--seed", block_args.seed, "random seed")->required();
  block->add_option("--runs", block_args.runs, "independent runs, seeds seed..seed+runs-1");
  block->add_option("--chunk", block_args.chunk, "Huffman chunk width in bits")->check(CLI::Range(1, 16));
  auto* block_csv = block->add_option("--csv", block_args.csv, "CSV output path (stdout without a path)")
                        ->expected(0, 1);
  block->add_flag("--json", as_json, "JSON output");

  // avgcase
  AvgArgs avg_args;
  auto* avg = app.add_subcommand("avgcase", "i.i.d. average case with reverse-order discarding");
  avg->add_option("--n", avg_args.n, "node count")->required();
  avg->add_option("--theta", avg_args.theta, "threshold")->required();
  avg->add_option("--p", avg_args.p, "common probability of a one")->required();
  avg->add_option("--N", avg_args.block_length, "block length")->check(CLI::PositiveNumber);
  avg->add_option("--seed", avg_args.seed, "random seed")->required();
  avg->add_option("--runs", avg_args.runs, "independent runs, seeds seed..seed+runs-1");
  avg->add_option("--mode", avg_args.mode, "idealized|huffman")->check(CLI::IsMember({"idealized", "huffman"}));
  auto* avg_csv = avg->add_option("--csv", avg_args.csv, "CSV output path (stdout without a path)")->expected(0, 1);
  avg->add_flag("--json", as_json, "JSON output");

  // approx
  std::vector<double> approx_p;
  int approx_theta = 0;
  int approx_budget = 0;
  std::string approx_metric = "entropy";
  auto* approx_cmd = app.add_subcommand("approx", "approximate threshold computation under a broadcast budget");
  approx_cmd->add_option("--p", approx_p, "probabilities, comma separated")->required()->delimiter(',');
  approx_cmd->add_option("--theta", approx_theta, "threshold")->required();
  approx_cmd->add_option("--budget", approx_budget, "broadcasts allowed")->required();
  approx_cmd->add_option("--metric", approx_metric, "error|entropy")->check(CLI::IsMember({"error", "entropy"}));
  approx_cmd->add_flag("--json", as_json, "JSON output");

  // parity
  std::vector<double> parity_p;
  int parity_budget = 0;
  auto* parity = app.add_subcommand("parity", "best broadcasting subset for approximate parity");
  parity->add_option("--p", parity_p, "probabilities, comma separated")->required()->delimiter(',');
  parity->add_option("--budget", parity_budget, "broadcasts allowed")->required();
  parity->add_flag("--json", as_json, "JSON output");

  // kraft
  int kraft_n = 0;
  int kraft_theta = 0;
  int kraft_N = 1;
  bool kraft_rounded = false;
  auto* kraft = app.add_subcommand("kraft", "codeword lengths achieving the threshold complexity");
  kraft->add_option("--n", kraft_n, "node count")->required();
  kraft->add_option("--theta", kraft_theta, "threshold")->required();
  kraft->add_option("--N", kraft_N, "block length")->check(CLI::PositiveNumber);
  kraft->add_flag("--rounded", kraft_rounded, "round lengths up to integers");
  kraft->add_flag("--json", as_json, "JSON output");

  // verify
  auto* verify = app.add_subcommand("verify", "numerical verification suites");
  verify->require_subcommand(1);

  int rule_n = 6;
  int rule_trials = 1000;
  std::uint64_t rule_seed = 0;
  std::string rule_cost = "all";
  std::optional<int> rule_theta;
  auto* v_rule = verify->add_subcommand("rule", "k-th least likely rule against the DP argmin");
  v_rule->add_option("--n", rule_n, "node count");
  v_rule->add_option("--trials", rule_trials, "random sorted profiles");
  v_rule->add_option("--seed", rule_seed, "random seed")->required();
  v_rule->add_option("--cost", rule_cost, "unit|entropy|pulse|all")
      ->check(CLI::IsMember({"unit", "entropy", "pulse", "all"}));
  v_rule->add_option("--theta", rule_theta, "single threshold (default: all)");
  v_rule->add_flag("--json", as_json, "JSON output");

  int app_n = 4;
  int app_samples = 500;
  std::uint64_t app_seed = 0;
  std::string app_cost = "all";
  auto* v_appendix = verify->add_subcommand("appendix", "induction-hypothesis inequalities");
  v_appendix->add_option("--n", app_n, "node count");
  v_appendix->add_option("--samples", app_samples, "random sorted profiles");
  v_appendix->add_option("--seed", app_seed, "random seed")->required();
  v_appendix->add_option("--cost", app_cost, "unit|entropy|pulse|all")
      ->check(CLI::IsMember({"unit", "entropy", "pulse", "all"}));
  v_appendix->add_flag("--json", as_json, "JSON output");

  std::string conj_grid = "coarse";
  std::optional<int> conj_theta;
  auto* v_conj = verify->add_subcommand("conjecture", "partition lower bound against coherent cost at n = 3");
  v_conj->add_option("--grid", conj_grid, "coarse|fine")->check(CLI::IsMember({"coarse", "fine"}));
  v_conj->add_option("--theta", conj_theta, "single threshold (default: all)");
  v_conj->add_flag("--json", as_json, "JSON output");

  auto* v_counter = verify->add_subcommand("counterexample", "approximate-computation counter-example values");
  v_counter->add_flag("--json", as_json, "JSON output");

  int taylor_theta = 8;
  auto* v_taylor = verify->add_subcommand("taylor", "derivative identity behind the average-case bound");
  v_taylor->add_option("--theta-max", taylor_theta, "largest threshold")->check(CLI::Range(1, 8));
  v_taylor->add_flag("--json", as_json, "JSON output");

  SpecArgs fooling_spec;
  auto* v_fooling = verify->add_subcommand("fooling", "fooling-set construction against the bound");
  fooling_spec.attach(v_fooling);
  v_fooling->add_flag("--json", as_json, "JSON output");

  std::vector<std::string> argv_store{"colloq"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  block_args.csv_requested = block_csv->count() > 0;
  avg_args.csv_requested = avg_csv->count() > 0;
  try {
    if (complexity->parsed()) return cmd_complexity(complexity_spec, as_json, out);
    if (order->parsed()) return cmd_order(order_p, order_theta, order_cost, order_emit, as_json, out);
    if (block->parsed()) return cmd_block(block_args, as_json, out);
    if (avg->parsed()) return cmd_avgcase(avg_args, as_json, out);
    if (approx_cmd->parsed()) return cmd_approx(approx_p, approx_theta, approx_budget, approx_metric, as_json, out);
    if (parity->parsed()) return cmd_parity(parity_p, parity_budget, as_json, out);
    if (kraft->parsed()) return cmd_kraft(kraft_n, kraft_theta, kraft_N, kraft_rounded, as_json, out);
    if (v_rule->parsed()) return finish_verify("rule", verify_rule(rule_n, rule_trials, rule_seed, rule_cost, rule_theta), as_json, out);
    if (v_appendix->parsed()) {
      return finish_verify("appendix", verify_appendix(app_n, app_samples, app_seed, app_cost), as_json, out);
    }
    if (v_conj->parsed()) return finish_verify("conjecture", verify_conjecture(conj_grid, conj_theta), as_json, out);
    if (v_counter->parsed()) return finish_verify("counterexample", verify_counterexample(), as_json, out);
    if (v_taylor->parsed()) return finish_verify("taylor", verify_taylor(taylor_theta), as_json, out);
    if (v_fooling->parsed()) return finish_verify("fooling", verify_fooling(fooling_spec), as_json, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LimitError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace colloq::cli
