#include "cli.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = colloq::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json run_json(std::vector<std::string> args) {
  args.push_back("--json");
  const auto r = run(args);
  REQUIRE(r.code <= 1);
  return nlohmann::json::parse(r.out);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("complexity command") {
  const auto j = run_json({"complexity", "--kind", "and", "--n", "2"});
  CHECK(j["schema"] == "colloq.complexity.v1");
  CHECK(j["exact"] == true);
  CHECK(j["lower_bits"].get<double>() == doctest::Approx(1.585).epsilon(1e-3));
  const auto in = run_json({"complexity", "--kind", "interval", "--a", "1", "--b", "2", "--n", "4"});
  CHECK(in["lower_bits"].get<double>() == doctest::Approx(std::log2(11.0)));
  CHECK(in["upper_bits"].get<double>() == doctest::Approx(std::log2(12.0)));
  CHECK(in["exact"] == false);
  const auto bad = run({"complexity", "--kind", "threshold", "--n", "3", "--theta", "4"});
  CHECK(bad.code == colloq::cli::kExitUsage);
  CHECK(bad.err.find("error") != std::string::npos);
  CHECK(run({"complexity", "--kind", "parity", "--n", "3"}).code == colloq::cli::kExitUsage);
  const auto mx = run_json({"complexity", "--kind", "max", "--n", "3", "--m", "2"});
  CHECK(mx["upper_bits"].get<double>() == doctest::Approx(std::log2(10.0)));
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == colloq::cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == colloq::cli::kExitUsage);
  CHECK(run({"block", "--p", "0.5", "--theta", "1"}).code == colloq::cli::kExitUsage);  // no seed
  CHECK(run({"avgcase", "--n", "4", "--theta", "2", "--p", "0.5"}).code == colloq::cli::kExitUsage);
  CHECK(run({"order", "--p", "0.5,1.5", "--theta", "1"}).code == colloq::cli::kExitUsage);
  CHECK(run({"order", "--p", "0.5", "--theta", "1", "--cost", "cubic"}).code == colloq::cli::kExitUsage);
  CHECK(run({"verify", "rule"}).code == colloq::cli::kExitUsage);
  CHECK(run({"--help"}).code == colloq::cli::kExitPass);
}

TEST_CASE("order reports original and rank ids") {
  const auto j = run_json({"order", "--p", "0.6,0.2", "--theta", "1", "--cost", "unit"});
  CHECK(j["optimal_cost"].get<double>() == doctest::Approx(1.4));
  CHECK(j["rule_cost"].get<double>() == doctest::Approx(1.4));
  // The 0.6 entry was typed first; it is rank 2.
  CHECK(j["root_transmitter"]["rank"] == 2);
  CHECK(j["root_transmitter"]["original"] == 1);
  CHECK(j["rule_in_argmin"] == true);
  CHECK(j["ranking"][0]["original"] == 2);
  CHECK(j["policy"]["states"][0]["transmitter_original"] == 1);
}

TEST_CASE("verify commands") {
  CHECK(run({"verify", "rule", "--n", "6", "--trials", "1000", "--seed", "3"}).code == colloq::cli::kExitPass);
  CHECK(run({"verify", "conjecture", "--grid", "coarse"}).code == colloq::cli::kExitPass);
  CHECK(run({"verify", "appendix", "--n", "4", "--samples", "50", "--seed", "1"}).code == colloq::cli::kExitPass);
  CHECK(run({"verify", "taylor"}).code == colloq::cli::kExitPass);
  CHECK(run({"verify", "fooling", "--kind", "threshold", "--n", "5", "--theta", "3"}).code ==
        colloq::cli::kExitPass);
  CHECK(run({"verify", "fooling", "--kind", "max", "--n", "3", "--m", "2"}).code == colloq::cli::kExitPass);

  const auto ce = run({"verify", "counterexample"});
  CHECK(ce.out.find("0.4991") != std::string::npos);
  CHECK(ce.out.find("0.1632") != std::string::npos);
  const auto j = run_json({"verify", "counterexample"});
  CHECK(j["details"]["values"].size() == 6);
  int within = 0;
  for (const auto& v : j["details"]["values"]) within += v["within_tolerance"].get<bool>() ? 1 : 0;
  CHECK(within == 5);
  CHECK(j["pass"] == (within == 6));
}

TEST_CASE("simulations write CSV with a header row") {
  const auto dir = std::filesystem::temp_directory_path() / "colloq-cli-test";
  std::filesystem::remove_all(dir);
  ::setenv(colloq::cli::kOutputDirEnv, dir.c_str(), 1);
  const auto b = run({"block", "--p", "0.2,0.7,0.45", "--theta", "2", "--N", "65536", "--seed", "4", "--runs", "2",
                      "--csv", "b.csv"});
  CHECK(b.code == colloq::cli::kExitPass);
  const auto csv = slurp(dir / "b.csv");
  CHECK(csv.rfind("run,seed,N,total_bits,bits_per_instance,coherent_bits,relative_gap,subblocks,errors\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

  const auto a = run({"avgcase", "--n", "8", "--theta", "1", "--p", "0.5", "--N", "65536", "--seed", "2", "--csv",
                      "sub/a.csv"});
  CHECK(a.code == colloq::cli::kExitPass);
  CHECK(std::filesystem::exists(dir / "sub" / "a.csv"));

  const auto first = slurp(dir / "b.csv");
  run({"block", "--p", "0.2,0.7,0.45", "--theta", "2", "--N", "65536", "--seed", "4", "--runs", "2", "--csv",
       "b.csv"});
  CHECK(slurp(dir / "b.csv") == first);

  const auto stdout_csv = run({"avgcase", "--n", "4", "--theta", "2", "--p", "0.3", "--N", "100", "--seed", "1", "--csv"});
  CHECK(stdout_csv.out.rfind("run,seed,n,theta,p,N,mode,", 0) == 0);

  CHECK(run({"order", "--p", "0.3,0.1", "--theta", "1", "--emit", "policy.json"}).code == colloq::cli::kExitPass);
  const auto policy = nlohmann::json::parse(slurp(dir / "policy.json"));
  CHECK(policy["schema"] == "colloq.policy.v1");
  ::unsetenv(colloq::cli::kOutputDirEnv);
  std::filesystem::remove_all(dir);
}

TEST_CASE("simulation accuracy through the command line") {
  const auto b = run_json({"block", "--p", "0.3,0.6,0.8", "--theta", "2", "--N", "65536", "--seed", "8"});
  CHECK(std::abs(b["runs"][0]["relative_gap"].get<double>()) <= 0.03);
  CHECK(b["zero_error"] == true);
  const auto a = run_json({"avgcase", "--n", "8", "--theta", "1", "--p", "0.5", "--N", "65536", "--seed", "5"});
  CHECK(a["runs"][0]["rate"].get<double>() < 2.0);
}

TEST_CASE("approx and parity commands") {
  const auto j = run_json({"approx", "--p", "0.84,0.6,0.72", "--theta", "2", "--budget", "1", "--metric", "error"});
  CHECK(j["value"].get<double>() == doctest::Approx(0.1632).epsilon(1e-3));
  REQUIRE(j["argmin"].size() == 1);
  CHECK(j["argmin"][0]["rank"] == 3);
  CHECK(j["argmin"][0]["original"] == 1);
  const auto p = run_json({"parity", "--p", "0.7,0.1,0.5", "--budget", "2"});
  CHECK(p["residual_entropy"].get<double>() == doctest::Approx(0.469).epsilon(1e-3));
  CHECK(p["matches_bruteforce"] == true);
  const auto k = run_json({"kraft", "--n", "3", "--theta", "2", "--N", "2"});
  CHECK(k["kraft_sum"].get<double>() == doctest::Approx(1.0));
  CHECK(k["worst_case_total"].get<double>() == doctest::Approx(2 * std::log2(6.0)));
}
