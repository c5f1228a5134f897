#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#ifndef EHCR_CLI_PATH
#error "EHCR_CLI_PATH must point at the command-line binary"
#endif

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(EHCR_CLI_PATH) + " " + args + " 2>/dev/null";
  std::FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), got);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/ehcr_cli_" + name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("eval prints a parsable closed-form report") {
  const auto r = run_cli("eval");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("report").at("mu_s").get<double>() == doctest::Approx(0.5062065865545644).epsilon(1e-12));
  CHECK(j.at("report").at("policy_id") == "enum:1-1-1-1");
  CHECK(j.at("policy").is_array());
}

TEST_CASE("eval honours optimizer and noise-mode flags") {
  const auto r = run_cli("eval --optimizer fixed:2 --eq7 bandwidth");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("report").at("policy_id") == "fixed:2");
  CHECK(j.at("report").at("eq7_mode") == "bandwidth");
}

TEST_CASE("validate accepts a good config and rejects a broken one") {
  const auto good = write_temp("good.json", R"({"mode": "analytic"})");
  CHECK(run_cli("validate -c " + good).exit_code == 0);

  const auto bad = write_temp("bad.json", R"({"mode": "warp", "junk": 1})");
  CHECK(run_cli("validate -c " + bad).exit_code == 1);

  CHECK(run_cli("validate -c /tmp/ehcr_cli_missing.json").exit_code == 1);
}

TEST_CASE("single-point commands refuse sweep configs") {
  const auto cfg = write_temp("sweepy.json",
                              R"({"sweep": [{"field": "primary_arrival_rate", "values": [0.1, 0.2]}]})");
  CHECK(run_cli("eval -c " + cfg).exit_code == 1);
  CHECK(run_cli("optimize -c " + cfg).exit_code == 1);
}

TEST_CASE("optimize emits the search summary") {
  const auto r = run_cli("optimize --optimizer vi");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("method") == "vi");
  CHECK(j.at("mu_s").get<double>() == doctest::Approx(0.5062065865545644).epsilon(1e-12));
}

TEST_CASE("simulate produces analytic and estimated blocks") {
  const auto cfg = write_temp("sim.json", R"({"params": {"energy_capacity": 1}})");
  const auto r = run_cli("simulate -c " + cfg +
                         " --slots 20000 --warmup 4000 --reps 2 --seed 5 --primary idle_iid");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("sim").at("replications") == 2);
  CHECK(j.at("sim").at("seed") == 5);
  CHECK(j.at("sim").at("primary_model") == "idle_iid");
  const double est = j.at("sim").at("est_mu_s").get<double>();
  const double ref = j.at("analytic").at("mu_s").get<double>();
  CHECK(std::abs(est - ref) < 0.05);
}

TEST_CASE("unknown flags fail without touching the filesystem") {
  CHECK(run_cli("eval --frobnicate").exit_code != 0);
  CHECK(run_cli("").exit_code != 0);  // a subcommand is required
}

TEST_CASE("sweep writes files whose manifest reproduces them byte-for-byte") {
  const auto cfg = write_temp("sweep.json", R"({
    "mode": "both",
    "params": {"energy_capacity": 2},
    "sim": {"slots": 15000, "warmup_slots": 3000, "replications": 2, "seed": 21},
    "sweep": [{"field": "primary_arrival_rate", "values": [0.2, 0.5]}],
    "output": {"csv": "/tmp/ehcr_cli_sweep.csv", "manifest": "/tmp/ehcr_cli_sweep_manifest.json"}
  })");
  REQUIRE(run_cli("sweep -c " + cfg).exit_code == 0);
  const std::string csv1 = slurp("/tmp/ehcr_cli_sweep.csv");
  const std::string man1 = slurp("/tmp/ehcr_cli_sweep_manifest.json");
  REQUIRE_FALSE(csv1.empty());
  CHECK(csv1.find("policy_id") != std::string::npos);
  CHECK(csv1.find("est_mu_s") != std::string::npos);

  // re-run from the manifest: identical bytes
  REQUIRE(run_cli("sweep -c /tmp/ehcr_cli_sweep_manifest.json").exit_code == 0);
  CHECK(slurp("/tmp/ehcr_cli_sweep.csv") == csv1);
  CHECK(slurp("/tmp/ehcr_cli_sweep_manifest.json") == man1);
}

TEST_CASE("sweep without an output path streams the csv to stdout") {
  const auto cfg = write_temp("stream.json", R"({
    "sweep": [{"field": "energy_arrival_rate", "values": [0.5, 1.0, 1.5]}]
  })");
  const auto r = run_cli("sweep -c " + cfg);
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.output);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 4);  // header + three grid points
}
