// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vqebench/cli.hpp"
#include "vqebench/fermion.hpp"

using namespace vqebench;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "vqebench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("vqebench_test_" + name);
}

double fci(const std::string& label) {
  static const FixtureManifest m = FixtureManifest::bundled();
  return m.find(label).fci_ground_energy;
}

}  // namespace

TEST_CASE("fci prints the sector spectrum") {
  const auto r = run({"fci", "--fixture", "h2_sto3g_0.735", "--sector", "1,1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("dimension 4") != std::string::npos);
  const auto j = run({"fci", "--fixture", "h2_sto3g_0.735", "--format", "json", "--levels", "1"});
  REQUIRE(j.code == kExitOk);
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["energies"][0].get<double>() == doctest::Approx(fci("h2_sto3g_0.735")).epsilon(1e-10));
}

TEST_CASE("adapt with --conv reaches FCI on H2") {
  const auto r = run({"adapt", "--fixture", "h2_sto3g_0.735", "--conv", "1e-3"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j["energy"].get<double>() - fci("h2_sto3g_0.735")) < 1e-6);
  CHECK(j["status"] == "converged");
  CHECK(j["abs_err"].get<double>() < 1e-6);
}

TEST_CASE("ground-state subcommands") {
  for (const char* cmd : {"vqe", "uscc", "nuvqe"}) {
    CAPTURE(cmd);
    const auto r = run({cmd, "--fixture", "h2_sto3g_0.735", "--eps", "1e-2"});
    REQUIRE(r.code == kExitOk);
    CHECK(nlohmann::json::parse(r.out)["abs_err"].get<double>() < 1e-6);
  }
  const auto csv = run({"vqe", "--fixture", "h2_sto3g_0.735", "--format", "csv"});
  CHECK(csv.code == kExitOk);
  CHECK(csv.out.rfind("# vqebench scan v1\n", 0) == 0);
}

TEST_CASE("excited-state subcommands") {
  const auto v = run({"vqd", "--fixture", "h2_sto3g_0.735", "--levels", "2"});
  REQUIRE(v.code == kExitOk);
  CHECK(nlohmann::json::parse(v.out)["levels"].size() == 2);
  const auto q = run({"qeom", "--fixture", "h2_sto3g_0.735"});
  REQUIRE(q.code == kExitOk);
  CHECK(nlohmann::json::parse(q.out)["excitation_energies"].size() == 3);
  const auto f = run({"fs", "--fixture", "h2_sto3g_0.735", "--omega", "-1.2"});
  CHECK(f.code == kExitOk);
  CHECK(run({"fs", "--fixture", "h2_sto3g_0.735"}).code == kExitInputError);
}

TEST_CASE("pools dump one JSON object per line") {
  const auto r = run({"pools", "--fixture", "h4_sto3g_1", "--pool", "uccsd"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    CHECK(nlohmann::json::parse(line).contains("label"));
    ++n;
  }
  CHECK(n == 26);
}

TEST_CASE("input errors exit with 2") {
  CHECK(run({"scan", "--config", "/nonexistent/missing.json"}).code == kExitInputError);
  CHECK(run({"fci", "--fixture", "h2_sto3g_0.735", "--bogus"}).code == kExitInputError);
  CHECK(run({}).code == kExitInputError);
  CHECK(run({"vqe"}).code == kExitInputError);
  CHECK(run({"vqe", "--fixture", "no_such_fixture"}).code == kExitInputError);
  CHECK(run({"fci", "--fixture", "h2_sto3g_0.735", "--sector", "x"}).code == kExitInputError);
  CHECK(run({"fci", "--fixture", "h2_sto3g_0.735", "--sector", "3,0"}).code == kExitInputError);
  CHECK(run({"fci", "--fcidump", "/nonexistent/FCIDUMP"}).code == kExitInputError);
}

TEST_CASE("unconverged runs exit with 1") {
  // a threshold below the gradient noise floor runs into the operator cap
  const auto r = run({"adapt", "--fixture", "h2_sto3g_0.735", "--conv", "1e-14"});
  CHECK(r.code == kExitUnconverged);
  CHECK(nlohmann::json::parse(r.out)["status"] == "unconverged");
}

TEST_CASE("scan writes CSV and a summary") {
  const auto cfg = temp_path("scan.json");
  const auto out = temp_path("scan.csv");
  const auto summary = temp_path("summary.json");
  {
    std::ofstream f(cfg);
    f << R"({"fixtures": [{"molecule": "h2", "basis": "STO-3G", "grid": [0.735, 1.5]}],
             "methods": ["vqe", "adapt@1e-2", "uscc@1e-2"]})";
  }
  const auto r = run({"scan", "--config", cfg.string(), "--out", out.string(), "--summary", summary.string()});
  REQUIRE(r.code == kExitOk);
  std::ifstream in(out);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == 2 + 6);
  std::ifstream s(summary);
  CHECK(nlohmann::json::parse(s)["groups"].size() == 3);

  {
    std::ofstream f(cfg);
    f << R"({"fixtures": ["h2_sto3g_0.735", "missing_label"], "methods": ["vqe"]})";
  }
  const auto bad = run({"scan", "--config", cfg.string()});
  CHECK(bad.code == kExitInputError);
  CHECK(bad.err.find("missing_label") != std::string::npos);
  std::filesystem::remove(cfg);
  std::filesystem::remove(out);
  std::filesystem::remove(summary);
}

#ifdef VQEBENCH_CLI_PATH
TEST_CASE("installed binary runs") {
  const std::string cmd = std::string(VQEBENCH_CLI_PATH) + " fci --fixture h2_sto3g_0.735 > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string bad = std::string(VQEBENCH_CLI_PATH) + " --nope > /dev/null 2>&1";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == kExitInputError);
}
#endif
