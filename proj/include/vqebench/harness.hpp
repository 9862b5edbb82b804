// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "vqebench/errors.hpp"
#include "vqebench/fermion.hpp"
#include "vqebench/optimizer.hpp"

namespace vqebench {

/// 1 kcal/mol in Hartree.
inline constexpr double kChemicalAccuracy = 1.594e-3;

/// One method column of a scan.
struct MethodSpec {
  std::string flavor;         // hf | vqe | adapt | uscc | nuvqe
  std::optional<double> eps;  // ADAPT gradient threshold or USCC screening threshold
  std::string pool = "spin-complemented";  // ADAPT pool: uccsd | generalized | spin-complemented | qubit

  /// e.g. "adapt", "adapt:qubit".
  std::string method_name() const;
};

/// Fixtures x methods. Fixtures are explicit manifest labels or
/// (molecule, basis, grid) selections; an empty grid means every point.
struct ScanSpec {
  struct Series {
    std::string molecule;
    std::string basis;
    std::vector<double> grid;
  };
  std::vector<std::string> labels;
  std::vector<Series> series;
  std::vector<MethodSpec> methods;
  std::optional<std::pair<int, int>> sector;
  std::filesystem::path output;
  std::filesystem::path manifest;  // empty: bundled manifest
  std::uint64_t seed = 7;
  std::size_t workers = 1;
  OptimizerConfig optimizer;

  static ScanSpec from_json(const nlohmann::json& j);
  static ScanSpec load(const std::filesystem::path& path);
};

/// Raised before any computation when fixtures cannot be resolved.
class PreflightError : public InputError {
 public:
  PreflightError(const std::string& what, std::vector<std::string> problems)
      : InputError(what), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct ScanRow {
  std::string molecule;
  std::string basis;
  std::string label;
  double R = 0.0;
  std::string method;
  std::optional<double> eps;
  double energy = 0.0;
  double e_fci = 0.0;
  double abs_err = 0.0;
  std::size_t n_params = 0;
  std::size_t n_iterations = 0;
  std::string status;
  double wall_time = 0.0;  // seconds
};

/// Fixture entries the scan selects, in scan order; throws PreflightError
/// listing every unresolved fixture or invalid threshold.
std::vector<FixtureEntry> preflight(const ScanSpec& spec, const FixtureManifest& manifest);

std::vector<ScanRow> run_scan(const ScanSpec& spec, const FixtureManifest& manifest);
std::vector<ScanRow> run_scan(const ScanSpec& spec);

inline constexpr const char* kScanCsvVersion = "# vqebench scan v1";

void write_csv(std::ostream& os, const std::vector<ScanRow>& rows, bool wall_time = true);
void write_jsonl(std::ostream& os, const std::vector<ScanRow>& rows);

struct SummaryRow {
  std::string molecule;
  std::string basis;
  std::string method;
  std::optional<double> eps;
  std::size_t n_points = 0;
  double mean_params = 0.0;
  std::size_t min_params = 0;
  std::size_t max_params = 0;
  double frac_chemical_accuracy = 0.0;
  double max_abs_err = 0.0;
};

struct RatioRow {
  std::string molecule;
  std::string basis;
  std::optional<double> eps;
  std::string numerator;
  std::string denominator;
  double ratio = 0.0;  // mean parameter count ratio
};

struct Summary {
  std::vector<SummaryRow> groups;
  std::vector<RatioRow> ratios;  // uscc / adapt at equal eps
};

Summary summarize(const std::vector<ScanRow>& rows);
nlohmann::json to_json(const Summary& s);

}  // namespace vqebench
