// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace vqebench {

enum class OptimizerMethod { bfgs, nelder_mead };

std::string_view to_string(OptimizerMethod m);
OptimizerMethod parse_optimizer_method(std::string_view name);

struct OptimizerConfig {
  OptimizerMethod method = OptimizerMethod::bfgs;
  double energy_tol = 1e-10;  // |f_k - f_{k-1}| at convergence
  double grad_tol = 1e-8;     // ||grad|| at convergence
  std::size_t max_evaluations = 20000;
  int restarts = 3;           // random perturbations after a stalled line search
  double restart_scale = 0.05;
  std::uint64_t seed = 7;
};

/// Returns f(x); writes the gradient into `grad` when it is non-empty.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct OptimizeResult {
  std::vector<double> x;  // best point seen
  double value = 0.0;
  double gradient_norm = 0.0;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  int restarts_used = 0;
  bool converged = false;
};

/// Minimizes `f` from `x0`. Never throws on non-convergence; the result
/// carries the best point seen and `converged = false` instead.
OptimizeResult minimize_objective(const Objective& f, std::vector<double> x0,
                                  const OptimizerConfig& config);

}  // namespace vqebench
