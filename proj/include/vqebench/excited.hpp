// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vqebench/fermion.hpp"
#include "vqebench/optimizer.hpp"
#include "vqebench/pauli.hpp"
#include "vqebench/statevector.hpp"
#include "vqebench/vqe.hpp"

namespace vqebench {

/// Ansatz generators used for excited level `level` (0 = ground).
using AnsatzFactory = std::function<std::vector<QubitOperator>(std::size_t level)>;

/// 2 sum_j |alpha_j| over non-identity terms: an upper bound on the spectral width.
double default_vqd_beta(const QubitOperator& h);

struct VqdOptions {
  std::vector<double> betas;  // penalty per earlier level; empty uses default_vqd_beta
  int max_retries = 3;        // beta doublings after a collapse
  double collapse_overlap = 0.5;
  int starts = 3;             // optimizer starts per level, best kept
  double init_scale = 0.1;    // random initial angles in [-s, s]
};

/// Variational quantum deflation: level i minimizes
/// <H> + sum_{j<i} beta_j |<psi_j|psi>|^2.
std::vector<VQEResult> vqd(const QubitOperator& h, const Statevector& reference,
                           const AnsatzFactory& ansatz, std::size_t n_levels,
                           const VqdOptions& options, const OptimizerConfig& config);

struct FoldedOptions {
  int starts = 3;
  double init_scale = 0.5;
};

/// Minimizes <(H - omega)^2>, landing on the eigenstate nearest omega.
VQEResult fs_vqe(const QubitOperator& h, const Statevector& reference,
                 std::span<const QubitOperator> ansatz, double omega,
                 const FoldedOptions& options, const OptimizerConfig& config);

/// Excitation operators E_mu for the equation-of-motion step.
struct EomBasis {
  std::vector<QubitOperator> operators;
  std::vector<std::string> labels;

  /// Jordan-Wigner images of the HF-referenced singles and doubles.
  static EomBasis singles_doubles(const MolecularIntegrals& mi);
};

struct QeomReport {
  Eigen::MatrixXcd M, Q, V, W;  // before pruning
  std::size_t pruned = 0;       // null directions of V removed
  double max_imaginary = 0.0;   // largest |Im E| among returned roots
};

/// Positive excitation energies from the qEOM pencil built on `ground`.
std::vector<double> qeom(const QubitOperator& h, const Statevector& ground, const EomBasis& basis,
                         QeomReport* report = nullptr);

}  // namespace vqebench
