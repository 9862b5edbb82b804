// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "vqebench/pauli.hpp"
#include "vqebench/statevector.hpp"
#include "vqebench/subspace.hpp"

namespace vqebench {

/// Determinants with fixed alpha (even qubits) and beta (odd qubits) counts.
/// A sector with negative counts spans the whole register.
struct SectorBasis {
  std::size_t n_qubits = 0;
  int n_alpha = -1;
  int n_beta = -1;
  Subspace space;

  static SectorBasis make(std::size_t n_qubits, int n_alpha, int n_beta);
  static SectorBasis full(std::size_t n_qubits);
  std::size_t dimension() const noexcept { return space.dimension(); }
};

struct EigenPair {
  double energy = 0.0;
  Eigen::VectorXcd vector;  // amplitudes in sector order

  Statevector state(const SectorBasis& sector) const;
};

inline constexpr std::size_t kDefaultFciCap = 20000;
inline constexpr std::size_t kAllLevels = std::numeric_limits<std::size_t>::max();

/// Lowest `k` eigenpairs of `h` in `sector`, ascending. Degenerate levels
/// within 1e-10 come back in arbitrary order.
std::vector<EigenPair> fci_solve(const QubitOperator& h, const SectorBasis& sector,
                                 std::size_t k = kAllLevels, std::size_t cap = kDefaultFciCap);

}  // namespace vqebench
