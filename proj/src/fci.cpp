// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqebench/fci.hpp"

#include <algorithm>

#include "vqebench/errors.hpp"

namespace vqebench {

SectorBasis SectorBasis::make(std::size_t n_qubits, int n_alpha, int n_beta) {
  if (n_alpha < 0 || n_beta < 0) return full(n_qubits);
  SectorBasis s;
  s.n_qubits = n_qubits;
  s.n_alpha = n_alpha;
  s.n_beta = n_beta;
  s.space = Subspace::particle_sector(n_qubits, n_alpha, n_beta);
  return s;
}

SectorBasis SectorBasis::full(std::size_t n_qubits) {
  SectorBasis s;
  s.n_qubits = n_qubits;
  s.space = Subspace::full(n_qubits);
  return s;
}

Statevector EigenPair::state(const SectorBasis& sector) const {
  std::vector<Complex> v(vector.data(), vector.data() + vector.size());
  return sector.space.embed(v, true);
}

std::vector<EigenPair> fci_solve(const QubitOperator& h, const SectorBasis& sector, std::size_t k,
                                 std::size_t cap) {
  const std::size_t dim = sector.dimension();
  if (dim > cap) {
    throw CapacityError("sector dimension " + std::to_string(dim) + " exceeds cap " +
                        std::to_string(cap));
  }
  if (!h.empty() && h.n_qubits() != sector.n_qubits) {
    throw DimensionError("fci_solve: Hamiltonian and sector qubit counts differ");
  }
  SparseOperator sparse;
  try {
    sparse = SparseOperator::compile(h, sector.space);
  } catch (const SectorLeakageError&) {
    throw SectorLeakageError("Hamiltonian does not conserve the sector's particle numbers");
  }
  const Eigen::MatrixXcd dense = sparse.to_dense();
  const std::size_t n_out = std::min(k, dim);
  std::vector<EigenPair> out;
  out.reserve(n_out);
  if (dim == 0) return out;
  if (dense.imag().cwiseAbs().maxCoeff() < 1e-14) {
    const Eigen::MatrixXd real = dense.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real);
    if (es.info() != Eigen::Success) throw Error("FCI eigensolver failed");
    for (std::size_t i = 0; i < n_out; ++i) {
      const auto c = static_cast<Eigen::Index>(i);
      out.push_back({es.eigenvalues()(c), es.eigenvectors().col(c).cast<Complex>()});
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
    if (es.info() != Eigen::Success) throw Error("FCI eigensolver failed");
    for (std::size_t i = 0; i < n_out; ++i) {
      const auto c = static_cast<Eigen::Index>(i);
      out.push_back({es.eigenvalues()(c), es.eigenvectors().col(c)});
    }
  }
  return out;
}

}  // namespace vqebench
