// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vqebench/fermion.hpp"
#include "vqebench/pauli.hpp"

namespace vqebench {

enum class PoolFlavor { uccsd, generalized, qubit, uscc };

std::string_view to_string(PoolFlavor flavor);
PoolFlavor parse_pool_flavor(std::string_view name);

struct PoolEntry {
  ExcitationGenerator generator;  // empty index lists for qubit-pool strings
  QubitOperator op;               // anti-Hermitian
  std::string label;
  std::optional<double> screening_value;
  int round = 0;  // USCC inclusion round, 0 otherwise
};

struct OperatorPool {
  PoolFlavor flavor = PoolFlavor::uccsd;
  std::size_t n_qubits = 0;
  std::vector<PoolEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
  std::vector<QubitOperator> operators() const;
};

/// Occupied-to-virtual spin-conserving singles and doubles of the HF
/// determinant, singles first.
OperatorPool uccsd_pool(const MolecularIntegrals& mi);
/// All spin-conserving singles p<q and doubles between distinct orbital pairs,
/// regardless of occupation.
OperatorPool generalized_pool(const MolecularIntegrals& mi);
/// One entry i*P per distinct non-diagonal Pauli string of the base pool.
OperatorPool qubit_pool(const OperatorPool& base);
/// Pairs each excitation with its alpha<->beta mirror as (A + A')/sqrt(2);
/// excitations that are their own mirror stay as they are.
OperatorPool spin_complemented(const OperatorPool& base);
/// uccsd | generalized | spin-complemented (sc) | qubit. The USCC pool needs
/// a threshold and is built by uscc_screen instead.
OperatorPool named_pool(const MolecularIntegrals& mi, std::string_view name);

/// <pq||rs> over spin-orbitals (physicists' notation, antisymmetrized).
double antisymmetrized_integral(const MolecularIntegrals& mi, std::size_t p, std::size_t q,
                                std::size_t r, std::size_t s);
/// Diagonal of the HF Fock operator over spin-orbitals.
std::vector<double> spin_orbital_fock_diagonal(const MolecularIntegrals& mi);

/// Coupled-cluster-style amplitude estimates over the HF reference.
struct AmplitudeEstimate {
  std::vector<std::size_t> occupied;  // spin-orbitals, ascending
  std::vector<std::size_t> virtuals;  // spin-orbitals, ascending
  Eigen::MatrixXd t1;                 // occupied x virtual
  std::vector<double> t2;             // [i][j][a][b] over occupied/virtual positions
  std::size_t degenerate_denominators = 0;
  std::string source;

  double double_amplitude(std::size_t i, std::size_t j, std::size_t a, std::size_t b) const;
};

/// First-order (MP2) doubles; t1 vanishes for canonical HF orbitals.
AmplitudeEstimate mp2_amplitudes(const MolecularIntegrals& mi);
double mp2_correlation_energy(const MolecularIntegrals& mi, const AmplitudeEstimate& t);

/// Screened singles/doubles plus disconnected triples and quadruples whose
/// importance estimate clears eps / 2^(round-1).
OperatorPool uscc_screen(const MolecularIntegrals& mi, const AmplitudeEstimate& t, double eps,
                         int max_round = 3);

/// One JSON object per line: id, kind, label, provenance, n_terms, screening value.
std::string pool_to_jsonl(const OperatorPool& pool);

}  // namespace vqebench
