// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vqebench/pauli.hpp"
#include "vqebench/statevector.hpp"

namespace vqebench {

/// Amplitudes over the states of a Subspace, in subspace order.
using SubspaceVector = std::vector<Complex>;

/// Sorted set of computational basis states closed under the operators of a
/// problem. Compiled kernels act on vectors of subspace amplitudes instead of
/// the full 2^n register.
class Subspace {
 public:
  Subspace() = default;

  static Subspace full(std::size_t n_qubits);
  static Subspace from_states(std::size_t n_qubits, std::vector<std::uint64_t> states);
  /// States with n_alpha even-qubit and n_beta odd-qubit occupations.
  static Subspace particle_sector(std::size_t n_qubits, int n_alpha, int n_beta);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return full_ ? (std::size_t{1} << n_qubits_) : states_.size(); }
  bool is_full() const noexcept { return full_; }
  std::uint64_t state(std::size_t pos) const { return full_ ? pos : states_[pos]; }
  std::optional<std::size_t> position(std::uint64_t basis_state) const;

  /// Amplitudes of `s` on this subspace; throws SectorLeakageError if `s` has
  /// weight outside it beyond `tol`.
  SubspaceVector restrict(const Statevector& s, double tol = 1e-12) const;
  Statevector embed(std::span<const Complex> v, bool normalized = true) const;
  SubspaceVector basis_vector(std::uint64_t basis_state) const;

 private:
  std::size_t n_qubits_ = 0;
  bool full_ = false;
  std::vector<std::uint64_t> states_;
};

/// Sparse row-compressed matrix of a QubitOperator restricted to a Subspace.
class SparseOperator {
 public:
  SparseOperator() = default;

  /// Throws SectorLeakageError if `op` maps a subspace state outside it.
  static SparseOperator compile(const QubitOperator& op, const Subspace& space,
                                double drop_tol = 1e-14);
  static SparseOperator diagonal(std::span<const Complex> values);

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t nnz() const noexcept { return vals_.size(); }

  /// out = A in.
  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  SubspaceVector apply(std::span<const Complex> in) const;
  /// <v|A|v>.
  Complex expectation(std::span<const Complex> v) const;
  Eigen::MatrixXcd to_dense() const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<Complex> vals_;
};

/// An anti-Hermitian generator compiled for repeated exp(theta A) application.
///
/// Generators with spectrum in {0, +-i w} (all fermionic excitations and
/// single Pauli strings) use the closed form
/// exp(theta A) = 1 + sin(w theta)/w A + (1 - cos(w theta))/w^2 A^2.
/// Otherwise A is split into mutually commuting groups of terms when
/// possible, and anything left falls back to scaled Taylor expansion.
class GeneratorKernel {
 public:
  GeneratorKernel() = default;
  GeneratorKernel(const QubitOperator& generator, const Subspace& space,
                  ExpMethod method = ExpMethod::exact);

  std::size_t dimension() const noexcept { return a_.dimension(); }
  bool closed_form() const noexcept { return closed_form_; }
  /// Exponential factors applied in sequence; 1 unless A was split.
  std::size_t n_factors() const noexcept { return factors_.empty() ? 1 : factors_.size(); }
  const SparseOperator& matrix() const noexcept { return a_; }

  /// out = A in.
  void apply(std::span<const Complex> in, std::span<Complex> out) const { a_.apply(in, out); }
  /// v <- exp(theta A) v; `scratch` is resized as needed.
  void apply_exp(SubspaceVector& v, double theta, std::vector<SubspaceVector>& scratch) const;

 private:
  SparseOperator a_;
  bool closed_form_ = false;
  double omega_ = 1.0;
  double one_norm_ = 0.0;
  std::vector<GeneratorKernel> factors_;  // product form: Trotter or commuting components
};

double dot_real(std::span<const Complex> a, std::span<const Complex> b);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm_squared(std::span<const Complex> v);

}  // namespace vqebench
