// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "vqebench/pauli.hpp"

namespace vqebench {

/// 2^n complex amplitudes; bit q of a basis index is the occupation of qubit q.
class Statevector {
 public:
  Statevector() = default;
  /// |0...0>.
  explicit Statevector(std::size_t n_qubits);
  Statevector(std::size_t n_qubits, std::vector<Complex> amplitudes, bool normalized);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  bool normalized() const noexcept { return normalized_; }
  void set_normalized(bool flag) noexcept { normalized_ = flag; }

  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  std::span<Complex> amplitudes() noexcept { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }
  Complex& operator[](std::size_t i) { return amps_[i]; }

  double norm_squared() const;
  /// Rescales to unit norm and sets the normalized flag.
  void normalize();

  /// Little-endian pairs of IEEE doubles (re, im); debugging aid only.
  void dump(const std::filesystem::path& path) const;
  static Statevector load_dump(const std::filesystem::path& path);

 private:
  std::size_t n_qubits_ = 0;
  std::vector<Complex> amps_;
  bool normalized_ = false;
};

/// Basis state |occupation>.
Statevector hf_state(std::size_t n_qubits, std::uint64_t occupation);

/// exp(i theta P)|psi> = cos(theta)|psi> + i sin(theta) P|psi>.
Statevector apply_pauli_exp(const Statevector& state, const PauliString& p, double theta);
void apply_pauli_exp_inplace(Statevector& state, const PauliString& p, double theta);

/// P|psi>.
Statevector apply_pauli(const Statevector& state, const PauliString& p);
/// sum_j alpha_j P_j |psi>; result is not flagged normalized.
Statevector apply_operator(const Statevector& state, const QubitOperator& op);

/// <psi|op|psi>. Requires a normalized state unless `raw` is set.
Complex expectation(const Statevector& state, const QubitOperator& op, bool raw = false);
/// sum_i conj(a_i) b_i.
Complex overlap(const Statevector& a, const Statevector& b);

/// How exp(theta A) is applied for one generator.
enum class ExpMethod {
  exact,      // closed form when available, else commuting product, else Taylor
  trotter,    // product of single-string exponentials in term order
};

struct AnsatzTerm {
  QubitOperator generator;  // anti-Hermitian
  double angle = 0.0;
};

/// exp(theta A)|psi> for anti-Hermitian A.
Statevector apply_generator_exp(const Statevector& state, const QubitOperator& generator,
                                double theta, ExpMethod method = ExpMethod::exact);

/// prod_k exp(theta_k A_k)|reference>, applied in list order.
Statevector prepare_ansatz(const Statevector& reference, std::span<const AnsatzTerm> ansatz,
                           ExpMethod method = ExpMethod::exact);

}  // namespace vqebench
