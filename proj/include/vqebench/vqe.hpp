// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vqebench/fermion.hpp"
#include "vqebench/optimizer.hpp"
#include "vqebench/pauli.hpp"
#include "vqebench/pools.hpp"
#include "vqebench/statevector.hpp"
#include "vqebench/subspace.hpp"

namespace vqebench {

/// Hamiltonian, reference and generators compiled onto one subspace: the
/// reference's particle sector when everything conserves it, else the full
/// register.
class CompiledProblem {
 public:
  CompiledProblem(const QubitOperator& h, const Statevector& reference,
                  std::span<const QubitOperator> operators, ExpMethod method = ExpMethod::exact);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  const Subspace& space() const noexcept { return space_; }
  const SparseOperator& hamiltonian() const noexcept { return h_; }
  const SubspaceVector& reference() const noexcept { return reference_; }
  std::size_t n_operators() const noexcept { return kernels_.size(); }
  const GeneratorKernel& kernel(std::size_t i) const { return kernels_.at(i); }

  Statevector embed(std::span<const Complex> v) const { return space_.embed(v, true); }
  /// Restricts a full-register state; throws SectorLeakageError if it has
  /// weight outside the subspace.
  SubspaceVector restrict(const Statevector& s) const { return space_.restrict(s, 1e-8); }

 private:
  std::size_t n_qubits_ = 0;
  Subspace space_;
  SparseOperator h_;
  SubspaceVector reference_;
  std::vector<GeneratorKernel> kernels_;
};

/// A scalar functional of the prepared state. When `seed` is non-null it
/// receives lambda with dC = 2 Re <lambda|d psi>.
using CostFunction = std::function<double(const SubspaceVector& psi, SubspaceVector* seed)>;

CostFunction energy_cost(const CompiledProblem& problem);

/// prod_k exp(theta_k A_{ops[k]}) |reference>, first operator applied first.
SubspaceVector prepare_state(const CompiledProblem& problem, std::span<const std::size_t> ops,
                             std::span<const double> theta);
/// Cost and, if `grad` is non-empty, its exact gradient by one reverse sweep.
double evaluate_cost(const CompiledProblem& problem, std::span<const std::size_t> ops,
                     std::span<const double> theta, std::span<double> grad,
                     const CostFunction& cost);

struct EnergyGradient {
  double energy = 0.0;
  std::vector<double> gradient;
};

/// Energy of prod_k exp(theta_k A_k)|reference> and its analytic gradient.
EnergyGradient energy_and_gradient(const QubitOperator& h, const Statevector& reference,
                                   std::span<const QubitOperator> ansatz,
                                   std::span<const double> theta);

/// Pool gradients <psi|[H, A_k]|psi> from explicit commutators. Slow; kept as
/// a cross-check of the state-based gradients ADAPT uses.
std::vector<double> pool_gradients_commutator(const QubitOperator& h, const Statevector& state,
                                              std::span<const QubitOperator> pool);

/// One ADAPT gradient measurement, taken before the selected operator is added.
struct AdaptStep {
  std::size_t n_parameters = 0;
  double energy = 0.0;
  double gradient_norm = 0.0;
  double max_gradient = 0.0;
  std::optional<std::size_t> selected;
  std::vector<std::size_t> operator_ids;
  std::vector<double> parameters;
};

/// Diagonal Jastrow factor 1 - sum_i alpha_i Z_i - sum_{i<j} lambda_ij Z_i Z_j.
struct JastrowParams {
  std::vector<double> alpha;
  std::vector<double> lambda;  // (i, j) pairs with i < j in row-major order; empty if one-body
};

struct VQEResult {
  std::string method;
  double energy = 0.0;
  double objective = 0.0;  // optimized functional (energy, penalized or folded cost)
  std::vector<double> parameters;
  std::vector<std::size_t> operator_ids;
  std::vector<std::string> operator_labels;
  Statevector state;  // absent for results sliced from a longer ADAPT run
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::vector<std::string> flags;
  std::vector<AdaptStep> trace;
  JastrowParams jastrow;

  std::string status() const { return converged ? "converged" : "unconverged"; }
  bool has_flag(std::string_view f) const;
};

/// Fixed-ansatz VQE; theta0 defaults to zeros.
VQEResult minimize(const QubitOperator& h, const Statevector& reference,
                   std::span<const QubitOperator> ansatz, const OptimizerConfig& config,
                   std::span<const double> theta0 = {});

struct AdaptOptions {
  double eps = 1e-3;             // stop when ||pool gradient|| < eps
  std::size_t max_operators = 500;
};

VQEResult adapt_vqe(const QubitOperator& h, const Statevector& reference, const OperatorPool& pool,
                    const AdaptOptions& options, const OptimizerConfig& config);

/// The result a run with threshold `eps` would have produced, read off the
/// trace of a run with a threshold no larger than `eps`.
VQEResult adapt_at_threshold(const VQEResult& run, double eps);

VQEResult uscc_vqe(const QubitOperator& h, const Statevector& reference,
                   const MolecularIntegrals& mi, double eps, const OptimizerConfig& config,
                   int max_round = 3);

struct NuVqeOptions {
  bool two_body = false;
  std::vector<double> theta0;  // defaults to zeros
  double min_norm = 1e-10;     // below this the Jastrow-weighted state counts as collapsed
};

/// Rayleigh quotient of J U(theta)|ref> over x = [theta, alpha, lambda], with
/// its analytic gradient. `problem` must outlive the returned objective.
Objective nu_objective(const CompiledProblem& problem, std::vector<std::size_t> ops, bool two_body,
                       double min_norm = 1e-10);

/// VQE with a non-unitary Jastrow factor applied after the circuit; the
/// energy is the Rayleigh quotient of the weighted state.
VQEResult nu_vqe(const QubitOperator& h, const Statevector& reference,
                 std::span<const QubitOperator> ansatz, const NuVqeOptions& options,
                 const OptimizerConfig& config);

/// Two-body fragment expansion sum_I E_I + sum_{I<J} (E_IJ - E_I - E_J).
double fmo_assemble(std::span<const double> monomer_energies,
                    const std::map<std::pair<std::size_t, std::size_t>, double>& dimer_energies);

}  // namespace vqebench
