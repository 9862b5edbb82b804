// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vqebench/pauli.hpp"

namespace vqebench {

/// Two-electron integrals (pq|rs) in chemists' notation, stored densely.
class TwoElectronIntegrals {
 public:
  TwoElectronIntegrals() = default;
  explicit TwoElectronIntegrals(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }
  double& operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }
  /// Writes `value` into all eight permutational images of (pq|rs).
  void set_symmetric(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double value);

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct MolecularIntegrals {
  std::size_t n_spatial = 0;
  int n_alpha = 0;
  int n_beta = 0;
  double e_core = 0.0;
  Eigen::MatrixXd h1;
  TwoElectronIntegrals h2;
  std::string label;

  std::size_t n_spin_orbitals() const noexcept { return 2 * n_spatial; }
  /// Interleaved ordering: spatial p holds spin-orbitals 2p (alpha) and 2p+1 (beta).
  static std::size_t spin_orbital(std::size_t spatial, int spin) { return 2 * spatial + spin; }
  /// Occupation bitstring of the aufbau determinant.
  std::uint64_t hf_occupation() const;
  /// Throws if h1 is not symmetric or electron counts are inconsistent.
  void validate(double tol = 1e-10) const;
};

MolecularIntegrals parse_fcidump(std::string_view text);
MolecularIntegrals load_fcidump(const std::filesystem::path& path);
/// Writes the unique 8-fold h2 entries, lower-triangle h1 and the core energy.
std::string write_fcidump(const MolecularIntegrals& mi, double tol = 1e-15);

struct LadderOp {
  std::size_t mode = 0;
  bool dagger = false;

  friend bool operator==(const LadderOp&, const LadderOp&) = default;
};

struct FermionTerm {
  std::vector<LadderOp> ops;  // applied right to left, as written
  Complex coeff;
};

/// Sum of products of ladder operators; an empty product is the identity.
class FermionOperator {
 public:
  FermionOperator() = default;

  void add_term(std::vector<LadderOp> ops, Complex coeff);
  const std::vector<FermionTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t max_mode() const;  // 0 when there are no ladder operators
  FermionOperator adjoint() const;

  FermionOperator& operator+=(const FermionOperator& other);
  FermionOperator& operator*=(Complex s);

 private:
  std::vector<FermionTerm> terms_;
};

/// Electronic Hamiltonian in spin orbitals, with e_core as the identity term.
FermionOperator build_hamiltonian(const MolecularIntegrals& mi);
/// Total number operator sum_p a+_p a_p over `n_modes` spin-orbitals.
FermionOperator number_operator(std::size_t n_modes);

enum class FermionMapping { jordan_wigner, bravyi_kitaev, parity };

QubitOperator jordan_wigner(const FermionOperator& f, std::size_t n_qubits);
/// Jordan-Wigner qubit Hamiltonian of `mi`, pruned at 1e-12.
QubitOperator qubit_hamiltonian(const MolecularIntegrals& mi);
/// Mapping selector; only Jordan-Wigner is implemented.
QubitOperator map_to_qubits(const FermionOperator& f, std::size_t n_qubits,
                            FermionMapping mapping = FermionMapping::jordan_wigner);

enum class ExcitationKind { single, double_, triple, quadruple, pauli };
enum class Provenance { uccsd, generalized, uscc_connected, uscc_disconnected, qubit_pool };

std::string_view to_string(ExcitationKind kind);
std::string_view to_string(Provenance provenance);

/// Excitation a+_{v0} a+_{v1} ... a_{o1} a_{o0} moving electrons from
/// `annihilated` to `created`; realized as T - T^dagger.
struct ExcitationGenerator {
  ExcitationKind kind = ExcitationKind::single;
  std::vector<std::size_t> annihilated;
  std::vector<std::size_t> created;
  Provenance provenance = Provenance::uccsd;

  bool spin_conserving() const;
  /// T alone, without the -T^dagger part.
  FermionOperator excitation() const;
  /// e.g. "2,3<-0,1".
  std::string label() const;

  friend bool operator==(const ExcitationGenerator& a, const ExcitationGenerator& b) {
    return a.annihilated == b.annihilated && a.created == b.created;
  }
};

ExcitationKind kind_for_rank(std::size_t rank);

/// Jordan-Wigner image of T - T^dagger; anti-Hermitian and nonzero.
QubitOperator realize_generator(const ExcitationGenerator& g, std::size_t n_qubits);

/// One record of the fixture manifest.
struct FixtureEntry {
  std::string label;
  std::string molecule;
  std::string basis;
  double R = 0.0;
  std::string geometry;
  std::filesystem::path path;  // resolved against the manifest directory
  std::size_t n_qubits = 0;
  double hf_energy = 0.0;
  double fci_ground_energy = 0.0;
};

class FixtureManifest {
 public:
  static FixtureManifest load(const std::filesystem::path& manifest_path);
  /// Manifest bundled with the source tree (or $VQEBENCH_MANIFEST).
  static FixtureManifest bundled();
  static std::filesystem::path bundled_path();

  const std::vector<FixtureEntry>& entries() const noexcept { return entries_; }
  const FixtureEntry& find(std::string_view label) const;
  bool contains(std::string_view label) const;
  /// Entries for one molecule and basis (case-insensitive), sorted by geometry parameter.
  std::vector<FixtureEntry> series(std::string_view molecule, std::string_view basis) const;
  MolecularIntegrals load_integrals(std::string_view label) const;

 private:
  std::vector<FixtureEntry> entries_;
};

}  // namespace vqebench
