// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace vqebench {

using Complex = std::complex<double>;

/// Largest register a PauliString can describe (one machine word per mask).
inline constexpr std::size_t kMaxQubits = 64;

/// Default magnitude below which operator coefficients are dropped.
inline constexpr double kPruneTolerance = 1e-12;

/// Tensor product of single-qubit Pauli matrices in symplectic form.
///
/// Bit q of (x_mask, z_mask) selects the factor on qubit q:
/// (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z. The string carries no phase; as a
/// matrix it equals i^|x&z| X^x Z^z. Strings order lexicographically on
/// (z_mask, x_mask), which fixes iteration order of every QubitOperator.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n_qubits);
  PauliString(std::size_t n_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  /// Parses a word such as "XIZY"; character q is the factor on qubit q.
  static PauliString from_word(std::string_view word);
  /// Single-qubit factor `op` in {I,X,Y,Z} on `qubit`.
  static PauliString single(std::size_t n_qubits, std::size_t qubit, char op);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::uint64_t x_mask() const noexcept { return x_; }
  std::uint64_t z_mask() const noexcept { return z_; }

  char factor(std::size_t qubit) const;
  bool is_identity() const noexcept { return (x_ | z_) == 0; }
  bool is_diagonal() const noexcept { return x_ == 0; }
  std::size_t weight() const noexcept;
  bool commutes_with(const PauliString& other) const;
  /// Number of Y factors, i.e. popcount(x & z).
  int y_count() const noexcept;

  std::string word() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.z_ <=> b.z_; c != 0) return c;
    if (auto c = a.x_ <=> b.x_; c != 0) return c;
    return a.n_qubits_ <=> b.n_qubits_;
  }

 private:
  std::size_t n_qubits_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// Result of multiplying two Pauli strings: a·b = i^phase_power · string.
struct PauliProduct {
  PauliString string;
  int phase_power = 0;  // in [0, 4)

  Complex phase() const;
};

PauliProduct pauli_mul(const PauliString& a, const PauliString& b);

/// Complex-weighted sum of Pauli strings on a fixed register.
class QubitOperator {
 public:
  using TermMap = std::map<PauliString, Complex>;

  QubitOperator() = default;
  explicit QubitOperator(std::size_t n_qubits) : n_qubits_(n_qubits) {}
  QubitOperator(const PauliString& p, Complex coeff);

  static QubitOperator identity(std::size_t n_qubits, Complex coeff = 1.0);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Accumulates `coeff` onto the term for `p` (no pruning).
  void add_term(const PauliString& p, Complex coeff);
  Complex coefficient(const PauliString& p) const;

  QubitOperator& operator+=(const QubitOperator& other);
  QubitOperator& operator-=(const QubitOperator& other);
  QubitOperator& operator*=(Complex scale);

  friend QubitOperator operator+(QubitOperator a, const QubitOperator& b) { return a += b; }
  friend QubitOperator operator-(QubitOperator a, const QubitOperator& b) { return a -= b; }
  friend QubitOperator operator*(QubitOperator a, Complex s) { return a *= s; }
  friend QubitOperator operator*(Complex s, QubitOperator a) { return a *= s; }
  /// Operator product, distributed over term pairs and simplified at tolerance 0.
  friend QubitOperator operator*(const QubitOperator& a, const QubitOperator& b);

  QubitOperator adjoint() const;
  /// Sum of |coefficient|; bounds the spectral radius.
  double one_norm() const;
  bool is_hermitian(double tol = 1e-10) const;
  bool is_anti_hermitian(double tol = 1e-10) const;
  /// True if every pair of terms commutes.
  bool terms_commute() const;

  /// One line per term: `re im WORD`, in canonical term order.
  std::string to_text() const;
  static QubitOperator from_text(std::string_view text);

 private:
  std::size_t n_qubits_ = 0;
  TermMap terms_;
};

/// Merges duplicates and drops every term with |coefficient| <= tol.
QubitOperator simplify(const QubitOperator& op, double tol = kPruneTolerance);
QubitOperator commutator(const QubitOperator& a, const QubitOperator& b,
                         double tol = kPruneTolerance);

std::ostream& operator<<(std::ostream& os, const PauliString& p);
std::ostream& operator<<(std::ostream& os, const QubitOperator& op);

}  // namespace vqebench
