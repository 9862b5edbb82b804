// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqebench/pauli.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "vqebench/errors.hpp"

namespace vqebench {

namespace {

void require_fits(std::size_t n_qubits) {
  if (n_qubits > kMaxQubits) {
    throw DimensionError("PauliString supports at most 64 qubits, got " +
                         std::to_string(n_qubits));
  }
}

std::uint64_t low_mask(std::size_t n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1); }

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": qubit count mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

PauliString::PauliString(std::size_t n_qubits) : n_qubits_(n_qubits) { require_fits(n_qubits); }

PauliString::PauliString(std::size_t n_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
    : n_qubits_(n_qubits), x_(x_mask), z_(z_mask) {
  require_fits(n_qubits);
  if (((x_ | z_) & ~low_mask(n_qubits)) != 0) {
    throw DimensionError("PauliString mask has bits beyond qubit count " +
                         std::to_string(n_qubits));
  }
}

PauliString PauliString::from_word(std::string_view word) {
  require_fits(word.size());
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (std::size_t q = 0; q < word.size(); ++q) {
    const std::uint64_t bit = 1ULL << q;
    switch (word[q]) {
      case 'I': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default:
        throw ParseError(std::string("invalid Pauli factor '") + word[q] + "'", 0);
    }
  }
  return PauliString(word.size(), x, z);
}

PauliString PauliString::single(std::size_t n_qubits, std::size_t qubit, char op) {
  if (qubit >= n_qubits) throw DimensionError("qubit index out of range");
  std::string word(n_qubits, 'I');
  word[qubit] = op;
  return from_word(word);
}

char PauliString::factor(std::size_t qubit) const {
  if (qubit >= n_qubits_) throw DimensionError("qubit index out of range");
  const bool x = (x_ >> qubit) & 1ULL;
  const bool z = (z_ >> qubit) & 1ULL;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::size_t PauliString::weight() const noexcept {
  return static_cast<std::size_t>(std::popcount(x_ | z_));
}

int PauliString::y_count() const noexcept { return std::popcount(x_ & z_); }

bool PauliString::commutes_with(const PauliString& other) const {
  require_same(n_qubits_, other.n_qubits_, "commutes_with");
  // Symplectic form: anticommuting positions counted mod 2.
  const int s = std::popcount(x_ & other.z_) + std::popcount(z_ & other.x_);
  return (s & 1) == 0;
}

std::string PauliString::word() const {
  std::string w(n_qubits_, 'I');
  for (std::size_t q = 0; q < n_qubits_; ++q) w[q] = factor(q);
  return w;
}

Complex PauliProduct::phase() const {
  static constexpr Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPowers[phase_power & 3];
}

PauliProduct pauli_mul(const PauliString& a, const PauliString& b) {
  require_same(a.n_qubits(), b.n_qubits(), "pauli_mul");
  // a = i^|x1z1| X^x1 Z^z1, b = i^|x2z2| X^x2 Z^z2 and Z^z1 X^x2 = (-1)^|z1x2| X^x2 Z^z1.
  const std::uint64_t x = a.x_mask() ^ b.x_mask();
  const std::uint64_t z = a.z_mask() ^ b.z_mask();
  int power = a.y_count() + b.y_count() + 2 * std::popcount(a.z_mask() & b.x_mask()) -
              std::popcount(x & z);
  power = ((power % 4) + 4) % 4;
  return {PauliString(a.n_qubits(), x, z), power};
}

QubitOperator::QubitOperator(const PauliString& p, Complex coeff) : n_qubits_(p.n_qubits()) {
  terms_.emplace(p, coeff);
}

QubitOperator QubitOperator::identity(std::size_t n_qubits, Complex coeff) {
  return QubitOperator(PauliString(n_qubits), coeff);
}

void QubitOperator::add_term(const PauliString& p, Complex coeff) {
  if (terms_.empty() && n_qubits_ == 0) n_qubits_ = p.n_qubits();
  require_same(n_qubits_, p.n_qubits(), "add_term");
  auto [it, inserted] = terms_.try_emplace(p, coeff);
  if (!inserted) it->second += coeff;
}

Complex QubitOperator::coefficient(const PauliString& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? Complex{} : it->second;
}

QubitOperator& QubitOperator::operator+=(const QubitOperator& other) {
  if (empty() && n_qubits_ == 0) n_qubits_ = other.n_qubits_;
  require_same(n_qubits_, other.n_qubits_, "operator+");
  for (const auto& [p, c] : other.terms_) add_term(p, c);
  return *this;
}

QubitOperator& QubitOperator::operator-=(const QubitOperator& other) {
  if (empty() && n_qubits_ == 0) n_qubits_ = other.n_qubits_;
  require_same(n_qubits_, other.n_qubits_, "operator-");
  for (const auto& [p, c] : other.terms_) add_term(p, -c);
  return *this;
}

QubitOperator& QubitOperator::operator*=(Complex scale) {
  for (auto& [p, c] : terms_) c *= scale;
  return *this;
}

QubitOperator operator*(const QubitOperator& a, const QubitOperator& b) {
  require_same(a.n_qubits_, b.n_qubits_, "operator*");
  QubitOperator out(a.n_qubits_);
  for (const auto& [pa, ca] : a.terms_) {
    for (const auto& [pb, cb] : b.terms_) {
      const PauliProduct prod = pauli_mul(pa, pb);
      out.add_term(prod.string, ca * cb * prod.phase());
    }
  }
  return simplify(out, 0.0);
}

QubitOperator QubitOperator::adjoint() const {
  QubitOperator out(n_qubits_);
  for (const auto& [p, c] : terms_) out.terms_.emplace(p, std::conj(c));
  return out;
}

double QubitOperator::one_norm() const {
  double s = 0.0;
  for (const auto& [p, c] : terms_) s += std::abs(c);
  return s;
}

bool QubitOperator::is_hermitian(double tol) const {
  for (const auto& [p, c] : terms_) {
    if (std::abs(c.imag()) > tol) return false;
  }
  return true;
}

bool QubitOperator::is_anti_hermitian(double tol) const {
  for (const auto& [p, c] : terms_) {
    if (std::abs(c.real()) > tol) return false;
  }
  return true;
}

bool QubitOperator::terms_commute() const {
  std::vector<PauliString> strings;
  strings.reserve(terms_.size());
  for (const auto& [p, c] : terms_) strings.push_back(p);
  for (std::size_t i = 0; i < strings.size(); ++i) {
    for (std::size_t j = i + 1; j < strings.size(); ++j) {
      if (!strings[i].commutes_with(strings[j])) return false;
    }
  }
  return true;
}

std::string QubitOperator::to_text() const {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& [p, c] : terms_) os << c.real() << ' ' << c.imag() << ' ' << p.word() << '\n';
  return os.str();
}

QubitOperator QubitOperator::from_text(std::string_view text) {
  QubitOperator out;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    double re = 0.0;
    double im = 0.0;
    std::string word;
    if (!(ls >> re)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError("expected `re im WORD`", line_no);
    }
    if (!(ls >> im >> word)) throw ParseError("expected `re im WORD`", line_no);
    PauliString p;
    try {
      p = PauliString::from_word(word);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!out.empty() && p.n_qubits() != out.n_qubits()) {
      throw ParseError("inconsistent word length", line_no);
    }
    out.add_term(p, {re, im});
  }
  return out;
}

QubitOperator simplify(const QubitOperator& op, double tol) {
  QubitOperator out(op.n_qubits());
  for (const auto& [p, c] : op.terms()) {
    if (std::abs(c) > tol) out.add_term(p, c);
  }
  return out;
}

QubitOperator commutator(const QubitOperator& a, const QubitOperator& b, double tol) {
  require_same(a.n_qubits(), b.n_qubits(), "commutator");
  QubitOperator out(a.n_qubits());
  for (const auto& [pa, ca] : a.terms()) {
    for (const auto& [pb, cb] : b.terms()) {
      if (pa.commutes_with(pb)) continue;
      // Anticommuting strings: ab - ba = 2ab.
      const PauliProduct prod = pauli_mul(pa, pb);
      out.add_term(prod.string, 2.0 * ca * cb * prod.phase());
    }
  }
  return simplify(out, tol);
}

std::ostream& operator<<(std::ostream& os, const PauliString& p) { return os << p.word(); }

std::ostream& operator<<(std::ostream& os, const QubitOperator& op) { return os << op.to_text(); }

}  // namespace vqebench
