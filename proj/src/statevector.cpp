// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqebench/statevector.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "vqebench/errors.hpp"

namespace vqebench {

namespace {

constexpr std::size_t kMaxStatevectorQubits = 30;

void require_same_qubits(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": qubit count mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

inline double parity_sign(std::uint64_t bits) { return (std::popcount(bits) & 1) ? -1.0 : 1.0; }

inline Complex i_power(int k) {
  static constexpr Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPowers[k & 3];
}

/// Indices of nonzero amplitudes, or every index when the state is dense.
std::vector<std::uint64_t> support(const Statevector& s) {
  std::vector<std::uint64_t> nz;
  const auto amps = s.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (amps[i] != Complex{}) nz.push_back(i);
  }
  return nz;
}

}  // namespace

Statevector::Statevector(std::size_t n_qubits)
    : n_qubits_(n_qubits), normalized_(true) {
  if (n_qubits > kMaxStatevectorQubits) {
    throw DimensionError("statevector limited to 30 qubits");
  }
  amps_.assign(std::size_t{1} << n_qubits, Complex{});
  amps_[0] = 1.0;
}

Statevector::Statevector(std::size_t n_qubits, std::vector<Complex> amplitudes, bool normalized)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)), normalized_(normalized) {
  if (n_qubits > kMaxStatevectorQubits || amps_.size() != (std::size_t{1} << n_qubits)) {
    throw DimensionError("amplitude count is not 2^n_qubits");
  }
}

double Statevector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

void Statevector::normalize() {
  const double n = std::sqrt(norm_squared());
  if (n == 0.0) throw Error("cannot normalize the zero vector");
  for (auto& a : amps_) a /= n;
  normalized_ = true;
}

void Statevector::dump(const std::filesystem::path& path) const {
  static_assert(std::endian::native == std::endian::little, "dump assumes little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(amps_.data()),
            static_cast<std::streamsize>(amps_.size() * sizeof(Complex)));
}

Statevector Statevector::load_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw InputError("cannot read " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  const std::size_t count = bytes / sizeof(Complex);
  if (count == 0 || !std::has_single_bit(count) || bytes % sizeof(Complex) != 0) {
    throw ParseError("dump size is not a power-of-two amplitude count", 0);
  }
  std::vector<Complex> amps(count);
  in.seekg(0);
  in.read(reinterpret_cast<char*>(amps.data()), static_cast<std::streamsize>(bytes));
  Statevector s(static_cast<std::size_t>(std::countr_zero(count)), std::move(amps), false);
  s.set_normalized(std::abs(s.norm_squared() - 1.0) < 1e-10);
  return s;
}

Statevector hf_state(std::size_t n_qubits, std::uint64_t occupation) {
  if (n_qubits < 64 && (occupation >> n_qubits) != 0) {
    throw DimensionError("occupation has bits beyond qubit count");
  }
  Statevector s(n_qubits);
  s[0] = 0.0;
  s[occupation] = 1.0;
  return s;
}

void apply_pauli_exp_inplace(Statevector& state, const PauliString& p, double theta) {
  require_same_qubits(state.n_qubits(), p.n_qubits(), "apply_pauli_exp");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  const Complex is_ph = Complex(0, s) * i_power(p.y_count());
  auto amps = state.amplitudes();
  const std::uint64_t dim = amps.size();
  if (x == 0) {
    for (std::uint64_t b = 0; b < dim; ++b) amps[b] *= c + is_ph * parity_sign(b & z);
    return;
  }
  const std::uint64_t high = std::uint64_t{1} << (63 - std::countl_zero(x));
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (b & high) continue;
    const std::uint64_t t = b ^ x;
    const Complex a0 = amps[b];
    const Complex a1 = amps[t];
    // P|b> = i^y (-1)^{|b&z|} |b^x>
    amps[b] = c * a0 + is_ph * parity_sign(t & z) * a1;
    amps[t] = c * a1 + is_ph * parity_sign(b & z) * a0;
  }
}

Statevector apply_pauli_exp(const Statevector& state, const PauliString& p, double theta) {
  Statevector out = state;
  apply_pauli_exp_inplace(out, p, theta);
  return out;
}

Statevector apply_pauli(const Statevector& state, const PauliString& p) {
  require_same_qubits(state.n_qubits(), p.n_qubits(), "apply_pauli");
  Statevector out(state.n_qubits(), std::vector<Complex>(state.dimension()), state.normalized());
  const Complex ph = i_power(p.y_count());
  const auto in = state.amplitudes();
  auto dst = out.amplitudes();
  for (std::uint64_t b = 0; b < in.size(); ++b) {
    dst[b ^ p.x_mask()] = ph * parity_sign(b & p.z_mask()) * in[b];
  }
  return out;
}

Statevector apply_operator(const Statevector& state, const QubitOperator& op) {
  if (!op.empty()) require_same_qubits(state.n_qubits(), op.n_qubits(), "apply_operator");
  Statevector out(state.n_qubits(), std::vector<Complex>(state.dimension()), false);
  const auto in = state.amplitudes();
  auto dst = out.amplitudes();
  const std::vector<std::uint64_t> nz = support(state);
  for (const auto& [p, coeff] : op.terms()) {
    const Complex c = coeff * i_power(p.y_count());
    const std::uint64_t x = p.x_mask();
    const std::uint64_t z = p.z_mask();
    for (std::uint64_t b : nz) dst[b ^ x] += c * parity_sign(b & z) * in[b];
  }
  return out;
}

Complex expectation(const Statevector& state, const QubitOperator& op, bool raw) {
  if (!raw && !state.normalized()) {
    throw Error("expectation of a non-normalized state requires raw=true");
  }
  if (!op.empty()) require_same_qubits(state.n_qubits(), op.n_qubits(), "expectation");
  const auto in = state.amplitudes();
  const std::vector<std::uint64_t> nz = support(state);
  Complex total{};
  for (const auto& [p, coeff] : op.terms()) {
    const Complex c = coeff * i_power(p.y_count());
    const std::uint64_t x = p.x_mask();
    const std::uint64_t z = p.z_mask();
    Complex acc{};
    for (std::uint64_t b : nz) acc += std::conj(in[b ^ x]) * parity_sign(b & z) * in[b];
    total += c * acc;
  }
  return total;
}

Complex overlap(const Statevector& a, const Statevector& b) {
  require_same_qubits(a.n_qubits(), b.n_qubits(), "overlap");
  Complex s{};
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

namespace {

void require_anti_hermitian(const QubitOperator& a) {
  if (!a.is_anti_hermitian(1e-10)) {
    throw InvalidGeneratorError("ansatz generator is not anti-Hermitian");
  }
}

/// exp(theta A)|psi> by scaling and Taylor expansion, truncation below 1e-13 per step.
void taylor_exp_inplace(Statevector& state, const QubitOperator& a, double theta) {
  const double bound = std::abs(theta) * a.one_norm();
  const auto steps = static_cast<int>(std::max(1.0, std::ceil(bound / 0.5)));
  const double h = theta / steps;
  for (int s = 0; s < steps; ++s) {
    Statevector term = state;
    Statevector acc = state;
    for (int k = 1; k < 60; ++k) {
      term = apply_operator(term, a);
      for (auto& v : term.amplitudes()) v *= h / k;
      for (std::size_t i = 0; i < acc.dimension(); ++i) acc[i] += term[i];
      if (std::sqrt(term.norm_squared()) < 1e-16) break;
    }
    state = std::move(acc);
  }
}

}  // namespace

Statevector apply_generator_exp(const Statevector& state, const QubitOperator& generator,
                                double theta, ExpMethod method) {
  require_anti_hermitian(generator);
  Statevector out = state;
  if (generator.empty() || theta == 0.0) return out;
  require_same_qubits(state.n_qubits(), generator.n_qubits(), "apply_generator_exp");
  // Each term is (i a) P with real a, so exp(theta i a P) is a Pauli rotation.
  auto rotate_all = [&] {
    for (const auto& [p, c] : generator.terms()) apply_pauli_exp_inplace(out, p, theta * c.imag());
  };
  if (method == ExpMethod::trotter || generator.size() == 1 || generator.terms_commute()) {
    rotate_all();
  } else {
    taylor_exp_inplace(out, generator, theta);
  }
  out.set_normalized(state.normalized());
  return out;
}

Statevector prepare_ansatz(const Statevector& reference, std::span<const AnsatzTerm> ansatz,
                           ExpMethod method) {
  for (const auto& t : ansatz) require_anti_hermitian(t.generator);
  Statevector s = reference;
  for (const auto& t : ansatz) s = apply_generator_exp(s, t.generator, t.angle, method);
  return s;
}

}  // namespace vqebench
