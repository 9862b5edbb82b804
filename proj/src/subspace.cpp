// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqebench/subspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "vqebench/errors.hpp"

namespace vqebench {

namespace {

inline double parity_sign(std::uint64_t bits) { return (std::popcount(bits) & 1) ? -1.0 : 1.0; }

inline Complex i_power(int k) {
  static constexpr Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPowers[k & 3];
}

/// All k-subsets of {0..n-1} as bitmasks, ascending.
std::vector<std::uint64_t> combinations(std::size_t n, int k) {
  std::vector<std::uint64_t> out;
  if (k < 0 || static_cast<std::size_t>(k) > n) return out;
  if (k == 0) return {0};
  std::uint64_t v = (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (v < limit) {
    out.push_back(v);
    // Gosper's hack: next integer with the same popcount.
    const std::uint64_t c = v & -v;
    const std::uint64_t r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
  return out;
}

/// Spreads spatial-orbital bits onto spin-orbital positions 2p + spin.
std::uint64_t interleave(std::uint64_t spatial_bits, int spin) {
  std::uint64_t out = 0;
  for (int p = 0; spatial_bits != 0; ++p, spatial_bits >>= 1) {
    if (spatial_bits & 1) out |= std::uint64_t{1} << (2 * p + spin);
  }
  return out;
}

}  // namespace

Subspace Subspace::full(std::size_t n_qubits) {
  if (n_qubits > 30) throw DimensionError("full subspace limited to 30 qubits");
  Subspace s;
  s.n_qubits_ = n_qubits;
  s.full_ = true;
  return s;
}

Subspace Subspace::from_states(std::size_t n_qubits, std::vector<std::uint64_t> states) {
  Subspace s;
  s.n_qubits_ = n_qubits;
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  for (auto b : states) {
    if (n_qubits < 64 && (b >> n_qubits) != 0) {
      throw DimensionError("subspace state has bits beyond qubit count");
    }
  }
  s.states_ = std::move(states);
  return s;
}

Subspace Subspace::particle_sector(std::size_t n_qubits, int n_alpha, int n_beta) {
  if (n_qubits % 2 != 0) throw DimensionError("particle sector needs an even qubit count");
  const std::size_t n_spatial = n_qubits / 2;
  std::vector<std::uint64_t> states;
  const auto alphas = combinations(n_spatial, n_alpha);
  const auto betas = combinations(n_spatial, n_beta);
  states.reserve(alphas.size() * betas.size());
  for (auto a : alphas) {
    const std::uint64_t ia = interleave(a, 0);
    for (auto b : betas) states.push_back(ia | interleave(b, 1));
  }
  return from_states(n_qubits, std::move(states));
}

std::optional<std::size_t> Subspace::position(std::uint64_t basis_state) const {
  if (full_) {
    if (basis_state >> n_qubits_) return std::nullopt;
    return static_cast<std::size_t>(basis_state);
  }
  auto it = std::lower_bound(states_.begin(), states_.end(), basis_state);
  if (it == states_.end() || *it != basis_state) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

SubspaceVector Subspace::restrict(const Statevector& s, double tol) const {
  if (s.n_qubits() != n_qubits_) throw DimensionError("restrict: qubit count mismatch");
  SubspaceVector v(dimension());
  double inside = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = s[state(i)];
    inside += std::norm(v[i]);
  }
  if (s.norm_squared() - inside > tol) {
    throw SectorLeakageError("state has weight outside the subspace");
  }
  return v;
}

Statevector Subspace::embed(std::span<const Complex> v, bool normalized) const {
  if (v.size() != dimension()) throw DimensionError("embed: vector length mismatch");
  std::vector<Complex> amps(std::size_t{1} << n_qubits_);
  for (std::size_t i = 0; i < v.size(); ++i) amps[state(i)] = v[i];
  return Statevector(n_qubits_, std::move(amps), normalized);
}

SubspaceVector Subspace::basis_vector(std::uint64_t basis_state) const {
  const auto pos = position(basis_state);
  if (!pos) throw SectorLeakageError("basis state not in subspace");
  SubspaceVector v(dimension());
  v[*pos] = 1.0;
  return v;
}

// ---------------------------------------------------------------------------

SparseOperator SparseOperator::compile(const QubitOperator& op, const Subspace& space,
                                       double drop_tol) {
  if (!op.empty() && op.n_qubits() != space.n_qubits()) {
    throw DimensionError("compile: operator and subspace qubit counts differ");
  }
  // Group terms by X pattern: each group maps |b> to a single |b ^ x>.
  struct ZTerm {
    std::uint64_t z;
    Complex c;
  };
  std::map<std::uint64_t, std::vector<ZTerm>> groups;
  for (const auto& [p, c] : op.terms()) {
    groups[p.x_mask()].push_back({p.z_mask(), c * i_power(p.y_count())});
  }
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    Complex val;
  };
  const std::size_t dim = space.dimension();
  std::vector<Entry> entries;
  for (std::size_t col = 0; col < dim; ++col) {
    const std::uint64_t b = space.state(col);
    for (const auto& [x, zs] : groups) {
      Complex val{};
      for (const auto& t : zs) val += t.c * parity_sign(b & t.z);
      if (std::abs(val) <= drop_tol) continue;
      const auto row = space.position(b ^ x);
      if (!row) {
        if (std::abs(val) > 1e-12) {
          throw SectorLeakageError("operator maps a subspace state outside the subspace");
        }
        continue;
      }
      entries.push_back({static_cast<std::uint32_t>(*row), static_cast<std::uint32_t>(col), val});
    }
  }
  SparseOperator m;
  m.dim_ = dim;
  m.row_ptr_.assign(dim + 1, 0);
  for (const auto& e : entries) ++m.row_ptr_[e.row + 1];
  for (std::size_t i = 0; i < dim; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  m.cols_.resize(entries.size());
  m.vals_.resize(entries.size());
  std::vector<std::size_t> fill(m.row_ptr_.begin(), m.row_ptr_.end() - 1);
  for (const auto& e : entries) {
    const std::size_t k = fill[e.row]++;
    m.cols_[k] = e.col;
    m.vals_[k] = e.val;
  }
  return m;
}

SparseOperator SparseOperator::diagonal(std::span<const Complex> values) {
  SparseOperator m;
  m.dim_ = values.size();
  m.row_ptr_.resize(m.dim_ + 1);
  for (std::size_t i = 0; i <= m.dim_; ++i) m.row_ptr_[i] = i;
  m.cols_.resize(m.dim_);
  for (std::size_t i = 0; i < m.dim_; ++i) m.cols_[i] = static_cast<std::uint32_t>(i);
  m.vals_.assign(values.begin(), values.end());
  return m;
}

void SparseOperator::apply(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != dim_ || out.size() != dim_) throw DimensionError("sparse apply: length mismatch");
  for (std::size_t r = 0; r < dim_; ++r) {
    Complex acc{};
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += vals_[k] * in[cols_[k]];
    out[r] = acc;
  }
}

SubspaceVector SparseOperator::apply(std::span<const Complex> in) const {
  SubspaceVector out(dim_);
  apply(in, out);
  return out;
}

Complex SparseOperator::expectation(std::span<const Complex> v) const {
  if (v.size() != dim_) throw DimensionError("sparse expectation: length mismatch");
  Complex total{};
  for (std::size_t r = 0; r < dim_; ++r) {
    Complex acc{};
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += vals_[k] * v[cols_[k]];
    total += std::conj(v[r]) * acc;
  }
  return total;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[k])) += vals_[k];
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<QubitOperator> commuting_components(const QubitOperator& op) {
  std::vector<std::pair<PauliString, Complex>> terms(op.terms().begin(), op.terms().end());
  std::vector<std::size_t> parent(terms.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = i + 1; j < terms.size(); ++j)
      if (!terms[i].first.commutes_with(terms[j].first) || terms[i].first.x_mask() == terms[j].first.x_mask())
        parent[find(i)] = find(j);
  std::vector<QubitOperator> groups;
  std::vector<std::ptrdiff_t> slot(terms.size(), -1);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::ptrdiff_t>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])] += QubitOperator(terms[i].first, terms[i].second);
  }
  return groups;
}

}  // namespace

GeneratorKernel::GeneratorKernel(const QubitOperator& generator, const Subspace& space,
                                 ExpMethod method)
    : a_(SparseOperator::compile(generator, space)), one_norm_(generator.one_norm()) {
  if (!generator.is_anti_hermitian(1e-10)) {
    throw InvalidGeneratorError("ansatz generator is not anti-Hermitian");
  }
  if (method == ExpMethod::trotter && generator.size() > 1) {
    for (const auto& [p, c] : generator.terms()) {
      factors_.emplace_back(QubitOperator(p, c), space, ExpMethod::exact);
    }
    return;
  }
  const std::size_t dim = a_.dimension();
  if (dim == 0 || a_.nnz() == 0) {
    closed_form_ = true;
    omega_ = 1.0;
    return;
  }
  // Probe A^3 = -w^2 A with a fixed pseudo-random vector.
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  SubspaceVector v(dim);
  for (auto& x : v) x = {gauss(rng), gauss(rng)};
  const SubspaceVector u = a_.apply(v);
  const SubspaceVector u2 = a_.apply(u);
  const SubspaceVector u3 = a_.apply(u2);
  const double nu = norm_squared(u);
  if (nu == 0.0) {
    closed_form_ = true;
    return;
  }
  const double w2 = norm_squared(u2) / nu;  // <u|A^+A|u>/<u|u> = -<u|A^2 u>/<u|u>
  double resid = 0.0;
  for (std::size_t i = 0; i < dim; ++i) resid += std::norm(u3[i] + w2 * u[i]);
  if (w2 > 0.0 && std::sqrt(resid) <= 1e-10 * std::sqrt(norm_squared(u3) + w2 * w2 * nu)) {
    closed_form_ = true;
    omega_ = std::sqrt(w2);
    return;
  }
  // Terms in different components of the anticommutation graph commute, so
  // exp(theta A) factors exactly into one exponential per component. Terms
  // sharing a flip pattern stay together so each factor keeps the symmetries
  // of A and compiles on the same subspace.
  const auto groups = commuting_components(generator);
  if (groups.size() > 1) {
    try {
      for (const auto& g : groups) factors_.emplace_back(g, space, ExpMethod::exact);
    } catch (const SectorLeakageError&) {
      factors_.clear();
    }
  }
}

void GeneratorKernel::apply_exp(SubspaceVector& v, double theta,
                                std::vector<SubspaceVector>& scratch) const {
  if (v.size() != a_.dimension()) throw DimensionError("apply_exp: length mismatch");
  if (!factors_.empty()) {
    for (const auto& f : factors_) f.apply_exp(v, theta, scratch);
    return;
  }
  if (theta == 0.0 || a_.nnz() == 0) return;
  if (scratch.size() < 2) scratch.resize(2);
  auto& av = scratch[0];
  auto& a2v = scratch[1];
  av.resize(v.size());
  a2v.resize(v.size());
  if (closed_form_) {
    a_.apply(v, av);
    a_.apply(av, a2v);
    const double s = std::sin(omega_ * theta) / omega_;
    const double c = (1.0 - std::cos(omega_ * theta)) / (omega_ * omega_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += s * av[i] + c * a2v[i];
    return;
  }
  const double bound = std::abs(theta) * one_norm_;
  const auto steps = static_cast<int>(std::max(1.0, std::ceil(bound / 0.5)));
  const double h = theta / steps;
  for (int s = 0; s < steps; ++s) {
    av = v;  // running term
    for (int k = 1; k < 60; ++k) {
      a_.apply(av, a2v);
      const double f = h / k;
      double tn = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        av[i] = a2v[i] * f;
        v[i] += av[i];
        tn += std::norm(av[i]);
      }
      if (std::sqrt(tn) < 1e-16) break;
    }
  }
}

double dot_real(std::span<const Complex> a, std::span<const Complex> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm_squared(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return s;
}

}  // namespace vqebench
