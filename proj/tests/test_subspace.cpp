// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dense_oracle.hpp"
#include "vqebench/errors.hpp"
#include "vqebench/fermion.hpp"
#include "vqebench/subspace.hpp"

using namespace vqebench;
using oracle::C;

namespace {

std::size_t binom(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

oracle::Mat restrict_dense(const oracle::Mat& m, const Subspace& s) {
  const auto d = static_cast<Eigen::Index>(s.dimension());
  oracle::Mat out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      out(i, j) = m(static_cast<Eigen::Index>(s.state(static_cast<std::size_t>(i))),
                    static_cast<Eigen::Index>(s.state(static_cast<std::size_t>(j))));
  return out;
}

}  // namespace

TEST_CASE("particle sectors enumerate the right determinants") {
  for (std::size_t n_spatial = 1; n_spatial <= 5; ++n_spatial) {
    for (int a = 0; a <= static_cast<int>(n_spatial); ++a) {
      for (int b = 0; b <= static_cast<int>(n_spatial); ++b) {
        const auto s = Subspace::particle_sector(2 * n_spatial, a, b);
        CHECK(s.dimension() == binom(n_spatial, a) * binom(n_spatial, b));
        for (std::size_t i = 0; i < s.dimension(); ++i) {
          const auto st = s.state(i);
          CHECK(std::popcount(st & 0x5555555555555555ULL) == a);
          CHECK(std::popcount(st & 0xAAAAAAAAAAAAAAAAULL) == b);
          if (i) CHECK(s.state(i - 1) < st);
          CHECK(s.position(st) == i);
        }
      }
    }
  }
  CHECK(Subspace::particle_sector(16, 2, 2).dimension() == 784);
  CHECK_FALSE(Subspace::particle_sector(4, 1, 1).position(0b0001).has_value());
}

TEST_CASE("compiled operators match the dense restriction") {
  std::mt19937_64 rng(31);
  const auto mi = FixtureManifest::bundled().load_integrals("h2_sto3g_0.735");
  const auto h = qubit_hamiltonian(mi);
  const auto space = Subspace::particle_sector(4, 1, 1);
  const auto sparse = SparseOperator::compile(h, space);
  CHECK(oracle::max_abs(sparse.to_dense() - restrict_dense(oracle::matrix(h, 4), space)) < 1e-13);

  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto op = oracle::random_operator(n, 1 + trial % 6, rng);
    const auto full = Subspace::full(n);
    const auto s = SparseOperator::compile(op, full);
    const oracle::Mat m = oracle::matrix(op, n);
    CHECK(oracle::max_abs(s.to_dense() - m) < 1e-12);
    const auto v = oracle::random_state(n, rng);
    const SubspaceVector in(v.amplitudes().begin(), v.amplitudes().end());
    const auto out = s.apply(in);
    const oracle::Vec expect = m * oracle::vec(v);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(out[i] - expect(static_cast<Eigen::Index>(i))) < 1e-12);
    const C e = oracle::vec(v).adjoint() * expect;
    CHECK(std::abs(s.expectation(in) - e) < 1e-12);
  }
}

TEST_CASE("leaving the subspace is detected") {
  const auto space = Subspace::particle_sector(4, 1, 1);
  QubitOperator x(PauliString::from_word("XIII"), 1.0);
  CHECK_THROWS_AS(SparseOperator::compile(x, space), SectorLeakageError);
  // a leaking term whose coefficient cancels is fine
  QubitOperator z(PauliString::from_word("ZIII"), 1.0);
  CHECK_NOTHROW(SparseOperator::compile(z, space));

  Statevector s(4);  // |0000> lies outside the (1,1) sector
  CHECK_THROWS_AS(space.restrict(s), SectorLeakageError);
  const auto hf = hf_state(4, 0b0011);
  const auto v = space.restrict(hf);
  const auto back = space.embed(v);
  for (std::size_t i = 0; i < 16; ++i) CHECK(back[i] == hf[i]);
}

TEST_CASE("generator kernels reproduce the matrix exponential") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  const auto space = Subspace::particle_sector(8, 2, 2);
  const auto full8 = Subspace::full(8);
  // fermionic excitations: closed form
  const std::vector<ExcitationGenerator> gens{
      {ExcitationKind::single, {0}, {4}, Provenance::uccsd},
      {ExcitationKind::double_, {0, 1}, {4, 5}, Provenance::uccsd},
      {ExcitationKind::double_, {0, 2}, {4, 6}, Provenance::generalized},
      {ExcitationKind::double_, {0, 2}, {2, 4}, Provenance::generalized},
      {ExcitationKind::triple, {0, 1, 2}, {4, 5, 6}, Provenance::uscc_disconnected},
      {ExcitationKind::quadruple, {0, 1, 2, 3}, {4, 5, 6, 7}, Provenance::uscc_disconnected},
  };
  for (const auto& g : gens) {
    CAPTURE(g.label());
    const auto a = realize_generator(g, 8);
    const GeneratorKernel k(a, space);
    CHECK(k.closed_form());
    const oracle::Mat dense = restrict_dense(oracle::matrix(a, 8), space);
    for (int t = 0; t < 5; ++t) {
      const double theta = u(rng);
      SubspaceVector v(space.dimension());
      std::normal_distribution<double> gs;
      for (auto& x : v) x = C(gs(rng), gs(rng));
      const oracle::Vec v0 = Eigen::Map<oracle::Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
      std::vector<SubspaceVector> scratch;
      k.apply_exp(v, theta, scratch);
      const oracle::Vec expect = (theta * dense).exp() * v0;
      double err = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(v[i] - expect(static_cast<Eigen::Index>(i))));
      CHECK(err < 1e-11);
    }
  }
  // a generic anti-Hermitian operator takes the Taylor path
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = oracle::random_operator(3, 4, rng);
    const auto a = simplify(h - h.adjoint());
    const GeneratorKernel k(a, Subspace::full(3));
    const double theta = u(rng);
    const auto s = oracle::random_state(3, rng);
    SubspaceVector v(s.amplitudes().begin(), s.amplitudes().end());
    std::vector<SubspaceVector> scratch;
    k.apply_exp(v, theta, scratch);
    const oracle::Vec expect = (theta * oracle::matrix(a, 3)).exp() * oracle::vec(s);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v[i] - expect(static_cast<Eigen::Index>(i))) < 1e-10);
  }
  (void)full8;
}

TEST_CASE("sums of commuting excitations are split into exact factors") {
  std::mt19937_64 rng(7);
  const auto space = Subspace::particle_sector(8, 2, 2);
  const std::vector<std::pair<ExcitationGenerator, ExcitationGenerator>> pairs{
      {{ExcitationKind::single, {0}, {4}, Provenance::generalized},
       {ExcitationKind::single, {1}, {5}, Provenance::generalized}},
      {{ExcitationKind::double_, {0, 2}, {4, 6}, Provenance::generalized},
       {ExcitationKind::double_, {1, 3}, {5, 7}, Provenance::generalized}},
  };
  for (const auto& [g, h] : pairs) {
    CAPTURE(g.label());
    const auto a = simplify(realize_generator(g, 8) + realize_generator(h, 8));
    const GeneratorKernel k(a, space);
    CHECK_FALSE(k.closed_form());
    CHECK(k.n_factors() == 2);
    const oracle::Mat dense = restrict_dense(oracle::matrix(a, 8), space);
    std::normal_distribution<double> gs;
    SubspaceVector v(space.dimension());
    for (auto& x : v) x = C(gs(rng), gs(rng));
    const oracle::Vec v0 = Eigen::Map<oracle::Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
    std::vector<SubspaceVector> scratch;
    k.apply_exp(v, 1.3, scratch);
    const oracle::Vec expect = (1.3 * dense).exp() * v0;
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v[i] - expect(static_cast<Eigen::Index>(i))) < 1e-11);
  }
}

TEST_CASE("trotterized kernels apply term rotations in order") {
  QubitOperator a(PauliString::from_word("XY"), C(0, 0.7));
  a.add_term(PauliString::from_word("ZX"), C(0, -0.3));
  const GeneratorKernel k(a, Subspace::full(2), ExpMethod::trotter);
  SubspaceVector v{1.0, 0.0, 0.0, 0.0};
  std::vector<SubspaceVector> scratch;
  k.apply_exp(v, 0.9, scratch);
  const auto expect = apply_generator_exp(Statevector(2), a, 0.9, ExpMethod::trotter);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(v[i] - expect[i]) < 1e-13);
}

TEST_CASE("non-anti-Hermitian generators are rejected") {
  QubitOperator h(PauliString::from_word("XY"), 1.0);
  CHECK_THROWS_AS(GeneratorKernel(h, Subspace::full(2)), InvalidGeneratorError);
}
