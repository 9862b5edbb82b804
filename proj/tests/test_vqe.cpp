// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "dense_oracle.hpp"
#include "vqebench/errors.hpp"
#include "vqebench/fci.hpp"
#include "vqebench/pools.hpp"
#include "vqebench/vqe.hpp"

using namespace vqebench;

namespace {

const FixtureManifest& manifest() {
  static const FixtureManifest m = FixtureManifest::bundled();
  return m;
}

struct System {
  MolecularIntegrals mi;
  QubitOperator h;
  Statevector hf;
  double e_fci;
};

System load(const char* label) {
  System s;
  s.mi = manifest().load_integrals(label);
  s.h = qubit_hamiltonian(s.mi);
  s.hf = hf_state(s.mi.n_spin_orbitals(), s.mi.hf_occupation());
  s.e_fci = manifest().find(label).fci_ground_energy;
  return s;
}

std::vector<double> random_angles(std::size_t n, std::uint64_t seed, double scale = 0.3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

/// Central differences of an objective, h = 1e-5.
std::vector<double> finite_difference(const Objective& f, std::vector<double> x) {
  std::vector<double> g(x.size());
  const double h = 1e-5;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double fp = f(x, {});
    x[i] = x0 - h;
    const double fm = f(x, {});
    x[i] = x0;
    g[i] = (fp - fm) / (2 * h);
  }
  return g;
}

double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

TEST_CASE("compiled energies agree with the full-register statevector path") {
  const auto s = load("lih_sto3g_1.6");
  const auto pool = uccsd_pool(s.mi);
  const auto ops = pool.operators();
  const auto theta = random_angles(ops.size(), 1);
  std::vector<AnsatzTerm> terms;
  for (std::size_t i = 0; i < ops.size(); ++i) terms.push_back({ops[i], theta[i]});
  const auto full = prepare_ansatz(s.hf, terms);
  const double e_full = expectation(full, s.h).real();
  const auto eg = energy_and_gradient(s.h, s.hf, ops, theta);
  CHECK(eg.energy == doctest::Approx(e_full).epsilon(1e-12));
  const CompiledProblem problem(s.h, s.hf, ops);
  CHECK_FALSE(problem.space().is_full());
  CHECK(problem.space().dimension() == 225);
}

TEST_CASE("analytic gradients match finite differences") {
  for (const char* label : {"h2_sto3g_0.735", "h4_sto3g_1", "lih_sto3g_1.6"}) {
    CAPTURE(label);
    const auto s = load(label);
    const auto ops = generalized_pool(s.mi).operators();
    const std::vector<QubitOperator> ansatz(ops.begin(), ops.begin() + std::min<std::size_t>(ops.size(), 40));
    const CompiledProblem problem(s.h, s.hf, ansatz);
    std::vector<std::size_t> ids(ansatz.size());
    std::iota(ids.begin(), ids.end(), 0);
    const auto cost = energy_cost(problem);
    const Objective f = [&](std::span<const double> x, std::span<double> g) {
      return evaluate_cost(problem, ids, x, g, cost);
    };
    const auto theta = random_angles(ansatz.size(), 2);
    std::vector<double> g(theta.size());
    f(theta, g);
    CHECK(rel_err(g, finite_difference(f, theta)) < 1e-6);
  }
}

TEST_CASE("gradients of penalized and folded costs match finite differences") {
  const auto s = load("h4_sto3g_1");
  const auto ops = uccsd_pool(s.mi).operators();
  const CompiledProblem problem(s.h, s.hf, ops);
  std::vector<std::size_t> ids(ops.size());
  std::iota(ids.begin(), ids.end(), 0);
  const SubspaceVector other = prepare_state(problem, ids, random_angles(ops.size(), 3));
  const double beta = 2.5, omega = -1.7;
  const CostFunction cost = [&](const SubspaceVector& psi, SubspaceVector* seed) {
    SubspaceVector hpsi = problem.hamiltonian().apply(psi);
    SubspaceVector r(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) r[i] = hpsi[i] - omega * psi[i];
    const Complex ov = inner(other, psi);
    const double v = norm_squared(r) + beta * std::norm(ov);
    if (seed) {
      *seed = problem.hamiltonian().apply(r);
      for (std::size_t i = 0; i < psi.size(); ++i) (*seed)[i] += -omega * r[i] + beta * ov * other[i];
    }
    return v;
  };
  const Objective f = [&](std::span<const double> x, std::span<double> g) {
    return evaluate_cost(problem, ids, x, g, cost);
  };
  const auto theta = random_angles(ops.size(), 4);
  std::vector<double> g(theta.size());
  f(theta, g);
  CHECK(rel_err(g, finite_difference(f, theta)) < 1e-6);
}

TEST_CASE("Jastrow objective gradient matches finite differences") {
  const auto s = load("h2_sto3g_0.735");
  const auto ops = uccsd_pool(s.mi).operators();
  const std::vector<QubitOperator> one{ops[0]};
  const CompiledProblem problem(s.h, s.hf, one);
  for (bool two_body : {false, true}) {
    const Objective f = nu_objective(problem, {0}, two_body);
    const std::size_t n = 1 + 4 + (two_body ? 6 : 0);
    const auto x = random_angles(n, 5, 0.4);
    std::vector<double> g(n);
    f(x, g);
    CHECK(rel_err(g, finite_difference(f, x)) < 1e-6);
  }
}

TEST_CASE("pool gradients from states agree with explicit commutators") {
  const auto s = load("h2_sto3g_0.735");
  const auto pool = generalized_pool(s.mi);
  const auto ops = pool.operators();
  const std::vector<QubitOperator> first{ops[2]};
  const auto state_result = minimize(s.h, s.hf, first, OptimizerConfig{}, std::vector<double>{0.05});
  const auto comm = pool_gradients_commutator(s.h, state_result.state, ops);
  const CompiledProblem problem(s.h, s.hf, ops);
  const auto psi = problem.restrict(state_result.state);
  const auto hpsi = problem.hamiltonian().apply(psi);
  SubspaceVector a(psi.size());
  for (std::size_t k = 0; k < ops.size(); ++k) {
    problem.kernel(k).apply(psi, a);
    CHECK(2.0 * dot_real(hpsi, a) == doctest::Approx(comm[k]).epsilon(1e-10));
  }
}

TEST_CASE("UCCSD VQE is exact for two electrons") {
  for (const auto& e : manifest().series("h2", "STO-3G")) {
    CAPTURE(e.label);
    const auto s = load(e.label.c_str());
    const auto r = minimize(s.h, s.hf, uccsd_pool(s.mi).operators(), OptimizerConfig{});
    CHECK(r.converged);
    CHECK(std::abs(r.energy - s.e_fci) < 1e-8);
    CHECK(r.energy >= s.e_fci - 1e-10);
  }
}

TEST_CASE("ADAPT-VQE") {
  const auto s = load("h4_sto3g_1.5");
  const auto pool = generalized_pool(s.mi);
  AdaptOptions ao;
  ao.eps = 1e-3;
  const auto run = adapt_vqe(s.h, s.hf, pool, ao, OptimizerConfig{});
  CHECK(run.converged);
  CHECK(run.energy >= s.e_fci - 1e-10);
  CHECK(run.energy - s.e_fci < 1e-3);
  REQUIRE(run.trace.size() == run.parameters.size() + 1);
  for (std::size_t i = 1; i < run.trace.size(); ++i) {
    CHECK(run.trace[i].energy <= run.trace[i - 1].energy + 1e-12);
    CHECK(run.trace[i].n_parameters == i);
  }
  CHECK(run.trace.back().gradient_norm < ao.eps);
  CHECK(run.operator_labels.size() == run.parameters.size());

  SUBCASE("a looser threshold equals the prefix of a tighter run") {
    AdaptOptions loose;
    loose.eps = 3e-2;
    const auto direct = adapt_vqe(s.h, s.hf, pool, loose, OptimizerConfig{});
    const auto sliced = adapt_at_threshold(run, loose.eps);
    CHECK(sliced.converged);
    CHECK(sliced.operator_ids == direct.operator_ids);
    CHECK(sliced.parameters == direct.parameters);
    CHECK(sliced.energy == direct.energy);
  }
  SUBCASE("operator cap") {
    AdaptOptions capped;
    capped.eps = 1e-8;
    capped.max_operators = 2;
    const auto r = adapt_vqe(s.h, s.hf, pool, capped, OptimizerConfig{});
    CHECK_FALSE(r.converged);
    CHECK(r.has_flag("max_operators"));
    CHECK(r.parameters.size() == 2);
  }
}

TEST_CASE("ADAPT with a qubit pool runs on the full register") {
  const auto s = load("h2_sto3g_0.735");
  const auto pool = qubit_pool(generalized_pool(s.mi));
  AdaptOptions ao;
  ao.eps = 1e-6;
  const auto r = adapt_vqe(s.h, s.hf, pool, ao, OptimizerConfig{});
  CHECK(r.converged);
  CHECK(std::abs(r.energy - s.e_fci) < 1e-8);
}

TEST_CASE("USCC VQE") {
  const auto s = load("lih_sto3g_1.6");
  const auto loose = uscc_vqe(s.h, s.hf, s.mi, 1e-1, OptimizerConfig{});
  const auto tight = uscc_vqe(s.h, s.hf, s.mi, 1e-3, OptimizerConfig{});
  CHECK(loose.parameters.size() <= tight.parameters.size());
  CHECK(tight.energy >= s.e_fci - 1e-10);
  CHECK(tight.energy <= loose.energy + 1e-9);
  const auto nothing = uscc_vqe(s.h, s.hf, s.mi, 1e3, OptimizerConfig{});
  CHECK(nothing.has_flag("empty_pool"));
  CHECK(nothing.energy == doctest::Approx(manifest().find("lih_sto3g_1.6").hf_energy).epsilon(1e-10));
}

TEST_CASE("nu-VQE lowers the energy of a truncated ansatz") {
  for (bool two_body : {false, true}) {
    CAPTURE(two_body);
    const auto s = load("h2_sto3g_1.5");
    const auto pool = uccsd_pool(s.mi);
    // paired singles only: plain VQE relaxes to HF
    const std::vector<QubitOperator> singles{pool.entries[0].op + pool.entries[1].op};
    const auto plain = minimize(s.h, s.hf, singles, OptimizerConfig{}, std::vector<double>{0.3});
    NuVqeOptions no;
    no.theta0 = {0.3};
    no.two_body = two_body;
    const auto nu = nu_vqe(s.h, s.hf, singles, no, OptimizerConfig{});
    CHECK(nu.energy >= s.e_fci - 1e-10);
    CHECK(2.0 * (nu.energy - s.e_fci) < plain.energy - s.e_fci);
    CHECK(nu.jastrow.alpha.size() == 4);
    CHECK(nu.jastrow.lambda.size() == (two_body ? 6u : 0u));
    CHECK(nu.state.normalized());
    CHECK(expectation(nu.state, s.h).real() == doctest::Approx(nu.energy).epsilon(1e-10));
  }
}

TEST_CASE("identity Jastrow reproduces the unitary energy exactly") {
  const auto s = load("h4_sto3g_1");
  const auto ops = uccsd_pool(s.mi).operators();
  const CompiledProblem problem(s.h, s.hf, ops);
  std::vector<std::size_t> ids(ops.size());
  std::iota(ids.begin(), ids.end(), 0);
  const auto theta = random_angles(ops.size(), 9);
  const double plain = evaluate_cost(problem, ids, theta, {}, energy_cost(problem));
  std::vector<double> x = theta;
  x.resize(ops.size() + 8 + 28, 0.0);
  CHECK(nu_objective(problem, ids, true)(x, {}) == plain);
}

TEST_CASE("one-body Jastrow leaves a basis state's energy unchanged") {
  const auto s = load("h4_sto3g_1");
  const CompiledProblem problem(s.h, s.hf, {});
  const auto x = random_angles(8, 11, 0.4);
  CHECK(nu_objective(problem, {}, false)(x, {}) ==
        doctest::Approx(manifest().find("h4_sto3g_1").hf_energy).epsilon(1e-10));
}

TEST_CASE("a Jastrow factor that annihilates the state is flagged") {
  const auto s = load("h2_sto3g_0.735");
  const CompiledProblem problem(s.h, s.hf, {});
  // HF occupies qubits 0 and 1, so Z0 = -1 there and J = 1 + a0 vanishes at a0 = -1
  const std::vector<double> x{-1.0, 0.0, 0.0, 0.0};
  CHECK(nu_objective(problem, {}, false)(x, {}) >= 1e6);
}

TEST_CASE("input validation") {
  const auto s = load("h2_sto3g_0.735");
  const auto ops = uccsd_pool(s.mi).operators();
  CHECK_THROWS_AS(minimize(s.h, s.hf, ops, OptimizerConfig{}, std::vector<double>{0.1}), InputError);
  CHECK_THROWS_AS(energy_and_gradient(s.h, s.hf, ops, std::vector<double>{0.1}), DimensionError);
  CHECK_THROWS_AS(minimize(s.h, Statevector(3), ops, OptimizerConfig{}), DimensionError);
  const std::vector<QubitOperator> herm{QubitOperator(PauliString::from_word("XXII"), 1.0)};
  CHECK_THROWS_AS(minimize(s.h, s.hf, herm, OptimizerConfig{}), InvalidGeneratorError);
}

TEST_CASE("fragment expansion") {
  const std::vector<double> mono{-1.0, -2.0, -3.0};
  std::map<std::pair<std::size_t, std::size_t>, double> dimers{{{0, 1}, -3.1}, {{1, 2}, -5.05}};
  CHECK(fmo_assemble(mono, dimers) == doctest::Approx(-6.0 - 0.1 - 0.05));
  CHECK(fmo_assemble(mono, {}) == doctest::Approx(-6.0));
  CHECK_THROWS_AS(fmo_assemble(mono, {{{0, 0}, -1.0}}), InputError);
  CHECK_THROWS_AS(fmo_assemble(mono, {{{0, 5}, -1.0}}), InputError);
}
