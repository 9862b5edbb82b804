// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqebench/vqe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "vqebench/errors.hpp"

namespace vqebench {

namespace {

void check_qubits(const QubitOperator& op, std::size_t n, const char* what) {
  if (!op.empty() && op.n_qubits() != n) {
    throw DimensionError(std::string(what) + " acts on " + std::to_string(op.n_qubits()) +
                         " qubits, reference has " + std::to_string(n));
  }
}

/// Alpha/beta counts shared by every basis state in the support, if any.
std::optional<std::pair<int, int>> common_sector(const Statevector& s) {
  if (s.n_qubits() % 2 != 0) return std::nullopt;
  constexpr std::uint64_t kEven = 0x5555555555555555ULL;
  std::optional<std::pair<int, int>> sector;
  const auto amps = s.amplitudes();
  for (std::uint64_t b = 0; b < amps.size(); ++b) {
    if (std::abs(amps[b]) < 1e-14) continue;
    const std::pair<int, int> ab{std::popcount(b & kEven), std::popcount(b & ~kEven)};
    if (!sector) sector = ab;
    else if (*sector != ab) return std::nullopt;
  }
  return sector;
}

}  // namespace

CompiledProblem::CompiledProblem(const QubitOperator& h, const Statevector& reference,
                                 std::span<const QubitOperator> operators, ExpMethod method)
    : n_qubits_(reference.n_qubits()) {
  check_qubits(h, n_qubits_, "Hamiltonian");
  for (const auto& op : operators) check_qubits(op, n_qubits_, "generator");
  auto build = [&](Subspace space) {
    space_ = std::move(space);
    h_ = SparseOperator::compile(h, space_);
    kernels_.clear();
    kernels_.reserve(operators.size());
    for (const auto& op : operators) kernels_.emplace_back(op, space_, method);
    reference_ = space_.restrict(reference, 1e-8);
  };
  if (const auto sector = common_sector(reference)) {
    try {
      build(Subspace::particle_sector(n_qubits_, sector->first, sector->second));
      return;
    } catch (const SectorLeakageError&) {
      // some operator leaves the sector; use the whole register
    }
  }
  build(Subspace::full(n_qubits_));
}

CostFunction energy_cost(const CompiledProblem& problem) {
  return [&problem](const SubspaceVector& psi, SubspaceVector* seed) {
    SubspaceVector hpsi = problem.hamiltonian().apply(psi);
    const double e = dot_real(psi, hpsi);
    if (seed) *seed = std::move(hpsi);
    return e;
  };
}

SubspaceVector prepare_state(const CompiledProblem& problem, std::span<const std::size_t> ops,
                             std::span<const double> theta) {
  if (ops.size() != theta.size()) throw DimensionError("parameter count does not match ansatz length");
  SubspaceVector psi = problem.reference();
  std::vector<SubspaceVector> scratch;
  for (std::size_t k = 0; k < ops.size(); ++k) problem.kernel(ops[k]).apply_exp(psi, theta[k], scratch);
  return psi;
}

double evaluate_cost(const CompiledProblem& problem, std::span<const std::size_t> ops,
                     std::span<const double> theta, std::span<double> grad,
                     const CostFunction& cost) {
  SubspaceVector psi = prepare_state(problem, ops, theta);
  if (grad.empty()) return cost(psi, nullptr);
  if (grad.size() < ops.size()) throw DimensionError("gradient buffer too short");
  SubspaceVector lambda;
  const double value = cost(psi, &lambda);
  std::vector<SubspaceVector> scratch;
  SubspaceVector a_psi(psi.size());
  for (std::size_t k = ops.size(); k-- > 0;) {
    const auto& kernel = problem.kernel(ops[k]);
    kernel.apply(psi, a_psi);
    grad[k] = 2.0 * dot_real(lambda, a_psi);
    kernel.apply_exp(psi, -theta[k], scratch);
    kernel.apply_exp(lambda, -theta[k], scratch);
  }
  return value;
}

EnergyGradient energy_and_gradient(const QubitOperator& h, const Statevector& reference,
                                   std::span<const QubitOperator> ansatz,
                                   std::span<const double> theta) {
  if (ansatz.size() != theta.size()) throw DimensionError("parameter count does not match ansatz length");
  const CompiledProblem problem(h, reference, ansatz);
  std::vector<std::size_t> ops(ansatz.size());
  std::iota(ops.begin(), ops.end(), 0);
  EnergyGradient out;
  out.gradient.assign(ansatz.size(), 0.0);
  out.energy = evaluate_cost(problem, ops, theta, out.gradient, energy_cost(problem));
  return out;
}

std::vector<double> pool_gradients_commutator(const QubitOperator& h, const Statevector& state,
                                              std::span<const QubitOperator> pool) {
  std::vector<double> g;
  g.reserve(pool.size());
  for (const auto& a : pool) g.push_back(expectation(state, commutator(h, a), true).real());
  return g;
}

bool VQEResult::has_flag(std::string_view f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

OptimizeResult optimize_ops(const CompiledProblem& problem, std::span<const std::size_t> ops,
                            std::vector<double> theta0, const OptimizerConfig& config,
                            const CostFunction& cost) {
  const std::vector<std::size_t> ids(ops.begin(), ops.end());
  Objective f = [&](std::span<const double> x, std::span<double> g) {
    return evaluate_cost(problem, ids, x, g, cost);
  };
  return minimize_objective(f, std::move(theta0), config);
}

void fill_from_optimizer(VQEResult& r, const OptimizeResult& o) {
  r.parameters = o.x;
  r.objective = o.value;
  r.iterations = o.iterations;
  r.evaluations = o.evaluations;
  r.gradient_norm = o.gradient_norm;
  r.converged = o.converged;
  if (!o.converged) r.flags.emplace_back("unconverged");
}

}  // namespace

VQEResult minimize(const QubitOperator& h, const Statevector& reference,
                   std::span<const QubitOperator> ansatz, const OptimizerConfig& config,
                   std::span<const double> theta0) {
  if (!theta0.empty() && theta0.size() != ansatz.size()) {
    throw InputError("initial parameter count does not match ansatz length");
  }
  const CompiledProblem problem(h, reference, ansatz);
  std::vector<std::size_t> ops(ansatz.size());
  std::iota(ops.begin(), ops.end(), 0);
  std::vector<double> x0(theta0.begin(), theta0.end());
  x0.resize(ansatz.size(), 0.0);
  const auto cost = energy_cost(problem);
  const OptimizeResult o = optimize_ops(problem, ops, std::move(x0), config, cost);
  VQEResult r;
  r.method = "vqe";
  fill_from_optimizer(r, o);
  r.operator_ids = ops;
  const SubspaceVector psi = prepare_state(problem, ops, r.parameters);
  r.energy = problem.hamiltonian().expectation(psi).real();
  r.state = problem.embed(psi);
  return r;
}

VQEResult adapt_vqe(const QubitOperator& h, const Statevector& reference, const OperatorPool& pool,
                    const AdaptOptions& options, const OptimizerConfig& config) {
  if (!(options.eps > 0.0)) throw InputError("ADAPT threshold must be positive");
  const std::vector<QubitOperator> ops_list = pool.operators();
  const CompiledProblem problem(h, reference, ops_list);
  const auto cost = energy_cost(problem);

  VQEResult r;
  r.method = "adapt";
  std::vector<std::size_t> ops;
  std::vector<double> theta;
  SubspaceVector a_psi(problem.space().dimension());
  bool inner_failed = false;
  for (;;) {
    const SubspaceVector psi = prepare_state(problem, ops, theta);
    const SubspaceVector hpsi = problem.hamiltonian().apply(psi);
    AdaptStep step;
    step.n_parameters = ops.size();
    step.energy = dot_real(psi, hpsi);
    step.operator_ids = ops;
    step.parameters = theta;
    double norm2 = 0.0;
    std::optional<std::size_t> best;
    double best_g = -1.0;
    for (std::size_t k = 0; k < problem.n_operators(); ++k) {
      problem.kernel(k).apply(psi, a_psi);
      const double g = std::abs(2.0 * dot_real(hpsi, a_psi));
      norm2 += g * g;
      if (g > best_g) {
        best_g = g;
        best = k;
      }
    }
    step.gradient_norm = std::sqrt(norm2);
    step.max_gradient = std::max(best_g, 0.0);
    r.energy = step.energy;
    r.gradient_norm = step.gradient_norm;
    r.state = problem.embed(psi);
    r.parameters = theta;
    r.operator_ids = ops;
    if (step.gradient_norm < options.eps || !best) {
      if (!best) r.flags.emplace_back("empty_pool");
      r.converged = true;
      r.trace.push_back(std::move(step));
      break;
    }
    if (ops.size() >= options.max_operators) {
      r.flags.emplace_back("max_operators");
      r.trace.push_back(std::move(step));
      break;
    }
    step.selected = best;
    r.trace.push_back(std::move(step));
    ops.push_back(*best);
    theta.push_back(0.0);
    const OptimizeResult o = optimize_ops(problem, ops, theta, config, cost);
    theta = o.x;
    r.evaluations += o.evaluations;
    ++r.iterations;
    inner_failed |= !o.converged;
  }
  r.objective = r.energy;
  if (inner_failed) r.flags.emplace_back("inner_unconverged");
  if (!r.converged) r.flags.emplace_back("unconverged");
  for (auto id : r.operator_ids) r.operator_labels.push_back(pool.entries[id].label);
  return r;
}

VQEResult adapt_at_threshold(const VQEResult& run, double eps) {
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    const AdaptStep& s = run.trace[i];
    if (s.gradient_norm >= eps) continue;
    if (i + 1 == run.trace.size()) {
      VQEResult r = run;
      r.converged = true;
      std::erase(r.flags, "unconverged");
      std::erase(r.flags, "max_operators");
      return r;
    }
    VQEResult r;
    r.method = run.method;
    r.energy = r.objective = s.energy;
    r.parameters = s.parameters;
    r.operator_ids = s.operator_ids;
    r.operator_labels.assign(run.operator_labels.begin(),
                             run.operator_labels.begin() + static_cast<std::ptrdiff_t>(s.n_parameters));
    r.iterations = i;
    r.gradient_norm = s.gradient_norm;
    r.converged = true;
    r.trace.assign(run.trace.begin(), run.trace.begin() + static_cast<std::ptrdiff_t>(i + 1));
    r.trace.back().selected.reset();
    return r;
  }
  VQEResult r = run;
  r.converged = false;
  if (!r.has_flag("unconverged")) r.flags.emplace_back("unconverged");
  return r;
}

VQEResult uscc_vqe(const QubitOperator& h, const Statevector& reference,
                   const MolecularIntegrals& mi, double eps, const OptimizerConfig& config,
                   int max_round) {
  const AmplitudeEstimate t = mp2_amplitudes(mi);
  const OperatorPool pool = uscc_screen(mi, t, eps, max_round);
  const std::vector<QubitOperator> ops = pool.operators();
  VQEResult r = minimize(h, reference, ops, config);
  r.method = "uscc";
  for (const auto& e : pool.entries) r.operator_labels.push_back(e.label);
  if (pool.empty()) r.flags.emplace_back("empty_pool");
  if (t.degenerate_denominators) r.flags.emplace_back("degenerate_denominator");
  return r;
}

namespace {

struct JastrowWeights {
  std::vector<double> factor;  // diagonal of J
  SubspaceVector phi;          // J psi
  double norm2 = 0.0;
};

/// Evaluates J = 1 - sum a_i Z_i - sum l_ij Z_i Z_j on the subspace states.
class JastrowModel {
 public:
  JastrowModel(const Subspace& space, bool two_body)
      : n_(space.n_qubits()), dim_(space.dimension()), two_body_(two_body), z_(dim_ * n_) {
    for (std::size_t r = 0; r < dim_; ++r) {
      const std::uint64_t b = space.state(r);
      for (std::size_t i = 0; i < n_; ++i) z_[r * n_ + i] = ((b >> i) & 1) ? -1.0 : 1.0;
    }
  }

  std::size_t n_params() const { return n_ + (two_body_ ? n_ * (n_ - 1) / 2 : 0); }

  JastrowWeights weigh(const SubspaceVector& psi, std::span<const double> jas) const {
    JastrowWeights w;
    w.factor.resize(dim_);
    w.phi.resize(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      double s = 0.0;
      for_each_feature(r, [&](std::size_t k, double zz) { s += jas[k] * zz; });
      w.factor[r] = 1.0 - s;
      w.phi[r] = w.factor[r] * psi[r];
      w.norm2 += std::norm(w.phi[r]);
    }
    return w;
  }

  /// f(k, z-product) for every Jastrow parameter k on basis state r.
  template <typename F>
  void for_each_feature(std::size_t r, F&& f) const {
    const double* zr = &z_[r * n_];
    for (std::size_t i = 0; i < n_; ++i) f(i, zr[i]);
    if (!two_body_) return;
    std::size_t k = n_;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) f(k++, zr[i] * zr[j]);
  }

 private:
  std::size_t n_, dim_;
  bool two_body_;
  std::vector<double> z_;
};

constexpr double kCollapsedValue = 1e6;

}  // namespace

Objective nu_objective(const CompiledProblem& problem, std::vector<std::size_t> ops, bool two_body,
                       double min_norm) {
  auto model = std::make_shared<JastrowModel>(problem.space(), two_body);
  return [&problem, ops = std::move(ops), model, min_norm](std::span<const double> x,
                                                           std::span<double> g) {
    const std::size_t k = ops.size();
    const std::size_t dim = problem.space().dimension();
    if (x.size() != k + model->n_params()) throw DimensionError("nu-VQE parameter vector has the wrong length");
    const auto theta = x.subspan(0, k);
    const auto jas = x.subspan(k);
    std::vector<double> jgrad(jas.size(), 0.0);
    const CostFunction cost = [&](const SubspaceVector& psi, SubspaceVector* seed) {
      const JastrowWeights w = model->weigh(psi, jas);
      if (!(w.norm2 >= min_norm) || !std::isfinite(w.norm2)) {
        if (seed) seed->assign(dim, Complex{});
        return kCollapsedValue;
      }
      const SubspaceVector hphi = problem.hamiltonian().apply(w.phi);
      // J = 1 reproduces the unitary energy exactly
      const bool identity = std::all_of(jas.begin(), jas.end(), [](double a) { return a == 0.0; });
      const double e = identity ? dot_real(w.phi, hphi) : dot_real(w.phi, hphi) / w.norm2;
      if (seed) {
        // E = <phi|H|phi>/<phi|phi> with phi = J psi, J = 1 - sum_k a_k Z_k:
        //   dE/d psi*  = J (H - E) phi / N
        //   dE/d a_k   = -2 Re <(H - E) phi | Z_k psi> / N
        seed->resize(dim);
        for (std::size_t r = 0; r < dim; ++r) {
          const Complex res = hphi[r] - e * w.phi[r];
          (*seed)[r] = res * (w.factor[r] / w.norm2);
          const double c = -2.0 * (std::conj(res) * psi[r]).real() / w.norm2;
          model->for_each_feature(r, [&](std::size_t p, double zz) { jgrad[p] += c * zz; });
        }
      }
      return e;
    };
    double v = 0.0;
    if (!g.empty() && k == 0) {
      SubspaceVector seed;
      v = cost(problem.reference(), &seed);
    } else {
      v = evaluate_cost(problem, ops, theta, g.empty() ? g : g.subspan(0, k), cost);
    }
    if (!g.empty()) std::copy(jgrad.begin(), jgrad.end(), g.begin() + static_cast<std::ptrdiff_t>(k));
    return v;
  };
}

VQEResult nu_vqe(const QubitOperator& h, const Statevector& reference,
                 std::span<const QubitOperator> ansatz, const NuVqeOptions& options,
                 const OptimizerConfig& config) {
  if (!options.theta0.empty() && options.theta0.size() != ansatz.size()) {
    throw InputError("initial parameter count does not match ansatz length");
  }
  const CompiledProblem problem(h, reference, ansatz);
  const std::size_t k = ansatz.size();
  std::vector<std::size_t> ops(k);
  std::iota(ops.begin(), ops.end(), 0);
  const JastrowModel model(problem.space(), options.two_body);
  const Objective f = nu_objective(problem, ops, options.two_body, options.min_norm);

  std::vector<double> x0(options.theta0.begin(), options.theta0.end());
  x0.resize(k + model.n_params(), 0.0);
  // Warm-start the Jastrow factor at fixed theta0. Jointly from J = 1 the
  // circuit angles usually relax to the reference before J can pick up the
  // correlation the rotated state already carries.
  if (std::any_of(x0.begin(), x0.begin() + static_cast<std::ptrdiff_t>(k), [](double t) { return t != 0.0; })) {
    const std::vector<double> theta_fixed(x0.begin(), x0.begin() + static_cast<std::ptrdiff_t>(k));
    const Objective jastrow_only = [&](std::span<const double> jas, std::span<double> g) {
      std::vector<double> x(theta_fixed);
      x.insert(x.end(), jas.begin(), jas.end());
      std::vector<double> gx(g.empty() ? 0 : x.size());
      const double v = f(x, gx);
      if (!g.empty()) std::copy(gx.begin() + static_cast<std::ptrdiff_t>(k), gx.end(), g.begin());
      return v;
    };
    const OptimizeResult warm =
        minimize_objective(jastrow_only, std::vector<double>(model.n_params(), 0.0), config);
    std::copy(warm.x.begin(), warm.x.end(), x0.begin() + static_cast<std::ptrdiff_t>(k));
  }
  const OptimizeResult o = minimize_objective(f, x0, config);

  VQEResult r;
  r.method = "nuvqe";
  fill_from_optimizer(r, o);
  const auto kk = static_cast<std::ptrdiff_t>(k);
  const auto n = static_cast<std::ptrdiff_t>(problem.n_qubits());
  r.parameters.assign(o.x.begin(), o.x.begin() + kk);
  r.jastrow.alpha.assign(o.x.begin() + kk, o.x.begin() + kk + n);
  r.jastrow.lambda.assign(o.x.begin() + kk + n, o.x.end());
  r.operator_ids = ops;
  const SubspaceVector psi = prepare_state(problem, ops, r.parameters);
  JastrowWeights w = model.weigh(psi, std::span<const double>(o.x).subspan(k));
  r.energy = o.value;
  if (!(w.norm2 >= options.min_norm) || o.value >= kCollapsedValue) {
    r.flags.emplace_back("norm_collapse");
    r.converged = false;
    r.energy = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const double s = 1.0 / std::sqrt(w.norm2);
  for (auto& v : w.phi) v *= s;
  r.state = problem.embed(w.phi);
  return r;
}

double fmo_assemble(std::span<const double> monomer_energies,
                    const std::map<std::pair<std::size_t, std::size_t>, double>& dimer_energies) {
  double e = std::accumulate(monomer_energies.begin(), monomer_energies.end(), 0.0);
  for (const auto& [ij, eij] : dimer_energies) {
    const auto [i, j] = ij;
    if (i == j || i >= monomer_energies.size() || j >= monomer_energies.size()) {
      throw InputError("fragment pair (" + std::to_string(i) + ", " + std::to_string(j) +
                       ") does not name two distinct monomers");
    }
    e += eij - monomer_energies[i] - monomer_energies[j];
  }
  return e;
}

}  // namespace vqebench
