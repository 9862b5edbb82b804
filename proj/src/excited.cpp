// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqebench/excited.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "vqebench/errors.hpp"
#include "vqebench/pools.hpp"

namespace vqebench {

double default_vqd_beta(const QubitOperator& h) {
  double s = 0.0;
  for (const auto& [p, c] : h.terms())
    if (!p.is_identity()) s += std::abs(c);
  return 2.0 * s;
}

namespace {

std::vector<double> random_angles(std::size_t n, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

struct Best {
  OptimizeResult opt;
  bool set = false;
};

/// Runs `starts` optimizations (the first from `first` if given) and keeps the lowest.
Best multistart(const Objective& f, std::size_t n, int starts, double scale,
                const std::vector<double>* first, const OptimizerConfig& config,
                std::mt19937_64& rng, std::size_t& evaluations) {
  Best best;
  for (int s = 0; s < std::max(1, starts); ++s) {
    std::vector<double> x0 = (s == 0 && first) ? *first : random_angles(n, scale, rng);
    OptimizerConfig c = config;
    c.seed = config.seed + static_cast<std::uint64_t>(s);
    OptimizeResult o = minimize_objective(f, std::move(x0), c);
    evaluations += o.evaluations;
    if (!best.set || o.value < best.opt.value) {
      best.opt = std::move(o);
      best.set = true;
    }
  }
  return best;
}

}  // namespace

std::vector<VQEResult> vqd(const QubitOperator& h, const Statevector& reference,
                           const AnsatzFactory& ansatz, std::size_t n_levels,
                           const VqdOptions& options, const OptimizerConfig& config) {
  std::vector<VQEResult> levels;
  std::vector<Statevector> found;
  std::mt19937_64 rng(config.seed);
  const double beta_default = default_vqd_beta(h);
  for (std::size_t level = 0; level < n_levels; ++level) {
    const std::vector<QubitOperator> ops_list = ansatz(level);
    const CompiledProblem problem(h, reference, ops_list);
    std::vector<std::size_t> ops(ops_list.size());
    std::iota(ops.begin(), ops.end(), 0);
    std::vector<SubspaceVector> previous;
    for (const auto& s : found) previous.push_back(problem.restrict(s));

    std::vector<double> betas(level);
    for (std::size_t j = 0; j < level; ++j) {
      betas[j] = j < options.betas.size() ? options.betas[j] : beta_default;
    }

    VQEResult r;
    r.method = "vqd";
    std::size_t evaluations = 0;
    for (int attempt = 0;; ++attempt) {
      const CostFunction cost = [&](const SubspaceVector& psi, SubspaceVector* seed) {
        SubspaceVector hpsi = problem.hamiltonian().apply(psi);
        double value = dot_real(psi, hpsi);
        for (std::size_t j = 0; j < previous.size(); ++j) {
          const Complex ov = inner(previous[j], psi);
          value += betas[j] * std::norm(ov);
          if (seed)
            for (std::size_t i = 0; i < psi.size(); ++i) hpsi[i] += betas[j] * ov * previous[j][i];
        }
        if (seed) *seed = std::move(hpsi);
        return value;
      };
      const Objective f = [&](std::span<const double> x, std::span<double> g) {
        return evaluate_cost(problem, ops, x, g, cost);
      };
      const std::vector<double> zeros(ops.size(), 0.0);
      const Best best = multistart(f, ops.size(), options.starts, options.init_scale,
                                   level == 0 ? &zeros : nullptr, config, rng, evaluations);
      const SubspaceVector psi = prepare_state(problem, ops, best.opt.x);
      double worst = 0.0;
      for (const auto& p : previous) worst = std::max(worst, std::norm(inner(p, psi)));

      r.parameters = best.opt.x;
      r.objective = best.opt.value;
      r.iterations = best.opt.iterations;
      r.gradient_norm = best.opt.gradient_norm;
      r.converged = best.opt.converged;
      r.energy = problem.hamiltonian().expectation(psi).real();
      r.state = problem.embed(psi);
      r.flags.clear();
      if (worst > options.collapse_overlap) {
        if (attempt < options.max_retries) {
          for (auto& b : betas) b *= 2.0;
          continue;
        }
        r.flags.emplace_back("collapsed");
        r.converged = false;
      } else if (worst > 1e-4) {
        r.flags.emplace_back("overlap");
      }
      break;
    }
    r.evaluations = evaluations;
    r.operator_ids = ops;
    if (!r.converged && !r.has_flag("collapsed")) r.flags.emplace_back("unconverged");
    found.push_back(r.state);
    levels.push_back(std::move(r));
  }
  return levels;
}

VQEResult fs_vqe(const QubitOperator& h, const Statevector& reference,
                 std::span<const QubitOperator> ansatz, double omega,
                 const FoldedOptions& options, const OptimizerConfig& config) {
  const CompiledProblem problem(h, reference, ansatz);
  std::vector<std::size_t> ops(ansatz.size());
  std::iota(ops.begin(), ops.end(), 0);
  const CostFunction cost = [&](const SubspaceVector& psi, SubspaceVector* seed) {
    SubspaceVector r = problem.hamiltonian().apply(psi);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= omega * psi[i];
    const double value = norm_squared(r);
    if (seed) {
      *seed = problem.hamiltonian().apply(r);
      for (std::size_t i = 0; i < r.size(); ++i) (*seed)[i] -= omega * r[i];
    }
    return value;
  };
  const Objective f = [&](std::span<const double> x, std::span<double> g) {
    return evaluate_cost(problem, ops, x, g, cost);
  };
  std::mt19937_64 rng(config.seed);
  std::size_t evaluations = 0;
  const Best best = multistart(f, ops.size(), options.starts, options.init_scale, nullptr, config,
                               rng, evaluations);
  VQEResult r;
  r.method = "fs";
  r.parameters = best.opt.x;
  r.objective = best.opt.value;
  r.iterations = best.opt.iterations;
  r.evaluations = evaluations;
  r.gradient_norm = best.opt.gradient_norm;
  r.converged = best.opt.converged;
  if (!r.converged) r.flags.emplace_back("unconverged");
  r.operator_ids = ops;
  const SubspaceVector psi = prepare_state(problem, ops, r.parameters);
  r.energy = problem.hamiltonian().expectation(psi).real();
  r.state = problem.embed(psi);
  return r;
}

EomBasis EomBasis::singles_doubles(const MolecularIntegrals& mi) {
  EomBasis b;
  const OperatorPool pool = uccsd_pool(mi);
  for (const auto& e : pool.entries) {
    b.operators.push_back(jordan_wigner(e.generator.excitation(), mi.n_spin_orbitals()));
    b.labels.push_back(e.label);
  }
  return b;
}

std::vector<double> qeom(const QubitOperator& h, const Statevector& ground, const EomBasis& basis,
                         QeomReport* report) {
  const std::size_t n = basis.operators.size();
  if (n == 0) return {};
  Statevector g = ground;
  g.set_normalized(true);
  const Statevector hg = apply_operator(g, h);
  // a = E g, b = E^+ g, c = E H g, d = E^+ H g
  std::vector<Statevector> a, b, c, d, ha, hb;
  for (const auto& e : basis.operators) {
    const QubitOperator ed = e.adjoint();
    a.push_back(apply_operator(g, e));
    b.push_back(apply_operator(g, ed));
    c.push_back(apply_operator(hg, e));
    d.push_back(apply_operator(hg, ed));
    ha.push_back(apply_operator(a.back(), h));
    hb.push_back(apply_operator(b.back(), h));
  }
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd M(N, N), Q(N, N), V(N, N), W(N, N);
  auto ip = [](const Statevector& x, const Statevector& y) { return overlap(x, y); };
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t v = 0; v < n; ++v) {
      // Symmetrized double commutators: 1/2 (<[E_m^+,[H,X]]> + <[[E_m^+,H],X]>).
      const Complex m1 = ip(a[m], ha[v]) - ip(a[m], c[v]) - ip(d[v], b[m]) + ip(b[v], hb[m]);
      const Complex m2 = ip(a[m], ha[v]) - ip(c[m], a[v]) - ip(b[v], d[m]) + ip(b[v], hb[m]);
      const Complex q1 = ip(a[m], hb[v]) - ip(a[m], d[v]) - ip(c[v], b[m]) + ip(a[v], hb[m]);
      const Complex q2 = ip(a[m], hb[v]) - ip(c[m], b[v]) - ip(a[v], d[m]) + ip(a[v], hb[m]);
      const auto i = static_cast<Eigen::Index>(m), j = static_cast<Eigen::Index>(v);
      M(i, j) = 0.5 * (m1 + m2);
      Q(i, j) = -0.5 * (q1 + q2);
      V(i, j) = ip(a[m], a[v]) - ip(b[v], b[m]);
      W(i, j) = -(ip(a[m], b[v]) - ip(a[v], b[m]));
    }
  }
  if (report) {
    report->M = M;
    report->Q = Q;
    report->V = V;
    report->W = W;
  }

  // Remove directions that V cannot resolve.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (V + V.adjoint()));
  const Eigen::VectorXd lv = es.eigenvalues();
  const double vmax = lv.cwiseAbs().maxCoeff();
  const double vmin = lv.cwiseAbs().minCoeff();
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(N, N);
  if (vmax == 0.0) throw Error("qEOM metric vanishes; the excitation basis annihilates the state");
  if (vmin == 0.0 || vmax / vmin > 1e12) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < N; ++k)
      if (std::abs(lv(k)) > 1e-12 * vmax) keep.push_back(k);
    U.resize(N, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
      U.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
    if (report) report->pruned = n - keep.size();
  }
  const Eigen::MatrixXcd Uc = U.conjugate();
  const Eigen::MatrixXcd Mp = U.adjoint() * M * U;
  const Eigen::MatrixXcd Qp = U.adjoint() * Q * Uc;
  const Eigen::MatrixXcd Vp = U.adjoint() * V * U;
  const Eigen::MatrixXcd Wp = U.adjoint() * W * Uc;
  const Eigen::Index r = U.cols();
  Eigen::MatrixXcd A(2 * r, 2 * r), B(2 * r, 2 * r);
  A << Mp, Qp, Qp.conjugate(), Mp.conjugate();
  B << Vp, Wp, -Wp.conjugate(), -Vp.conjugate();
  const Eigen::MatrixXcd BA = B.fullPivLu().solve(A);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(BA, false);
  if (ces.info() != Eigen::Success) throw Error("qEOM eigensolver failed");
  std::vector<Complex> roots(ces.eigenvalues().data(), ces.eigenvalues().data() + 2 * r);
  std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) { return x.real() > y.real(); });
  std::vector<double> out;
  double max_im = 0.0;
  for (Eigen::Index k = 0; k < r; ++k) {
    out.push_back(roots[static_cast<std::size_t>(k)].real());
    max_im = std::max(max_im, std::abs(roots[static_cast<std::size_t>(k)].imag()));
  }
  std::sort(out.begin(), out.end());
  if (report) report->max_imaginary = max_im;
  return out;
}

}  // namespace vqebench
