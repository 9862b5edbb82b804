// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqebench/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "vqebench/errors.hpp"

namespace vqebench {

std::string_view to_string(OptimizerMethod m) {
  return m == OptimizerMethod::bfgs ? "bfgs" : "nelder-mead";
}

OptimizerMethod parse_optimizer_method(std::string_view name) {
  if (name == "bfgs" || name == "quasi-newton") return OptimizerMethod::bfgs;
  if (name == "nelder-mead" || name == "simplex") return OptimizerMethod::nelder_mead;
  throw InputError("unknown optimizer '" + std::string(name) + "'");
}

namespace {

using Vec = Eigen::VectorXd;

struct Point {
  Vec x;
  double f = 0.0;
  Vec g;
};

/// Counts evaluations and remembers the best point.
class Tracker {
 public:
  Tracker(const Objective& f, std::size_t n) : f_(f), n_(n) {}

  Point eval(const Vec& x) {
    Point p{x, 0.0, Vec::Zero(static_cast<Eigen::Index>(n_))};
    p.f = f_(std::span<const double>(p.x.data(), n_), std::span<double>(p.g.data(), n_));
    ++evals_;
    if (!std::isfinite(p.f)) p.f = std::numeric_limits<double>::infinity();
    if (p.f < best_.f || evals_ == 1) best_ = p;
    return p;
  }
  double eval_value(const Vec& x) {
    const double v = f_(std::span<const double>(x.data(), n_), std::span<double>());
    ++evals_;
    const double f = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    if (f < best_.f || evals_ == 1) best_ = Point{x, f, Vec()};
    return f;
  }
  std::size_t evals() const { return evals_; }
  const Point& best() const { return best_; }

 private:
  const Objective& f_;
  std::size_t n_;
  std::size_t evals_ = 0;
  Point best_{Vec(), std::numeric_limits<double>::infinity(), Vec()};
};

// Noise allowance for comparing objective values near the optimum.
double noise(double f) { return 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(f) + 1.0); }

/// Strong-Wolfe line search (Nocedal & Wright, Alg. 3.5/3.6).
bool line_search(Tracker& t, const Point& x0, const Vec& p, double alpha1, Point& out,
                 std::size_t max_evals) {
  constexpr double c1 = 1e-4, c2 = 0.9;
  const double phi0 = x0.f;
  const double dphi0 = x0.g.dot(p);
  if (!(dphi0 < 0)) return false;
  const double tol = noise(phi0);
  auto at = [&](double a) { return t.eval(x0.x + a * p); };

  auto zoom = [&](double lo, Point plo, double hi, Point phi) -> bool {
    for (int it = 0; it < 40 && t.evals() < max_evals; ++it) {
      // Safeguarded quadratic interpolation on [lo, hi].
      const double dlo = plo.g.dot(p);
      const double d = hi - lo;
      double a = lo + 0.5 * d;
      const double denom = 2.0 * (phi.f - plo.f - dlo * d);
      if (denom > 0) a = lo - dlo * d * d / denom;
      const double lo_b = std::min(lo, hi) + 0.1 * std::abs(d);
      const double hi_b = std::max(lo, hi) - 0.1 * std::abs(d);
      a = std::clamp(a, lo_b, hi_b);
      Point pa = at(a);
      if (pa.f > phi0 + c1 * a * dphi0 + tol || pa.f >= plo.f + tol) {
        hi = a;
        phi = pa;
      } else {
        const double da = pa.g.dot(p);
        if (std::abs(da) <= -c2 * dphi0) {
          out = pa;
          return true;
        }
        if (da * (hi - lo) >= 0) {
          hi = lo;
          phi = plo;
        }
        lo = a;
        plo = pa;
      }
      if (std::abs(hi - lo) < 1e-14 * std::max(1.0, std::abs(lo))) break;
    }
    if (lo > 0 && plo.f <= phi0) {
      out = plo;
      return true;
    }
    return false;
  };

  double a_prev = 0.0;
  Point p_prev = x0;
  double a = alpha1;
  for (int i = 0; i < 30 && t.evals() < max_evals; ++i) {
    Point pa = at(a);
    if (pa.f > phi0 + c1 * a * dphi0 + tol || (i > 0 && pa.f >= p_prev.f + tol)) {
      return zoom(a_prev, p_prev, a, pa);
    }
    const double da = pa.g.dot(p);
    if (std::abs(da) <= -c2 * dphi0) {
      out = pa;
      return true;
    }
    if (da >= 0) return zoom(a, pa, a_prev, p_prev);
    a_prev = a;
    p_prev = pa;
    a *= 2.0;
  }
  if (p_prev.f < phi0) {
    out = p_prev;
    return true;
  }
  return false;
}

OptimizeResult bfgs(const Objective& f, const Vec& x0, const OptimizerConfig& cfg) {
  const auto n = x0.size();
  Tracker t(f, static_cast<std::size_t>(n));
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, cfg.restart_scale);

  OptimizeResult r;
  Point x = t.eval(x0);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  bool fresh = true;
  double f_prev = std::numeric_limits<double>::infinity();
  while (t.evals() < cfg.max_evaluations) {
    const double gn = x.g.norm();
    if (gn < cfg.grad_tol && (r.iterations == 0 || std::abs(f_prev - x.f) < cfg.energy_tol ||
                              std::abs(f_prev - x.f) <= noise(x.f))) {
      r.converged = true;
      break;
    }
    Vec p = -hinv * x.g;
    if (p.dot(x.g) >= 0) {
      hinv.setIdentity();
      fresh = true;
      p = -x.g;
    }
    const double alpha1 = fresh ? std::min(1.0, 1.0 / std::max(gn, 1e-300)) : 1.0;
    Point next;
    if (!line_search(t, x, p, alpha1, next, cfg.max_evaluations)) {
      if (!fresh) {
        hinv.setIdentity();
        fresh = true;
        continue;
      }
      if (r.restarts_used >= cfg.restarts) break;
      ++r.restarts_used;
      Vec y = t.best().x;
      for (Eigen::Index i = 0; i < n; ++i) y(i) += normal(rng);
      x = t.eval(y);
      hinv.setIdentity();
      fresh = true;
      f_prev = std::numeric_limits<double>::infinity();
      continue;
    }
    const Vec s = next.x - x.x;
    const Vec yv = next.g - x.g;
    const double sy = s.dot(yv);
    if (sy > 1e-14 * s.norm() * yv.norm() && sy > 0) {
      if (fresh) hinv *= sy / yv.squaredNorm();
      const double rho = 1.0 / sy;
      const Vec hy = hinv * yv;
      // H+ = (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      hinv += (rho * rho * yv.dot(hy) + rho) * s * s.transpose() - rho * (hy * s.transpose() + s * hy.transpose());
      fresh = false;
    }
    f_prev = x.f;
    x = next;
    ++r.iterations;
  }
  const Point& best = (t.best().f < x.f) ? t.best() : x;
  r.x.assign(best.x.data(), best.x.data() + n);
  r.value = best.f;
  r.gradient_norm = best.g.size() ? best.g.norm() : 0.0;
  r.evaluations = t.evals();
  return r;
}

OptimizeResult nelder_mead(const Objective& f, const Vec& x0, const OptimizerConfig& cfg) {
  const auto n = x0.size();
  Tracker t(f, static_cast<std::size_t>(n));
  std::vector<Vec> simplex{x0};
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec v = x0;
    v(i) += 0.1;
    simplex.push_back(v);
  }
  std::vector<double> fv;
  for (const auto& v : simplex) fv.push_back(t.eval_value(v));
  OptimizeResult r;
  std::vector<std::size_t> idx(simplex.size());
  while (t.evals() < cfg.max_evaluations) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const std::size_t lo = idx.front(), hi = idx.back(), second = idx[idx.size() - 2];
    double spread = 0.0;
    for (const auto& v : simplex) spread = std::max(spread, (v - simplex[lo]).lpNorm<Eigen::Infinity>());
    if (fv[hi] - fv[lo] < cfg.energy_tol && spread < 1e-6) {
      r.converged = true;
      break;
    }
    Vec centroid = Vec::Zero(n);
    for (std::size_t k = 0; k < simplex.size(); ++k)
      if (k != hi) centroid += simplex[k];
    centroid /= static_cast<double>(n);
    const Vec xr = centroid + (centroid - simplex[hi]);
    const double fr = t.eval_value(xr);
    if (fr < fv[lo]) {
      const Vec xe = centroid + 2.0 * (centroid - simplex[hi]);
      const double fe = t.eval_value(xe);
      if (fe < fr) { simplex[hi] = xe; fv[hi] = fe; } else { simplex[hi] = xr; fv[hi] = fr; }
    } else if (fr < fv[second]) {
      simplex[hi] = xr;
      fv[hi] = fr;
    } else {
      const bool outside = fr < fv[hi];
      const Vec xc = outside ? Vec(centroid + 0.5 * (xr - centroid)) : Vec(centroid + 0.5 * (simplex[hi] - centroid));
      const double fc = t.eval_value(xc);
      if (fc < (outside ? fr : fv[hi])) {
        simplex[hi] = xc;
        fv[hi] = fc;
      } else {
        for (std::size_t k = 0; k < simplex.size(); ++k) {
          if (k == lo) continue;
          simplex[k] = simplex[lo] + 0.5 * (simplex[k] - simplex[lo]);
          fv[k] = t.eval_value(simplex[k]);
        }
      }
    }
    ++r.iterations;
  }
  const Point& best = t.best();
  r.x.assign(best.x.data(), best.x.data() + n);
  r.value = best.f;
  r.evaluations = t.evals();
  return r;
}

}  // namespace

OptimizeResult minimize_objective(const Objective& f, std::vector<double> x0,
                                  const OptimizerConfig& config) {
  const Vec x = Eigen::Map<const Vec>(x0.data(), static_cast<Eigen::Index>(x0.size()));
  if (x0.empty()) {
    OptimizeResult r;
    r.value = f(std::span<const double>(), std::span<double>());
    r.evaluations = 1;
    r.converged = true;
    return r;
  }
  return config.method == OptimizerMethod::bfgs ? bfgs(f, x, config) : nelder_mead(f, x, config);
}

}  // namespace vqebench
