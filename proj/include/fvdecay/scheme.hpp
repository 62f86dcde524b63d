#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

#include "fvdecay/errors.hpp"
#include "fvdecay/mesh.hpp"
#include "fvdecay/quadrature.hpp"

namespace fvdecay {

struct NewtonOptions {
  // Max-norm of the residual scaled by dt/m(K).
  double abs_tol = 1e-12;
  int max_iters = 100;
  bool damping = true;
  int max_halvings = 30;
  // Lower clamp on v inside v^{beta-1} for the Jacobian only.
  double jacobian_floor = 1e-12;
  // Extra iterations after convergence, kept only while the residual shrinks.
  int polish_iters = 2;
  // Allowed overshoot of [min u_prev, max u_prev] before the step is rejected.
  double bounds_tol = 1e-9;
};

struct SchemeParams {
  double beta = 2.0;
  double dt = 2e-4;
  std::size_t n_steps = 1000;
  NewtonOptions newton;

  void validate() const {
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (!(newton.abs_tol > 0.0)) throw DomainError("Newton tolerance must be positive");
  }
};

/// Cell means of u0 by tensor 5-point Gauss quadrature, composite over panels^d sub-cells.
inline GridFunction project_initial(const std::function<double(const Point&)>& u0,
                                    const Mesh& mesh, int panels = 4) {
  if (!mesh.uniform()) throw DomainError("projection needs a uniform structured mesh");
  if (panels < 1) throw DomainError("projection needs at least one panel per axis");
  const double h = 1.0 / static_cast<double>(mesh.n_per_axis());
  const double hp = h / panels;
  auto sample = [&](const Point& x) {
    const double v = u0(x);
    if (!(v >= 0.0)) throw DomainError("initial datum must be nonnegative");
    return v;
  };
  std::vector<double> values(mesh.size());
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    const Point& c = mesh.cell(k).center;
    const double x0 = c[0] - 0.5 * h, y0 = c[1] - 0.5 * h;
    double sum = 0.0;
    if (mesh.dimension() == 1) {
      for (int i = 0; i < panels; ++i)
        sum += quad::gauss5([&](double x) { return sample({x, 0.0}); }, x0 + i * hp, x0 + (i + 1) * hp);
      values[k] = sum / h;
    } else {
      for (int j = 0; j < panels; ++j)
        for (int i = 0; i < panels; ++i)
          sum += quad::gauss5_2d([&](double x, double y) { return sample({x, y}); }, x0 + i * hp,
                                 x0 + (i + 1) * hp, y0 + j * hp, y0 + (j + 1) * hp);
      values[k] = sum / (h * h);
    }
  }
  return GridFunction(mesh, std::move(values));
}

/// m(K)(v_K - u_K)/dt + sum_sigma tau_sigma (v_K^beta - v_L^beta), per cell.
inline std::vector<double> step_residual(const GridFunction& v, const GridFunction& u_prev,
                                         const SchemeParams& params) {
  const Mesh& mesh = v.mesh();
  std::vector<double> r(mesh.size());
  for (std::size_t k = 0; k < mesh.size(); ++k) r[k] = mesh.measure(k) * (v[k] - u_prev[k]) / params.dt;
  for (const auto& e : mesh.interior_edges()) {
    const double flux = e.transmissibility * (std::pow(v[e.k], params.beta) - std::pow(v[e.l], params.beta));
    r[e.k] += flux;
    r[e.l] -= flux;
  }
  return r;
}

struct StepResult {
  GridFunction state;
  int iterations = 0;
  double residual = 0.0;  // scaled max-norm
};

/// Damped Newton solver for one implicit Euler step; reuses the sparsity analysis across steps.
class StepSolver {
 public:
  StepSolver(const Mesh& mesh, SchemeParams params) : mesh_(&mesh), params_(std::move(params)) {
    params_.validate();
    for (std::size_t k = 0; k < mesh.size(); ++k) inv_scale_.push_back(params_.dt / mesh.measure(k));
  }

  const SchemeParams& params() const { return params_; }

  StepResult solve(const GridFunction& u_prev) {
    const auto& opt = params_.newton;
    for (double x : u_prev.values()) {
      if (!(x >= 0.0)) throw DomainError("implicit step needs a nonnegative state");
    }
    GridFunction v = u_prev;
    auto r = step_residual(v, u_prev, params_);
    double norm = scaled_inf(r);
    int it = 0;
    while (norm > opt.abs_tol) {
      if (it == opt.max_iters) {
        std::ostringstream os;
        os << "Newton did not converge in " << opt.max_iters << " iterations (residual " << norm << ")";
        throw SolverError(os.str(), norm);
      }
      ++it;
      auto next = newton_update(v, u_prev, r, /*require_decrease=*/opt.damping);
      if (!next) {
        std::ostringstream os;
        os << "Newton line search failed after " << opt.max_halvings << " halvings (residual "
           << norm << ")";
        throw SolverError(os.str(), norm);
      }
      v = std::move(next->first);
      r = std::move(next->second);
      norm = scaled_inf(r);
    }
    if (it > 0) {
      for (int p = 0; p < opt.polish_iters; ++p) {
        auto next = newton_update(v, u_prev, r, true, 0);
        if (!next || !(scaled_inf(next->second) < norm)) break;
        v = std::move(next->first);
        r = std::move(next->second);
        norm = scaled_inf(r);
      }
    }

    const double lo = u_prev.min() - opt.bounds_tol, hi = u_prev.max() + opt.bounds_tol;
    if (v.min() < lo || v.max() > hi) {
      std::ostringstream os;
      os << "implicit step left the bounds of the previous state: [" << v.min() << ", " << v.max()
         << "] vs [" << u_prev.min() << ", " << u_prev.max() << "]";
      throw SolverError(os.str(), norm);
    }
    return {std::move(v), it, norm};
  }

 private:
  double scaled_inf(const std::vector<double>& r) const {
    double s = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) s = std::max(s, std::abs(r[k]) * inv_scale_[k]);
    return s;
  }

  double scaled_two(const std::vector<double>& r) const {
    double s = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double t = r[k] * inv_scale_[k];
      s += t * t;
    }
    return std::sqrt(s);
  }

  void assemble(const GridFunction& v) {
    const Mesh& mesh = *mesh_;
    const double beta = params_.beta;
    std::vector<double> g(mesh.size());
    for (std::size_t k = 0; k < mesh.size(); ++k)
      g[k] = beta * std::pow(std::max(v[k], params_.newton.jacobian_floor), beta - 1.0);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.size() + 4 * mesh.interior_edges().size());
    for (std::size_t k = 0; k < mesh.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      trip.emplace_back(i, i, mesh.measure(k) / params_.dt);
    }
    for (const auto& e : mesh.interior_edges()) {
      const auto k = static_cast<Eigen::Index>(e.k), l = static_cast<Eigen::Index>(e.l);
      const double t = e.transmissibility;
      trip.emplace_back(k, k, t * g[e.k]);
      trip.emplace_back(k, l, -t * g[e.l]);
      trip.emplace_back(l, l, t * g[e.l]);
      trip.emplace_back(l, k, -t * g[e.k]);
    }
    const auto n = static_cast<Eigen::Index>(mesh.size());
    jac_.resize(n, n);
    jac_.setFromTriplets(trip.begin(), trip.end());
    jac_.makeCompressed();
    if (!analyzed_) {
      lu_.analyzePattern(jac_);
      analyzed_ = true;
    }
    lu_.factorize(jac_);
    if (lu_.info() != Eigen::Success) throw SolverError("Jacobian factorization failed", 0.0);
  }

  // One Newton step with halving line search; candidates are projected onto v >= 0.
  std::optional<std::pair<GridFunction, std::vector<double>>> newton_update(
      const GridFunction& v, const GridFunction& u_prev, const std::vector<double>& r,
      bool require_decrease, std::optional<int> halvings = std::nullopt) {
    assemble(v);
    const auto n = static_cast<Eigen::Index>(v.size());
    Eigen::VectorXd rhs(n);
    for (Eigen::Index k = 0; k < n; ++k) rhs(k) = -r[static_cast<std::size_t>(k)];
    const Eigen::VectorXd delta = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success || !delta.allFinite()) return std::nullopt;

    const double current = scaled_two(r);
    const int max_h = halvings.value_or(params_.newton.max_halvings);
    double s = 1.0;
    for (int h = 0; h <= max_h; ++h, s *= 0.5) {
      GridFunction cand = v;
      for (Eigen::Index k = 0; k < n; ++k) {
        auto& c = cand[static_cast<std::size_t>(k)];
        c = std::max(0.0, c + s * delta(k));
      }
      auto rc = step_residual(cand, u_prev, params_);
      if (!require_decrease || scaled_two(rc) < current) return std::make_pair(std::move(cand), std::move(rc));
    }
    return std::nullopt;
  }

  const Mesh* mesh_;
  SchemeParams params_;
  std::vector<double> inv_scale_;
  Eigen::SparseMatrix<double> jac_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  bool analyzed_ = false;
};

inline GridFunction implicit_step(const GridFunction& u_prev, const SchemeParams& params) {
  StepSolver solver(u_prev.mesh(), params);
  return solver.solve(u_prev).state;
}

struct StepDiagnostics {
  std::size_t k = 0;
  double t = 0.0;
  double mass = 0.0;
  double min = 0.0;
  double max = 0.0;
  int newton_iters = 0;
  double residual = 0.0;
};

struct SimulationTrace {
  double dt = 0.0;
  std::vector<GridFunction> states;
  std::vector<StepDiagnostics> diagnostics;

  std::size_t size() const { return states.size(); }
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
};

using StepObserver = std::function<void(std::size_t k, double t, const GridFunction& u)>;

/// Runs n_steps implicit steps from u0. Observers see every accepted step (k >= 1).
inline SimulationTrace simulate(const GridFunction& u0, const SchemeParams& params,
                                const std::vector<StepObserver>& observers = {}) {
  for (double x : u0.values()) {
    if (!(x >= 0.0)) throw DomainError("initial state must be nonnegative");
  }
  StepSolver solver(u0.mesh(), params);
  SimulationTrace trace;
  trace.dt = params.dt;
  trace.states.reserve(params.n_steps + 1);
  trace.diagnostics.reserve(params.n_steps + 1);
  trace.states.push_back(u0);
  trace.diagnostics.push_back({0, 0.0, u0.mass(), u0.min(), u0.max(), 0, 0.0});
  for (std::size_t k = 1; k <= params.n_steps; ++k) {
    StepResult step = [&] {
      try {
        return solver.solve(trace.states.back());
      } catch (const SolverError& e) {
        std::ostringstream os;
        os << "step " << k << ": " << e.what();
        throw SolverError(os.str(), e.residual, k);
      }
    }();
    const double t = trace.time(k);
    const auto& u = step.state;
    trace.diagnostics.push_back({k, t, u.mass(), u.min(), u.max(), step.iterations, step.residual});
    trace.states.push_back(std::move(step.state));
    for (const auto& obs : observers) obs(k, t, trace.states.back());
  }
  return trace;
}

}  // namespace fvdecay
