#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fvdecay/errors.hpp"
#include "fvdecay/functional_ineq.hpp"
#include "fvdecay/mesh.hpp"
#include "fvdecay/scheme.hpp"

namespace fvdecay {

/// Zeroth-order entropy (1/(a+1)) (sum m u^{a+1} - (sum m u)^{a+1}).
inline double zeroth_entropy(const GridFunction& u, double alpha) {
  return (integral_pow(u, alpha + 1.0) - std::pow(u.mass(), alpha + 1.0)) / (alpha + 1.0);
}

/// First-order entropy (1/2) |u^{a/2}|_{1,2}^2.
inline double first_entropy(const GridFunction& u, double alpha) {
  double s = 0.0;
  const double h = 0.5 * alpha;
  for (const auto& e : u.mesh().interior_edges()) {
    const double d = std::pow(u[e.k], h) - std::pow(u[e.l], h);
    s += e.transmissibility * d * d;
  }
  return 0.5 * s;
}

/// sum_sigma tau (u_K^a - u_L^a)(u_K^b - u_L^b) evaluated on the new state.
inline double zeroth_dissipation(const GridFunction& /*u_prev*/, const GridFunction& u_next,
                                 double alpha, double beta) {
  double s = 0.0;
  for (const auto& e : u_next.mesh().interior_edges()) {
    const double a = std::pow(u_next[e.k], alpha) - std::pow(u_next[e.l], alpha);
    const double b = std::pow(u_next[e.k], beta) - std::pow(u_next[e.l], beta);
    s += e.transmissibility * a * b;
  }
  return s;
}

// Beckner parameters used by the zeroth-entropy decay estimates.
inline BecknerParams algebraic_beckner_params(double alpha, double beta) {
  return {0.5 * (alpha + beta), 2.0 * (alpha + 1.0) / (alpha + beta)};
}

/// Algebraic decay bound for beta > 1: (c1 t^k + c2)^{-(a+1)/(b-1)}.
///
/// c1 is obtained by composing the per-step estimate with the power-law Gronwall
/// recurrence, so thm14_bound(k) coincides with gronwall_power_bound at x0 = E0.
inline double thm14_bound(double alpha, double beta, double e0, double dt, double c_b,
                          std::size_t k) {
  if (!(beta > 1.0)) throw DomainError("algebraic decay bound needs beta > 1");
  if (!(alpha > 0.0)) throw DomainError("algebraic decay bound needs alpha > 0");
  if (!(e0 > 0.0)) return 0.0;
  const double gamma = (alpha + beta) / (alpha + 1.0);
  const double g1 = (beta - 1.0) / (alpha + 1.0);
  const double c1 =
      (beta - 1.0) /
      ((alpha + 1.0) * (alpha + beta) * (alpha + beta) / (4.0 * alpha * beta) *
           std::pow(c_b / (alpha + 1.0), gamma) +
       (alpha + beta) * dt * std::pow(e0, g1));
  const double c2 = std::pow(e0, -g1);
  const double t = static_cast<double>(k) * dt;
  return std::pow(c1 * t + c2, -1.0 / g1);
}

struct Thm15Rates {
  double general = 0.0;
  std::optional<double> beta_gt1;

  double best() const { return std::max(general, beta_gt1.value_or(0.0)); }
};

/// Exponential rates for the zeroth entropy, 0 < alpha <= 1.
///
/// c_b2 is the first Beckner constant at (p, q) = ((a+1)/2, 2); c_b_prime the
/// second Beckner constant at ((a+b)/2, 2(a+1)/(a+b)), needed only for beta > 1.
inline Thm15Rates thm15_rate(double alpha, double beta, const GridFunction& u0, double c_b2,
                             std::optional<double> c_b_prime) {
  if (!(alpha > 0.0) || alpha > 1.0) throw DomainError("exponential zeroth-entropy rate needs 0 < alpha <= 1");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  double inf_pow = std::numeric_limits<double>::infinity();
  for (double x : u0.values()) inf_pow = std::min(inf_pow, std::pow(x, beta - 1.0));
  Thm15Rates out;
  out.general = 4.0 * alpha * beta / (c_b2 * (alpha + 1.0)) * inf_pow;
  if (beta > 1.0) {
    if (!c_b_prime) throw DomainError("beta > 1 rate needs the second Beckner constant");
    out.beta_gt1 = 4.0 * alpha * beta * (alpha + 1.0) / (*c_b_prime * (alpha + beta) * (alpha + beta)) *
                   std::pow(u0.mass(), beta - 1.0);
  }
  return out;
}

inline Thm15Rates thm15_rate_from_poincare(double alpha, double beta, const GridFunction& u0,
                                           double c_eff) {
  const double c_b2 = beckner_I_constant({0.5 * (alpha + 1.0), 2.0}, c_eff);
  std::optional<double> c_bp;
  if (beta > 1.0) c_bp = beckner_II_constant(algebraic_beckner_params(alpha, beta), c_eff);
  return thm15_rate(alpha, beta, u0, c_b2, c_bp);
}

/// 4 beta sin^2(pi/N) min_i (u_i^0)^{2(beta-1)} on a uniform periodic 1D grid.
inline double thm16_rate_1d(const GridFunction& u0, double beta) {
  const Mesh& mesh = u0.mesh();
  if (mesh.dimension() != 1 || !mesh.periodic() || !mesh.uniform())
    throw DomainError("first-entropy rate needs a uniform periodic 1D mesh");
  double m = std::numeric_limits<double>::infinity();
  for (double x : u0.values()) m = std::min(m, std::pow(x, 2.0 * (beta - 1.0)));
  const double s = std::sin(std::numbers::pi / static_cast<double>(mesh.size()));
  return 4.0 * beta * s * s * m;
}

struct MonotoneReport {
  std::size_t violations = 0;
  double worst_increase = 0.0;  // largest F[u^{k+1}] - F[u^k]
};

/// Steps where F_alpha increases by more than 1e-12 max(1, F[u^k]).
inline MonotoneReport first_entropy_monotone_check(const SimulationTrace& trace, double alpha) {
  MonotoneReport rep;
  rep.worst_increase = -std::numeric_limits<double>::infinity();
  double prev = first_entropy(trace.states.front(), alpha);
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const double cur = first_entropy(trace.states[k], alpha);
    rep.worst_increase = std::max(rep.worst_increase, cur - prev);
    if (cur - prev > 1e-12 * std::max(1.0, prev)) ++rep.violations;
    prev = cur;
  }
  return rep;
}

enum class EntropyKind { zeroth, first };

inline std::string to_string(EntropyKind k) { return k == EntropyKind::zeroth ? "E" : "F"; }

struct EntropySeries {
  enum class BoundSource { none, thm14, thm15_general, thm15_beta_gt1, thm16_1d };

  double alpha = 1.0;
  EntropyKind kind = EntropyKind::zeroth;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> bound;  // empty when no bound applies
  BoundSource bound_source = BoundSource::none;
};

inline std::string to_string(EntropySeries::BoundSource s) {
  switch (s) {
    case EntropySeries::BoundSource::thm14: return "algebraic_beta_gt1";
    case EntropySeries::BoundSource::thm15_general: return "exponential_inf_u0";
    case EntropySeries::BoundSource::thm15_beta_gt1: return "exponential_mass";
    case EntropySeries::BoundSource::thm16_1d: return "exponential_first_order_1d";
    default: return "none";
  }
}

inline EntropySeries entropy_series(const SimulationTrace& trace, double alpha, EntropyKind kind) {
  EntropySeries s;
  s.alpha = alpha;
  s.kind = kind;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    s.times.push_back(trace.time(k));
    s.values.push_back(kind == EntropyKind::zeroth ? zeroth_entropy(trace.states[k], alpha)
                                                   : first_entropy(trace.states[k], alpha));
  }
  return s;
}

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through (t, ln value) for t in [t_lo, t_hi].
inline DecayFit fit_decay_rate(const EntropySeries& series, double t_lo, double t_hi) {
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < t_lo || t > t_hi) continue;
    if (!(series.values[i] > 0.0)) throw DomainError("decay fit needs positive values in the window");
    ts.push_back(t);
    ys.push_back(std::log(series.values[i]));
  }
  if (ts.size() < 2) throw DomainError("decay fit needs at least two points in the window");
  const double n = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    my += ys[i];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    sty += (ts[i] - mt) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  DecayFit fit;
  fit.points = ts.size();
  fit.slope = sty / stt;
  fit.intercept = my - fit.slope * mt;
  fit.r2 = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
  return fit;
}

struct DissipationReport {
  std::size_t steps = 0;
  double max_increase = -std::numeric_limits<double>::infinity();  // max E[k+1] - E[k]
  double max_excess = -std::numeric_limits<double>::infinity();    // max E[k+1] - E[k] + dt D
  double min_dissipation = std::numeric_limits<double>::infinity();
};

/// Per-step check of E[u^{k+1}] - E[u^k] <= -dt D_k along a trace.
inline DissipationReport check_zeroth_dissipation(const SimulationTrace& trace, double alpha,
                                                  double beta) {
  DissipationReport rep;
  double prev = zeroth_entropy(trace.states.front(), alpha);
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const double cur = zeroth_entropy(trace.states[k], alpha);
    const double d = zeroth_dissipation(trace.states[k - 1], trace.states[k], alpha, beta);
    rep.max_increase = std::max(rep.max_increase, cur - prev);
    rep.max_excess = std::max(rep.max_excess, cur - prev + trace.dt * d);
    rep.min_dissipation = std::min(rep.min_dissipation, d);
    ++rep.steps;
    prev = cur;
  }
  return rep;
}

}  // namespace fvdecay
