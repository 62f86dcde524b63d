#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "fvdecay/errors.hpp"
#include "fvdecay/quadrature.hpp"

namespace fvdecay {

struct InequalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// (y^a - x^a)(y^b - x^b) against 4ab/(a+b)^2 (y^{(a+b)/2} - x^{(a+b)/2})^2.
inline InequalitySides chain_bound_sides(double x, double y, double alpha, double beta) {
  if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("chain bound needs x, y >= 0");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("chain bound needs alpha, beta > 0");
  const double s = 0.5 * (alpha + beta);
  const double lhs = (std::pow(y, alpha) - std::pow(x, alpha)) * (std::pow(y, beta) - std::pow(x, beta));
  const double d = std::pow(y, s) - std::pow(x, s);
  const double c = 4.0 * alpha * beta / ((alpha + beta) * (alpha + beta));
  return {lhs, c * d * d};
}

/// (y^b - x^b)(y^a - x^a) against 4ab/(a+1)^2 min{x^{b-1}, y^{b-1}} (y^{(a+1)/2} - x^{(a+1)/2})^2.
inline InequalitySides weighted_chain_bound_sides(double x, double y, double alpha, double beta) {
  if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("weighted chain bound needs x, y >= 0");
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw DomainError("weighted chain bound needs alpha, beta > 0");
  if (beta < 1.0 && (x == 0.0 || y == 0.0))
    throw DomainError("weighted chain bound with beta < 1 needs x, y > 0");
  const double lhs = (std::pow(y, beta) - std::pow(x, beta)) * (std::pow(y, alpha) - std::pow(x, alpha));
  const double weight = std::min(std::pow(x, beta - 1.0), std::pow(y, beta - 1.0));
  const double s = 0.5 * (alpha + 1.0);
  const double d = std::pow(y, s) - std::pow(x, s);
  const double c = 4.0 * alpha * beta / ((alpha + 1.0) * (alpha + 1.0));
  return {lhs, c * weight * d * d};
}

// Recurrence x_{n+1} - x_n + tau x_{n+1}^gamma <= 0.
struct GronwallPowerParams {
  double x0 = 0.0;
  double tau = 0.0;
  double gamma = 2.0;

  void validate() const {
    if (!(gamma > 1.0)) throw DomainError("Gronwall exponent gamma must exceed 1");
    if (!(x0 >= 0.0) || !std::isfinite(x0)) throw DomainError("x0 must be finite and >= 0");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau must be finite and > 0");
  }
};

inline double gronwall_power_bound(const GronwallPowerParams& p, double n) {
  p.validate();
  if (p.x0 == 0.0) return 0.0;
  const double g1 = p.gamma - 1.0;
  const double c = g1 / (1.0 + p.gamma * p.tau * std::pow(p.x0, g1));
  return std::pow(std::pow(p.x0, -g1) + c * p.tau * n, -1.0 / g1);
}

/// Bound w^{-1}(w(x0) - n/(1 + f'(x0))) with w(x) = int_1^x dz/f(z).
///
/// f must be positive, nondecreasing and convex on [0, inf). w is evaluated by
/// adaptive Simpson and inverted by bisection on (0, x0].
inline double gronwall_general_bound(double x0, const std::function<double(double)>& f,
                                     double fprime_at_x0, double n) {
  if (!(x0 >= 0.0)) throw DomainError("x0 must be >= 0");
  if (x0 == 0.0 || n == 0.0) return x0;

  auto w = [&](double x) {
    const auto inv = [&](double z) { return 1.0 / f(z); };
    const auto coarse = quad::adaptive_simpson(inv, 1.0, x, 1e-6);
    const double tol = 1e-12 * std::max(1.0, std::abs(coarse.value));
    const auto fine = quad::adaptive_simpson(inv, 1.0, x, tol);
    if (!fine.converged) {
      std::ostringstream os;
      os << "quadrature of 1/f on [1, " << x << "] did not converge (estimate " << fine.value
         << ", tol " << tol << ", evaluations " << fine.evaluations << ")";
      throw NumericError(os.str());
    }
    return fine.value;
  };

  const double target = w(x0) - n / (1.0 + fprime_at_x0);
  double hi = x0;
  double lo = 0.5 * x0;
  while (w(lo) > target) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) return lo;
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (w(mid) > target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace fvdecay
