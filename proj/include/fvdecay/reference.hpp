#pragma once

#include <cmath>

#include "fvdecay/errors.hpp"
#include "fvdecay/mesh.hpp"

namespace fvdecay {

namespace detail {
inline double dist2(const Point& a, const Point& b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double t = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
    s += t * t;
  }
  return s;
}
}  // namespace detail

/// Barenblatt self-similar solution of u_t = Lap(u^beta), beta > 1.
struct BarenblattParams {
  double beta = 2.0;
  int d = 1;
  double t0 = 0.01;
  double C = 0.0;
  Point x0{0.5, 0.5};

  double A() const { return d / (d * (beta - 1.0) + 2.0); }
  double B() const { return 1.0 / (d * (beta - 1.0) + 2.0); }

  void validate() const {
    if (!(beta > 1.0)) throw DomainError("Barenblatt profile needs beta > 1");
    if (d < 1) throw DomainError("Barenblatt profile needs d >= 1");
    if (!(t0 > 0.0)) throw DomainError("Barenblatt profile needs t0 > 0");
    if (!(C > 0.0)) throw DomainError("Barenblatt profile needs C > 0");
  }

  // Radius of the support at time t.
  double support_radius(double t) const {
    const double s = t + t0;
    return std::sqrt(2.0 * beta * C / (B() * (beta - 1.0))) * std::pow(s, B());
  }
};

/// Profile at radius^2 r2 from the center, in any floating type.
template <class Real>
Real barenblatt_radial(Real r2, Real t, const BarenblattParams& p) {
  using std::pow;
  const Real beta = p.beta, d = p.d;
  const Real A = d / (d * (beta - 1) + 2), B = 1 / (d * (beta - 1) + 2);
  const Real s = t + Real(p.t0);
  const Real inner = Real(p.C) - B * (beta - 1) / (2 * beta) * r2 / pow(s, 2 * B);
  if (inner <= 0) return Real(0);
  return pow(s, -A) * pow(inner, 1 / (beta - 1));
}

inline double barenblatt(const Point& x, double t, const BarenblattParams& p) {
  return barenblatt_radial(detail::dist2(x, p.x0, p.d), t, p);
}

/// Profile constant placing the support edge at x1 at time t1.
inline double barenblatt_C(double t0, double t1, const Point& x0, const Point& x1, double beta,
                           int d) {
  const double B = 1.0 / (d * (beta - 1.0) + 2.0);
  return B * (beta - 1.0) / (2.0 * beta) * std::pow(t1 + t0, -2.0 * B) * detail::dist2(x1, x0, d);
}

inline double truncated_poly_1d(double x, double x0 = 0.3, double x1 = 0.7, double C = 3000.0) {
  const double v = (x0 - x) * (x - x1);
  return v > 0.0 ? C * v * v : 0.0;
}

inline double bump_2d(const Point& x, const Point& x0 = {0.5, 0.5}, double R = 0.2,
                      double C = 3000.0) {
  const double v = R * R - detail::dist2(x, x0, 2);
  return v > 0.0 ? C * v * v : 0.0;
}

}  // namespace fvdecay
