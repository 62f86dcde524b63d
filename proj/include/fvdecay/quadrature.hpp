#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "fvdecay/errors.hpp"

namespace fvdecay::quad {

// 5-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 5> gauss5_nodes{
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
inline constexpr std::array<double, 5> gauss5_weights{
    0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
    0.4786286704993664680412915, 0.2369268850561890875142640};

template <class F>
double gauss5(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < 5; ++i) s += gauss5_weights[i] * f(c + r * gauss5_nodes[i]);
  return r * s;
}

template <class F>
double gauss5_2d(F&& f, double ax, double bx, double ay, double by) {
  const double cx = 0.5 * (ax + bx), rx = 0.5 * (bx - ax);
  const double cy = 0.5 * (ay + by), ry = 0.5 * (by - ay);
  double s = 0.0;
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < 5; ++i)
      s += gauss5_weights[i] * gauss5_weights[j] *
           f(cx + rx * gauss5_nodes[i], cy + ry * gauss5_nodes[j]);
  return rx * ry * s;
}

struct SimpsonResult {
  double value = 0.0;
  bool converged = true;
  int evaluations = 0;
};

namespace detail {
inline double simpson_recurse(const std::function<double(double)>& f, double a, double b, double fa,
                              double fm, double fb, double whole, double tol, int depth,
                              SimpsonResult& out) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  out.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    out.converged = false;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}
}  // namespace detail

/// Adaptive Simpson on [a, b] (b < a allowed; sign follows orientation).
inline SimpsonResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                      double tol, int max_depth = 50) {
  SimpsonResult out;
  if (a == b) return out;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  out.evaluations = 3;
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  out.value = detail::simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth, out);
  if (!std::isfinite(out.value)) out.converged = false;
  return out;
}

/// Root of a function with a sign change on [lo, hi], to absolute width tol.
template <class F>
double bisect(F&& f, double lo, double hi, double tol, int max_iter = 400) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace fvdecay::quad
