#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

#include "fvdecay/errors.hpp"

namespace fvdecay {

// Coefficients of f(kappa) = s0 + s1 kappa + s2 kappa^2.
struct KappaPolynomial {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;

  double operator()(double kappa) const { return s0 + kappa * (s1 + kappa * s2); }
  double discriminant() const { return s1 * s1 - 4.0 * s0 * s2; }
};

inline KappaPolynomial kappa_polynomial(double a, double b, int d) {
  const double dd = d;
  KappaPolynomial p;
  p.s0 = -dd * (5.0 * dd - 8.0) + 6.0 * dd * (dd - 1.0) * a + 2.0 * dd * (dd + 2.0) * b +
         2.0 * (dd + 2.0) * a * b - (2.0 * dd * dd + 1.0) * a * a - (dd + 2.0) * (dd + 2.0) * b * b;
  p.s1 = 2.0 * dd * (3.0 * dd - 4.0) - 2.0 * dd * (4.0 * dd - 3.0) * a - 4.0 * dd * (dd + 1.0) * b +
         2.0 * dd * (3.0 * dd - 5.0) * a * b + 2.0 * dd * (dd + 1.0) * a * a -
         2.0 * dd * (dd - 6.0) * b * b;
  p.s2 = -dd * dd * (a + b - 1.0) * (a + b - 1.0);
  return p;
}

struct RegionWitness {
  double factor1 = 0.0;  // 2 - 2a + 2b - d + ad
  double factor2 = 0.0;  // 4 - 4b - 2d + ad + 2b + 2bd
  double strip = 0.0;    // (a - 2b - 1)(a - 2b + 2)
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double discriminant = 0.0;  // s1^2 - 4 s0 s2
  // -4d^2 (a-2b+2)(a-2b-1)(4 - 4b - 2d + ad + 2bd)(2 - d + (d-2)a + 2b); equals discriminant.
  double discriminant_factored = 0.0;
  double gamma = 0.0;
  // Closed form of the strip condition with the right end included.
  bool in_strip_closed = false;
};

struct RegionVerdict {
  double alpha = 0.0;
  double beta = 0.0;
  int d = 1;
  bool in_strip_1d = false;
  bool in_Md = false;
  bool in_remark9 = false;
  RegionWitness witness;
};

/// -2 <= a - 2b < 1.
inline bool in_strip_1d(double alpha, double beta) {
  const double s = alpha - 2.0 * beta;
  return s >= -2.0 && s < 1.0;
}

inline double gamma_opt(double alpha, double beta) { return 2.0 / 3.0 * (alpha + beta - 1.0); }

// gamma = 0 voids the exponent choice of the one-dimensional argument.
inline bool gamma_admissible(double alpha, double beta) { return gamma_opt(alpha, beta) != 0.0; }

inline RegionVerdict classify(double alpha, double beta, int d) {
  if (d < 2) throw DomainError("multi-dimensional region needs d >= 2");
  const double dd = d;
  RegionVerdict v;
  v.alpha = alpha;
  v.beta = beta;
  v.d = d;
  auto& w = v.witness;
  w.factor1 = 2.0 - 2.0 * alpha + 2.0 * beta - dd + alpha * dd;
  w.factor2 = 4.0 - 4.0 * beta - 2.0 * dd + alpha * dd + 2.0 * beta + 2.0 * beta * dd;
  w.strip = (alpha - 2.0 * beta - 1.0) * (alpha - 2.0 * beta + 2.0);
  const auto p = kappa_polynomial(alpha, beta, d);
  w.s0 = p.s0;
  w.s1 = p.s1;
  w.s2 = p.s2;
  w.discriminant = p.discriminant();
  w.discriminant_factored = -4.0 * dd * dd * (alpha - 2.0 * beta + 2.0) * (alpha - 2.0 * beta - 1.0) *
                            (4.0 - 4.0 * beta - 2.0 * dd + alpha * dd + 2.0 * beta * dd) *
                            (2.0 - dd + (dd - 2.0) * alpha + 2.0 * beta);
  w.gamma = gamma_opt(alpha, beta);
  const double s = alpha - 2.0 * beta;
  w.in_strip_closed = s >= -2.0 && s <= 1.0;

  v.in_strip_1d = in_strip_1d(alpha, beta);
  v.in_Md = w.factor1 * w.factor2 > 0.0 && w.strip < 0.0;
  v.in_remark9 = p.s0 >= 0.0 || (p.s1 >= 0.0 && p.s1 + 2.0 * p.s2 <= 0.0 && w.discriminant >= 0.0);
  return v;
}

inline RegionVerdict in_Md(double alpha, double beta, int d) { return classify(alpha, beta, d); }
inline RegionVerdict in_remark9_region(double alpha, double beta, int d) {
  return classify(alpha, beta, d);
}

/// Brute force: some kappa on a uniform grid in (0, 1) with f(kappa) >= -tol * scale.
inline bool kappa_scan_oracle(double alpha, double beta, int d, std::size_t steps = 10000,
                              double tol = 1e-9) {
  const auto p = kappa_polynomial(alpha, beta, d);
  const double scale = std::max({1.0, std::abs(p.s0), std::abs(p.s1), std::abs(p.s2)});
  for (std::size_t i = 1; i < steps; ++i) {
    const double kappa = static_cast<double>(i) / static_cast<double>(steps);
    if (p(kappa) >= -tol * scale) return true;
  }
  return false;
}

struct RegionRaster {
  int d = 2;
  double alpha_lo = 0.0, alpha_hi = 6.0;
  double beta_lo = 0.0, beta_hi = 6.0;
  std::size_t resolution = 2;
  // Index (i, j): alpha_i = lo + (i+1)(hi-lo)/res, row-major over alpha then beta.
  std::vector<RegionVerdict> cells;

  double alpha(std::size_t i) const {
    return alpha_lo + static_cast<double>(i + 1) * (alpha_hi - alpha_lo) / static_cast<double>(resolution);
  }
  double beta(std::size_t j) const {
    return beta_lo + static_cast<double>(j + 1) * (beta_hi - beta_lo) / static_cast<double>(resolution);
  }
  const RegionVerdict& at(std::size_t i, std::size_t j) const { return cells[i * resolution + j]; }

  std::size_t count_Md() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](auto& c) { return c.in_Md; }));
  }
  std::size_t count_remark9() const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](auto& c) { return c.in_remark9; }));
  }
};

/// Half-open grid (lo, hi] per axis with resolution points each.
inline RegionRaster scan_region(int d, double alpha_lo, double alpha_hi, double beta_lo,
                                double beta_hi, std::size_t resolution, unsigned threads = 0) {
  if (resolution < 2) throw DomainError("region scan needs resolution >= 2");
  if (d < 2) throw DomainError("multi-dimensional region needs d >= 2");
  RegionRaster r{d, alpha_lo, alpha_hi, beta_lo, beta_hi, resolution, {}};
  r.cells.resize(resolution * resolution);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(resolution));
  auto work = [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t i = row_begin; i < row_end; ++i)
      for (std::size_t j = 0; j < resolution; ++j) r.cells[i * resolution + j] = classify(r.alpha(i), r.beta(j), d);
  };
  std::vector<std::thread> pool;
  const std::size_t chunk = (resolution + threads - 1) / threads;
  for (std::size_t b = 0; b < resolution; b += chunk) pool.emplace_back(work, b, std::min(resolution, b + chunk));
  for (auto& t : pool) t.join();
  return r;
}

}  // namespace fvdecay
