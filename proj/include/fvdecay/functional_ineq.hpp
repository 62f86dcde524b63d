#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fvdecay/errors.hpp"
#include "fvdecay/mesh.hpp"

namespace fvdecay {

// Sum of m(K) |f_K|^q, defined for any q > 0.
inline double integral_pow(const GridFunction& f, double q) {
  const Mesh& mesh = f.mesh();
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += mesh.measure(k) * std::pow(std::abs(f[k]), q);
  return s;
}

inline double lp_norm(const GridFunction& f, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm needs p >= 1");
  return std::pow(integral_pow(f, p), 1.0 / p);
}

// (sum over interior faces of tau_sigma (f_K - f_L)^2)^{1/2}
inline double h1_seminorm(const GridFunction& f) {
  double s = 0.0;
  for (const auto& e : f.mesh().interior_edges()) {
    const double d = f[e.k] - f[e.l];
    s += e.transmissibility * d * d;
  }
  return std::sqrt(s);
}

inline double mean(const GridFunction& f) { return f.mass(); }

struct PoincareConstant {
  enum class Source { spectral, supplied };
  double value = 0.0;
  Source source = Source::spectral;

  static PoincareConstant supplied(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("Poincare constant must be positive");
    return {c, Source::supplied};
  }
};

enum class EigenMethod { automatic, dense, inverse_power };

struct PoincareEigenpair {
  double lambda = 0.0;
  std::vector<double> vector;  // M-orthogonal to constants, unit M-norm
  int iterations = 0;
};

namespace detail {

inline Eigen::MatrixXd dense_laplacian(const Mesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : mesh.interior_edges()) {
    const auto k = static_cast<Eigen::Index>(e.k), l = static_cast<Eigen::Index>(e.l);
    L(k, k) += e.transmissibility;
    L(l, l) += e.transmissibility;
    L(k, l) -= e.transmissibility;
    L(l, k) -= e.transmissibility;
  }
  return L;
}

inline PoincareEigenpair dense_eigenpair(const Mesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.size());
  Eigen::VectorXd s(n);
  for (Eigen::Index k = 0; k < n; ++k) s(k) = 1.0 / std::sqrt(mesh.measure(static_cast<std::size_t>(k)));
  const Eigen::MatrixXd S = s.asDiagonal() * dense_laplacian(mesh) * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) throw NumericError("dense eigen-solve failed");
  PoincareEigenpair out;
  out.lambda = es.eigenvalues()(1);
  const Eigen::VectorXd v = s.asDiagonal() * es.eigenvectors().col(1);
  out.vector.assign(v.data(), v.data() + n);
  return out;
}

inline PoincareEigenpair inverse_power_eigenpair(const Mesh& mesh, double tol = 1e-12,
                                                 int max_iter = 20000) {
  const auto n = static_cast<Eigen::Index>(mesh.size());
  // Grounded Laplacian: drop cell 0. Nonsingular on a connected mesh.
  std::vector<Eigen::Triplet<double>> trip;
  auto add = [&](std::size_t i, std::size_t j, double v) {
    if (i == 0 || j == 0) return;
    trip.emplace_back(static_cast<Eigen::Index>(i) - 1, static_cast<Eigen::Index>(j) - 1, v);
  };
  for (const auto& e : mesh.interior_edges()) {
    add(e.k, e.k, e.transmissibility);
    add(e.l, e.l, e.transmissibility);
    add(e.k, e.l, -e.transmissibility);
    add(e.l, e.k, -e.transmissibility);
  }
  Eigen::SparseMatrix<double> G(n - 1, n - 1);
  G.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(G);
  if (solver.info() != Eigen::Success) throw NumericError("grounded Laplacian factorization failed");

  Eigen::VectorXd m(n);
  for (Eigen::Index k = 0; k < n; ++k) m(k) = mesh.measure(static_cast<std::size_t>(k));
  auto normalize = [&](Eigen::VectorXd& x) {
    x.array() -= m.dot(x) / m.sum();
    x /= std::sqrt(x.dot(m.cwiseProduct(x)));
  };
  auto rayleigh = [&](const Eigen::VectorXd& x) {
    double num = 0.0;
    for (const auto& e : mesh.interior_edges()) {
      const double d = x(static_cast<Eigen::Index>(e.k)) - x(static_cast<Eigen::Index>(e.l));
      num += e.transmissibility * d * d;
    }
    return num / x.dot(m.cwiseProduct(x));
  };

  Eigen::VectorXd x(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& c = mesh.cell(static_cast<std::size_t>(k)).center;
    x(k) = c[0] + 0.37 * c[1] + 0.01 * std::sin(12.9898 * static_cast<double>(k));
  }
  normalize(x);
  double lambda = rayleigh(x);
  PoincareEigenpair out;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXd b = m.cwiseProduct(x);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    y.tail(n - 1) = solver.solve(b.tail(n - 1));
    normalize(y);
    const double next = rayleigh(y);
    x = std::move(y);
    out.iterations = it;
    if (std::abs(next - lambda) <= tol * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  out.lambda = lambda;
  out.vector.assign(x.data(), x.data() + n);
  return out;
}

}  // namespace detail

/// Smallest nonzero eigenvalue of L v = lambda M v and its eigenvector.
inline PoincareEigenpair poincare_eigenpair(const Mesh& mesh,
                                            EigenMethod method = EigenMethod::automatic) {
  if (!mesh.connected()) throw DomainError("Poincare constant undefined on a disconnected mesh");
  if (method == EigenMethod::automatic)
    method = mesh.size() <= 1024 ? EigenMethod::dense : EigenMethod::inverse_power;
  auto pair = method == EigenMethod::dense ? detail::dense_eigenpair(mesh)
                                           : detail::inverse_power_eigenpair(mesh);
  if (!(pair.lambda > 0.0)) throw DomainError("smallest nonzero eigenvalue vanished");
  return pair;
}

/// Best constant C in ||f - mean f||_{0,2} <= C |f|_{1,2}, i.e. lambda_1^{-1/2}.
inline PoincareConstant spectral_poincare_constant(const Mesh& mesh,
                                                   EigenMethod method = EigenMethod::automatic) {
  return {1.0 / std::sqrt(poincare_eigenpair(mesh, method).lambda),
          PoincareConstant::Source::spectral};
}

struct BecknerParams {
  double p = 1.0;
  double q = 2.0;

  double r() const { return p * q; }

  // Also admits pq = 1 with q < 2, where the gap vanishes identically.
  bool valid_first() const {
    return (q > 0.0 && q < 2.0 && p * q >= 1.0) || (q == 2.0 && p > 0.0 && p <= 1.0);
  }
  bool valid_second() const { return q > 0.0 && q < 2.0 && p * q >= 1.0; }
};

/// int f^q - (int f^{1/p})^{pq}, integrals as measure-weighted sums.
inline double beckner_gap(const GridFunction& f, const BecknerParams& bp) {
  return integral_pow(f, bp.q) - std::pow(integral_pow(f, 1.0 / bp.p), bp.p * bp.q);
}

inline double beckner_I_constant(const BecknerParams& bp, double c_eff) {
  if (!bp.valid_first()) throw DomainError("parameters outside the first Beckner inequality");
  if (bp.q == 2.0) return c_eff * c_eff;
  return 2.0 * (bp.r() - 1.0) * std::pow(c_eff, bp.q) / (2.0 - bp.q);
}

inline double beckner_II_constant(const BecknerParams& bp, double c_eff) {
  if (bp.q == 2.0) throw DomainError("second Beckner inequality needs q < 2");
  if (!bp.valid_second()) throw DomainError("parameters outside the second Beckner inequality");
  const double c2 = c_eff * c_eff;
  if (bp.q >= 1.0) return bp.q * (bp.r() - 1.0) * c2 / (2.0 - bp.q);
  return (bp.r() - 1.0) * c2;
}

struct InequalityCheck {
  double gap = 0.0;    // left-hand side
  double bound = 0.0;  // right-hand side
  double slack = 0.0;  // bound - gap
  bool holds = false;
};

inline InequalityCheck make_check(double lhs, double rhs, double rel_tol = 1e-12) {
  return {lhs, rhs, rhs - lhs, lhs <= rhs + rel_tol * std::max(1.0, std::abs(rhs))};
}

inline InequalityCheck check_beckner_I(const GridFunction& f, const BecknerParams& bp,
                                       double c_eff) {
  const double lhs = beckner_gap(f, bp);
  const double rhs = beckner_I_constant(bp, c_eff) * std::pow(h1_seminorm(f), bp.q);
  return make_check(lhs, rhs);
}

inline InequalityCheck check_beckner_II(const GridFunction& f, const BecknerParams& bp,
                                        double c_eff) {
  const double norm_q = std::pow(integral_pow(f, bp.q), 1.0 / bp.q);
  const double lhs = std::pow(norm_q, 2.0 - bp.q) * beckner_gap(f, bp);
  const double semi = h1_seminorm(f);
  const double rhs = beckner_II_constant(bp, c_eff) * semi * semi;
  return make_check(lhs, rhs);
}

struct WirtingerCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Cyclic sum (z_i - z_{i-1})^2 >= 4 sin^2(pi/n) sum z_i^2 for mean-zero z.
inline WirtingerCheck wirtinger_check(std::span<const double> z, double rel_tol = 1e-12) {
  const std::size_t n = z.size();
  if (n < 2) throw DomainError("Wirtinger check needs at least two values");
  double sum = 0.0, sq = 0.0;
  for (double v : z) {
    sum += v;
    sq += v * v;
  }
  if (std::abs(sum) > 1e-10 * std::sqrt(sq))
    throw DomainError("Wirtinger check needs a mean-zero sequence");
  double lhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = z[i] - z[(i + n - 1) % n];
    lhs += d * d;
  }
  const double s = std::sin(std::numbers::pi / static_cast<double>(n));
  const double rhs = 4.0 * s * s * sq;
  return {lhs, rhs, lhs >= rhs - rel_tol * std::max(1.0, rhs)};
}

}  // namespace fvdecay
