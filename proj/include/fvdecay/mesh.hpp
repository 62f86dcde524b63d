#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fvdecay/errors.hpp"

namespace fvdecay {

enum class Boundary { neumann, periodic };

inline std::string to_string(Boundary b) {
  return b == Boundary::neumann ? "neumann" : "periodic";
}

inline Boundary parse_boundary(const std::string& s) {
  if (s == "neumann") return Boundary::neumann;
  if (s == "periodic") return Boundary::periodic;
  throw ConfigError("unknown boundary '" + s + "' (expected neumann|periodic)");
}

using Point = std::array<double, 2>;

struct Cell {
  double measure = 0.0;
  Point center{0.0, 0.0};
};

// Face shared by cells k and l. face_distance_k/l are d(x_K, sigma), d(x_L, sigma).
struct InteriorEdge {
  std::size_t k = 0;
  std::size_t l = 0;
  double measure = 0.0;
  double distance = 0.0;
  double transmissibility = 0.0;
  double face_distance_k = 0.0;
  double face_distance_l = 0.0;
};

struct BoundaryEdge {
  std::size_t cell = 0;
  double measure = 0.0;
  double distance = 0.0;
};

struct AdmissibilityReport {
  double min_ratio = 0.0;
  bool pass = false;
};

/// Admissible finite-volume mesh of a domain of unit measure.
///
/// Immutable after construction. The structured builders produce uniform
/// interval and square grids; from_parts() accepts arbitrary connectivity and
/// checks the same invariants.
class Mesh {
 public:
  static Mesh from_parts(int dimension, Boundary boundary, std::vector<Cell> cells,
                         std::vector<InteriorEdge> interior, std::vector<BoundaryEdge> exterior,
                         std::size_t n_per_axis = 0, bool uniform = false) {
    Mesh m;
    m.dimension_ = dimension;
    m.boundary_ = boundary;
    m.cells_ = std::move(cells);
    m.interior_ = std::move(interior);
    m.exterior_ = std::move(exterior);
    m.n_per_axis_ = n_per_axis;
    m.uniform_ = uniform;
    m.validate();
    m.xi_ = m.min_face_ratio();
    return m;
  }

  int dimension() const { return dimension_; }
  Boundary boundary() const { return boundary_; }
  bool periodic() const { return boundary_ == Boundary::periodic; }
  // Structured grids only; 0 for meshes built from parts.
  std::size_t n_per_axis() const { return n_per_axis_; }
  bool uniform() const { return uniform_; }

  std::size_t size() const { return cells_.size(); }
  std::span<const Cell> cells() const { return cells_; }
  std::span<const InteriorEdge> interior_edges() const { return interior_; }
  std::span<const BoundaryEdge> boundary_edges() const { return exterior_; }
  const Cell& cell(std::size_t k) const { return cells_[k]; }
  double measure(std::size_t k) const { return cells_[k].measure; }

  // Regularity constant xi: min over interior faces of d(x_K, sigma)/d(x_K, x_L).
  double xi() const { return xi_; }

  double total_measure() const {
    double s = 0.0;
    for (const auto& c : cells_) s += c.measure;
    return s;
  }

  bool connected() const {
    if (cells_.empty()) return false;
    std::vector<std::size_t> parent(cells_.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t components = cells_.size();
    for (const auto& e : interior_) {
      auto a = find(e.k), b = find(e.l);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
    return components == 1;
  }

  /// Plain-text summary: cell count, edge counts, xi, total measure.
  std::string summary() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "dimension " << dimension_ << '\n'
       << "boundary " << to_string(boundary_) << '\n'
       << "cells " << cells_.size() << '\n'
       << "interior_edges " << interior_.size() << '\n'
       << "boundary_edges " << exterior_.size() << '\n'
       << "xi " << xi_ << '\n'
       << "total_measure " << total_measure() << '\n';
    return os.str();
  }

 private:
  Mesh() = default;

  double min_face_ratio() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& e : interior_) {
      r = std::min(r, e.face_distance_k / e.distance);
      r = std::min(r, e.face_distance_l / e.distance);
    }
    return interior_.empty() ? 0.0 : r;
  }

  void validate() const {
    if (dimension_ != 1 && dimension_ != 2) throw InvalidMesh("dimension must be 1 or 2");
    if (cells_.size() < 2) throw InvalidMesh("mesh needs at least two cells");
    for (const auto& c : cells_) {
      if (!(c.measure > 0.0) || !std::isfinite(c.measure))
        throw InvalidMesh("cell measure must be positive");
    }
    if (std::abs(total_measure() - 1.0) > 1e-12)
      throw InvalidMesh("total cell measure must equal 1");
    for (const auto& e : interior_) {
      if (e.k >= cells_.size() || e.l >= cells_.size() || e.k == e.l)
        throw InvalidMesh("interior edge must join two distinct cells");
      if (!(e.transmissibility > 0.0) || !(e.distance > 0.0) || !(e.measure > 0.0))
        throw InvalidMesh("edge transmissibility must be positive");
      if (std::abs(e.transmissibility * e.distance - e.measure) > 1e-14 * e.measure)
        throw InvalidMesh("transmissibility must equal m(sigma)/d_sigma");
    }
    for (const auto& b : exterior_) {
      if (b.cell >= cells_.size()) throw InvalidMesh("boundary edge references unknown cell");
    }
    if (boundary_ == Boundary::periodic && !exterior_.empty())
      throw InvalidMesh("periodic mesh cannot have boundary edges");
  }

  int dimension_ = 1;
  Boundary boundary_ = Boundary::neumann;
  std::vector<Cell> cells_;
  std::vector<InteriorEdge> interior_;
  std::vector<BoundaryEdge> exterior_;
  std::size_t n_per_axis_ = 0;
  bool uniform_ = false;
  double xi_ = 0.0;
};

/// Uniform grid of n cells on (0, 1); centers at cell midpoints.
inline Mesh build_interval_mesh(std::size_t n_cells, Boundary boundary) {
  if (n_cells < 2) throw InvalidMesh("interval mesh needs n_cells >= 2");
  const double h = 1.0 / static_cast<double>(n_cells);
  std::vector<Cell> cells(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) cells[i] = {h, {(static_cast<double>(i) + 0.5) * h, 0.0}};

  std::vector<InteriorEdge> interior;
  for (std::size_t i = 0; i + 1 < n_cells; ++i)
    interior.push_back({i, i + 1, 1.0, h, 1.0 / h, 0.5 * h, 0.5 * h});

  std::vector<BoundaryEdge> exterior;
  if (boundary == Boundary::periodic) {
    interior.push_back({n_cells - 1, 0, 1.0, h, 1.0 / h, 0.5 * h, 0.5 * h});
  } else {
    exterior.push_back({0, 1.0, 0.5 * h});
    exterior.push_back({n_cells - 1, 1.0, 0.5 * h});
  }
  return Mesh::from_parts(1, boundary, std::move(cells), std::move(interior), std::move(exterior),
                          n_cells, true);
}

/// Uniform n x n grid of square control volumes on (0, 1)^2, row-major (x fastest).
inline Mesh build_square_mesh(std::size_t n, Boundary boundary) {
  if (n < 2) throw InvalidMesh("square mesh needs n_per_axis >= 2");
  const double h = 1.0 / static_cast<double>(n);
  auto id = [n](std::size_t i, std::size_t j) { return j * n + i; };

  std::vector<Cell> cells(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      cells[id(i, j)] = {h * h, {(static_cast<double>(i) + 0.5) * h, (static_cast<double>(j) + 0.5) * h}};

  const bool wrap = boundary == Boundary::periodic;
  const std::size_t span = wrap ? n : n - 1;
  std::vector<InteriorEdge> interior;
  std::vector<BoundaryEdge> exterior;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < span; ++i)
      interior.push_back({id(i, j), id((i + 1) % n, j), h, h, 1.0, 0.5 * h, 0.5 * h});
  }
  for (std::size_t j = 0; j < span; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      interior.push_back({id(i, j), id(i, (j + 1) % n), h, h, 1.0, 0.5 * h, 0.5 * h});
  }
  if (!wrap) {
    for (std::size_t k = 0; k < n; ++k) {
      exterior.push_back({id(0, k), h, 0.5 * h});
      exterior.push_back({id(n - 1, k), h, 0.5 * h});
      exterior.push_back({id(k, 0), h, 0.5 * h});
      exterior.push_back({id(k, n - 1), h, 0.5 * h});
    }
  }
  return Mesh::from_parts(2, boundary, std::move(cells), std::move(interior), std::move(exterior), n,
                          true);
}

inline AdmissibilityReport validate_admissibility(const Mesh& mesh, double xi_min) {
  return {mesh.xi(), mesh.xi() >= xi_min};
}

/// One real value per cell. Holds a non-owning pointer to its mesh.
class GridFunction {
 public:
  GridFunction(const Mesh& mesh, double value = 0.0) : mesh_(&mesh), values_(mesh.size(), value) {}

  GridFunction(const Mesh& mesh, std::vector<double> values)
      : mesh_(&mesh), values_(std::move(values)) {
    if (values_.size() != mesh.size())
      throw DomainError("grid function size does not match cell count");
    for (double v : values_) {
      if (!std::isfinite(v)) throw DomainError("grid function values must be finite");
    }
  }

  const Mesh& mesh() const { return *mesh_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double min() const;
  double max() const;
  // Sum of m(K) u_K.
  double mass() const;

  // Pointwise power u_K^p (used for u^{alpha/2}, u^{(alpha+beta)/2}).
  GridFunction pow(double p) const {
    GridFunction r(*mesh_, values_);
    for (double& v : r.values_) v = std::pow(v, p);
    return r;
  }

 private:
  const Mesh* mesh_;
  std::vector<double> values_;
};

inline double GridFunction::min() const {
  double m = values_.front();
  for (double v : values_) m = std::min(m, v);
  return m;
}

inline double GridFunction::max() const {
  double m = values_.front();
  for (double v : values_) m = std::max(m, v);
  return m;
}

inline double GridFunction::mass() const {
  double s = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) s += mesh_->measure(k) * values_[k];
  return s;
}

}  // namespace fvdecay
