#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fvdecay/entropy.hpp"
#include "fvdecay/errors.hpp"
#include "fvdecay/functional_ineq.hpp"
#include "fvdecay/io.hpp"
#include "fvdecay/mesh.hpp"
#include "fvdecay/reference.hpp"
#include "fvdecay/region.hpp"
#include "fvdecay/scheme.hpp"

namespace fvdecay {

// Initial data:
//   barenblatt          profile at t = 0 with support edge reaching |x1 - x0| = 0.5 at t1
//   polynomial          C((x0 - x)(x - x1))_+^2 in 1D, C(R^2 - |x - x0|^2)_+^2 in 2D
//   shifted_polynomial  offset + scale * polynomial / peak (strictly positive for offset > 0)
//   constant            datum_constant everywhere
struct ExperimentConfig {
  std::string name = "custom";
  int dimension = 1;
  std::size_t n = 50;
  Boundary boundary = Boundary::neumann;
  double beta = 2.0;
  double dt = 2e-4;
  std::size_t n_steps = 1000;
  std::vector<double> alphas{0.5, 1.0, 2.0};
  std::string datum = "barenblatt";
  double t0 = 0.01;
  double t1 = 0.1;
  double datum_offset = 0.5;
  double datum_scale = 0.5;
  double datum_constant = 1.0;
  std::string output_dir;
  std::uint64_t seed = 1;
  // Rate fits use the trailing fraction of [0, T].
  double fit_fraction = 0.5;
  // Full state dump every k steps; 0 disables.
  std::size_t dump_every = 0;
  NewtonOptions newton;

  void validate() const {
    if (dimension != 1 && dimension != 2) throw ConfigError("dimension must be 1 or 2");
    if (n < 2) throw ConfigError("n must be at least 2");
    if (!(beta > 0.0)) throw ConfigError("beta must be positive");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (n_steps < 1) throw ConfigError("steps must be positive");
    if (alphas.empty()) throw ConfigError("alpha list must be nonempty");
    for (double a : alphas)
      if (!(a > 0.0)) throw ConfigError("alpha values must be positive");
    if (!(newton.abs_tol > 0.0)) throw ConfigError("newton_tol must be positive");
    if (newton.max_iters < 1) throw ConfigError("newton_max_iters must be positive");
    if (!(fit_fraction > 0.0 && fit_fraction <= 1.0)) throw ConfigError("fit_fraction must be in (0, 1]");
    if (datum != "barenblatt" && datum != "polynomial" && datum != "shifted_polynomial" &&
        datum != "constant")
      throw ConfigError("unknown datum '" + datum + "'");
    if (datum == "barenblatt" && !(beta > 1.0))
      throw ConfigError("barenblatt datum needs beta > 1");
  }

  double final_time() const { return dt * static_cast<double>(n_steps); }
};

inline ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "pm1d") {
    c.dimension = 1, c.n = 50, c.beta = 2.0, c.dt = 2e-4, c.n_steps = 1000, c.datum = "barenblatt";
  } else if (name == "pm2d") {
    c.dimension = 2, c.n = 24, c.beta = 2.0, c.dt = 8e-4, c.n_steps = 250, c.datum = "barenblatt";
  } else if (name == "fd1d") {
    c.dimension = 1, c.n = 50, c.beta = 0.5, c.dt = 2e-4, c.n_steps = 1000, c.datum = "polynomial";
  } else if (name == "fd2d") {
    c.dimension = 2, c.n = 24, c.beta = 0.5, c.dt = 8e-4, c.n_steps = 250, c.datum = "polynomial";
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected pm1d|pm2d|fd1d|fd2d)");
  }
  return c;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for '" + key + "': " + v);
  }
}

inline std::size_t to_count(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d < 0.0 || d != std::floor(d)) throw ConfigError("'" + key + "' must be a nonnegative integer");
  return static_cast<std::size_t>(d);
}

}  // namespace detail

/// Applies one key = value setting. "preset" resets every field to the preset first.
inline void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = detail::trim(raw_key), v = detail::trim(raw_value);
  if (key == "preset") {
    const auto out = c.output_dir;
    const auto seed = c.seed;
    c = preset(v);
    c.output_dir = out;
    c.seed = seed;
  } else if (key == "name") c.name = v;
  else if (key == "dimension") c.dimension = static_cast<int>(detail::to_count(key, v));
  else if (key == "n") c.n = detail::to_count(key, v);
  else if (key == "boundary") c.boundary = parse_boundary(v);
  else if (key == "beta") c.beta = detail::to_double(key, v);
  else if (key == "dt") c.dt = detail::to_double(key, v);
  else if (key == "steps") c.n_steps = detail::to_count(key, v);
  else if (key == "alphas") {
    c.alphas.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) c.alphas.push_back(detail::to_double(key, detail::trim(item)));
  } else if (key == "datum") c.datum = v;
  else if (key == "t0") c.t0 = detail::to_double(key, v);
  else if (key == "t1") c.t1 = detail::to_double(key, v);
  else if (key == "datum_offset") c.datum_offset = detail::to_double(key, v);
  else if (key == "datum_scale") c.datum_scale = detail::to_double(key, v);
  else if (key == "datum_constant") c.datum_constant = detail::to_double(key, v);
  else if (key == "output") c.output_dir = v;
  else if (key == "seed") c.seed = detail::to_count(key, v);
  else if (key == "fit_fraction") c.fit_fraction = detail::to_double(key, v);
  else if (key == "dump_every") c.dump_every = detail::to_count(key, v);
  else if (key == "newton_tol") c.newton.abs_tol = detail::to_double(key, v);
  else if (key == "newton_max_iters") c.newton.max_iters = static_cast<int>(detail::to_count(key, v));
  else throw ConfigError("unknown config key '" + key + "'");
}

/// Flat "key = value" text; '#' starts a comment. A preset line, if any, is applied first.
inline ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {}) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    entries.emplace_back(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  for (const auto& [k, v] : entries)
    if (k == "preset") apply_setting(base, k, v);
  for (const auto& [k, v] : entries)
    if (k != "preset") apply_setting(base, k, v);
  return base;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  return parse_config(in, std::move(base));
}

inline Mesh make_mesh(const ExperimentConfig& c) {
  return c.dimension == 1 ? build_interval_mesh(c.n, c.boundary) : build_square_mesh(c.n, c.boundary);
}

inline BarenblattParams barenblatt_params(const ExperimentConfig& c) {
  BarenblattParams p;
  p.beta = c.beta;
  p.d = c.dimension;
  p.t0 = c.t0;
  p.x0 = {0.5, 0.5};
  p.C = barenblatt_C(c.t0, c.t1, p.x0, {1.0, 0.5}, c.beta, c.dimension);
  return p;
}

inline std::function<double(const Point&)> initial_datum(const ExperimentConfig& c) {
  if (c.datum == "barenblatt") {
    const auto p = barenblatt_params(c);
    return [p](const Point& x) { return barenblatt(x, 0.0, p); };
  }
  std::function<double(const Point&)> poly;
  if (c.dimension == 1) poly = [](const Point& x) { return truncated_poly_1d(x[0]); };
  else poly = [](const Point& x) { return bump_2d(x); };
  if (c.datum == "polynomial") return poly;
  if (c.datum == "shifted_polynomial") {
    const double peak = c.dimension == 1 ? truncated_poly_1d(0.5) : bump_2d({0.5, 0.5});
    return [poly, peak, off = c.datum_offset, sc = c.datum_scale](const Point& x) {
      return off + sc * poly(x) / peak;
    };
  }
  return [v = c.datum_constant](const Point&) { return v; };
}

struct SeriesReport {
  EntropySeries series;
  std::optional<DecayFit> fit;
  std::string fit_error;
  // Rate from the exponential estimates when one applies (lower bound on the decay rate).
  std::optional<double> theory_rate;
};

struct ExperimentResult {
  ExperimentConfig config;
  // Owned on the heap: every state in trace points at it.
  std::unique_ptr<const Mesh> mesh;
  double poincare = 0.0;
  SimulationTrace trace;
  std::vector<SeriesReport> zeroth;
  std::vector<SeriesReport> first;
  double fit_lo = 0.0;
  double fit_hi = 0.0;
};

namespace detail {

inline SeriesReport build_series(const ExperimentConfig& c, const SimulationTrace& trace, double alpha,
                                 EntropyKind kind, double c_eff, double fit_lo, double fit_hi) {
  SeriesReport rep;
  rep.series = entropy_series(trace, alpha, kind);
  auto& s = rep.series;
  const auto& u0 = trace.states.front();
  if (kind == EntropyKind::zeroth) {
    std::optional<Thm15Rates> rates;
    if (alpha <= 1.0) rates = thm15_rate_from_poincare(alpha, c.beta, u0, c_eff);
    if (rates && rates->best() > 0.0) {
      const double lambda = rates->best();
      rep.theory_rate = lambda;
      s.bound_source = rates->beta_gt1 && *rates->beta_gt1 >= rates->general
                           ? EntropySeries::BoundSource::thm15_beta_gt1
                           : EntropySeries::BoundSource::thm15_general;
      for (double t : s.times) s.bound.push_back(s.values.front() * std::exp(-lambda * t));
    } else if (c.beta > 1.0) {
      const double cb = beckner_I_constant(algebraic_beckner_params(alpha, c.beta), c_eff);
      s.bound_source = EntropySeries::BoundSource::thm14;
      for (std::size_t k = 0; k < s.times.size(); ++k)
        s.bound.push_back(thm14_bound(alpha, c.beta, s.values.front(), c.dt, cb, k));
    }
  } else {
    const auto& mesh = u0.mesh();
    const bool applies = mesh.dimension() == 1 && mesh.periodic() && alpha >= 1.0 && alpha <= 2.0 &&
                         std::abs(alpha - 2.0 * c.beta) < 1e-14;
    if (applies) {
      const double lambda = thm16_rate_1d(u0, c.beta);
      rep.theory_rate = lambda;
      s.bound_source = EntropySeries::BoundSource::thm16_1d;
      for (double t : s.times) s.bound.push_back(s.values.front() * std::exp(-lambda * t));
    }
  }
  try {
    rep.fit = fit_decay_rate(s, fit_lo, fit_hi);
  } catch (const DomainError& e) {
    rep.fit_error = e.what();
  }
  return rep;
}

}  // namespace detail

/// Simulates the configured run and builds entropy series, bound curves and rate fits.
inline ExperimentResult run_experiment_in_memory(const ExperimentConfig& c) {
  c.validate();
  ExperimentResult res;
  res.config = c;
  res.mesh = std::make_unique<const Mesh>(make_mesh(c));
  const Mesh& mesh = *res.mesh;
  const auto u0 = project_initial(initial_datum(c), mesh);
  SchemeParams sp;
  sp.beta = c.beta;
  sp.dt = c.dt;
  sp.n_steps = c.n_steps;
  sp.newton = c.newton;
  res.trace = simulate(u0, sp);
  res.poincare = spectral_poincare_constant(mesh).value;
  const double T = c.final_time();
  res.fit_lo = T * (1.0 - c.fit_fraction);
  res.fit_hi = T;

  std::vector<std::future<SeriesReport>> zeroth, first;
  for (double a : c.alphas) {
    zeroth.push_back(std::async(std::launch::async, detail::build_series, std::cref(c), std::cref(res.trace),
                                a, EntropyKind::zeroth, res.poincare, res.fit_lo, res.fit_hi));
    first.push_back(std::async(std::launch::async, detail::build_series, std::cref(c), std::cref(res.trace),
                               a, EntropyKind::first, res.poincare, res.fit_lo, res.fit_hi));
  }
  for (auto& f : zeroth) res.zeroth.push_back(f.get());
  for (auto& f : first) res.first.push_back(f.get());
  return res;
}

inline std::string rate_report(const ExperimentResult& r) {
  std::ostringstream os;
  const auto& c = r.config;
  os << "experiment " << c.name << '\n'
     << "dimension " << c.dimension << " n " << c.n << " boundary " << to_string(c.boundary) << '\n'
     << "beta " << io::num(c.beta) << " dt " << io::num(c.dt) << " steps " << c.n_steps << '\n'
     << "poincare_constant " << io::num(r.poincare) << '\n'
     << "fit_window " << io::num(r.fit_lo) << ' ' << io::num(r.fit_hi) << '\n'
     << "kind,alpha,slope,intercept,r2,points,theory_rate,bound\n";
  auto line = [&](const SeriesReport& s) {
    os << to_string(s.series.kind) << ',' << io::label(s.series.alpha) << ',';
    if (s.fit) {
      os << io::num(s.fit->slope) << ',' << io::num(s.fit->intercept) << ',' << io::num(s.fit->r2)
         << ',' << s.fit->points;
    } else {
      os << "nan,nan,nan,0";
    }
    os << ',' << (s.theory_rate ? io::num(*s.theory_rate) : std::string("")) << ','
       << to_string(s.series.bound_source) << '\n';
  };
  for (const auto& s : r.zeroth) line(s);
  for (const auto& s : r.first) line(s);
  return os.str();
}

/// Writes mesh.txt, trace.csv, E_alpha_<a>.csv, F_alpha_<a>.csv and rates.txt into dir.
inline void write_experiment(const ExperimentResult& r, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);
  {
    auto os = io::open_output((base / "mesh.txt").string());
    os << r.trace.states.front().mesh().summary();
  }
  {
    auto os = io::open_output((base / "trace.csv").string());
    io::write_trace_csv(os, r.trace);
  }
  if (r.config.dump_every > 0) {
    auto os = io::open_output((base / "states.csv").string());
    io::write_state_dump(os, r.trace, r.config.dump_every);
  }
  for (const auto* group : {&r.zeroth, &r.first}) {
    for (const auto& s : *group) {
      auto os = io::open_output(
          (base / (to_string(s.series.kind) + "_alpha_" + io::label(s.series.alpha) + ".csv")).string());
      io::write_series_csv(os, s.series);
    }
  }
  auto os = io::open_output((base / "rates.txt").string());
  os << rate_report(r);
}

inline ExperimentResult run_experiment(const ExperimentConfig& c) {
  auto r = run_experiment_in_memory(c);
  if (!c.output_dir.empty()) write_experiment(r, c.output_dir);
  return r;
}

inline RegionRaster run_region_scan(int d, double alpha_lo, double alpha_hi, double beta_lo,
                                    double beta_hi, std::size_t resolution,
                                    const std::string& outfile) {
  auto r = scan_region(d, alpha_lo, alpha_hi, beta_lo, beta_hi, resolution);
  if (!outfile.empty()) {
    auto os = io::open_output(outfile);
    io::write_raster_csv(os, r);
  }
  return r;
}

}  // namespace fvdecay
