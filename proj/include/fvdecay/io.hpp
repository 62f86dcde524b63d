#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "fvdecay/entropy.hpp"
#include "fvdecay/errors.hpp"
#include "fvdecay/region.hpp"
#include "fvdecay/scheme.hpp"

namespace fvdecay::io {

// Round-trip formatting, identical across runs.
inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Short form for file names and labels (0.5, 1, 2).
inline std::string label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file " + path);
  return os;
}

inline void write_trace_csv(std::ostream& os, const SimulationTrace& trace) {
  os << "k,t,mass,min,max,newton_iters,residual\n";
  for (const auto& d : trace.diagnostics) {
    os << d.k << ',' << num(d.t) << ',' << num(d.mass) << ',' << num(d.min) << ',' << num(d.max)
       << ',' << d.newton_iters << ',' << num(d.residual) << '\n';
  }
}

// One row per cell for every stride-th step (and the last one).
inline void write_state_dump(std::ostream& os, const SimulationTrace& trace, std::size_t stride) {
  os << "k,t,cell,x,y,value\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (k % stride != 0 && k + 1 != trace.size()) continue;
    const auto& u = trace.states[k];
    for (std::size_t c = 0; c < u.size(); ++c) {
      const auto& x = u.mesh().cell(c).center;
      os << k << ',' << num(trace.time(k)) << ',' << c << ',' << num(x[0]) << ',' << num(x[1])
         << ',' << num(u[c]) << '\n';
    }
  }
}

inline void write_series_csv(std::ostream& os, const EntropySeries& s) {
  os << "t,value,bound\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    os << num(s.times[i]) << ',' << num(s.values[i]) << ',';
    if (!s.bound.empty()) os << num(s.bound[i]);
    os << '\n';
  }
}

inline void write_raster_csv(std::ostream& os, const RegionRaster& r) {
  os << "# d=" << r.d << " alpha=(" << num(r.alpha_lo) << "," << num(r.alpha_hi) << "] beta=("
     << num(r.beta_lo) << "," << num(r.beta_hi) << "] resolution=" << r.resolution << '\n';
  os << "alpha,beta,in_Md,in_remark9\n";
  for (std::size_t i = 0; i < r.resolution; ++i) {
    for (std::size_t j = 0; j < r.resolution; ++j) {
      const auto& c = r.at(i, j);
      os << num(c.alpha) << ',' << num(c.beta) << ',' << (c.in_Md ? 1 : 0) << ','
         << (c.in_remark9 ? 1 : 0) << '\n';
    }
  }
}

}  // namespace fvdecay::io
