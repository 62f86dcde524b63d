#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fvdecay/functional_ineq.hpp"
#include "fvdecay/io.hpp"
#include "fvdecay/mesh.hpp"
#include "fvdecay/quadrature.hpp"
#include "fvdecay/region.hpp"
#include "fvdecay/scalar_ineq.hpp"

namespace fvdecay::verify {

// Per-property tally. Slack is bound - gap in the inequality's own units.
struct CheckTally {
  CheckTally() = default;
  CheckTally(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::string first_violation;

  void record(const InequalityCheck& c, const std::function<std::string()>& describe) {
    ++trials;
    worst_slack = std::min(worst_slack, c.slack);
    if (!c.holds) {
      if (violations == 0) first_violation = describe();
      ++violations;
    }
  }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckTally> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](auto& c) { return c.violations == 0; });
  }

  std::string text() const {
    std::ostringstream os;
    os << "suite " << suite << " seed " << seed << '\n';
    for (const auto& c : checks) {
      os << c.name << " trials " << c.trials << " violations " << c.violations << " worst_slack "
         << io::num(c.worst_slack) << '\n';
      if (c.violations) os << "  first violation: " << c.first_violation << '\n';
    }
    os << (passed() ? "PASS" : "FAIL") << '\n';
    return os.str();
  }
};

// Optional per-trial CSV sink: trial,gap,bound,slack,holds.
using CsvSink = std::function<std::ostream*(const std::string& check_name)>;

namespace detail {

inline void emit(std::ostream* os, std::size_t trial, const InequalityCheck& c) {
  if (!os) return;
  *os << trial << ',' << io::num(c.gap) << ',' << io::num(c.bound) << ',' << io::num(c.slack) << ','
      << (c.holds ? 1 : 0) << '\n';
}

inline std::ostream* open_sink(const CsvSink& sink, const std::string& name) {
  if (!sink) return nullptr;
  auto* os = sink(name);
  if (os) *os << "trial,gap,bound,slack,holds\n";
  return os;
}

inline std::string fmt(std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : kv) {
    os << (first ? "" : " ") << k << '=' << io::num(v);
    first = false;
  }
  return os.str();
}

}  // namespace detail

/// Two-variable chain inequalities on random (x, y, alpha, beta).
inline SuiteReport scalar_suite(std::uint64_t seed, std::size_t trials, const CsvSink& sink = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xy(0.0, 10.0), xy_pos(1e-3, 10.0), expo(0.0, 5.0);
  auto positive = [&] {
    double v = 0.0;
    while (v == 0.0) v = 5.0 - expo(rng);  // (0, 5]
    return v;
  };
  CheckTally chain{"chain_bound"}, weighted{"weighted_chain_bound"};
  auto* chain_os = detail::open_sink(sink, chain.name);
  auto* weighted_os = detail::open_sink(sink, weighted.name);
  for (std::size_t t = 0; t < trials; ++t) {
    {
      const double x = xy(rng), y = xy(rng), a = positive(), b = positive();
      const auto s = chain_bound_sides(x, y, a, b);
      const auto c = make_check(s.rhs, s.lhs);  // lhs >= rhs
      chain.record(c, [&] { return detail::fmt({{"x", x}, {"y", y}, {"alpha", a}, {"beta", b}}); });
      detail::emit(chain_os, t, c);
    }
    {
      const double a = positive(), b = positive();
      const double x = b < 1.0 ? xy_pos(rng) : xy(rng), y = b < 1.0 ? xy_pos(rng) : xy(rng);
      const auto s = weighted_chain_bound_sides(x, y, a, b);
      const auto c = make_check(s.rhs, s.lhs);
      weighted.record(c, [&] { return detail::fmt({{"x", x}, {"y", y}, {"alpha", a}, {"beta", b}}); });
      detail::emit(weighted_os, t, c);
    }
  }
  return {"scalar", seed, {chain, weighted}};
}

/// x_{n+1} solving x_{n+1} + tau x_{n+1}^gamma = x_n, by bisection on [0, x_n] to 1e-14.
inline double implicit_power_step(double x, double tau, double gamma) {
  if (x == 0.0) return 0.0;
  return quad::bisect([&](double z) { return z + tau * std::pow(z, gamma) - x; }, 0.0, x, 1e-14);
}

/// Exact power-law recurrences against the closed-form Gronwall bound.
inline SuiteReport gronwall_suite(std::uint64_t seed, std::size_t trials, std::size_t steps = 100,
                                  const CsvSink& sink = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  CheckTally tally{"power_recurrence"};
  auto* os = detail::open_sink(sink, tally.name);
  for (std::size_t t = 0; t < trials; ++t) {
    const GronwallPowerParams p{10.0 * (1.0 - u01(rng)), 1.0 - u01(rng), 4.0 - 3.0 * u01(rng)};
    double x = p.x0;
    double worst = std::numeric_limits<double>::infinity();
    InequalityCheck worst_check{};
    std::size_t worst_n = 0;
    for (std::size_t n = 1; n <= steps; ++n) {
      x = implicit_power_step(x, p.tau, p.gamma);
      const double bound = gronwall_power_bound(p, static_cast<double>(n));
      // Absolute allowance covers the bisection width.
      InequalityCheck c{x, bound, bound - x, x <= bound * (1.0 + 1e-12) + 1e-14};
      if (c.slack < worst || !c.holds) {
        worst = c.slack;
        worst_check = c;
        worst_n = n;
      }
      if (!c.holds) break;
    }
    tally.record(worst_check, [&] {
      return detail::fmt({{"x0", p.x0}, {"tau", p.tau}, {"gamma", p.gamma}, {"n", double(worst_n)}});
    });
    detail::emit(os, t, worst_check);
  }
  return {"gronwall", seed, {tally}};
}

/// Random nonnegative grid function: mixes uniform, heavy-tailed and sparse samples.
inline GridFunction random_nonnegative(const Mesh& mesh, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> v(mesh.size());
  const int kind = static_cast<int>(u01(rng) * 4.0);
  for (auto& x : v) {
    switch (kind) {
      case 0: x = u01(rng); break;
      case 1: x = -std::log(1.0 - u01(rng)); break;
      case 2: x = u01(rng) < 0.5 ? 0.0 : 10.0 * u01(rng); break;
      default: x = 1.0 + 0.05 * (u01(rng) - 0.5); break;
    }
  }
  return GridFunction(mesh, std::move(v));
}

struct BecknerCase {
  std::string name;
  BecknerParams params;
  bool second = false;
};

inline std::vector<BecknerCase> default_beckner_cases() {
  return {{"beckner_I_p1.5_q1", {1.5, 1.0}, false},
          {"beckner_I_p1.5_q1.333", {1.5, 4.0 / 3.0}, false},
          {"beckner_I_p0.75_q2", {0.75, 2.0}, false},
          {"beckner_II_p1.5_q1", {1.5, 1.0}, true},
          {"beckner_II_p2_q0.75", {2.0, 0.75}, true},
          {"beckner_II_p1.5_q1.333", {1.5, 4.0 / 3.0}, true}};
}

/// Beckner inequalities with the spectral constant of the given mesh, plus the cyclic Wirtinger check.
inline SuiteReport functional_suite(const Mesh& mesh, std::uint64_t seed, std::size_t trials,
                                    const CsvSink& sink = {}) {
  std::mt19937_64 rng(seed);
  const double c_eff = spectral_poincare_constant(mesh).value;
  auto cases = default_beckner_cases();
  std::vector<CheckTally> tallies;
  std::vector<std::ostream*> sinks;
  for (const auto& bc : cases) {
    tallies.push_back({bc.name});
    sinks.push_back(detail::open_sink(sink, bc.name));
  }
  for (std::size_t t = 0; t < trials; ++t) {
    const auto f = random_nonnegative(mesh, rng);
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto c = cases[i].second ? check_beckner_II(f, cases[i].params, c_eff)
                                     : check_beckner_I(f, cases[i].params, c_eff);
      tallies[i].record(c, [&] {
        std::ostringstream os;
        os << "trial " << t << " f=";
        for (double x : f.values()) os << io::num(x) << ' ';
        return os.str();
      });
      detail::emit(sinks[i], t, c);
    }
  }

  CheckTally wirt{"wirtinger"};
  auto* wos = detail::open_sink(sink, wirt.name);
  std::uniform_int_distribution<std::size_t> len(3, 64);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> z(len(rng));
    double mean = 0.0;
    for (auto& x : z) mean += (x = g(rng));
    mean /= static_cast<double>(z.size());
    for (auto& x : z) x -= mean;
    const auto w = wirtinger_check(z);
    const InequalityCheck c{w.rhs, w.lhs, w.lhs - w.rhs, w.holds};
    wirt.record(c, [&] { return "trial " + std::to_string(t) + " n=" + std::to_string(z.size()); });
    detail::emit(wos, t, c);
  }
  tallies.push_back(wirt);
  return {"functional", seed, tallies};
}

/// Closed-form sufficient region against the kappa-grid oracle, plus the f(1) identity.
inline SuiteReport region_oracle_suite(std::uint64_t seed, std::size_t trials) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ab(0.0, 6.0);
  std::uniform_int_distribution<int> dim(2, 9);
  CheckTally identity{"s_coefficient_identity"}, agree{"remark9_vs_kappa_oracle"};
  const double h = 6.0 / 200.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double a = 6.0 - ab(rng), b = 6.0 - ab(rng);
    const int d = dim(rng);
    const auto p = kappa_polynomial(a, b, d);
    const double lhs = p.s0 + p.s1 + p.s2;
    const double rhs = -(d - 1.0) * (d - 1.0) * (a - 2.0 * b) * (a - 2.0 * b);
    const double scale = std::max({1.0, std::abs(p.s0), std::abs(p.s1), std::abs(p.s2)});
    const double err = std::abs(lhs - rhs);
    identity.record({err, 1e-9 * scale, 1e-9 * scale - err, err <= 1e-9 * scale},
                    [&] { return detail::fmt({{"alpha", a}, {"beta", b}, {"d", double(d)}}); });

    const bool closed = classify(a, b, d).in_remark9;
    const bool oracle = kappa_scan_oracle(a, b, d);
    bool ok = closed == oracle;
    if (!ok) {
      // Accept disagreement within one raster cell of a region boundary.
      for (int di = -1; di <= 1 && !ok; ++di)
        for (int dj = -1; dj <= 1 && !ok; ++dj) {
          const double a2 = a + di * h, b2 = b + dj * h;
          if (a2 <= 0.0 || b2 <= 0.0) continue;
          ok = classify(a2, b2, d).in_remark9 != closed || kappa_scan_oracle(a2, b2, d) != oracle;
        }
    }
    agree.record({ok ? 0.0 : 1.0, 0.0, ok ? 0.0 : -1.0, ok},
                 [&] { return detail::fmt({{"alpha", a}, {"beta", b}, {"d", double(d)}}); });
  }
  return {"region-oracle", seed, {identity, agree}};
}

}  // namespace fvdecay::verify
