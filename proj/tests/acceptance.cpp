#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fvdecay/fvdecay.hpp"

using namespace fvdecay;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %-34s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

SchemeParams scheme(double beta, double dt, std::size_t steps) {
  SchemeParams p;
  p.beta = beta;
  p.dt = dt;
  p.n_steps = steps;
  return p;
}

// 0.5 + 0.5 * (normalized polynomial bump): min 0.5, max 1.
GridFunction shifted_datum(const Mesh& m) {
  return project_initial(
      [&](const Point& x) {
        const double b = m.dimension() == 1 ? truncated_poly_1d(x[0]) : bump_2d(x);
        return 0.5 + 0.5 * b / 4.8;
      },
      m);
}

double barenblatt_l1_error(const GridFunction& u, const BarenblattParams& bp, double t) {
  const Mesh& m = u.mesh();
  const double h = 1.0 / static_cast<double>(m.size());
  double err = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double a = m.cell(k).center[0] - 0.5 * h;
    const double exact =
        quad::adaptive_simpson([&](double x) { return barenblatt({x, 0.5}, t, bp); }, a, a + h, 1e-14).value / h;
    err += h * std::abs(u[k] - exact);
  }
  return err;
}

}  // namespace

int main() {
  const std::vector<std::string> presets{"pm1d", "pm2d", "fd1d", "fd2d"};
  std::map<std::string, ExperimentResult> runs;
  auto run = [&](const std::string& name) -> const ExperimentResult& {
    auto it = runs.find(name);
    if (it == runs.end()) it = runs.emplace(name, run_experiment_in_memory(preset(name))).first;
    return it->second;
  };

  report(1, "barenblatt_constant", [] {
    const double c = barenblatt_C(0.01, 0.1, {0.5, 0.5}, {1.0, 0.5}, 2.0, 1);
    return Outcome{std::abs(c - 0.0907) <= 5e-4, fmt("C=%.6f target 0.0907+-0.0005", c)};
  });

  report(2, "conservation_max_principle", [&] {
    Outcome o;
    double worst_mass = 0.0, worst_bound = 0.0;
    for (const auto& p : presets) {
      const auto& tr = run(p).trace;
      const auto& u0 = tr.states.front();
      const double m0 = u0.mass();
      for (const auto& d : tr.diagnostics) {
        worst_mass = std::max(worst_mass, std::abs(d.mass - m0) / m0);
        worst_bound = std::max({worst_bound, u0.min() - d.min, d.max - u0.max()});
      }
    }
    o.pass = worst_mass <= 1e-10 && worst_bound <= 1e-8;
    o.detail = fmt("max rel mass drift %.3e", worst_mass) + fmt(", max bound overshoot %.3e", worst_bound);
    return o;
  });

  report(3, "zeroth_entropy_dissipation", [&] {
    double inc = -1e300, excess = -1e300, min_d = 1e300;
    std::size_t steps = 0;
    for (const auto& p : presets) {
      const auto& r = run(p);
      for (double a : {0.5, 1.0, 2.0}) {
        const auto rep = check_zeroth_dissipation(r.trace, a, r.config.beta);
        inc = std::max(inc, rep.max_increase);
        excess = std::max(excess, rep.max_excess);
        min_d = std::min(min_d, rep.min_dissipation);
        steps += rep.steps;
      }
    }
    return Outcome{inc <= 1e-12 && excess <= 1e-12,
                   fmt("%.0f step checks", double(steps)) + fmt(", max dE %.3e", inc) +
                       fmt(", max dE+dt*D %.3e", excess) + fmt(", min D %.3e", min_d)};
  });

  report(4, "algebraic_bound_beta2_1d", [&] {
    const auto& r = run("pm1d");
    double worst = 0.0;
    bool ok = true;
    for (double a : {0.5, 1.0}) {
      const double cb = beckner_I_constant(algebraic_beckner_params(a, 2.0), r.poincare);
      const double e0 = zeroth_entropy(r.trace.states.front(), a);
      for (std::size_t k = 0; k < r.trace.size(); ++k) {
        const double e = zeroth_entropy(r.trace.states[k], a);
        const double b = thm14_bound(a, 2.0, e0, r.config.dt, cb, k);
        worst = std::max(worst, e / b);
        ok &= e <= b * (1.0 + 1e-9);
      }
    }
    return Outcome{ok, fmt("1000 steps, max E/bound %.6f", worst)};
  });

  report(5, "exponential_bound_zeroth", [] {
    bool ok = true;
    double worst = 0.0, lam_min = 1e300;
    struct Case { int dim; std::size_t n; double dt; std::size_t steps; };
    for (const Case& c : {Case{1, 50, 2e-4, 1000}, Case{2, 24, 8e-4, 250}}) {
      const auto m = c.dim == 1 ? build_interval_mesh(c.n, Boundary::neumann) : build_square_mesh(c.n, Boundary::neumann);
      const auto u0 = shifted_datum(m);
      const double ceff = spectral_poincare_constant(m).value;
      for (double beta : {1.5, 2.0}) {
        const auto tr = simulate(u0, scheme(beta, c.dt, c.steps));
        for (double a : {0.5, 1.0}) {
          const double lam = thm15_rate_from_poincare(a, beta, u0, ceff).best();
          lam_min = std::min(lam_min, lam);
          const double e0 = zeroth_entropy(u0, a);
          for (std::size_t k = 0; k < tr.size(); ++k) {
            const double b = e0 * std::exp(-lam * tr.time(k));
            const double e = zeroth_entropy(tr.states[k], a);
            worst = std::max(worst, e / b);
            ok &= e <= b * (1.0 + 1e-9);
          }
        }
      }
    }
    return Outcome{ok && lam_min > 0.0, fmt("min lambda %.4f", lam_min) + fmt(", max E/bound %.6f", worst)};
  });

  report(6, "first_order_entropy", [] {
    std::size_t violations = 0;
    bool ok = true;
    double worst = 0.0;
    for (double a : {1.0, 1.5, 2.0}) {
      const double beta = 0.5 * a;
      const auto m1 = build_interval_mesh(50, Boundary::periodic);
      const auto u0 = shifted_datum(m1);
      const auto tr1 = simulate(u0, scheme(beta, 2e-4, 1000));
      violations += first_entropy_monotone_check(tr1, a).violations;
      const double lam = thm16_rate_1d(u0, beta);
      ok &= lam > 0.0;
      for (std::size_t k = 1; k < tr1.size(); ++k) {
        const double f1 = first_entropy(tr1.states[k], a), f0 = first_entropy(tr1.states[k - 1], a);
        const double b = f0 * std::exp(-lam * 2e-4);
        worst = std::max(worst, f1 / b);
        ok &= f1 <= b * (1.0 + 1e-9);
      }
      const auto m2 = build_square_mesh(24, Boundary::periodic);
      const auto tr2 = simulate(shifted_datum(m2), scheme(beta, 8e-4, 250));
      violations += first_entropy_monotone_check(tr2, a).violations;
    }
    return Outcome{ok && violations == 0,
                   fmt("monotone violations %.0f", double(violations)) + fmt(", max per-step F/bound %.6f", worst)};
  });

  report(7, "appendix_property_suites", [] {
    const auto s = verify::scalar_suite(20240601, 100000);
    const auto g = verify::gronwall_suite(20240602, 1000, 1000);
    std::size_t v = 0;
    for (const auto* r : {&s, &g})
      for (const auto& c : r->checks) v += c.violations;
    return Outcome{v == 0, fmt("2x1e5 chain trials + 1e3 recurrences x 1000 steps, violations %.0f", double(v))};
  });

  report(8, "discrete_functional_inequalities", [] {
    std::size_t v = 0, trials = 0;
    std::vector<Mesh> meshes;
    for (std::size_t n : {8ul, 16ul, 32ul}) meshes.push_back(build_interval_mesh(n, Boundary::periodic));
    meshes.push_back(build_square_mesh(8, Boundary::periodic));
    std::uint64_t seed = 7000;
    for (const auto& m : meshes) {
      const auto rep = verify::functional_suite(m, ++seed, 10000);
      for (const auto& c : rep.checks) v += c.violations, trials += c.trials;
    }
    double eq = 0.0;
    for (std::size_t n = 3; n <= 64; ++n) {
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = std::cos(2.0 * std::numbers::pi * double(i) / double(n));
      const auto w = wirtinger_check(z);
      eq = std::max(eq, std::abs(w.lhs - w.rhs));
    }
    return Outcome{v == 0 && eq <= 1e-10, fmt("%.0f checks", double(trials)) + fmt(", violations %.0f", double(v)) +
                                             fmt(", first-mode |lhs-rhs| %.2e", eq)};
  });

  report(9, "region_tests", [] {
    bool ok = in_Md(2.0, 1.0, 9).in_Md && !in_Md(3.0, 1.0, 9).in_Md;
    const auto rep = verify::region_oracle_suite(99, 10000);
    ok &= rep.checks[0].violations == 0;
    std::size_t disagree = 0;
    bool sizes = true;
    for (int d : {2, 3, 9}) {
      const std::size_t res = 200;
      const auto r = scan_region(d, 0.0, 6.0, 0.0, 6.0, res);
      sizes &= r.count_remark9() <= r.count_Md();
      for (std::size_t i = 0; i < res; ++i)
        for (std::size_t j = 0; j < res; ++j) {
          const auto& c = r.at(i, j);
          if (c.in_remark9 == kappa_scan_oracle(c.alpha, c.beta, d)) continue;
          bool boundary = false;
          for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
              const long ii = long(i) + di, jj = long(j) + dj;
              if (ii >= 0 && jj >= 0 && ii < long(res) && jj < long(res))
                boundary |= r.at(std::size_t(ii), std::size_t(jj)).in_remark9 != c.in_remark9;
            }
          if (!boundary) ++disagree;
        }
    }
    ok &= disagree == 0 && sizes;
    return Outcome{ok, fmt("identity worst slack %.2e", rep.checks[0].worst_slack) +
                           fmt(", interior oracle disagreements %.0f", double(disagree)) +
                           (sizes ? ", |remark9|<=|Md|" : ", |remark9|>|Md|")};
  });

  report(10, "fitted_decay_rates", [&] {
    bool ok = true;
    double min_r2 = 1.0, min_margin = 1e300;
    std::string worst;
    for (const auto& p : presets) {
      const auto& r = run(p);
      for (const auto& s : r.zeroth) {
        if (!s.fit) {
          ok = false;
          worst = p + " fit failed: " + s.fit_error;
          continue;
        }
        ok &= s.fit->slope < 0.0 && s.fit->r2 >= 0.98;
        min_r2 = std::min(min_r2, s.fit->r2);
        if (s.theory_rate) {
          const double margin = -s.fit->slope - *s.theory_rate;
          ok &= margin >= 0.0;
          min_margin = std::min(min_margin, margin);
        }
      }
    }
    return Outcome{ok, fmt("min r2 %.5f", min_r2) + fmt(", min |slope|-lambda %.3f", min_margin) + worst};
  });

  report(11, "refinement_regression", [] {
    BarenblattParams bp;
    bp.C = barenblatt_C(0.01, 0.1, {0.5, 0.5}, {1.0, 0.5}, 2.0, 1);
    std::vector<double> errs;
    for (std::size_t n : {50ul, 100ul}) {
      const auto m = build_interval_mesh(n, Boundary::neumann);
      const double dt = 2e-4 * 50.0 / double(n);
      const auto steps = static_cast<std::size_t>(std::llround(0.08 / dt));
      const auto tr = simulate(project_initial([&](const Point& x) { return barenblatt(x, 0.0, bp); }, m),
                               scheme(2.0, dt, steps));
      errs.push_back(barenblatt_l1_error(tr.states.back(), bp, 0.08));
    }
    const double order = std::log2(errs[0] / errs[1]);
    return Outcome{errs[1] < errs[0] && order >= 0.7,
                   fmt("L1 err %.3e", errs[0]) + fmt(" -> %.3e", errs[1]) + fmt(", order %.3f", order)};
  });

  std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
