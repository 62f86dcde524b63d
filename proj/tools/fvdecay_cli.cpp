#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fvdecay/fvdecay.hpp"

namespace {

enum Exit { ok = 0, violation = 1, solver_failure = 2, bad_config = 3 };

int cmd_simulate(const std::string& preset_name, const std::string& config_path,
                 const std::vector<std::string>& overrides, const std::string& output) {
  fvdecay::ExperimentConfig cfg;
  if (!preset_name.empty()) cfg = fvdecay::preset(preset_name);
  if (!config_path.empty()) cfg = fvdecay::load_config(config_path, cfg);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw fvdecay::ConfigError("--set expects key=value, got " + kv);
    fvdecay::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!output.empty()) cfg.output_dir = output;
  const auto r = fvdecay::run_experiment(cfg);
  std::cout << fvdecay::rate_report(r);
  if (!cfg.output_dir.empty()) std::cout << "wrote " << cfg.output_dir << '\n';
  return ok;
}

int cmd_region(int d, std::vector<double> arange, std::vector<double> brange, std::size_t res,
               const std::string& out) {
  const auto r = fvdecay::run_region_scan(d, arange[0], arange[1], brange[0], brange[1], res, out);
  std::cout << "d " << d << " resolution " << res << " in_Md " << r.count_Md() << " in_remark9 "
            << r.count_remark9() << '\n';
  if (!out.empty()) std::cout << "wrote " << out << '\n';
  return ok;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::size_t trials, int dim,
               std::size_t n, const std::string& csv_dir) {
  namespace v = fvdecay::verify;
  if (trials < 1) throw fvdecay::ConfigError("trials must be at least 1");
  std::map<std::string, std::unique_ptr<std::ofstream>> files;
  v::CsvSink sink;
  if (!csv_dir.empty()) {
    std::filesystem::create_directories(csv_dir);
    sink = [&](const std::string& name) -> std::ostream* {
      auto& f = files[name];
      f = std::make_unique<std::ofstream>(fvdecay::io::open_output(csv_dir + "/" + suite + "_" + name + ".csv"));
      return f.get();
    };
  }
  v::SuiteReport rep;
  if (suite == "scalar") rep = v::scalar_suite(seed, trials, sink);
  else if (suite == "gronwall") rep = v::gronwall_suite(seed, trials, 100, sink);
  else if (suite == "region-oracle") rep = v::region_oracle_suite(seed, trials);
  else if (suite == "functional") {
    const auto mesh = dim == 1 ? fvdecay::build_interval_mesh(n, fvdecay::Boundary::periodic)
                               : fvdecay::build_square_mesh(n, fvdecay::Boundary::periodic);
    rep = v::functional_suite(mesh, seed, trials, sink);
  } else {
    throw fvdecay::ConfigError("unknown suite '" + suite + "'");
  }
  std::cout << rep.text();
  return rep.passed() ? ok : violation;
}

int cmd_barenblatt(double beta, int d, double t0, double t1, std::vector<double> xs, double t) {
  fvdecay::BarenblattParams p;
  p.beta = beta;
  p.d = d;
  p.t0 = t0;
  p.x0 = {0.5, 0.5};
  p.C = fvdecay::barenblatt_C(t0, t1, p.x0, {1.0, 0.5}, beta, d);
  p.validate();
  std::cout << "A " << fvdecay::io::num(p.A()) << " B " << fvdecay::io::num(p.B()) << " C "
            << fvdecay::io::num(p.C) << '\n';
  std::cout << "x,t,u\n";
  for (double x : xs)
    std::cout << fvdecay::io::num(x) << ',' << fvdecay::io::num(t) << ','
              << fvdecay::io::num(fvdecay::barenblatt({x, 0.5}, t, p)) << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fvdecay: implicit finite-volume scheme for u_t = div grad(u^beta) and entropy decay checks"};
  app.require_subcommand(1);

  std::string preset_name, config_path, output;
  std::vector<std::string> overrides;
  auto* sim = app.add_subcommand("simulate", "Run a decay experiment and write CSV output");
  sim->add_option("--preset", preset_name, "pm1d | pm2d | fd1d | fd2d");
  sim->add_option("--config", config_path, "key = value config file (applied after --preset)");
  sim->add_option("--set", overrides, "Override one setting, key=value (repeatable)");
  sim->add_option("-o,--output", output, "Output directory");

  int rd = 9;
  std::vector<double> arange{0.0, 6.0}, brange{0.0, 6.0};
  std::size_t res = 400;
  std::string rout;
  auto* reg = app.add_subcommand("region-scan", "Rasterize the (alpha, beta) regions for dimension d");
  reg->add_option("-d,--dim", rd, "Space dimension (>= 2)")->capture_default_str();
  reg->add_option("--alpha", arange, "alpha range lo hi")->expected(2)->capture_default_str();
  reg->add_option("--beta", brange, "beta range lo hi")->expected(2)->capture_default_str();
  reg->add_option("-r,--resolution", res, "Points per axis")->capture_default_str();
  reg->add_option("-o,--output", rout, "Raster CSV path");

  std::string suite = "scalar", csv_dir;
  std::uint64_t seed = 1;
  std::size_t trials = 10000, vn = 16;
  int vdim = 1;
  auto* ver = app.add_subcommand("verify", "Randomized inequality property suites");
  ver->add_option("suite", suite, "scalar | functional | gronwall | region-oracle")
      ->check(CLI::IsMember({"scalar", "functional", "gronwall", "region-oracle"}));
  ver->add_option("--seed", seed, "RNG seed")->capture_default_str();
  ver->add_option("--trials", trials, "Trials per check")->capture_default_str();
  ver->add_option("--dim", vdim, "Torus dimension for the functional suite")->check(CLI::Range(1, 2))->capture_default_str();
  ver->add_option("--n", vn, "Cells per axis for the functional suite")->capture_default_str();
  ver->add_option("--csv", csv_dir, "Directory for per-check CSV files");

  double bbeta = 2.0, bt0 = 0.01, bt1 = 0.1, bt = 0.0;
  int bd = 1;
  std::vector<double> bx{0.5};
  auto* bar = app.add_subcommand("barenblatt-eval", "Evaluate the Barenblatt profile along y = 0.5");
  bar->add_option("--beta", bbeta)->capture_default_str();
  bar->add_option("-d,--dim", bd)->capture_default_str();
  bar->add_option("--t0", bt0)->capture_default_str();
  bar->add_option("--t1", bt1)->capture_default_str();
  bar->add_option("-t,--time", bt)->capture_default_str();
  bar->add_option("-x", bx, "Evaluation abscissae")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : bad_config;
  }

  try {
    if (*sim) return cmd_simulate(preset_name, config_path, overrides, output);
    if (*reg) return cmd_region(rd, arange, brange, res, rout);
    if (*ver) return cmd_verify(suite, seed, trials, vdim, vn, csv_dir);
    if (*bar) return cmd_barenblatt(bbeta, bd, bt0, bt1, bx, bt);
  } catch (const fvdecay::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return solver_failure;
  } catch (const fvdecay::ConfigError& e) {
    std::cerr << "bad config: " << e.what() << '\n';
    return bad_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return bad_config;
  } catch (const std::domain_error& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return bad_config;
  }
  return ok;
}
