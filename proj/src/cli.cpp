#include "msdarcy/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "msdarcy/certificate.hpp"
#include "msdarcy/config.hpp"
#include "msdarcy/errors.hpp"
#include "msdarcy/harness.hpp"
#include "msdarcy/identities.hpp"
#include "msdarcy/kernels.hpp"
#include "msdarcy/output.hpp"
#include "msdarcy/scenarios.hpp"

namespace msdarcy::cli {

namespace {

struct Options {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

RunConfig load(const Options& o) {
  if (!o.config.empty() && !o.preset.empty()) throw ConfigError("--config and --preset are mutually exclusive");
  RunConfig cfg = o.config.empty() ? scenarios::preset(o.preset.empty() ? "default" : o.preset)
                                   : parse_config(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int simulate(const RunConfig& cfg, bool quiet) {
  const Scenario& s = cfg.scenario;
  s.validate();
  const double eps = s.hyperbolic.epsilon;
  const InitialPair init = well_prepared_init(s, eps);
  HyperbolicConfig hc = s.hyperbolic;
  hc.t_end = s.t_end;
  const HyperbolicSolver solver(s.model, s.grid, hc);
  const HyperbolicRun run = solver.run(init.hyperbolic);
  const std::filesystem::path dir(cfg.output_dir);
  write_file(dir / "snapshots.csv", snapshot_csv(s.grid, run.snapshots));
  write_file(dir / "audit.csv", audit_csv(run.audit));
  if (!quiet)
    std::cout << "simulate: " << run.steps << " steps to t=" << num(run.snapshots.back().time)
              << ", total entropy " << num(run.audit.front().total_entropy) << " -> "
              << num(run.audit.back().total_entropy) << ", kernels " << kernels::active().name << "\n";
  return ok;
}

int limit(const RunConfig& cfg, bool quiet) {
  const Scenario& s = cfg.scenario;
  s.validate();
  const InitialPair init = well_prepared_init(s, s.hyperbolic.epsilon);
  ParabolicConfig pc = s.parabolic;
  pc.t_end = s.t_end;
  const ParabolicSolver solver(s.model, s.grid, pc);
  const ParabolicRun run = solver.run(init.parabolic);
  std::vector<std::pair<double, LimitMomentum>> mom;
  for (const DensityField& f : run.fields)
    mom.emplace_back(f.time, reconstruct_momentum(s.model, s.grid, f, s.hyperbolic.epsilon));
  const std::filesystem::path dir(cfg.output_dir);
  write_file(dir / "limit.csv", density_csv(s.grid, run.fields));
  write_file(dir / "limit_momentum.csv", momentum_csv(s.grid, mom));
  if (!quiet)
    std::cout << "limit: " << run.steps << " steps to t=" << num(run.fields.back().time) << ", max |ebar| "
              << num(mom.back().second.max_abs_ebar()) << " at epsilon " << num(s.hyperbolic.epsilon) << "\n";
  return ok;
}

int sweep_cmd(const RunConfig& cfg, bool quiet) {
  const SweepResult res = sweep(cfg.scenario, cfg.threads);
  const std::filesystem::path dir(cfg.output_dir);
  write_file(dir / "sweep.json", sweep_json(res));
  write_file(dir / "sweep.csv", sweep_csv(res));
  if (!res.coupling.satisfied)
    std::cerr << "warning: coupling check M_i >= max|lambda_ij| fails (min ratio " << num(res.coupling.min_ratio)
              << ")\n";
  if (!quiet) {
    for (const EpsilonRecord& r : res.records) {
      if (r.ok)
        std::cout << "epsilon " << num(r.epsilon) << ": phi(T) " << num(r.phi_final) << ", L2 gap "
                  << num(r.l2_gap_total) << ", K " << num(r.k_ratio) << "\n";
      else
        std::cout << "epsilon " << num(r.epsilon) << ": " << r.failure << "\n";
    }
    if (res.order.valid) std::cout << "observed order " << num(res.order.slope) << "\n";
  }
  for (const EpsilonRecord& r : res.records)
    if (!r.ok) std::cerr << "error: epsilon " << num(r.epsilon) << ": " << r.failure << "\n";
  return res.complete ? ok : runtime_abort;
}

int certify_cmd(const RunConfig& cfg, bool quiet) {
  const std::size_t d = cfg.model().dimension();
  const CellState eq = CellState::rest(cfg.certificate.equilibrium, d);
  const CertificateReport rep = certify(cfg.model(), eq, cfg.certificate.box, cfg.certificate.samples, {}, cfg.seed);
  write_file(std::filesystem::path(cfg.output_dir) / "certificate.json", certificate_json(rep));
  if (!quiet) {
    const ConditionResult* conds[] = {&rep.condition1, &rep.condition2, &rep.condition3, &rep.condition4};
    for (int k = 0; k < 4; ++k)
      std::cout << "condition " << k + 1 << ": " << verdict_string(*conds[k]) << " (value " << num(conds[k]->value)
                << ", margin " << num(conds[k]->margin) << ")\n";
  }
  return rep.passed() ? ok : check_failed;
}

int identities_cmd(const RunConfig& cfg, bool quiet) {
  const IdentityReport rep =
      run_identity_battery(cfg.model(), cfg.certificate.box, cfg.identity_samples, cfg.seed);
  const std::vector<double> orders = calculus_rule_orders(1);
  write_file(std::filesystem::path(cfg.output_dir) / "identities.json", identities_json(rep, orders));
  if (!quiet)
    for (const IdentityCheck& c : rep.checks)
      std::cout << (c.passed() ? "ok   " : "FAIL ") << c.name << "  " << num(c.residual) << " < " << num(c.tolerance)
                << "\n";
  return rep.passed() ? ok : check_failed;
}

int uphill_cmd(const RunConfig& cfg, bool quiet) {
  const UphillReport rep = uphill_diffusion_probe(cfg.scenario);
  write_file(std::filesystem::path(cfg.output_dir) / "uphill.json", uphill_json(rep));
  if (!quiet) {
    std::cout << "hyperbolic witnesses: " << rep.hyperbolic_count << "\n";
    std::cout << "parabolic witnesses: " << rep.parabolic_count << "\n";
    const auto* best = rep.hyperbolic.empty() ? nullptr : &rep.hyperbolic.front();
    if (best)
      std::cout << "strongest: species " << best->species + 1 << " at x=" << num(best->x) << ", t=" << num(best->t)
                << " (" << num(best->value) << ")\n";
    else
      std::cout << "none found\n";
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-species Euler-Darcy flow with Maxwell-Stefan friction: solvers and checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config, "configuration file")->check(CLI::ExistingFile);
  app.add_option("--preset", opt.preset, "built-in configuration");
  app.add_option("--out", opt.out, "output directory");
  app.add_option("--seed", opt.seed, "sampling seed");
  app.add_flag("--quiet", opt.quiet, "suppress the summary on standard output");

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&, bool);
  };
  const Command commands[] = {
      {"simulate", "run the hyperbolic solver", simulate},
      {"limit", "run the limit (porous medium) solver", limit},
      {"sweep", "epsilon sweep of the relative entropy", sweep_cmd},
      {"certify", "check the equilibrium conditions", certify_cmd},
      {"identities", "run the identity battery", identities_cmd},
      {"uphill", "probe for uphill diffusion", uphill_cmd},
  };
  const Command* chosen = nullptr;
  for (const Command& c : commands) app.add_subcommand(c.name, c.help)->callback([&chosen, &c] { chosen = &c; });
  bool print = false;
  app.add_subcommand("print-config", "print the resolved configuration")->callback([&print] { print = true; });
  app.add_subcommand("presets", "list built-in configurations")->callback([] {
    for (const std::string& p : scenarios::preset_names()) std::cout << p << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }
  try {
    if (!chosen && !print) return ok;
    const RunConfig cfg = load(opt);
    if (print) {
      std::cout << to_config_text(cfg);
      return ok;
    }
    return chosen->run(cfg, opt.quiet);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return config_error;
  } catch (const DimensionError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return config_error;
  } catch (const SolverAbort& e) {
    std::cerr << "run aborted: " << e.what() << "\n";
    return runtime_abort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return runtime_abort;
  }
}

}  // namespace msdarcy::cli
