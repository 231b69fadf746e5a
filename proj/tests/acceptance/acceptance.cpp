// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "msdarcy/certificate.hpp"
#include "msdarcy/harness.hpp"
#include "msdarcy/hyperbolic.hpp"
#include "msdarcy/identities.hpp"
#include "msdarcy/kernels.hpp"
#include "msdarcy/matrix.hpp"
#include "msdarcy/parabolic.hpp"
#include "msdarcy/scenarios.hpp"

using namespace msdarcy;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt(v[k]);
  return s + "]";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome identity_battery() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const IdentityReport rep = run_identity_battery(scenarios::default_model(), scenarios::default_box(), 1000, 1);
  const double secs = seconds_since(t0);
  const char* exact[] = {"gibbs_duhem",
                         "dissipation_identity",
                         "lambda_symmetry",
                         "lambda_negative_semidefinite",
                         "maxwell_stefan_zero_sums",
                         "maxwell_stefan_positive_semidefinite",
                         "mobility_quadratic_form_positive",
                         "mobility_spectrum_above_min_mobility"};
  for (const char* name : exact) {
    const double r = rep.find(name).residual;
    o.require(r < 1e-10, std::string(name) + " " + fmt(r));
  }
  const double fd = rep.find("entropy_compatibility_fd").residual;
  o.require(fd < 1e-6, "entropy_compatibility_fd " + fmt(fd));
  o.require(rep.passed(), "battery verdict");
  o.require(secs < 10.0, "runtime " + fmt(secs) + " s");
  return o;
}

Outcome certificate() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const CertificateReport rep =
      certify(scenarios::default_model(), scenarios::default_equilibrium(), scenarios::default_box(), 10000, {}, 1);
  const double secs = seconds_since(t0);
  const ConditionResult* c[] = {&rep.condition1, &rep.condition2, &rep.condition3, &rep.condition4};
  for (int k = 0; k < 4; ++k)
    o.require(c[k]->verdict == Verdict::pass,
              "default condition " + std::to_string(k + 1) + " margin " + fmt(c[k]->margin));
  const CertificateReport deg = certify(scenarios::degenerate_model(), scenarios::default_equilibrium(),
                                        scenarios::default_box(), 10000, {}, 1);
  o.require(deg.condition1.verdict == Verdict::fail, "degenerate condition 1 " + verdict_string(deg.condition1));
  const MixtureModel one(1, {{1.0, 2.0}}, {1.0});
  const double k4 = kernel_condition_margin(one, CellState::rest({1.0}, 1), {1.0});
  o.require(std::fabs(k4 - std::sqrt(2.0 / 3.0)) < 1e-12, "n=1 kernel margin " + fmt(k4));
  o.require(secs < 30.0, "runtime " + fmt(secs) + " s");
  return o;
}

// Shared protocol of the two limit criteria.
SweepResult limit_sweep(const Scenario& s, Outcome& o, double budget) {
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult res = sweep(s);
  const double secs = seconds_since(t0);
  o.require(res.complete, "all runs complete");
  if (!res.complete) return res;
  std::vector<double> gaps, ks;
  for (const EpsilonRecord& r : res.records) {
    gaps.push_back(r.l2_gap_total);
    ks.push_back(r.k_ratio);
  }
  bool gaps_down = true, k_down = true;
  for (std::size_t k = 1; k < gaps.size(); ++k) {
    gaps_down = gaps_down && gaps[k] < gaps[k - 1];
    k_down = k_down && ks[k] <= ks[k - 1];
  }
  o.require(gaps_down, "L2 gaps " + list(gaps));
  o.require(res.order.valid && res.order.slope >= 1.8, "order " + fmt(res.order.slope));
  o.require(std::isfinite(res.k_estimate) && k_down, "K by epsilon " + list(ks));
  o.require(secs < budget, "runtime " + fmt(secs) + " s");
  return res;
}

Outcome single_species_limit() {
  Outcome o;
  limit_sweep(scenarios::single_species_limit(), o, 300.0);
  return o;
}

Outcome two_species_limit() {
  Outcome o;
  const Scenario s = scenarios::two_species_limit();
  const CouplingCheck cc = coupling_check(s.model, s.density_box());
  o.require(cc.min_ratio >= 2.0, "coupling ratio " + fmt(cc.min_ratio));
  const SweepResult res = limit_sweep(s, o, 900.0);
  if (!res.complete) return o;
  bool r1 = true;
  std::vector<double> k1, k2;
  for (const EpsilonRecord& r : res.records) {
    r1 = r1 && r.r1_nonnegative;
    k1.push_back(r.k1);
    k2.push_back(r.k2);
  }
  o.require(r1, "R1 nonnegative");
  auto growth = [](const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end()) - 1.0;
  };
  o.require(growth(k1) <= 0.1, "K1 " + list(k1));
  o.require(growth(k2) <= 0.1, "K2 " + list(k2));
  return o;
}

struct AuditSummary {
  bool monotone = true;
  double mismatch = 0.0;
};

AuditSummary entropy_audit_run(std::size_t cells) {
  const Scenario s = scenarios::entropy_audit(cells);
  HyperbolicConfig cfg = s.hyperbolic;
  cfg.t_end = s.t_end;
  const InitialPair init = well_prepared_init(s, cfg.epsilon);
  const HyperbolicRun run = HyperbolicSolver(s.model, s.grid, cfg).run(init.hyperbolic);
  AuditSummary a;
  double diss = 0.0;
  for (std::size_t k = 1; k < run.audit.size(); ++k) {
    a.monotone = a.monotone && run.audit[k].total_entropy <= run.audit[k - 1].total_entropy;
    diss += run.audit[k].dissipation;
  }
  const double drop = run.audit.front().total_entropy - run.audit.back().total_entropy;
  a.mismatch = std::fabs(drop - diss) / diss;
  return a;
}

Outcome entropy_audit() {
  Outcome o;
  const AuditSummary coarse = entropy_audit_run(512);
  const AuditSummary fine = entropy_audit_run(1024);
  o.require(coarse.monotone && fine.monotone, "entropy non-increasing every step");
  o.require(coarse.mismatch < 1e-2, "mismatch at 512 cells " + fmt(coarse.mismatch));
  const double ratio = coarse.mismatch / fine.mismatch;
  o.require(ratio >= 1.8, "refinement ratio " + fmt(ratio) + " (1024 cells " + fmt(fine.mismatch) + ")");
  return o;
}

FieldSnapshot periodic_data(const Grid1D& g) {
  FieldSnapshot s(2, g.cells);
  for (std::size_t c = 0; c < g.cells; ++c) {
    const double ph = 2.0 * std::numbers::pi * g.center(c);
    s.r(0, c) = 1.0 + 0.2 * std::sin(ph);
    s.r(1, c) = 1.0 - 0.1 * std::cos(ph);
    s.m(0, c) = 0.1 * std::cos(ph);
    s.m(1, c) = -0.1 * std::sin(ph);
  }
  return s;
}

Outcome conservation() {
  Outcome o;
  const MixtureModel m(1, {{1, 2}, {1, 2}}, {1.0, 2.0}, {{0, 1, {1.0, 0.2, 0.1}}});
  const Grid1D g{0.0, 1.0, 128, Boundary::periodic, {}};
  HyperbolicConfig hc;
  hc.epsilon = 0.5;
  hc.reconstruction = Reconstruction::van_leer;
  const HyperbolicSolver hyp(m, g, hc);
  const ParabolicSolver par(m, g, ParabolicConfig{});
  FieldSnapshot u = periodic_data(g);
  DensityField f = DensityField::from_snapshot(u);
  const std::vector<double> mass0 = total_mass(g, u);
  // The friction exchange alone: the same model without the body force.
  const MixtureModel exchange(1, {{1, 2}, {1, 2}}, {0.0, 0.0}, {{0, 1, {1.0, 0.2, 0.1}}});
  double worst_exchange = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double dt = hyp.time_step(u);
    const FieldSnapshot ex = source_step(exchange, u, dt, hc.epsilon, hc.source);
    for (std::size_t c = 0; c < g.cells; ++c) {
      const double before = u.m(0, c) + u.m(1, c), after = ex.m(0, c) + ex.m(1, c);
      const double scale = std::fabs(u.m(0, c)) + std::fabs(u.m(1, c));
      if (scale > 0.0) worst_exchange = std::max(worst_exchange, std::fabs(after - before) / scale);
    }
    u = hyp.step(u, dt);
    f = par.step(f);
  }
  double worst_h = 0.0, worst_p = 0.0;
  const std::vector<double> mass_h = total_mass(g, u);
  for (std::size_t i = 0; i < 2; ++i) {
    double mp = 0.0;
    for (std::size_t c = 0; c < g.cells; ++c) mp += f.r(i, c) * g.dx();
    worst_h = std::max(worst_h, std::fabs(mass_h[i] - mass0[i]) / mass0[i]);
    worst_p = std::max(worst_p, std::fabs(mp - mass0[i]) / mass0[i]);
  }
  o.require(worst_h <= 1e-14, "hyperbolic mass drift " + fmt(worst_h));
  o.require(worst_p <= 1e-14, "parabolic mass drift " + fmt(worst_p));
  o.require(worst_exchange <= 1e-12, "exchange momentum drift per step " + fmt(worst_exchange));
  return o;
}

Outcome uphill() {
  Outcome o;
  const UphillReport rep = uphill_diffusion_probe(scenarios::duncan_toor());
  const bool species2 = std::any_of(rep.hyperbolic.begin(), rep.hyperbolic.end(),
                                    [](const UphillWitness& w) { return w.species == 1 && w.value > 1e-8; });
  o.require(species2, "species 2 hyperbolic witnesses among " + std::to_string(rep.hyperbolic_count));
  const UphillReport ctl = uphill_diffusion_probe(scenarios::duncan_toor_control());
  o.require(ctl.parabolic_count == 0, "control parabolic witnesses " + std::to_string(ctl.parabolic_count));
  return o;
}

Outcome discrete_calculus() {
  Outcome o;
  for (std::size_t d : {1, 2}) {
    const std::vector<double> orders = calculus_rule_orders(d);
    const bool ok = std::all_of(orders.begin(), orders.end(), [](double p) { return std::fabs(p - 2.0) <= 0.2; });
    o.require(ok, "product and chain rule orders d=" + std::to_string(d) + " " + list(orders));
  }
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random = [&](std::size_t r, std::size_t c) {
    DenseMatrix m(r, c);
    for (double& x : m.data()) x = u(rng);
    return m;
  };
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const DenseMatrix a = random(2, 3), b = random(3, 2), c = random(3, 4), d = random(2, 3);
    const DenseMatrix lhs = kron(a, b) * kron(c, d);
    const DenseMatrix rhs = kron(a * c, b * d);
    worst = std::max(worst, (lhs - rhs).max_abs());
  }
  o.require(worst < 1e-12, "mixed-product residual " + fmt(worst));
  return o;
}

}  // namespace

int main() {
  std::printf("kernels: %s\n", kernels::active().name);
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"identity battery", identity_battery},
      {"equilibrium certificate", certificate},
      {"single-species limit", single_species_limit},
      {"two-species limit", two_species_limit},
      {"entropy audit", entropy_audit},
      {"conservation", conservation},
      {"uphill diffusion", uphill},
      {"discrete calculus", discrete_calculus},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d %s: %s (%.1f s) %s\n", index, name, o.pass ? "PASS" : "FAIL", seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
