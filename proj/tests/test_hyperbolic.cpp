#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "msdarcy/errors.hpp"
#include "msdarcy/hyperbolic.hpp"
#include "msdarcy/scenarios.hpp"

using namespace msdarcy;

namespace {

MixtureModel single(double m = 1.0) { return MixtureModel(1, {{1.0, 2.0}}, {m}); }

FieldSnapshot smooth_pair(std::size_t cells) {
  FieldSnapshot s(2, cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(cells);
    const double ph = 2.0 * std::numbers::pi * x;
    s.r(0, c) = 1.0 + 0.2 * std::sin(ph);
    s.r(1, c) = 0.8 - 0.1 * std::cos(ph);
    s.m(0, c) = 0.1 * std::cos(ph);
    s.m(1, c) = -0.05 * std::sin(2.0 * ph);
  }
  return s;
}

Grid1D periodic(std::size_t cells) { return {0.0, 1.0, cells, Boundary::periodic, {}}; }

}  // namespace

TEST_CASE("numerical flux examples") {
  const MixtureModel m = single();
  const CellState rest{{1.0}, {0.0}};
  const auto f = numerical_flux(m, rest, rest);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == 1.0);
  const CellState l{{1.0}, {0.3}}, r{{1.0}, {-0.3}};
  CHECK(numerical_flux(m, l, r)[0] == 0.0);
  const MixtureModel p = scenarios::default_model();
  const CellState u{{0.7, 1.4}, {0.2, -0.5}};
  const auto fu = numerical_flux(p, u, u);
  const auto exact = flux(p, u, 0);
  for (std::size_t k = 0; k < exact.size(); ++k) CHECK(fu[k] == exact[k]);
  CHECK_THROWS_AS(numerical_flux(m, CellState{{0.0}, {0.0}}, rest), DomainError);
}

TEST_CASE("source step examples") {
  const MixtureModel m = single();
  FieldSnapshot s = FieldSnapshot::uniform(std::vector<double>{1.0}, 3);
  for (std::size_t c = 0; c < 3; ++c) s.m(0, c) = 1.0;
  const FieldSnapshot out = source_step(m, s, 1.0, 1.0);
  for (std::size_t c = 0; c < 3; ++c) CHECK(out.m(0, c) == doctest::Approx(0.5));
  CHECK(out.rho == s.rho);
  const FieldSnapshot ex = source_step(m, s, 1.0, 1.0, SourceIntegrator::exponential);
  CHECK(ex.m(0, 0) == doctest::Approx(std::exp(-1.0)));

  const FieldSnapshot zero = FieldSnapshot::uniform(std::vector<double>{1.0}, 3);
  CHECK(source_step(m, zero, 0.3, 0.1) == zero);

  const MixtureModel p(1, {{1, 2}, {1, 2}}, {0.7, 0.7}, {{0, 1, {5.0, 0.0, 0.0}}});
  FieldSnapshot q = FieldSnapshot::uniform(std::vector<double>{1.3, 1.3}, 2);
  q.m(0, 0) = q.m(1, 0) = 0.4;
  q.m(0, 1) = q.m(1, 1) = -0.2;
  const double dt = 0.2, eps = 0.5, tau = dt / (eps * eps);
  const FieldSnapshot qi = source_step(p, q, dt, eps);
  const FieldSnapshot qe = source_step(p, q, dt, eps, SourceIntegrator::exponential);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(qi.m(i, 0) == doctest::Approx(0.4 / (1.0 + tau * 0.7)));
    CHECK(qe.m(i, 1) == doctest::Approx(-0.2 * std::exp(-tau * 0.7)));
  }
  CHECK_THROWS_AS(source_step(m, s, 0.0, 1.0), DomainError);
}

TEST_CASE("friction exchange conserves total momentum") {
  const MixtureModel m(1, {{1, 2}, {1, 2}, {1, 1}}, {0.0, 0.0, 0.0},
                       {{0, 1, {3.0, 0.5, 0.0}}, {1, 2, {0.2, 0.0, 0.0}}, {0, 2, {1.0, 0.0, 0.0}}});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.5, 2.0), v(-1.0, 1.0);
  FieldSnapshot s(3, 16);
  for (auto& r : s.rho) r = u(rng);
  for (auto& x : s.mom) x = v(rng);
  for (auto integ : {SourceIntegrator::implicit_euler, SourceIntegrator::exponential}) {
    const FieldSnapshot out = source_step(m, s, 0.05, 0.1, integ);
    for (std::size_t c = 0; c < 16; ++c) {
      const double before = s.m(0, c) + s.m(1, c) + s.m(2, c);
      const double after = out.m(0, c) + out.m(1, c) + out.m(2, c);
      double scale = 0.0;
      for (std::size_t i = 0; i < 3; ++i) scale += std::fabs(s.m(i, c));
      CHECK(std::fabs(after - before) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("uniform rest state is a fixed point") {
  const MixtureModel m = scenarios::default_model();
  for (Boundary b : {Boundary::periodic, Boundary::farfield}) {
    const Grid1D g{-1.0, 1.0, 32, b, b == Boundary::farfield ? std::vector<double>{1.2, 0.9} : std::vector<double>{}};
    for (Reconstruction rec : {Reconstruction::first_order, Reconstruction::minmod, Reconstruction::van_leer}) {
      HyperbolicConfig cfg;
      cfg.reconstruction = rec;
      const HyperbolicSolver solver(m, g, cfg);
      const FieldSnapshot s = FieldSnapshot::uniform(std::vector<double>{1.2, 0.9}, 32);
      const FieldSnapshot out = solver.step(s);
      CHECK(out.rho == s.rho);
      CHECK(out.mom == s.mom);
    }
  }
}

TEST_CASE("time step follows the scaled CFL condition") {
  const MixtureModel m = single();
  HyperbolicConfig cfg;
  cfg.epsilon = 0.1;
  cfg.cfl = 0.5;
  const Grid1D g = periodic(10);
  FieldSnapshot s = FieldSnapshot::uniform(std::vector<double>{2.0}, 10);
  s.m(0, 3) = 1.0;
  const double lam = 0.5 + std::sqrt(4.0);
  CHECK(HyperbolicSolver(m, g, cfg).time_step(s) == doctest::Approx(0.5 * 0.1 * 0.1 / lam));
}

TEST_CASE("single species step matches a standalone Euler-with-friction step") {
  const MixtureModel m = single(1.5);
  const std::size_t N = 64;
  const Grid1D g = periodic(N);
  HyperbolicConfig cfg;
  cfg.splitting = Splitting::lie;
  cfg.reconstruction = Reconstruction::first_order;
  cfg.source = SourceIntegrator::implicit_euler;
  FieldSnapshot s(1, N);
  for (std::size_t c = 0; c < N; ++c) {
    const double x = g.center(c);
    s.r(0, c) = 1.0 + 0.3 * std::sin(2 * std::numbers::pi * x);
    s.m(0, c) = 0.2 * std::cos(2 * std::numbers::pi * x);
  }
  const HyperbolicSolver solver(m, g, cfg);
  const double dt = solver.time_step(s);
  const FieldSnapshot out = solver.step(s, dt);

  // Reference: first-order Rusanov on isentropic Euler, then implicit friction.
  std::vector<double> fr(N + 1), fm(N + 1);
  for (std::size_t f = 0; f <= N; ++f) {
    const std::size_t l = (f + N - 1) % N, r = f % N;
    const double rl = s.r(0, l), ml = s.m(0, l), rr = s.r(0, r), mr = s.m(0, r);
    const double lam = std::max(std::fabs(ml / rl) + std::sqrt(2 * rl), std::fabs(mr / rr) + std::sqrt(2 * rr));
    fr[f] = 0.5 * (ml + mr) - 0.5 * lam * (rr - rl);
    fm[f] = 0.5 * (ml * ml / rl + rl * rl + mr * mr / rr + rr * rr) - 0.5 * lam * (mr - ml);
  }
  for (std::size_t c = 0; c < N; ++c) {
    const double r = s.r(0, c) - dt / g.dx() * (fr[c + 1] - fr[c]);
    const double mm = (s.m(0, c) - dt / g.dx() * (fm[c + 1] - fm[c])) / (1.0 + dt * 1.5);
    CHECK(out.r(0, c) == doctest::Approx(r).epsilon(1e-13));
    CHECK(out.m(0, c) == doctest::Approx(mm).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("mass is conserved on periodic grids") {
  const MixtureModel m = scenarios::default_model();
  const Grid1D g = periodic(128);
  for (Reconstruction rec : {Reconstruction::first_order, Reconstruction::van_leer}) {
    HyperbolicConfig cfg;
    cfg.reconstruction = rec;
    const HyperbolicSolver solver(m, g, cfg);
    FieldSnapshot s = smooth_pair(128);
    const auto m0 = total_mass(g, s);
    for (int k = 0; k < 100; ++k) s = solver.step(s, solver.time_step(s));
    const auto m1 = total_mass(g, s);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::fabs(m1[i] - m0[i]) <= 1e-14 * m0[i]);
  }
}

TEST_CASE("species relabelling permutes the output exactly") {
  const MixtureModel m(1, {{1.0, 2.0}, {0.5, 1.4}}, {1.0, 3.0}, {{0, 1, {0.7, 0.2, 0.1}}});
  const std::vector<std::size_t> perm{1, 0};
  const MixtureModel mp = m.permuted(perm);
  const Grid1D g = periodic(64);
  FieldSnapshot s = smooth_pair(64);
  FieldSnapshot sp(2, 64);
  for (std::size_t c = 0; c < 64; ++c) {
    sp.r(0, c) = s.r(1, c), sp.r(1, c) = s.r(0, c);
    sp.m(0, c) = s.m(1, c), sp.m(1, c) = s.m(0, c);
  }
  for (SourceIntegrator integ : {SourceIntegrator::implicit_euler, SourceIntegrator::exponential}) {
    HyperbolicConfig cfg;
    cfg.reconstruction = Reconstruction::van_leer;
    cfg.source = integ;
    cfg.epsilon = 0.3;
    const HyperbolicSolver a(m, g, cfg), b(mp, g, cfg);
    FieldSnapshot x = s, y = sp;
    for (int k = 0; k < 20; ++k) {
      const double dt = a.time_step(x);
      CHECK(dt == b.time_step(y));
      x = a.step(x, dt);
      y = b.step(y, dt);
    }
    for (std::size_t c = 0; c < 64; ++c) {
      CHECK(x.r(0, c) == y.r(1, c));
      CHECK(x.r(1, c) == y.r(0, c));
      CHECK(x.m(0, c) == y.m(1, c));
      CHECK(x.m(1, c) == y.m(0, c));
    }
  }
}

TEST_CASE("three-species relabelling agrees to rounding") {
  const MixtureModel m(1, {{1, 2}, {1, 2}, {2, 1}}, {1.0, 2.0, 0.5},
                       {{0, 1, {1.0, 0.0, 0.0}}, {1, 2, {0.3, 0.1, 0.0}}});
  const std::vector<std::size_t> perm{2, 0, 1};
  const MixtureModel mp = m.permuted(perm);
  const Grid1D g = periodic(48);
  FieldSnapshot s(3, 48);
  for (std::size_t c = 0; c < 48; ++c)
    for (std::size_t i = 0; i < 3; ++i) {
      const double x = g.center(c);
      s.r(i, c) = 1.0 + 0.1 * (i + 1) * std::sin(2 * std::numbers::pi * (x + 0.1 * i));
      s.m(i, c) = 0.05 * std::cos(2 * std::numbers::pi * x * (i + 1));
    }
  FieldSnapshot sp(3, 48);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t c = 0; c < 48; ++c) sp.r(k, c) = s.r(perm[k], c), sp.m(k, c) = s.m(perm[k], c);
  HyperbolicConfig cfg;
  cfg.source = SourceIntegrator::exponential;
  const HyperbolicSolver a(m, g, cfg), b(mp, g, cfg);
  FieldSnapshot x = s, y = sp;
  for (int k = 0; k < 10; ++k) {
    const double dt = a.time_step(x);
    x = a.step(x, dt);
    y = b.step(y, dt);
  }
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t c = 0; c < 48; ++c) {
      CHECK(y.r(k, c) == doctest::Approx(x.r(perm[k], c)).epsilon(1e-13));
      CHECK(y.m(k, c) == doctest::Approx(x.m(perm[k], c)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("density floor aborts with cell and time") {
  const MixtureModel m = single();
  const Grid1D g = periodic(16);
  HyperbolicConfig cfg;
  cfg.density_floor = 0.99;
  FieldSnapshot s = FieldSnapshot::uniform(std::vector<double>{1.0}, 16);
  s.m(0, 4) = -0.5;
  s.m(0, 6) = 0.5;
  const HyperbolicSolver solver(m, g, cfg);
  FieldSnapshot cur = s;
  bool aborted = false;
  try {
    for (int k = 0; k < 50; ++k) cur = solver.step(cur, solver.time_step(cur));
  } catch (const SolverAbort& e) {
    aborted = true;
    CHECK(e.species() == 0);
    CHECK(e.cell() >= 3);
    CHECK(e.cell() <= 7);
    CHECK(e.time() > 0.0);
  }
  CHECK(aborted);
}

TEST_CASE("equilibrium run keeps entropy constant") {
  const MixtureModel m = scenarios::default_model();
  const Grid1D g = periodic(32);
  HyperbolicConfig cfg;
  cfg.t_end = 0.2;
  const HyperbolicRun run = HyperbolicSolver(m, g, cfg).run(FieldSnapshot::uniform(std::vector<double>{1.0, 1.5}, 32));
  for (const EntropyAuditRow& r : run.audit) {
    CHECK(r.total_entropy == run.audit.front().total_entropy);
    CHECK(r.dissipation == 0.0);
  }
  CHECK(run.snapshots.back().time == 0.2);
}

TEST_CASE("single species bump loses entropy and balances dissipation") {
  const MixtureModel m = single(1.0);
  const std::size_t N = 1024;
  const Grid1D g = periodic(N);
  HyperbolicConfig cfg;
  cfg.t_end = 0.1;
  cfg.reconstruction = Reconstruction::van_leer;
  cfg.source = SourceIntegrator::exponential;
  FieldSnapshot s(1, N);
  for (std::size_t c = 0; c < N; ++c) {
    const double x = g.center(c);
    s.r(0, c) = 1.0 + 0.2 * std::exp(-50.0 * (x - 0.5) * (x - 0.5));
    s.m(0, c) = 0.1 * std::sin(2 * std::numbers::pi * x);
  }
  const HyperbolicRun run = HyperbolicSolver(m, g, cfg).run(s);
  double diss = 0.0;
  for (std::size_t k = 1; k < run.audit.size(); ++k) {
    CHECK(run.audit[k].total_entropy < run.audit[k - 1].total_entropy);
    diss += run.audit[k].dissipation;
  }
  const double drop = run.audit.front().total_entropy - run.audit.back().total_entropy;
  CHECK(std::fabs(drop - diss) <= 1e-2 * diss);
}

TEST_CASE("run lands exactly on output times") {
  const MixtureModel m = single();
  const Grid1D g = periodic(32);
  HyperbolicConfig cfg;
  cfg.t_end = 0.3;
  cfg.output_interval = 0.1;
  FieldSnapshot s = FieldSnapshot::uniform(std::vector<double>{1.0}, 32);
  s.m(0, 3) = 0.1;
  const HyperbolicRun run = HyperbolicSolver(m, g, cfg).run(s);
  REQUIRE(run.snapshots.size() == 4);
  CHECK(run.snapshots[1].time == 0.1);
  CHECK(run.snapshots[2].time == 0.2);
  CHECK(run.snapshots[3].time == 0.3);
  const std::vector<double> times{0.05, 0.25};
  const HyperbolicRun run2 = HyperbolicSolver(m, g, cfg).run(s, times);
  REQUIRE(run2.snapshots.size() == 4);
  CHECK(run2.snapshots[1].time == 0.05);
  CHECK(run2.snapshots[3].time == 0.3);
}

TEST_CASE("solver configuration is validated") {
  const MixtureModel m = single();
  HyperbolicConfig bad;
  bad.cfl = 1.5;
  CHECK_THROWS_AS(HyperbolicSolver(m, periodic(16), bad), ConfigError);
  CHECK_THROWS_AS(HyperbolicSolver(m, periodic(2), HyperbolicConfig{}), ConfigError);
  CHECK_THROWS_AS(HyperbolicSolver(m, Grid1D{0, 1, 16, Boundary::farfield, {}}, HyperbolicConfig{}), ConfigError);
  CHECK_THROWS_AS(HyperbolicSolver(scenarios::default_model(2), periodic(16), HyperbolicConfig{}), ConfigError);
  CHECK_THROWS_AS(HyperbolicSolver(MixtureModel(1, {{1, 2}}, {0.0}), periodic(16), HyperbolicConfig{}), ConfigError);
}
