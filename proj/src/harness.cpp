#include "msdarcy/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <string>

#include "msdarcy/errors.hpp"

namespace msdarcy {

namespace {

double ghosted(const double* row, std::size_t cells, long c, const Grid1D& grid, double ghost) {
  const long N = static_cast<long>(cells);
  if (c >= 0 && c < N) return row[c];
  if (grid.boundary == Boundary::periodic) return row[(c + N) % N];
  return ghost;
}

double central(const std::vector<double>& u, std::size_t i, std::size_t c, std::size_t cells, const Grid1D& grid,
               double ghost) {
  const double* row = u.data() + i * cells;
  const long cc = static_cast<long>(c);
  return (ghosted(row, cells, cc + 1, grid, ghost) - ghosted(row, cells, cc - 1, grid, ghost)) /
         (2.0 * grid.dx());
}

void require_pair(const MixtureModel& model, const Grid1D& grid, const FieldSnapshot& u, const DensityField& rbar,
                  const LimitMomentum& mbar) {
  const std::size_t n = model.species();
  const std::size_t N = grid.cells;
  if (u.species != n || rbar.species != n || mbar.species != n || u.cells != N || rbar.cells != N ||
      mbar.cells != N)
    throw DimensionError("hyperbolic and limit fields do not share the model and grid");
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) acc += 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
  return acc;
}

}  // namespace

void Scenario::validate() const {
  const std::size_t n = model.species();
  if (model.dimension() != 1) throw ConfigError("scenario: the solvers are one-dimensional");
  if (!model.has_positive_mobilities()) throw ConfigError("scenario: mobilities must be positive");
  if (base.size() != n) throw ConfigError("scenario: one base density per species required");
  for (double r : base)
    if (!(r > 0.0)) throw ConfigError("scenario: base densities must be positive");
  grid.validate(n);
  if (grid.boundary == Boundary::farfield && grid.farfield != base)
    throw ConfigError("scenario: far-field state must equal the base densities");
  if (!(t_end > 0.0)) throw ConfigError("scenario: t_end must be positive");
  if (epsilons.empty()) throw ConfigError("scenario: at least one epsilon required");
  for (double e : epsilons)
    if (!(e > 0.0)) throw ConfigError("scenario: epsilons must be positive");
  if (checkpoints == 0) throw ConfigError("scenario: checkpoints must be >= 1");
  if (profile == Profile::bump) {
    if (bump.amplitude.size() != n) throw ConfigError("scenario: one bump amplitude per species required");
    if (!(bump.radius > 0.0)) throw ConfigError("scenario: bump radius must be positive");
  } else {
    if (sine.amplitude.size() != n || sine.momentum.size() != n)
      throw ConfigError("scenario: one sine amplitude and momentum per species required");
    if (grid.boundary != Boundary::periodic) throw ConfigError("scenario: sine data needs a periodic grid");
  }
  hyperbolic.validate();
  parabolic.validate();
}

std::vector<double> Scenario::sample_times() const {
  std::vector<double> t(checkpoints);
  for (std::size_t k = 0; k < checkpoints; ++k)
    t[k] = k + 1 == checkpoints ? t_end : t_end * static_cast<double>(k + 1) / static_cast<double>(checkpoints);
  return t;
}

namespace {

DensityField initial_density(const Scenario& s) {
  const std::size_t n = s.model.species();
  const std::size_t N = s.grid.cells;
  DensityField f(n, N);
  for (std::size_t c = 0; c < N; ++c) {
    const double x = s.grid.center(c);
    for (std::size_t i = 0; i < n; ++i) {
      double r = s.base[i];
      if (s.profile == Profile::bump) {
        const double z = (x - s.bump.center) / s.bump.radius;
        if (std::fabs(z) < 1.0) {
          const double w = 1.0 - z * z;
          r += s.bump.amplitude[i] * (w * w) * (w * w);
        }
      } else {
        const double phase = 2.0 * std::numbers::pi * s.sine.wavenumber * (x - s.grid.x_min) / s.grid.length();
        r *= 1.0 + s.sine.amplitude[i] * std::sin(phase);
      }
      if (!(r > 0.0))
        throw ConfigError("scenario: initial density of species " + std::to_string(i + 1) +
                          " is not positive in cell " + std::to_string(c));
      f.r(i, c) = r;
    }
  }
  return f;
}

}  // namespace

StateBox Scenario::density_box() const {
  const DensityField f = initial_density(*this);
  const std::size_t n = model.species();
  StateBox box{base, base, std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < f.cells; ++c) {
      box.rho_lo[i] = std::min(box.rho_lo[i], f.r(i, c));
      box.rho_hi[i] = std::max(box.rho_hi[i], f.r(i, c));
    }
  return box;
}

InitialPair well_prepared_init(const Scenario& scenario, double epsilon) {
  scenario.validate();
  if (!(epsilon > 0.0)) throw ConfigError("scenario: epsilon must be positive");
  const std::size_t n = scenario.model.species();
  const std::size_t N = scenario.grid.cells;
  InitialPair out;
  out.parabolic = initial_density(scenario);
  out.hyperbolic = FieldSnapshot(n, N);
  out.hyperbolic.rho = out.parabolic.rho;
  if (scenario.well_prepared) {
    const LimitMomentum lm = reconstruct_momentum(scenario.model, scenario.grid, out.parabolic, epsilon);
    out.hyperbolic.mom = lm.mbar;
    if (scenario.profile == Profile::bump)
      for (std::size_t c = 0; c < N; ++c)
        if (std::fabs(scenario.grid.center(c) - scenario.bump.center) >= scenario.bump.radius)
          for (std::size_t i = 0; i < n; ++i) out.hyperbolic.m(i, c) = 0.0;
  } else if (scenario.profile == Profile::sine) {
    for (std::size_t c = 0; c < N; ++c) {
      const double x = scenario.grid.center(c);
      const double phase =
          2.0 * std::numbers::pi * scenario.sine.wavenumber * (x - scenario.grid.x_min) / scenario.grid.length();
      for (std::size_t i = 0; i < n; ++i) out.hyperbolic.m(i, c) = scenario.sine.momentum[i] * std::cos(phase);
    }
  }
  return out;
}

double phi(const MixtureModel& model, const Grid1D& grid, const FieldSnapshot& u, const DensityField& rbar,
           const LimitMomentum& mbar) {
  require_pair(model, grid, u, rbar, mbar);
  const std::size_t n = model.species();
  const std::size_t N = grid.cells;
  double acc = 0.0;
  for (std::size_t c = 0; c < N; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      const double r = u.r(i, c);
      const double rb = rbar.r(i, c);
      if (!(r > 0.0) || !(rb > 0.0)) throw DomainError("phi: non-positive density");
      const double dv = u.m(i, c) / r - mbar.mbar[i * N + c] / rb;
      acc += 0.5 * r * dv * dv + relative_free_energy(model.law(i), r, rb);
    }
  return acc * grid.dx();
}

ErrorTerms error_terms(const MixtureModel& model, const Grid1D& grid, const FieldSnapshot& u,
                       const DensityField& rbar, const LimitMomentum& mbar) {
  require_pair(model, grid, u, rbar, mbar);
  const std::size_t n = model.species();
  const std::size_t N = grid.cells;
  // (1/eps) vbar = -W/rbar; its gradient is eps-independent.
  std::vector<double> vs(n * N), vbar(n * N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < N; ++c) {
      const double rb = rbar.r(i, c);
      if (!(rb > 0.0) || !(u.r(i, c) > 0.0)) throw DomainError("error_terms: non-positive density");
      vs[i * N + c] = -mbar.w[i * N + c] / rb;
      vbar[i * N + c] = mbar.mbar[i * N + c] / rb;
    }
  ErrorTerms out;
  for (std::size_t c = 0; c < N; ++c) {
    double r1 = 0.0, r2 = 0.0, q = 0.0, e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ri = u.r(i, c);
      const double rbi = rbar.r(i, c);
      const double dvi = u.m(i, c) / ri - vbar[i * N + c];
      r1 += model.mobility(i) * ri * dvi * dvi;
      const double fi = ri * dvi * dvi + relative_pressure(model.law(i), ri, rbi);
      q += central(vs, i, c, N, grid, 0.0) * fi;
      e += mbar.ebar[i * N + c] * (ri / rbi) * dvi;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double rj = u.r(j, c);
        const double rbj = rbar.r(j, c);
        const double lij = model.lambda(i, j, ri, rj);
        const double dvj = u.m(j, c) / rj - vbar[j * N + c];
        const double dbar = vbar[i * N + c] - vbar[j * N + c];
        const double rel = (u.m(i, c) / ri - u.m(j, c) / rj) - dbar;
        r2 += lij * (ri * rj * rel * rel + ri * dbar * dvi * (rj - rbj) - rj * dbar * dvj * (ri - rbi));
      }
    }
    out.r1 += r1;
    out.r2 += 0.5 * r2;
    out.q += q;
    out.e += e;
  }
  const double dx = grid.dx();
  out.r1 *= dx;
  out.r2 *= dx;
  out.q *= dx;
  out.e *= dx;
  return out;
}

CouplingCheck coupling_check(const MixtureModel& model, const StateBox& box) {
  const std::size_t n = model.species();
  box.validate(n);
  CouplingCheck out;
  out.ratio.assign(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      // Affine in each argument, so the extremes sit at box corners.
      for (double a : {box.rho_lo[i], box.rho_hi[i]})
        for (double b : {box.rho_lo[j], box.rho_hi[j]}) worst = std::max(worst, std::fabs(model.lambda(i, j, a, b)));
    }
    if (worst > 0.0) out.ratio[i] = model.mobility(i) / worst;
  }
  out.min_ratio = *std::min_element(out.ratio.begin(), out.ratio.end());
  out.satisfied = out.min_ratio >= 1.0;
  return out;
}

OrderFit fit_order(const std::vector<double>& x, const std::vector<double>& y) {
  OrderFit fit;
  if (x.size() != y.size()) throw DimensionError("fit_order: size mismatch");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) continue;
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  fit.points = m;
  if (m < 2) return fit;
  const double dm = static_cast<double>(m);
  const double den = dm * sxx - sx * sx;
  if (!(std::fabs(den) > 0.0)) return fit;
  fit.slope = (dm * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / dm;
  fit.valid = true;
  return fit;
}

EpsilonRecord run_epsilon(const Scenario& scenario, double epsilon) {
  EpsilonRecord rec;
  rec.epsilon = epsilon;
  const MixtureModel& model = scenario.model;
  const Grid1D& grid = scenario.grid;
  const std::size_t n = model.species();
  const std::size_t N = grid.cells;
  const double dx = grid.dx();
  try {
    const InitialPair init = well_prepared_init(scenario, epsilon);
    HyperbolicConfig hc = scenario.hyperbolic;
    hc.epsilon = epsilon;
    hc.t_end = scenario.t_end;
    ParabolicConfig pc = scenario.parabolic;
    pc.t_end = scenario.t_end;
    const std::vector<double> times = scenario.sample_times();
    const HyperbolicRun hr = HyperbolicSolver(model, grid, hc).run(init.hyperbolic, times);
    const ParabolicRun pr = ParabolicSolver(model, grid, pc).run(init.parabolic, times);
    rec.hyperbolic_steps = hr.steps;
    rec.parabolic_steps = pr.steps;
    if (hr.snapshots.size() != pr.fields.size()) throw InternalError("sweep: solver outputs are not aligned");

    double h_base = 0.0;
    for (std::size_t i = 0; i < n; ++i) h_base += free_energy(model.law(i), scenario.base[i]);
    for (std::size_t k = 0; k < hr.snapshots.size(); ++k) {
      const FieldSnapshot& u = hr.snapshots[k];
      const DensityField& rb = pr.fields[k];
      const LimitMomentum lm = reconstruct_momentum(model, grid, rb, epsilon);
      const ErrorTerms et = error_terms(model, grid, u, rb, lm);
      rec.t.push_back(u.time);
      rec.phi.push_back(phi(model, grid, u, rb, lm));
      rec.r1.push_back(et.r1);
      rec.r2.push_back(et.r2);
      rec.q.push_back(et.q);
      rec.e.push_back(et.e);
      if (et.r1 < 0.0) rec.r1_nonnegative = false;

      double gap2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double g = 0.0, k1 = 0.0;
        for (std::size_t c = 0; c < N; ++c) {
          const double d = u.r(i, c) - rb.r(i, c);
          g += d * d;
          k1 += std::fabs(u.r(i, c) - scenario.base[i]);
        }
        gap2 += g * dx;
        rec.k1 = std::max(rec.k1, k1 * dx);
        if (k + 1 == hr.snapshots.size()) rec.l2_gap.push_back(std::sqrt(g * dx));
      }
      rec.l2_gap_series.push_back(std::sqrt(gap2));
      double k2 = 0.0;
      for (std::size_t c = 0; c < N; ++c) k2 += entropy(model, u.cell(c)) - h_base;
      rec.k2 = std::max(rec.k2, k2 * dx);
    }
    rec.phi0 = rec.phi.front();
    rec.phi_final = rec.phi.back();
    rec.l2_gap_total = rec.l2_gap_series.back();
    const double e4 = epsilon * epsilon * epsilon * epsilon;
    for (double p : rec.phi) rec.k_ratio = std::max(rec.k_ratio, p / (rec.phi0 + e4));
    std::vector<double> absq(rec.q.size()), abse(rec.e.size()), rr(rec.r1.size());
    for (std::size_t k = 0; k < rec.q.size(); ++k) {
      absq[k] = std::fabs(rec.q[k]);
      abse[k] = std::fabs(rec.e[k]);
      rr[k] = (rec.r1[k] + rec.r2[k]) / (epsilon * epsilon);
    }
    rec.abs_q_integral = trapezoid(rec.t, absq);
    rec.abs_e_integral = trapezoid(rec.t, abse);
    rec.r_integral = trapezoid(rec.t, rr);
    rec.ok = true;
  } catch (const SolverAbort& e) {
    rec.failure = std::string("solver abort: ") + e.what();
  } catch (const InternalError& e) {
    rec.failure = std::string("internal error: ") + e.what();
  } catch (const DomainError& e) {
    rec.failure = std::string("domain error: ") + e.what();
  }
  return rec;
}

SweepResult sweep(const Scenario& scenario, std::size_t threads) {
  scenario.validate();
  SweepResult out;
  out.scenario = scenario.name;
  out.coupling = coupling_check(scenario.model, scenario.density_box());
  const std::size_t count = scenario.epsilons.size();
  const std::size_t batch = threads == 0 ? count : threads;
  out.records.resize(count);
  for (std::size_t start = 0; start < count; start += batch) {
    const std::size_t stop = std::min(count, start + batch);
    std::vector<std::future<EpsilonRecord>> jobs;
    for (std::size_t k = start; k < stop; ++k)
      jobs.push_back(std::async(std::launch::async, run_epsilon, std::cref(scenario), scenario.epsilons[k]));
    for (std::size_t k = start; k < stop; ++k) out.records[k] = jobs[k - start].get();
  }
  std::vector<double> eps, phis;
  out.complete = true;
  for (const EpsilonRecord& r : out.records) {
    if (!r.ok) {
      out.complete = false;
      continue;
    }
    eps.push_back(r.epsilon);
    phis.push_back(r.phi_final);
    out.k_estimate = std::max(out.k_estimate, r.k_ratio);
    out.k1_max = std::max(out.k1_max, r.k1);
    out.k2_max = std::max(out.k2_max, r.k2);
  }
  out.order = fit_order(eps, phis);
  return out;
}

UphillReport uphill_diffusion_probe(const Scenario& scenario, double threshold, std::size_t max_witnesses) {
  scenario.validate();
  UphillReport rep;
  rep.threshold = threshold;
  rep.epsilon = scenario.epsilons.front();
  const MixtureModel& model = scenario.model;
  const Grid1D& grid = scenario.grid;
  const std::size_t n = model.species();
  const std::size_t N = grid.cells;
  const double lowest = -std::numeric_limits<double>::infinity();
  rep.hyperbolic_max = lowest;
  rep.parabolic_max = lowest;

  const InitialPair init = well_prepared_init(scenario, rep.epsilon);
  HyperbolicConfig hc = scenario.hyperbolic;
  hc.epsilon = rep.epsilon;
  hc.t_end = scenario.t_end;
  ParabolicConfig pc = scenario.parabolic;
  pc.t_end = scenario.t_end;
  const std::vector<double> times = scenario.sample_times();
  const HyperbolicRun hr = HyperbolicSolver(model, grid, hc).run(init.hyperbolic, times);
  const ParabolicRun pr = ParabolicSolver(model, grid, pc).run(init.parabolic, times);

  auto scan = [&](const std::vector<double>& rho, const std::vector<double>& flux, double t, const char* solver,
                  std::vector<UphillWitness>& found, double& best) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < N; ++c) {
        const double v = flux[i * N + c] * central(rho, i, c, N, grid, scenario.base[i]);
        best = std::max(best, v);
        if (v > threshold) found.push_back({solver, i, c, grid.center(c), t, v});
      }
  };
  for (const FieldSnapshot& s : hr.snapshots)
    scan(s.rho, s.mom, s.time, "hyperbolic", rep.hyperbolic, rep.hyperbolic_max);
  for (const DensityField& f : pr.fields) {
    const LimitMomentum lm = reconstruct_momentum(model, grid, f, rep.epsilon);
    std::vector<double> flux(lm.w.size());
    for (std::size_t k = 0; k < flux.size(); ++k) flux[k] = -lm.w[k];
    scan(f.rho, flux, f.time, "parabolic", rep.parabolic, rep.parabolic_max);
  }
  rep.hyperbolic_count = rep.hyperbolic.size();
  rep.parabolic_count = rep.parabolic.size();
  for (auto* list : {&rep.hyperbolic, &rep.parabolic}) {
    std::stable_sort(list->begin(), list->end(),
                     [](const UphillWitness& a, const UphillWitness& b) { return a.value > b.value; });
    if (list->size() > max_witnesses) list->resize(max_witnesses);
  }
  return rep;
}

}  // namespace msdarcy
