#include "msdarcy/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msdarcy/errors.hpp"
#include "msdarcy/kernels.hpp"

namespace msdarcy {

void Grid1D::validate(std::size_t species) const {
  if (!(x_min < x_max)) throw ConfigError("grid: x_min must be below x_max");
  if (cells < 3) throw ConfigError("grid: at least 3 cells required");
  if (boundary == Boundary::farfield) {
    if (farfield.size() != species) throw ConfigError("grid: far-field state needs one density per species");
    for (double r : farfield)
      if (!(r > 0.0)) throw ConfigError("grid: far-field densities must be positive");
  }
}

FieldSnapshot::FieldSnapshot(std::size_t n, std::size_t cells_, double time_)
    : time(time_), species(n), cells(cells_), rho(n * cells_, 0.0), mom(n * cells_, 0.0) {}

FieldSnapshot FieldSnapshot::uniform(std::span<const double> r, std::size_t cells, double time) {
  FieldSnapshot s(r.size(), cells, time);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t c = 0; c < cells; ++c) s.r(i, c) = r[i];
  return s;
}

CellState FieldSnapshot::cell(std::size_t c) const {
  CellState s{std::vector<double>(species), std::vector<double>(species)};
  for (std::size_t i = 0; i < species; ++i) {
    s.r[i] = r(i, c);
    s.m[i] = m(i, c);
  }
  return s;
}

void FieldSnapshot::set_cell(std::size_t c, const CellState& s) {
  for (std::size_t i = 0; i < species; ++i) {
    r(i, c) = s.r[i];
    m(i, c) = s.m[i];
  }
}

void HyperbolicConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("hyperbolic: epsilon must be positive");
  if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("hyperbolic: cfl must lie in (0, 1)");
  if (!(t_end > 0.0)) throw ConfigError("hyperbolic: t_end must be positive");
  if (!(density_floor > 0.0)) throw ConfigError("hyperbolic: density_floor must be positive");
  if (!(output_interval >= 0.0)) throw ConfigError("hyperbolic: output_interval must be >= 0");
}

std::vector<double> numerical_flux(const MixtureModel& model, const CellState& left, const CellState& right) {
  require_state(model, left);
  require_state(model, right);
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  double lam = 0.0;
  for (const CellState* s : {&left, &right})
    for (std::size_t i = 0; i < n; ++i) {
      double v2 = 0.0;
      for (std::size_t a = 0; a < d; ++a) v2 += s->velocity(i, a) * s->velocity(i, a);
      lam = std::max(lam, std::sqrt(v2) + model.law(i).sound_speed(s->r[i]));
    }
  const auto fl = flux(model, left, 0);
  const auto fr = flux(model, right, 0);
  const auto ul = left.packed();
  const auto ur = right.packed();
  std::vector<double> f(fl.size());
  const double hl = 0.5 * lam;
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = 0.5 * (fl[k] + fr[k]) - hl * (ur[k] - ul[k]);
  return f;
}

namespace {

void require_1d(const MixtureModel& model) {
  if (model.dimension() != 1) throw ConfigError("the finite-volume solvers are one-dimensional (d = 1)");
}

void apply_source(const MixtureModel& model, FieldSnapshot& s, double tau, SourceIntegrator integrator,
                  std::vector<double>& a) {
  const std::size_t n = s.species;
  const std::size_t N = s.cells;
  if (integrator == SourceIntegrator::implicit_euler) {
    a.assign(n * n * N, 0.0);
    for (std::size_t c = 0; c < N; ++c)
      for (std::size_t i = 0; i < n; ++i) {
        double diag = model.mobility(i);
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const double lij = model.lambda(i, j, s.r(i, c), s.r(j, c));
          a[(i * n + j) * N + c] = -tau * (s.r(i, c) * lij);
          diag += lij * s.r(j, c);
        }
        a[(i * n + i) * N + c] = 1.0 + tau * diag;
      }
    if (!kernels::active().batched_solve(n, N, a.data(), s.mom.data()))
      throw InternalError("source_step: singular implicit system");
    return;
  }
  if (n == 1) {
    const double decay = std::exp(-tau * model.mobility(0));
    for (std::size_t c = 0; c < N; ++c) s.m(0, c) *= decay;
    return;
  }
  if (n == 2) {
    // exp(-tau B~) = C I - S (B~ - mean I), written so relabelling is exact.
    for (std::size_t c = 0; c < N; ++c) {
      const double r0 = s.r(0, c), r1 = s.r(1, c);
      const double l = model.lambda(0, 1, r0, r1);
      const double a00 = model.mobility(0) + l * r1, a11 = model.mobility(1) + l * r0;
      const double a01 = -(r0 * l), a10 = -(r1 * l);
      const double mean = 0.5 * (a00 + a11), h = 0.5 * (a00 - a11);
      const double delta = std::sqrt(h * h + a01 * a10);
      const double lo = std::exp(-tau * (mean - delta));
      const double cosh_part = 0.5 * lo * (1.0 + std::exp(-2.0 * tau * delta));
      const double sinh_part = delta > 0.0 ? -0.5 * lo * std::expm1(-2.0 * tau * delta) / delta : lo * tau;
      const double m0 = s.m(0, c), m1 = s.m(1, c);
      s.m(0, c) = (cosh_part - sinh_part * h) * m0 + (-sinh_part * a01) * m1;
      s.m(1, c) = (-sinh_part * a10) * m0 + (cosh_part + sinh_part * h) * m1;
    }
    return;
  }
  // m' = -B~ m / eps^2 with B~ = D^(1/2) G D^(-1/2), G symmetric.
  std::vector<double> g(n * n), vals(n), vecs(n * n), y(n), z(n), sq(n);
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t i = 0; i < n; ++i) sq[i] = std::sqrt(s.r(i, c));
    for (std::size_t i = 0; i < n; ++i) {
      double diag = model.mobility(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double lij = model.lambda(i, j, s.r(i, c), s.r(j, c));
        g[i * n + j] = -lij * sq[i] * sq[j];
        diag += lij * s.r(j, c);
      }
      g[i * n + i] = diag;
    }
    jacobi_eigen_inplace(n, g.data(), vals.data(), vecs.data());
    for (std::size_t i = 0; i < n; ++i) y[i] = s.m(i, c) / sq[i];
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += vecs[i * n + k] * y[i];
      z[k] = acc * std::exp(-tau * vals[k]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += vecs[i * n + k] * z[k];
      s.m(i, c) = acc * sq[i];
    }
  }
}

void require_positive_field(const FieldSnapshot& s, const char* what) {
  for (std::size_t i = 0; i < s.species; ++i)
    for (std::size_t c = 0; c < s.cells; ++c)
      if (!(s.r(i, c) > 0.0)) throw DomainError(std::string(what) + ": non-positive density");
}

// p and sqrt(p') for an array of densities known to be positive.
void pressure_and_speed(const PressureLaw& law, const double* rho, std::size_t count, double* p, double* c) {
  if (law.gamma == 1.0) {
    const double ck = std::sqrt(law.k);
    for (std::size_t f = 0; f < count; ++f) {
      p[f] = law.k * rho[f];
      c[f] = ck;
    }
  } else if (law.gamma == 2.0) {
    for (std::size_t f = 0; f < count; ++f) {
      p[f] = law.k * rho[f] * rho[f];
      c[f] = std::sqrt(2.0 * law.k * rho[f]);
    }
  } else {
    for (std::size_t f = 0; f < count; ++f) {
      const double pg = law.k * std::pow(rho[f], law.gamma);
      p[f] = pg;
      c[f] = std::sqrt(law.gamma * pg / rho[f]);
    }
  }
}

double cell_entropy(const MixtureModel& model, const FieldSnapshot& s, std::size_t c) {
  double eta = 0.0;
  for (std::size_t i = 0; i < s.species; ++i) {
    const double r = s.r(i, c);
    const double m = s.m(i, c);
    eta += 0.5 * m * m / r + free_energy(model.law(i), r);
  }
  return eta;
}

double cell_dissipation(const MixtureModel& model, const FieldSnapshot& s, std::size_t c) {
  const std::size_t n = s.species;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = s.r(i, c);
    const double m = s.m(i, c);
    acc += model.mobility(i) * m * m / r;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double lij = model.lambda(i, j, r, s.r(j, c));
      const double dv = m / r - s.m(j, c) / s.r(j, c);
      acc += lij * r * s.r(j, c) * dv * dv;
    }
  }
  return acc;
}

}  // namespace

FieldSnapshot source_step(const MixtureModel& model, const FieldSnapshot& snapshot, double dt, double epsilon,
                          SourceIntegrator integrator) {
  require_1d(model);
  if (!(dt > 0.0)) throw DomainError("source_step: dt must be positive");
  if (!(epsilon > 0.0)) throw DomainError("source_step: epsilon must be positive");
  if (snapshot.species != model.species()) throw DimensionError("source_step: species count mismatch");
  require_positive_field(snapshot, "source_step");
  FieldSnapshot out = snapshot;
  std::vector<double> work;
  apply_source(model, out, dt / (epsilon * epsilon), integrator, work);
  return out;
}

struct HyperbolicSolver::Workspace {
  std::vector<double> rho_ext, mom_ext;
  std::vector<double> rl, rr, ml, mr, pl, pr, cl, cr, lam, fmass, fmom;
  FieldSnapshot stage1, stage2;
  std::vector<double> source_matrix;

  Workspace(std::size_t n, std::size_t N) {
    const std::size_t F = N + 1;
    rho_ext.resize(N + 4);
    mom_ext.resize(N + 4);
    for (auto* v : {&rl, &rr, &ml, &mr, &pl, &pr, &cl, &cr, &fmass, &fmom}) v->resize(n * F);
    lam.resize(F);
    stage1 = FieldSnapshot(n, N);
    stage2 = FieldSnapshot(n, N);
  }
};

HyperbolicSolver::HyperbolicSolver(const MixtureModel& model, Grid1D grid, HyperbolicConfig config)
    : model_(model), grid_(std::move(grid)), config_(config) {
  require_1d(model_);
  if (!model_.has_positive_mobilities()) throw ConfigError("hyperbolic: mobilities must be positive");
  grid_.validate(model_.species());
  config_.validate();
}

double HyperbolicSolver::time_step(const FieldSnapshot& s) const {
  double lam = 0.0;
  for (std::size_t i = 0; i < s.species; ++i) {
    const PressureLaw& law = model_.law(i);
    for (std::size_t c = 0; c < s.cells; ++c) {
      const double r = s.r(i, c);
      if (!(r > 0.0)) throw SolverAbort("non-positive density", c, i, s.time);
      lam = std::max(lam, std::fabs(s.m(i, c) / r) + law.sound_speed(r));
    }
    if (grid_.boundary == Boundary::farfield) lam = std::max(lam, law.sound_speed(grid_.farfield[i]));
  }
  return config_.cfl * grid_.dx() * config_.epsilon / lam;
}

void HyperbolicSolver::rhs_update(const FieldSnapshot& in, double coef, FieldSnapshot& out, Workspace& ws) const {
  const std::size_t n = in.species;
  const std::size_t N = in.cells;
  const std::size_t F = N + 1;
  const kernels::KernelTable& k = kernels::active();
  const kernels::Limiter limiter = config_.reconstruction == Reconstruction::minmod     ? kernels::Limiter::minmod
                                   : config_.reconstruction == Reconstruction::van_leer ? kernels::Limiter::van_leer
                                                                                        : kernels::Limiter::none;
  for (std::size_t i = 0; i < n; ++i) {
    const double* r = in.rho.data() + i * N;
    const double* m = in.mom.data() + i * N;
    std::copy(r, r + N, ws.rho_ext.begin() + 2);
    std::copy(m, m + N, ws.mom_ext.begin() + 2);
    if (grid_.boundary == Boundary::periodic) {
      ws.rho_ext[0] = r[N - 2], ws.rho_ext[1] = r[N - 1], ws.rho_ext[N + 2] = r[0], ws.rho_ext[N + 3] = r[1];
      ws.mom_ext[0] = m[N - 2], ws.mom_ext[1] = m[N - 1], ws.mom_ext[N + 2] = m[0], ws.mom_ext[N + 3] = m[1];
    } else {
      const double rf = grid_.farfield[i];
      ws.rho_ext[0] = ws.rho_ext[1] = ws.rho_ext[N + 2] = ws.rho_ext[N + 3] = rf;
      ws.mom_ext[0] = ws.mom_ext[1] = ws.mom_ext[N + 2] = ws.mom_ext[N + 3] = 0.0;
    }
    k.reconstruct(limiter, ws.rho_ext.data(), F, ws.rl.data() + i * F, ws.rr.data() + i * F);
    k.reconstruct(limiter, ws.mom_ext.data(), F, ws.ml.data() + i * F, ws.mr.data() + i * F);
    for (std::size_t f = 0; f < F; ++f)
      if (!(ws.rl[i * F + f] > 0.0) || !(ws.rr[i * F + f] > 0.0))
        throw SolverAbort("non-positive reconstructed density", f == 0 ? 0 : f - 1, i, in.time);
    const PressureLaw& law = model_.law(i);
    pressure_and_speed(law, ws.rl.data() + i * F, F, ws.pl.data() + i * F, ws.cl.data() + i * F);
    pressure_and_speed(law, ws.rr.data() + i * F, F, ws.pr.data() + i * F, ws.cr.data() + i * F);
  }
  std::fill(ws.lam.begin(), ws.lam.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    k.wave_speed(F, ws.rl.data() + i * F, ws.ml.data() + i * F, ws.cl.data() + i * F, ws.rr.data() + i * F,
                 ws.mr.data() + i * F, ws.cr.data() + i * F, ws.lam.data());
  for (std::size_t i = 0; i < n; ++i) {
    k.rusanov(F, ws.rl.data() + i * F, ws.ml.data() + i * F, ws.pl.data() + i * F, ws.rr.data() + i * F,
              ws.mr.data() + i * F, ws.pr.data() + i * F, ws.lam.data(), ws.fmass.data() + i * F,
              ws.fmom.data() + i * F);
    k.flux_update(N, in.rho.data() + i * N, ws.fmass.data() + i * F, coef, out.rho.data() + i * N);
    k.flux_update(N, in.mom.data() + i * N, ws.fmom.data() + i * F, coef, out.mom.data() + i * N);
  }
}

void HyperbolicSolver::check_floor(const FieldSnapshot& s) const {
  for (std::size_t i = 0; i < s.species; ++i)
    for (std::size_t c = 0; c < s.cells; ++c)
      if (!(s.r(i, c) > config_.density_floor))
        throw SolverAbort("density at or below floor in cell " + std::to_string(c) + " (species " +
                              std::to_string(i + 1) + ") at t=" + std::to_string(s.time),
                          c, i, s.time);
}

void HyperbolicSolver::transport(const FieldSnapshot& in, double dt, FieldSnapshot& out, Workspace& ws) const {
  const double coef = dt / (config_.epsilon * grid_.dx());
  if (config_.reconstruction == Reconstruction::first_order) {
    rhs_update(in, coef, out, ws);
  } else {
    ws.stage1.time = in.time;
    rhs_update(in, coef, ws.stage1, ws);
    for (std::size_t q = 0; q < ws.stage1.rho.size(); ++q)
      if (!(ws.stage1.rho[q] > 0.0))
        throw SolverAbort("non-positive density in intermediate stage", q % in.cells, q / in.cells, in.time);
    ws.stage2.time = in.time;
    rhs_update(ws.stage1, coef, ws.stage2, ws);
    const kernels::KernelTable& k = kernels::active();
    k.average(in.rho.size(), in.rho.data(), ws.stage2.rho.data(), out.rho.data());
    k.average(in.mom.size(), in.mom.data(), ws.stage2.mom.data(), out.mom.data());
  }
  out.time = in.time + dt;
  check_floor(out);
}

FieldSnapshot HyperbolicSolver::step_impl(const FieldSnapshot& s, double dt, Workspace& ws) const {
  const double tau = dt / (config_.epsilon * config_.epsilon);
  FieldSnapshot out(s.species, s.cells, s.time);
  if (config_.splitting == Splitting::lie) {
    transport(s, dt, out, ws);
    apply_source(model_, out, tau, config_.source, ws.source_matrix);
  } else {
    FieldSnapshot half = s;
    apply_source(model_, half, 0.5 * tau, config_.source, ws.source_matrix);
    transport(half, dt, out, ws);
    apply_source(model_, out, 0.5 * tau, config_.source, ws.source_matrix);
  }
  return out;
}

FieldSnapshot HyperbolicSolver::step(const FieldSnapshot& s, double dt) const {
  if (s.species != model_.species() || s.cells != grid_.cells)
    throw DimensionError("step: snapshot does not match model and grid");
  if (!(dt > 0.0)) throw DomainError("step: dt must be positive");
  Workspace ws(s.species, s.cells);
  return step_impl(s, dt, ws);
}

FieldSnapshot HyperbolicSolver::step(const FieldSnapshot& s) const {
  double dt = time_step(s);
  if (s.time < config_.t_end) dt = std::min(dt, config_.t_end - s.time);
  return step(s, dt);
}

double HyperbolicSolver::total_entropy(const FieldSnapshot& s) const {
  double acc = 0.0;
  for (std::size_t c = 0; c < s.cells; ++c) acc += cell_entropy(model_, s, c);
  return acc * grid_.dx();
}

double HyperbolicSolver::dissipation_rate(const FieldSnapshot& s) const {
  double acc = 0.0;
  for (std::size_t c = 0; c < s.cells; ++c) acc += cell_dissipation(model_, s, c);
  return acc * grid_.dx() / (config_.epsilon * config_.epsilon);
}

std::vector<double> output_schedule(double t_end, double interval) {
  std::vector<double> t;
  if (interval > 0.0)
    for (std::size_t k = 1;; ++k) {
      const double tk = static_cast<double>(k) * interval;
      if (tk >= t_end * (1.0 - 1e-12)) break;
      t.push_back(tk);
    }
  t.push_back(t_end);
  return t;
}

HyperbolicRun HyperbolicSolver::run(const FieldSnapshot& initial, std::span<const double> output_times) const {
  if (initial.species != model_.species() || initial.cells != grid_.cells)
    throw DimensionError("run: initial snapshot does not match model and grid");
  require_positive_field(initial, "run");
  std::vector<double> targets(output_times.begin(), output_times.end());
  if (targets.empty()) targets = output_schedule(config_.t_end, config_.output_interval);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::remove_if(targets.begin(), targets.end(),
                               [&](double t) { return t <= initial.time || t > config_.t_end; }),
                targets.end());
  if (targets.empty() || targets.back() < config_.t_end) targets.push_back(config_.t_end);

  Workspace ws(initial.species, initial.cells);
  HyperbolicRun out;
  out.snapshots.push_back(initial);
  FieldSnapshot cur = initial;
  double e_prev = total_entropy(cur);
  double d_prev = dissipation_rate(cur);
  out.audit.push_back({0, cur.time, e_prev, 0.0, 0.0});

  std::size_t next = 0;
  while (next < targets.size()) {
    if (out.steps >= config_.max_steps) throw SolverAbort("step limit reached", 0, 0, cur.time);
    const double target = targets[next];
    double dt = time_step(cur);
    bool lands = false;
    if (cur.time + dt >= target * (1.0 - 1e-14) - 1e-300) {
      dt = target - cur.time;
      lands = true;
    }
    FieldSnapshot nxt = step_impl(cur, dt, ws);
    if (lands) nxt.time = target;
    ++out.steps;
    const double e = total_entropy(nxt);
    const double d = dissipation_rate(nxt);
    const double diss = 0.5 * dt * (d_prev + d);
    out.audit.push_back({out.steps, nxt.time, e, diss, e - e_prev + diss});
    e_prev = e;
    d_prev = d;
    cur = std::move(nxt);
    if (lands) {
      out.snapshots.push_back(cur);
      ++next;
    }
  }
  return out;
}

std::vector<double> total_mass(const Grid1D& grid, const FieldSnapshot& s) {
  std::vector<double> m(s.species, 0.0);
  for (std::size_t i = 0; i < s.species; ++i) {
    for (std::size_t c = 0; c < s.cells; ++c) m[i] += s.r(i, c);
    m[i] *= grid.dx();
  }
  return m;
}

std::vector<double> total_momentum(const Grid1D& grid, const FieldSnapshot& s) {
  std::vector<double> m(s.species, 0.0);
  for (std::size_t i = 0; i < s.species; ++i) {
    for (std::size_t c = 0; c < s.cells; ++c) m[i] += s.m(i, c);
    m[i] *= grid.dx();
  }
  return m;
}

}  // namespace msdarcy
