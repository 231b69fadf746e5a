#include "msdarcy/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msdarcy/errors.hpp"
#include "msdarcy/kernels.hpp"

namespace msdarcy {

void ParabolicConfig::validate() const {
  if (!(t_end > 0.0)) throw ConfigError("parabolic: t_end must be positive");
  if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("parabolic: sigma must lie in (0, 1)");
  if (!(density_floor > 0.0)) throw ConfigError("parabolic: density_floor must be positive");
  if (!(output_interval >= 0.0)) throw ConfigError("parabolic: output_interval must be >= 0");
}

DensityField::DensityField(std::size_t n, std::size_t cells_, double time_)
    : time(time_), species(n), cells(cells_), rho(n * cells_, 0.0) {}

DensityField DensityField::uniform(std::span<const double> r, std::size_t cells, double time) {
  DensityField f(r.size(), cells, time);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t c = 0; c < cells; ++c) f.r(i, c) = r[i];
  return f;
}

DensityField DensityField::from_snapshot(const FieldSnapshot& s) {
  DensityField f(s.species, s.cells, s.time);
  f.rho = s.rho;
  return f;
}

std::vector<double> DensityField::densities(std::size_t c) const {
  std::vector<double> r(species);
  for (std::size_t i = 0; i < species; ++i) r[i] = this->r(i, c);
  return r;
}

namespace {

// Writes B~(r) into lane k of a lane-minor batch of n x n systems.
void assemble_mobility(const MixtureModel& model, const double* r, std::size_t lane, std::size_t lanes,
                       double* a) {
  const std::size_t n = model.species();
  for (std::size_t i = 0; i < n; ++i) {
    double diag = model.mobility(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double lij = model.lambda(i, j, r[i], r[j]);
      a[(i * n + j) * lanes + lane] = -r[i] * lij;
      diag += lij * r[j];
    }
    a[(i * n + i) * lanes + lane] = diag;
  }
}

void batched_solve_or_throw(std::size_t n, std::size_t lanes, std::vector<double>& a, std::vector<double>& b,
                            const char* what) {
  if (!kernels::active().batched_solve(n, lanes, a.data(), b.data()))
    throw InternalError(std::string(what) + ": singular mobility matrix");
}

void require_solver_model(const MixtureModel& model, const char* what) {
  if (model.dimension() != 1) throw ConfigError(std::string(what) + ": the limit solver is one-dimensional");
  if (!model.has_positive_mobilities()) throw ConfigError(std::string(what) + ": mobilities must be positive");
}

void require_field(const MixtureModel& model, const Grid1D& grid, const DensityField& f, const char* what) {
  if (f.species != model.species() || f.cells != grid.cells)
    throw DimensionError(std::string(what) + ": field does not match model and grid");
  for (std::size_t q = 0; q < f.rho.size(); ++q)
    if (!(f.rho[q] > 0.0)) throw DomainError(std::string(what) + ": non-positive density");
}

// Cell value with one ghost on each side: c = -1 and c = cells map to the
// periodic partner or to `ghost`.
double with_ghost(const double* u, std::size_t cells, long c, const Grid1D& grid, double ghost) {
  const long N = static_cast<long>(cells);
  if (c >= 0 && c < N) return u[c];
  if (grid.boundary == Boundary::periodic) return u[(c + N) % N];
  return ghost;
}

}  // namespace

std::vector<double> limit_flux(const MixtureModel& model, std::span<const double> left_r,
                               std::span<const double> right_r, double dx) {
  require_densities(model, left_r);
  require_densities(model, right_r);
  if (!(dx > 0.0)) throw DomainError("limit_flux: dx must be positive");
  const std::size_t n = model.species();
  std::vector<double> rf(n), a(n * n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    rf[i] = 0.5 * (left_r[i] + right_r[i]);
    b[i] = -(model.law(i).pressure(right_r[i]) - model.law(i).pressure(left_r[i])) / dx;
  }
  assemble_mobility(model, rf.data(), 0, 1, a.data());
  batched_solve_or_throw(n, 1, a, b, "limit_flux");
  return b;
}

ParabolicSolver::ParabolicSolver(const MixtureModel& model, Grid1D grid, ParabolicConfig config)
    : model_(model), grid_(std::move(grid)), config_(config) {
  require_solver_model(model_, "parabolic");
  grid_.validate(model_.species());
  config_.validate();
}

double ParabolicSolver::time_step(const DensityField& f) const {
  double stiff = 0.0;
  double min_m = model_.mobility(0);
  for (std::size_t i = 0; i < f.species; ++i) {
    min_m = std::min(min_m, model_.mobility(i));
    const PressureLaw& law = model_.law(i);
    for (std::size_t c = 0; c < f.cells; ++c) {
      const double r = f.r(i, c);
      if (!(r > 0.0)) throw SolverAbort("non-positive density", c, i, f.time);
      stiff = std::max(stiff, law.dpressure(r));
    }
    if (grid_.boundary == Boundary::farfield) stiff = std::max(stiff, law.dpressure(grid_.farfield[i]));
  }
  const double dx = grid_.dx();
  return config_.sigma * dx * dx / (2.0 * stiff / min_m);
}

std::vector<double> ParabolicSolver::face_fluxes(const DensityField& f) const {
  const std::size_t n = f.species;
  const std::size_t N = f.cells;
  const std::size_t F = N + 1;
  const double dx = grid_.dx();
  std::vector<double> a(n * n * F), b(n * F), rf(n);
  std::vector<double> pc(n * N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < N; ++c) pc[i * N + c] = model_.law(i).pressure(f.r(i, c));
  std::vector<double> pghost(n, 0.0);
  if (grid_.boundary == Boundary::farfield)
    for (std::size_t i = 0; i < n; ++i) pghost[i] = model_.law(i).pressure(grid_.farfield[i]);
  for (std::size_t face = 0; face < F; ++face) {
    const long left = static_cast<long>(face) - 1;
    const long right = static_cast<long>(face);
    for (std::size_t i = 0; i < n; ++i) {
      const double ghost = grid_.boundary == Boundary::farfield ? grid_.farfield[i] : 0.0;
      const double rl = with_ghost(f.rho.data() + i * N, N, left, grid_, ghost);
      const double rr = with_ghost(f.rho.data() + i * N, N, right, grid_, ghost);
      const double pl = with_ghost(pc.data() + i * N, N, left, grid_, pghost[i]);
      const double pr = with_ghost(pc.data() + i * N, N, right, grid_, pghost[i]);
      rf[i] = 0.5 * (rl + rr);
      b[i * F + face] = -(pr - pl) / dx;
    }
    assemble_mobility(model_, rf.data(), face, F, a.data());
  }
  batched_solve_or_throw(n, F, a, b, "parabolic");
  return b;
}

std::vector<double> ParabolicSolver::time_derivative(const DensityField& f) const {
  const std::size_t n = f.species;
  const std::size_t N = f.cells;
  const std::vector<double> j = face_fluxes(f);
  const double inv_dx = 1.0 / grid_.dx();
  std::vector<double> out(n * N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < N; ++c) out[i * N + c] = -(j[i * (N + 1) + c + 1] - j[i * (N + 1) + c]) * inv_dx;
  return out;
}

DensityField ParabolicSolver::step(const DensityField& f, double dt) const {
  require_field(model_, grid_, f, "parabolic step");
  if (!(dt > 0.0)) throw DomainError("parabolic step: dt must be positive");
  const std::size_t n = f.species;
  const std::size_t N = f.cells;
  const std::vector<double> j = face_fluxes(f);
  DensityField out(n, N, f.time + dt);
  const double coef = dt / grid_.dx();
  const kernels::KernelTable& k = kernels::active();
  for (std::size_t i = 0; i < n; ++i)
    k.flux_update(N, f.rho.data() + i * N, j.data() + i * (N + 1), coef, out.rho.data() + i * N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < N; ++c)
      if (!(out.r(i, c) > config_.density_floor))
        throw SolverAbort("density at or below floor in cell " + std::to_string(c) + " (species " +
                              std::to_string(i + 1) + ") at t=" + std::to_string(out.time),
                          c, i, out.time);
  return out;
}

DensityField ParabolicSolver::step(const DensityField& f) const {
  double dt = time_step(f);
  if (f.time < config_.t_end) dt = std::min(dt, config_.t_end - f.time);
  return step(f, dt);
}

ParabolicRun ParabolicSolver::run(const DensityField& initial, std::span<const double> output_times) const {
  require_field(model_, grid_, initial, "parabolic run");
  std::vector<double> targets(output_times.begin(), output_times.end());
  if (targets.empty()) targets = output_schedule(config_.t_end, config_.output_interval);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::remove_if(targets.begin(), targets.end(),
                               [&](double t) { return t <= initial.time || t > config_.t_end; }),
                targets.end());
  if (targets.empty() || targets.back() < config_.t_end) targets.push_back(config_.t_end);

  ParabolicRun out;
  out.fields.push_back(initial);
  DensityField cur = initial;
  std::size_t next = 0;
  while (next < targets.size()) {
    if (out.steps >= config_.max_steps) throw SolverAbort("step limit reached", 0, 0, cur.time);
    const double target = targets[next];
    double dt = time_step(cur);
    bool lands = false;
    if (cur.time + dt >= target * (1.0 - 1e-14)) {
      dt = target - cur.time;
      lands = true;
    }
    DensityField nxt = step(cur, dt);
    if (lands) nxt.time = target;
    ++out.steps;
    cur = std::move(nxt);
    if (lands) {
      out.fields.push_back(cur);
      ++next;
    }
  }
  return out;
}

double LimitMomentum::max_abs_mbar() const {
  double v = 0.0;
  for (double x : mbar) v = std::max(v, std::fabs(x));
  return v;
}

double LimitMomentum::max_abs_ebar() const {
  double v = 0.0;
  for (double x : ebar) v = std::max(v, std::fabs(x));
  return v;
}

LimitMomentum reconstruct_momentum(const MixtureModel& model, const Grid1D& grid, const DensityField& field,
                                   double epsilon) {
  require_solver_model(model, "reconstruct_momentum");
  grid.validate(model.species());
  require_field(model, grid, field, "reconstruct_momentum");
  if (!(epsilon > 0.0)) throw DomainError("reconstruct_momentum: epsilon must be positive");
  const std::size_t n = field.species;
  const std::size_t N = field.cells;
  const double inv_2dx = 1.0 / (2.0 * grid.dx());
  const bool far = grid.boundary == Boundary::farfield;

  auto central = [&](const std::vector<double>& u, std::size_t i, std::size_t c, double ghost) {
    const double* row = u.data() + i * N;
    const long cc = static_cast<long>(c);
    return (with_ghost(row, N, cc + 1, grid, ghost) - with_ghost(row, N, cc - 1, grid, ghost)) * inv_2dx;
  };

  std::vector<double> pc(n * N), dpc(n * N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < N; ++c) {
      pc[i * N + c] = model.law(i).pressure(field.r(i, c));
      dpc[i * N + c] = model.law(i).dpressure(field.r(i, c));
    }

  // W = B~^(-1) dp/dx, solved lane-per-cell.
  std::vector<double> a(n * n * N), w(n * N);
  std::vector<double> rc(n);
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      rc[i] = field.r(i, c);
      w[i * N + c] = central(pc, i, c, far ? model.law(i).pressure(grid.farfield[i]) : 0.0);
    }
    assemble_mobility(model, rc.data(), c, N, a.data());
  }
  const std::vector<double> a0 = a;
  batched_solve_or_throw(n, N, a, w, "reconstruct_momentum");

  ParabolicConfig pc_cfg;
  const ParabolicSolver solver(model, grid, pc_cfg);
  const std::vector<double> rdot = solver.time_derivative(field);

  // dW/dt = B~^(-1) (d/dx(p' rdot) - (dB~/dt) W).
  std::vector<double> q(n * N);
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = dpc[k] * rdot[k];
  std::vector<double> rhs(n * N), dr(n);
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      rc[i] = field.r(i, c);
      dr[i] = rdot[i * N + c];
    }
    const DenseMatrix db = mobility_matrix_derivative(model, rc, dr);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = central(q, i, c, 0.0);
      for (std::size_t j = 0; j < n; ++j) acc -= db(i, j) * w[j * N + c];
      rhs[i * N + c] = acc;
    }
  }
  a = a0;
  batched_solve_or_throw(n, N, a, rhs, "reconstruct_momentum");

  std::vector<double> z(n * N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < N; ++c) z[i * N + c] = w[i * N + c] * w[i * N + c] / field.r(i, c);

  LimitMomentum out;
  out.species = n;
  out.cells = N;
  out.mbar.resize(n * N);
  out.ebar.resize(n * N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < N; ++c) {
      out.mbar[i * N + c] = -epsilon * w[i * N + c];
      out.ebar[i * N + c] = epsilon * (central(z, i, c, 0.0) - rhs[i * N + c]);
    }
  out.w = std::move(w);
  return out;
}

}  // namespace msdarcy
