#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "msdarcy/mixture.hpp"

namespace msdarcy {

enum class Boundary { periodic, farfield };

/// Uniform 1D cell grid. Far-field boundaries pin ghost cells to the rest
/// state (farfield, 0).
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t cells = 64;
  Boundary boundary = Boundary::periodic;
  std::vector<double> farfield;

  double dx() const { return (x_max - x_min) / static_cast<double>(cells); }
  double center(std::size_t c) const { return x_min + (static_cast<double>(c) + 0.5) * dx(); }
  double length() const { return x_max - x_min; }
  void validate(std::size_t species) const;
  friend bool operator==(const Grid1D&, const Grid1D&) = default;
};

/// Species-major cell data: rho[i*cells + c], mom[i*cells + c].
struct FieldSnapshot {
  double time = 0.0;
  std::size_t species = 0;
  std::size_t cells = 0;
  std::vector<double> rho;
  std::vector<double> mom;

  FieldSnapshot() = default;
  FieldSnapshot(std::size_t n, std::size_t cells, double time = 0.0);
  static FieldSnapshot uniform(std::span<const double> r, std::size_t cells, double time = 0.0);

  double& r(std::size_t i, std::size_t c) { return rho[i * cells + c]; }
  double r(std::size_t i, std::size_t c) const { return rho[i * cells + c]; }
  double& m(std::size_t i, std::size_t c) { return mom[i * cells + c]; }
  double m(std::size_t i, std::size_t c) const { return mom[i * cells + c]; }
  CellState cell(std::size_t c) const;
  void set_cell(std::size_t c, const CellState& s);
  friend bool operator==(const FieldSnapshot&, const FieldSnapshot&) = default;
};

enum class Splitting { lie, strang };
enum class SourceIntegrator { implicit_euler, exponential };
enum class Reconstruction { first_order, minmod, van_leer };

struct HyperbolicConfig {
  double epsilon = 1.0;
  double cfl = 0.45;
  double t_end = 1.0;
  double density_floor = 1e-8;
  Splitting splitting = Splitting::strang;
  SourceIntegrator source = SourceIntegrator::implicit_euler;
  Reconstruction reconstruction = Reconstruction::first_order;
  /// Snapshot spacing in time; 0 keeps only the initial and final states.
  double output_interval = 0.0;
  std::size_t max_steps = 50'000'000;

  void validate() const;
};

/// Rusanov flux along x between two states (any dimension d, normal e_1).
std::vector<double> numerical_flux(const MixtureModel& model, const CellState& left, const CellState& right);

/// Exact linear source update over dt at frozen densities.
FieldSnapshot source_step(const MixtureModel& model, const FieldSnapshot& snapshot, double dt, double epsilon,
                          SourceIntegrator integrator = SourceIntegrator::implicit_euler);

struct EntropyAuditRow {
  std::size_t step = 0;
  double t = 0.0;
  double total_entropy = 0.0;
  double dissipation = 0.0;  // quadrature of the dissipation rate over the step
  double residual = 0.0;     // total_entropy - previous total_entropy + dissipation
};

struct HyperbolicRun {
  std::vector<FieldSnapshot> snapshots;
  std::vector<EntropyAuditRow> audit;  // row 0 is the initial state
  std::size_t steps = 0;
};

class HyperbolicSolver {
 public:
  HyperbolicSolver(const MixtureModel& model, Grid1D grid, HyperbolicConfig config);

  const Grid1D& grid() const noexcept { return grid_; }
  const HyperbolicConfig& config() const noexcept { return config_; }

  /// cfl * dx * epsilon / lambda_max.
  double time_step(const FieldSnapshot& s) const;
  FieldSnapshot step(const FieldSnapshot& s, double dt) const;
  FieldSnapshot step(const FieldSnapshot& s) const;

  /// Advances to t_end. Snapshots are kept at the initial time, at every
  /// requested output time (or every output_interval) and at t_end.
  HyperbolicRun run(const FieldSnapshot& initial, std::span<const double> output_times = {}) const;

  double total_entropy(const FieldSnapshot& s) const;
  /// (1/eps^2) sum_c (sum_i M_i m_i^2/rho_i + zeta) dx.
  double dissipation_rate(const FieldSnapshot& s) const;

 private:
  struct Workspace;
  void transport(const FieldSnapshot& in, double dt, FieldSnapshot& out, Workspace& ws) const;
  void rhs_update(const FieldSnapshot& in, double coef, FieldSnapshot& out, Workspace& ws) const;
  void check_floor(const FieldSnapshot& s) const;
  FieldSnapshot step_impl(const FieldSnapshot& s, double dt, Workspace& ws) const;

  const MixtureModel& model_;
  Grid1D grid_;
  HyperbolicConfig config_;
};

/// Per-species sum_c rho_i dx.
std::vector<double> total_mass(const Grid1D& grid, const FieldSnapshot& s);
/// Per-species sum_c m_i dx.
std::vector<double> total_momentum(const Grid1D& grid, const FieldSnapshot& s);

/// Output times hit by run(): k*interval for k >= 1 below t_end, then t_end.
std::vector<double> output_schedule(double t_end, double interval);

}  // namespace msdarcy
