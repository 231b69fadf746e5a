#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "msdarcy/hyperbolic.hpp"
#include "msdarcy/mixture.hpp"

namespace msdarcy {

struct ParabolicConfig {
  double t_end = 1.0;
  double sigma = 0.9;
  double density_floor = 1e-8;
  /// Snapshot spacing in time; 0 keeps only the initial and final states.
  double output_interval = 0.0;
  std::size_t max_steps = 50'000'000;

  void validate() const;
};

/// Species-major densities rho[i*cells + c] at one time.
struct DensityField {
  double time = 0.0;
  std::size_t species = 0;
  std::size_t cells = 0;
  std::vector<double> rho;

  DensityField() = default;
  DensityField(std::size_t n, std::size_t cells, double time = 0.0);
  static DensityField uniform(std::span<const double> r, std::size_t cells, double time = 0.0);
  static DensityField from_snapshot(const FieldSnapshot& s);

  double& r(std::size_t i, std::size_t c) { return rho[i * cells + c]; }
  double r(std::size_t i, std::size_t c) const { return rho[i * cells + c]; }
  std::vector<double> densities(std::size_t c) const;
  friend bool operator==(const DensityField&, const DensityField&) = default;
};

/// -B~(r_f)^(-1) (p(right) - p(left)) / dx with r_f the arithmetic mean.
std::vector<double> limit_flux(const MixtureModel& model, std::span<const double> left_r,
                               std::span<const double> right_r, double dx);

struct ParabolicRun {
  std::vector<DensityField> fields;
  std::size_t steps = 0;
};

class ParabolicSolver {
 public:
  ParabolicSolver(const MixtureModel& model, Grid1D grid, ParabolicConfig config);

  const Grid1D& grid() const noexcept { return grid_; }
  const ParabolicConfig& config() const noexcept { return config_; }

  /// sigma dx^2 / (2 max_i p_i' / min_i M_i); the denominator bounds the
  /// spectrum of B~^(-1) diag(p').
  double time_step(const DensityField& f) const;
  DensityField step(const DensityField& f, double dt) const;
  DensityField step(const DensityField& f) const;
  ParabolicRun run(const DensityField& initial, std::span<const double> output_times = {}) const;

  /// Face fluxes J[i*(cells+1) + f]; face f separates cells f-1 and f.
  std::vector<double> face_fluxes(const DensityField& f) const;
  /// Discrete right-hand side -(J_{c+1} - J_c)/dx.
  std::vector<double> time_derivative(const DensityField& f) const;

 private:
  const MixtureModel& model_;
  Grid1D grid_;
  ParabolicConfig config_;
};

/// Limit momentum mbar = -eps W with W = B~^(-1) dp/dx, and the residual
/// ebar = eps (d/dx(W^2/rho) - dW/dt), all species-major per cell.
struct LimitMomentum {
  std::size_t species = 0;
  std::size_t cells = 0;
  std::vector<double> mbar;
  std::vector<double> ebar;
  std::vector<double> w;

  double max_abs_mbar() const;
  double max_abs_ebar() const;
};

LimitMomentum reconstruct_momentum(const MixtureModel& model, const Grid1D& grid, const DensityField& field,
                                   double epsilon);

}  // namespace msdarcy
