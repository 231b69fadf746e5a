#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "msdarcy/hyperbolic.hpp"
#include "msdarcy/mixture.hpp"
#include "msdarcy/parabolic.hpp"

namespace msdarcy {

enum class Profile { bump, sine };

/// rho_i = base_i + amplitude_i (1 - ((x - center)/radius)^2)^4 inside the
/// support |x - center| < radius, base_i outside.
struct BumpSpec {
  std::vector<double> amplitude;
  double center = 0.0;
  double radius = 1.0;
};

/// Periodic data rho_i = base_i (1 + amplitude_i sin(2 pi k s)),
/// m_i = momentum_i cos(2 pi k s) with s = (x - x_min)/length.
struct SineSpec {
  std::vector<double> amplitude;
  std::vector<double> momentum;
  double wavenumber = 1.0;
};

struct Scenario {
  std::string name;
  MixtureModel model;
  Grid1D grid{};
  std::vector<double> base{};
  Profile profile = Profile::bump;
  BumpSpec bump{};
  SineSpec sine{};
  double t_end = 0.5;
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  bool well_prepared = true;
  /// Number of equally spaced sampling times in (0, t_end].
  std::size_t checkpoints = 20;
  HyperbolicConfig hyperbolic{};
  ParabolicConfig parabolic{};

  void validate() const;
  std::vector<double> sample_times() const;
  /// Density box spanned by the initial data; the momentum bound is unused.
  StateBox density_box() const;
};

struct InitialPair {
  FieldSnapshot hyperbolic;
  DensityField parabolic;
};

InitialPair well_prepared_init(const Scenario& scenario, double epsilon);

/// sum_c eta(U|U_bar) dx with U_bar = (rbar, mbar).
double phi(const MixtureModel& model, const Grid1D& grid, const FieldSnapshot& u, const DensityField& rbar,
           const LimitMomentum& mbar);

/// Space integrals of the relative-entropy error terms at one time.
struct ErrorTerms {
  double r1 = 0.0;
  double r2 = 0.0;
  double q = 0.0;
  double e = 0.0;
};

ErrorTerms error_terms(const MixtureModel& model, const Grid1D& grid, const FieldSnapshot& u,
                       const DensityField& rbar, const LimitMomentum& mbar);

struct CouplingCheck {
  std::vector<double> ratio;  // M_i / max_j max_box |lambda_ij|; infinite when uncoupled
  double min_ratio = 0.0;
  bool satisfied = false;     // every ratio >= 1 (c_i = 1)
};

CouplingCheck coupling_check(const MixtureModel& model, const StateBox& box);

struct EpsilonRecord {
  double epsilon = 0.0;
  bool ok = false;
  std::string failure;
  std::vector<double> t, phi, r1, r2, q, e;
  std::vector<double> l2_gap_series;  // sqrt(sum_i |rho_i - rbar_i|_2^2) per time
  double phi0 = 0.0;
  double phi_final = 0.0;
  double abs_q_integral = 0.0;
  double abs_e_integral = 0.0;
  double r_integral = 0.0;  // time integral of (R1 + R2)/eps^2
  std::vector<double> l2_gap;  // per species at t_end
  double l2_gap_total = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k_ratio = 0.0;  // max_t phi/(phi0 + eps^4)
  bool r1_nonnegative = true;
  std::size_t hyperbolic_steps = 0;
  std::size_t parabolic_steps = 0;
};

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
  bool valid = false;
};

/// Least-squares line through (log x, log y).
OrderFit fit_order(const std::vector<double>& x, const std::vector<double>& y);

struct SweepResult {
  std::string scenario;
  std::vector<EpsilonRecord> records;
  CouplingCheck coupling;
  OrderFit order;
  double k_estimate = 0.0;
  double k1_max = 0.0;
  double k2_max = 0.0;
  bool complete = false;
};

EpsilonRecord run_epsilon(const Scenario& scenario, double epsilon);
/// Runs every epsilon of the scenario, at most `threads` at a time (0: all).
SweepResult sweep(const Scenario& scenario, std::size_t threads = 0);

struct UphillWitness {
  std::string solver;  // "hyperbolic" or "parabolic"
  std::size_t species = 0;
  std::size_t cell = 0;
  double x = 0.0;
  double t = 0.0;
  double value = 0.0;  // flux * d rho/dx
};

struct UphillReport {
  std::vector<UphillWitness> hyperbolic;
  std::vector<UphillWitness> parabolic;
  std::size_t hyperbolic_count = 0;  // before truncation
  std::size_t parabolic_count = 0;
  double threshold = 0.0;
  double epsilon = 0.0;
  /// Largest flux * d rho/dx seen per solver, for diagnostics.
  double hyperbolic_max = 0.0;
  double parabolic_max = 0.0;
};

/// Scans the hyperbolic run at the scenario's first epsilon and the limit
/// run at every sample time for cells with flux_i * d rho_i/dx > threshold.
/// At most `max_witnesses` per solver are kept, largest first.
UphillReport uphill_diffusion_probe(const Scenario& scenario, double threshold = 1e-8,
                                    std::size_t max_witnesses = 16);

}  // namespace msdarcy
