#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "msdarcy/mixture.hpp"

namespace msdarcy {

struct IdentityCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed() const { return residual < tolerance; }
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool passed() const;
  const IdentityCheck& find(const std::string& name) const;
};

/// Seeded battery of the constitutive and linear-algebra identities over
/// `samples` states drawn from `box`.
IdentityReport run_identity_battery(const MixtureModel& model, const StateBox& box, std::size_t samples = 1000,
                                    std::uint64_t seed = 1);

/// Observed convergence orders of the discrete product and chain rule
/// residuals on 1D node grids with 32, 64, 128 and 256 points.
std::vector<double> calculus_rule_orders(std::size_t dimension = 1);

/// Largest relative difference between D eta DF_a and a central-difference
/// Jacobian of q_a at `state`, over all directions.
double entropy_compatibility_residual(const MixtureModel& model, const CellState& state);

/// Relative error of the assembled flux Jacobian and entropy Hessian
/// against central differences of F_a and D eta.
double flux_jacobian_fd_residual(const MixtureModel& model, const CellState& state);
double entropy_hessian_fd_residual(const MixtureModel& model, const CellState& state);

}  // namespace msdarcy
