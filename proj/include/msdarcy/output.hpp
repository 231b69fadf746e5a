#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "msdarcy/harness.hpp"
#include "msdarcy/hyperbolic.hpp"
#include "msdarcy/identities.hpp"
#include "msdarcy/parabolic.hpp"

namespace msdarcy {

/// `t,x,rho_1..rho_n,m_1..m_n`, one row per cell and snapshot.
std::string snapshot_csv(const Grid1D& grid, std::span<const FieldSnapshot> snapshots);
/// `step,t,total_entropy,dissipation,residual`.
std::string audit_csv(std::span<const EntropyAuditRow> audit);
/// `t,x,rho_1..rho_n`.
std::string density_csv(const Grid1D& grid, std::span<const DensityField> fields);
/// `t,x,mbar_1..mbar_n,ebar_1..ebar_n`.
std::string momentum_csv(const Grid1D& grid, std::span<const std::pair<double, LimitMomentum>> series);
/// `epsilon,t,phi,R1,R2,Q,E,l2_gap`.
std::string sweep_csv(const SweepResult& result);

std::string sweep_json(const SweepResult& result);
std::string uphill_json(const UphillReport& report);
std::string identities_json(const IdentityReport& report, std::span<const double> rule_orders);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace msdarcy
