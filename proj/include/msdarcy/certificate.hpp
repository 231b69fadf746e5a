#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "msdarcy/matrix.hpp"
#include "msdarcy/mixture.hpp"

namespace msdarcy {

/// DF_a(U), zero-based direction a, in the packed ordering.
DenseMatrix flux_jacobian(const MixtureModel& model, const CellState& state, std::size_t alpha);
/// D^2 eta(U).
DenseMatrix entropy_hessian(const MixtureModel& model, const CellState& state);
/// D_m s at an equilibrium: (-diag(M) + diag(rho_hat) Lambda(rho_hat)) (x) I_d.
DenseMatrix source_momentum_jacobian(const MixtureModel& model, const CellState& equilibrium);

struct CertificateTolerances {
  double singular_value = 1e-10;
  double symmetry = 1e-10;
  double eigenvector_mass = 1e-8;
  double dissipativity = 0.0;
};

enum class Verdict { pass, fail, inconclusive };

struct ConditionResult {
  double value = 0.0;       // measured quantity
  double margin = 0.0;      // positive when the tolerance is cleared
  double tolerance = 0.0;
  Verdict verdict = Verdict::inconclusive;
  bool sampled = false;
  std::vector<double> worst_sample;
};

struct CertificateReport {
  ConditionResult condition1;  // value: smallest singular value of D_m s
  double symmetric_part_max_eigenvalue = 0.0;
  ConditionResult condition2;  // value: max relative asymmetry of D^2 eta DF_a
  ConditionResult condition3;  // value: c_G
  std::size_t condition3_samples_used = 0;
  ConditionResult condition4;  // value: min momentum-block mass of eigenvectors
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  bool passed() const;
};

CertificateReport certify(const MixtureModel& model, const CellState& equilibrium, const StateBox& box,
                          std::size_t sample_count = 10000, const CertificateTolerances& tol = {},
                          std::uint64_t seed = 1);

/// Smallest momentum-block mass over the eigenspaces of sum_a omega_a DF_a(U_hat).
double kernel_condition_margin(const MixtureModel& model, const CellState& equilibrium,
                               const std::vector<double>& omega);

std::string verdict_string(const ConditionResult& c);
std::string certificate_json(const CertificateReport& report);

}  // namespace msdarcy
