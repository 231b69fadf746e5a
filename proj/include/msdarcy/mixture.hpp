#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "msdarcy/matrix.hpp"

namespace msdarcy {

/// Isentropic pressure p(rho) = k rho^gamma with gamma >= 1.
struct PressureLaw {
  double k = 1.0;
  double gamma = 1.0;

  void validate() const;

  double pressure(double rho) const;
  double dpressure(double rho) const;
  double d2pressure(double rho) const;
  double sound_speed(double rho) const;
  /// The constant a in p'' <= a p'/rho.
  double growth_constant() const noexcept { return gamma; }
};

/// Free energy density with rho h' - h = p and zero additive constant.
double free_energy(const PressureLaw& law, double rho);
double free_energy_derivative(const PressureLaw& law, double rho);
double free_energy_second_derivative(const PressureLaw& law, double rho);
/// h(rho|rho_bar) = h(rho) - h(rho_bar) - h'(rho_bar)(rho - rho_bar).
double relative_free_energy(const PressureLaw& law, double rho, double rho_bar);
/// p(rho|rho_bar) = p(rho) - p(rho_bar) - p'(rho_bar)(rho - rho_bar).
double relative_pressure(const PressureLaw& law, double rho, double rho_bar);

/// Friction coefficient lambda_ij(rho_i, rho_j) = constant + self*rho_i + other*rho_j.
struct CrossCoefficient {
  double constant = 0.0;
  double self = 0.0;
  double other = 0.0;

  double operator()(double rho_i, double rho_j) const { return constant + (self * rho_i + other * rho_j); }
  bool is_constant() const noexcept { return self == 0.0 && other == 0.0; }
  /// The same function seen from the partner species.
  CrossCoefficient swapped() const noexcept { return {constant, other, self}; }
  friend bool operator==(const CrossCoefficient&, const CrossCoefficient&) = default;
};

struct Coupling {
  std::size_t i = 0;  // zero-based species indices, i != j
  std::size_t j = 0;
  CrossCoefficient lambda;
};

/// Immutable constitutive closure: pressure laws, mobilities and the
/// symmetric friction table. Validated on construction.
class MixtureModel {
 public:
  MixtureModel(std::size_t dimension, std::vector<PressureLaw> laws, std::vector<double> mobilities,
               std::vector<Coupling> couplings = {});

  std::size_t species() const noexcept { return laws_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const PressureLaw& law(std::size_t i) const { return laws_.at(i); }
  double mobility(std::size_t i) const { return mobilities_.at(i); }
  std::span<const double> mobilities() const noexcept { return mobilities_; }
  bool has_positive_mobilities() const noexcept;

  /// lambda_ij oriented as a function of (rho_i, rho_j); zero on the diagonal.
  const CrossCoefficient& cross(std::size_t i, std::size_t j) const { return table_.at(i * species() + j); }
  double lambda(std::size_t i, std::size_t j, double rho_i, double rho_j) const;
  bool uncoupled() const noexcept;

  /// Same model with species relabelled so that new species k is old perm[k].
  MixtureModel permuted(std::span<const std::size_t> perm) const;
  /// Same model in another spatial dimension.
  MixtureModel with_dimension(std::size_t d) const;

 private:
  std::size_t dimension_;
  std::vector<PressureLaw> laws_;
  std::vector<double> mobilities_;
  std::vector<CrossCoefficient> table_;
};

/// Densities and momenta at one point. Momenta are species-major:
/// m[i*d + a] is the a-th component of m_i.
struct CellState {
  std::vector<double> r;
  std::vector<double> m;

  std::size_t species() const noexcept { return r.size(); }
  std::size_t dimension() const noexcept { return r.empty() ? 0 : m.size() / r.size(); }
  double velocity(std::size_t i, std::size_t a) const { return m[i * dimension() + a] / r[i]; }
  /// Flattened conserved vector (rho_1..rho_n, m_1..m_n).
  std::vector<double> packed() const;
  static CellState unpack(std::span<const double> u, std::size_t n, std::size_t d);
  static CellState rest(std::vector<double> r, std::size_t d);
};

/// Throws DomainError unless the state matches the model and lies in G.
void require_state(const MixtureModel& model, const CellState& state);
void require_densities(const MixtureModel& model, std::span<const double> r);

/// Per-species density intervals and momentum magnitude bounds.
struct StateBox {
  std::vector<double> rho_lo;
  std::vector<double> rho_hi;
  std::vector<double> momentum_bound;

  void validate(std::size_t n) const;
  bool contains(const CellState& s, double slack = 0.0) const;
  bool degenerate() const;
  /// Maps a point of [0,1)^(n + n*d) into the box.
  CellState map(std::span<const double> unit, std::size_t d) const;
  std::size_t sample_dimension(std::size_t d) const { return rho_lo.size() * (1 + d); }
  static StateBox uniform(std::size_t n, double lo, double hi, double momentum);
};

DenseMatrix lambda_matrix(const MixtureModel& model, std::span<const double> r);
DenseMatrix maxwell_stefan_matrix(const MixtureModel& model, std::span<const double> r);
/// B~ = diag(M) - diag(r) Lambda(r).
DenseMatrix mobility_matrix(const MixtureModel& model, std::span<const double> r);
/// B = B~ (x) I_d.
DenseMatrix mobility_matrix_extended(const MixtureModel& model, std::span<const double> r);
/// Directional derivative of B~ at r along dr.
DenseMatrix mobility_matrix_derivative(const MixtureModel& model, std::span<const double> r,
                                       std::span<const double> dr);
/// Smallest eigenvalue of diag(r)^(-1/2) B~ diag(r)^(1/2), the symmetric
/// matrix similar to B~; positive for every valid model.
double mobility_spectral_margin(const MixtureModel& model, std::span<const double> r);
/// Smallest eigenvalue of the symmetric part of B~ (the quadratic-form minimum).
double mobility_quadratic_form_min(const MixtureModel& model, std::span<const double> r);

/// Momentum production s(U) in R^(nd).
std::vector<double> source(const MixtureModel& model, const CellState& state);
/// Friction exchange part only (source with the -M_i m_i body force removed).
std::vector<double> exchange_source(const MixtureModel& model, const CellState& state);
/// Full source S(U) = (0, s(U)) in R^(n(d+1)).
std::vector<double> full_source(const MixtureModel& model, const CellState& state);

double entropy(const MixtureModel& model, const CellState& state);
std::vector<double> entropy_flux(const MixtureModel& model, const CellState& state);
/// D eta(U) in the packed ordering.
std::vector<double> entropy_gradient(const MixtureModel& model, const CellState& state);

/// Flux F_a(U) in direction a (zero-based) in the packed ordering.
std::vector<double> flux(const MixtureModel& model, const CellState& state, std::size_t alpha);
/// Momentum flux tensors m_i m_i^T / rho_i + p_i I, stored as n blocks of d x d (row-major).
std::vector<double> momentum_flux_tensor(const MixtureModel& model, const CellState& state);

double entropy_production(const MixtureModel& model, const CellState& state);
/// sum_i M_i |m_i|^2 / rho_i.
double friction_dissipation(const MixtureModel& model, const CellState& state);
/// -(D eta(U) - D eta(U_hat)) . S(U).
double dissipation_pairing(const MixtureModel& model, const CellState& state, const CellState& equilibrium);

double relative_entropy(const MixtureModel& model, const CellState& state, const CellState& ref);
std::vector<double> relative_entropy_flux(const MixtureModel& model, const CellState& state, const CellState& ref);
/// F(U|U_bar) = F(U) - F(U_bar) - DF(U_bar)(U - U_bar), same layout as momentum_flux_tensor.
std::vector<double> relative_flux(const MixtureModel& model, const CellState& state, const CellState& ref);

struct RelativeBounds {
  double flux_ratio = 0.0;    // max |F(U|U_bar)| / eta(U|U_bar)
  double lower = 0.0;         // min eta(U|U_bar) / |U - U_bar|^2
  double upper = 0.0;         // max eta(U|U_bar) / |U - U_bar|^2
};

/// Sampled constants for the relative-entropy bounds over pairs in `box`.
RelativeBounds relative_bounds(const MixtureModel& model, const StateBox& box, std::size_t samples,
                               std::uint64_t seed);

/// Binary Stefan diffusivity R / (c M_i M_j lambda_ij) for constant lambda_ij.
double stefan_diffusivity(const MixtureModel& model, std::size_t i, std::size_t j, double total_concentration,
                          std::span<const double> molar_masses, double gas_constant);

}  // namespace msdarcy
