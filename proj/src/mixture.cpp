#include "msdarcy/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "msdarcy/errors.hpp"
#include "msdarcy/sampling.hpp"

namespace msdarcy {

namespace {

void require_positive(double rho, const char* what) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw DomainError(std::string(what) + ": density must be positive and finite, got " + std::to_string(rho));
}

// (1+x)^g - 1 - g x without catastrophic cancellation in the leading terms.
double power_remainder(double x, double g) {
  if (g == 2.0) return x * x;
  return std::expm1(g * std::log1p(x)) - g * x;
}

std::string pair_name(std::size_t i, std::size_t j) {
  return "lambda(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

void PressureLaw::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("pressure law: k must be positive");
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw ConfigError("pressure law: gamma must be >= 1");
}

double PressureLaw::pressure(double rho) const {
  require_positive(rho, "pressure");
  if (gamma == 1.0) return k * rho;
  if (gamma == 2.0) return k * rho * rho;
  return k * std::pow(rho, gamma);
}

double PressureLaw::dpressure(double rho) const {
  require_positive(rho, "dpressure");
  if (gamma == 1.0) return k;
  if (gamma == 2.0) return 2.0 * k * rho;
  return k * gamma * std::pow(rho, gamma - 1.0);
}

double PressureLaw::d2pressure(double rho) const {
  require_positive(rho, "d2pressure");
  if (gamma == 1.0) return 0.0;
  if (gamma == 2.0) return 2.0 * k;
  return k * gamma * (gamma - 1.0) * std::pow(rho, gamma - 2.0);
}

double PressureLaw::sound_speed(double rho) const { return std::sqrt(dpressure(rho)); }

double free_energy(const PressureLaw& law, double rho) {
  require_positive(rho, "free_energy");
  if (law.gamma == 1.0) return law.k * rho * std::log(rho);
  return law.pressure(rho) / (law.gamma - 1.0);
}

double free_energy_derivative(const PressureLaw& law, double rho) {
  require_positive(rho, "free_energy_derivative");
  if (law.gamma == 1.0) return law.k * (std::log(rho) + 1.0);
  return law.gamma * law.pressure(rho) / ((law.gamma - 1.0) * rho);
}

double free_energy_second_derivative(const PressureLaw& law, double rho) { return law.dpressure(rho) / rho; }

double relative_free_energy(const PressureLaw& law, double rho, double rho_bar) {
  require_positive(rho, "relative_free_energy");
  require_positive(rho_bar, "relative_free_energy");
  const double delta = rho - rho_bar;
  if (law.gamma == 1.0) return law.k * (rho * std::log1p(delta / rho_bar) - delta);
  if (law.gamma == 2.0) return law.k * delta * delta;
  return law.pressure(rho_bar) / (law.gamma - 1.0) * power_remainder(delta / rho_bar, law.gamma);
}

double relative_pressure(const PressureLaw& law, double rho, double rho_bar) {
  require_positive(rho, "relative_pressure");
  require_positive(rho_bar, "relative_pressure");
  if (law.gamma == 1.0) return 0.0;
  return law.pressure(rho_bar) * power_remainder((rho - rho_bar) / rho_bar, law.gamma);
}

MixtureModel::MixtureModel(std::size_t dimension, std::vector<PressureLaw> laws, std::vector<double> mobilities,
                           std::vector<Coupling> couplings)
    : dimension_(dimension), laws_(std::move(laws)), mobilities_(std::move(mobilities)) {
  const std::size_t n = laws_.size();
  if (n == 0) throw ConfigError("mixture: at least one species required");
  if (dimension_ == 0) throw ConfigError("mixture: dimension must be >= 1");
  if (mobilities_.size() != n) throw ConfigError("mixture: one mobility per species required");
  for (const auto& law : laws_) law.validate();
  for (std::size_t i = 0; i < n; ++i)
    if (!(mobilities_[i] >= 0.0) || !std::isfinite(mobilities_[i]))
      throw ConfigError("mixture: mobility of species " + std::to_string(i + 1) + " must be non-negative");

  table_.assign(n * n, CrossCoefficient{});
  std::vector<bool> set(n * n, false);
  for (const auto& c : couplings) {
    if (c.i >= n || c.j >= n) throw ConfigError(pair_name(c.i, c.j) + ": species index out of range");
    if (c.i == c.j) throw ConfigError(pair_name(c.i, c.j) + ": diagonal friction coefficient is not defined");
    for (double v : {c.lambda.constant, c.lambda.self, c.lambda.other})
      if (!(v >= 0.0) || !std::isfinite(v))
        throw ConfigError(pair_name(c.i, c.j) + ": coefficients must be non-negative so lambda >= 0 on rho > 0");
    const CrossCoefficient mirrored = c.lambda.swapped();
    if (set[c.i * n + c.j] && !(table_[c.i * n + c.j] == c.lambda))
      throw ConfigError(pair_name(c.i, c.j) + " given twice with different values");
    if (set[c.j * n + c.i] && !(table_[c.j * n + c.i] == mirrored))
      throw ConfigError(pair_name(c.i, c.j) + " and " + pair_name(c.j, c.i) + " are not symmetric");
    table_[c.i * n + c.j] = c.lambda;
    table_[c.j * n + c.i] = mirrored;
    set[c.i * n + c.j] = set[c.j * n + c.i] = true;
  }
}

bool MixtureModel::has_positive_mobilities() const noexcept {
  return std::all_of(mobilities_.begin(), mobilities_.end(), [](double m) { return m > 0.0; });
}

double MixtureModel::lambda(std::size_t i, std::size_t j, double rho_i, double rho_j) const {
  if (i == j) return 0.0;
  return cross(i, j)(rho_i, rho_j);
}

bool MixtureModel::uncoupled() const noexcept {
  return std::all_of(table_.begin(), table_.end(), [](const CrossCoefficient& c) {
    return c.constant == 0.0 && c.self == 0.0 && c.other == 0.0;
  });
}

MixtureModel MixtureModel::permuted(std::span<const std::size_t> perm) const {
  const std::size_t n = species();
  if (perm.size() != n) throw DimensionError("permuted: permutation length mismatch");
  std::vector<PressureLaw> laws(n);
  std::vector<double> mob(n);
  std::vector<Coupling> couplings;
  for (std::size_t a = 0; a < n; ++a) {
    laws[a] = laws_.at(perm[a]);
    mob[a] = mobilities_.at(perm[a]);
    for (std::size_t b = a + 1; b < n; ++b) couplings.push_back({a, b, cross(perm[a], perm[b])});
  }
  return MixtureModel(dimension_, std::move(laws), std::move(mob), std::move(couplings));
}

MixtureModel MixtureModel::with_dimension(std::size_t d) const {
  MixtureModel copy = *this;
  if (d == 0) throw ConfigError("mixture: dimension must be >= 1");
  copy.dimension_ = d;
  return copy;
}

std::vector<double> CellState::packed() const {
  std::vector<double> u(r);
  u.insert(u.end(), m.begin(), m.end());
  return u;
}

CellState CellState::unpack(std::span<const double> u, std::size_t n, std::size_t d) {
  if (u.size() != n * (d + 1)) throw DimensionError("CellState::unpack: length mismatch");
  return {std::vector<double>(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(n)),
          std::vector<double>(u.begin() + static_cast<std::ptrdiff_t>(n), u.end())};
}

CellState CellState::rest(std::vector<double> r, std::size_t d) {
  const std::size_t n = r.size();
  return {std::move(r), std::vector<double>(n * d, 0.0)};
}

void require_densities(const MixtureModel& model, std::span<const double> r) {
  if (r.size() != model.species()) throw DimensionError("density vector length differs from species count");
  for (double v : r) require_positive(v, "state");
}

void require_state(const MixtureModel& model, const CellState& s) {
  require_densities(model, s.r);
  if (s.m.size() != model.species() * model.dimension())
    throw DimensionError("momentum vector length differs from n*d");
  for (double v : s.m)
    if (!std::isfinite(v)) throw DomainError("state: non-finite momentum");
}

void StateBox::validate(std::size_t n) const {
  if (rho_lo.size() != n || rho_hi.size() != n || momentum_bound.size() != n)
    throw ConfigError("state box: one interval and momentum bound per species required");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rho_lo[i] > 0.0) || !(rho_hi[i] >= rho_lo[i]))
      throw ConfigError("state box: need 0 < rho_lo <= rho_hi for species " + std::to_string(i + 1));
    if (!(momentum_bound[i] >= 0.0)) throw ConfigError("state box: momentum bound must be >= 0");
  }
}

bool StateBox::contains(const CellState& s, double slack) const {
  const std::size_t n = rho_lo.size();
  const std::size_t d = s.dimension();
  for (std::size_t i = 0; i < n; ++i) {
    if (s.r[i] < rho_lo[i] - slack || s.r[i] > rho_hi[i] + slack) return false;
    double norm2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) norm2 += s.m[i * d + a] * s.m[i * d + a];
    if (std::sqrt(norm2) > momentum_bound[i] + slack) return false;
  }
  return true;
}

bool StateBox::degenerate() const {
  for (std::size_t i = 0; i < rho_lo.size(); ++i)
    if (rho_lo[i] != rho_hi[i] || momentum_bound[i] != 0.0) return false;
  return true;
}

CellState StateBox::map(std::span<const double> unit, std::size_t d) const {
  const std::size_t n = rho_lo.size();
  if (unit.size() != sample_dimension(d)) throw DimensionError("StateBox::map: wrong sample dimension");
  CellState s{std::vector<double>(n), std::vector<double>(n * d)};
  for (std::size_t i = 0; i < n; ++i) {
    s.r[i] = rho_lo[i] + unit[i] * (rho_hi[i] - rho_lo[i]);
    double norm2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      const double v = (2.0 * unit[n + i * d + a] - 1.0) * momentum_bound[i];
      s.m[i * d + a] = v;
      norm2 += v * v;
    }
    const double norm = std::sqrt(norm2);
    if (norm > momentum_bound[i] && norm > 0.0)
      for (std::size_t a = 0; a < d; ++a) s.m[i * d + a] *= momentum_bound[i] / norm;
  }
  return s;
}

StateBox StateBox::uniform(std::size_t n, double lo, double hi, double momentum) {
  return {std::vector<double>(n, lo), std::vector<double>(n, hi), std::vector<double>(n, momentum)};
}

DenseMatrix lambda_matrix(const MixtureModel& model, std::span<const double> r) {
  require_densities(model, r);
  const std::size_t n = model.species();
  DenseMatrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double lij = model.lambda(i, j, r[i], r[j]);
      l(i, j) = lij;
      diag -= lij * r[j] / r[i];
    }
    l(i, i) = diag;
  }
  return l;
}

DenseMatrix maxwell_stefan_matrix(const MixtureModel& model, std::span<const double> r) {
  require_densities(model, r);
  const std::size_t n = model.species();
  DenseMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double tij = -model.lambda(i, j, r[i], r[j]) * r[i] * r[j];
      t(i, j) = t(j, i) = tij;
    }
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) s -= t(i, j);
    t(i, i) = s;
  }
  return t;
}

namespace {

DenseMatrix assemble_mobility(const MixtureModel& model, std::span<const double> r) {
  const std::size_t n = model.species();
  DenseMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = model.mobility(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double lij = model.lambda(i, j, r[i], r[j]);
      b(i, j) = -r[i] * lij;
      diag += lij * r[j];
    }
    b(i, i) = diag;
  }
  return b;
}

DenseMatrix symmetrized_mobility(const MixtureModel& model, std::span<const double> r) {
  // diag(r)^(-1/2) B~ diag(r)^(1/2) = diag(M) - diag(r)^(1/2) Lambda diag(r)^(1/2)
  const DenseMatrix b = assemble_mobility(model, r);
  const std::size_t n = model.species();
  DenseMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = b(i, j) * std::sqrt(r[j] / r[i]);
  return symmetric_part(s);
}

}  // namespace

double mobility_spectral_margin(const MixtureModel& model, std::span<const double> r) {
  require_densities(model, r);
  return symmetric_eigen(symmetrized_mobility(model, r)).values.front();
}

double mobility_quadratic_form_min(const MixtureModel& model, std::span<const double> r) {
  require_densities(model, r);
  return symmetric_eigen(symmetric_part(assemble_mobility(model, r))).values.front();
}

DenseMatrix mobility_matrix(const MixtureModel& model, std::span<const double> r) {
  require_densities(model, r);
  DenseMatrix b = assemble_mobility(model, r);
  if (!(symmetric_eigen(symmetrized_mobility(model, r)).values.front() > 0.0))
    throw InternalError("mobility_matrix: B~ is not positive (zero mobility or invalid friction table)");
  return b;
}

DenseMatrix mobility_matrix_extended(const MixtureModel& model, std::span<const double> r) {
  return kron(mobility_matrix(model, r), DenseMatrix::identity(model.dimension()));
}

DenseMatrix mobility_matrix_derivative(const MixtureModel& model, std::span<const double> r,
                                       std::span<const double> dr) {
  require_densities(model, r);
  const std::size_t n = model.species();
  if (dr.size() != n) throw DimensionError("mobility_matrix_derivative: direction length mismatch");
  DenseMatrix db(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const CrossCoefficient& c = model.cross(i, j);
      const double lij = c(r[i], r[j]);
      const double dlij = c.self * dr[i] + c.other * dr[j];
      db(i, j) = -(dr[i] * lij + r[i] * dlij);
      diag += dlij * r[j] + lij * dr[j];
    }
    db(i, i) = diag;
  }
  return db;
}

std::vector<double> exchange_source(const MixtureModel& model, const CellState& s) {
  require_state(model, s);
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  std::vector<double> out(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double lij = model.lambda(i, j, s.r[i], s.r[j]);
      if (lij == 0.0) continue;
      for (std::size_t a = 0; a < d; ++a)
        out[i * d + a] -= lij * (s.r[j] * s.m[i * d + a] - s.r[i] * s.m[j * d + a]);
    }
  return out;
}

std::vector<double> source(const MixtureModel& model, const CellState& s) {
  std::vector<double> out = exchange_source(model, s);
  const std::size_t d = model.dimension();
  for (std::size_t i = 0; i < model.species(); ++i)
    for (std::size_t a = 0; a < d; ++a) out[i * d + a] -= model.mobility(i) * s.m[i * d + a];
  return out;
}

std::vector<double> full_source(const MixtureModel& model, const CellState& s) {
  std::vector<double> out(model.species(), 0.0);
  const auto sm = source(model, s);
  out.insert(out.end(), sm.begin(), sm.end());
  return out;
}

double entropy(const MixtureModel& model, const CellState& s) {
  require_state(model, s);
  const std::size_t d = model.dimension();
  double eta = 0.0;
  for (std::size_t i = 0; i < model.species(); ++i) {
    double m2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) m2 += s.m[i * d + a] * s.m[i * d + a];
    eta += 0.5 * m2 / s.r[i] + free_energy(model.law(i), s.r[i]);
  }
  return eta;
}

std::vector<double> entropy_flux(const MixtureModel& model, const CellState& s) {
  require_state(model, s);
  const std::size_t d = model.dimension();
  std::vector<double> q(d, 0.0);
  for (std::size_t i = 0; i < model.species(); ++i) {
    double m2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) m2 += s.m[i * d + a] * s.m[i * d + a];
    const double hp = free_energy_derivative(model.law(i), s.r[i]);
    const double rho2 = s.r[i] * s.r[i];
    for (std::size_t a = 0; a < d; ++a) q[a] += 0.5 * s.m[i * d + a] * m2 / rho2 + s.m[i * d + a] * hp;
  }
  return q;
}

std::vector<double> entropy_gradient(const MixtureModel& model, const CellState& s) {
  require_state(model, s);
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  std::vector<double> g(n * (d + 1));
  for (std::size_t i = 0; i < n; ++i) {
    double m2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      m2 += s.m[i * d + a] * s.m[i * d + a];
      g[n + i * d + a] = s.m[i * d + a] / s.r[i];
    }
    g[i] = -0.5 * m2 / (s.r[i] * s.r[i]) + free_energy_derivative(model.law(i), s.r[i]);
  }
  return g;
}

std::vector<double> flux(const MixtureModel& model, const CellState& s, std::size_t alpha) {
  require_state(model, s);
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  if (alpha >= d) throw DimensionError("flux: direction index out of range");
  std::vector<double> f(n * (d + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const double ma = s.m[i * d + alpha];
    f[i] = ma;
    for (std::size_t b = 0; b < d; ++b) f[n + i * d + b] = ma * s.m[i * d + b] / s.r[i];
    f[n + i * d + alpha] += model.law(i).pressure(s.r[i]);
  }
  return f;
}

std::vector<double> momentum_flux_tensor(const MixtureModel& model, const CellState& s) {
  require_state(model, s);
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  std::vector<double> t(n * d * d);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = model.law(i).pressure(s.r[i]);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        t[(i * d + a) * d + b] = s.m[i * d + a] * s.m[i * d + b] / s.r[i] + (a == b ? p : 0.0);
  }
  return t;
}

double entropy_production(const MixtureModel& model, const CellState& s) {
  require_state(model, s);
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  double zeta = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double lij = model.lambda(i, j, s.r[i], s.r[j]);
      if (lij == 0.0) continue;
      double dv2 = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double dv = s.velocity(i, a) - s.velocity(j, a);
        dv2 += dv * dv;
      }
      // The symmetric double sum counts each pair twice, cancelling the 1/2.
      zeta += lij * s.r[i] * s.r[j] * dv2;
    }
  return zeta;
}

double friction_dissipation(const MixtureModel& model, const CellState& s) {
  require_state(model, s);
  const std::size_t d = model.dimension();
  double acc = 0.0;
  for (std::size_t i = 0; i < model.species(); ++i) {
    double m2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) m2 += s.m[i * d + a] * s.m[i * d + a];
    acc += model.mobility(i) * m2 / s.r[i];
  }
  return acc;
}

double dissipation_pairing(const MixtureModel& model, const CellState& s, const CellState& eq) {
  require_state(model, eq);
  for (double v : eq.m)
    if (v != 0.0) throw DomainError("dissipation_pairing: equilibrium momenta must vanish");
  const auto g = entropy_gradient(model, s);
  const auto ghat = entropy_gradient(model, eq);
  const auto src = full_source(model, s);
  double acc = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) acc += (g[k] - ghat[k]) * src[k];
  return -acc;
}

double relative_entropy(const MixtureModel& model, const CellState& s, const CellState& ref) {
  require_state(model, s);
  require_state(model, ref);
  const std::size_t d = model.dimension();
  double acc = 0.0;
  for (std::size_t i = 0; i < model.species(); ++i) {
    double dv2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      const double dv = s.velocity(i, a) - ref.velocity(i, a);
      dv2 += dv * dv;
    }
    acc += 0.5 * s.r[i] * dv2 + relative_free_energy(model.law(i), s.r[i], ref.r[i]);
  }
  return acc;
}

std::vector<double> relative_entropy_flux(const MixtureModel& model, const CellState& s, const CellState& ref) {
  require_state(model, s);
  require_state(model, ref);
  const std::size_t d = model.dimension();
  std::vector<double> q(d, 0.0);
  std::vector<double> dv(d);
  for (std::size_t i = 0; i < model.species(); ++i) {
    const PressureLaw& law = model.law(i);
    double dv2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      dv[a] = s.velocity(i, a) - ref.velocity(i, a);
      dv2 += dv[a] * dv[a];
    }
    const double dh = free_energy_derivative(law, s.r[i]) - free_energy_derivative(law, ref.r[i]);
    const double hrel = relative_free_energy(law, s.r[i], ref.r[i]);
    for (std::size_t a = 0; a < d; ++a)
      q[a] += 0.5 * s.m[i * d + a] * dv2 + s.r[i] * dh * dv[a] + ref.velocity(i, a) * hrel;
  }
  return q;
}

std::vector<double> relative_flux(const MixtureModel& model, const CellState& s, const CellState& ref) {
  require_state(model, s);
  require_state(model, ref);
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  std::vector<double> t(n * d * d);
  std::vector<double> dv(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < d; ++a) dv[a] = s.velocity(i, a) - ref.velocity(i, a);
    const double prel = relative_pressure(model.law(i), s.r[i], ref.r[i]);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) t[(i * d + a) * d + b] = s.r[i] * dv[a] * dv[b] + (a == b ? prel : 0.0);
  }
  return t;
}

RelativeBounds relative_bounds(const MixtureModel& model, const StateBox& box, std::size_t samples,
                               std::uint64_t seed) {
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  box.validate(n);
  const std::size_t dim = box.sample_dimension(d);
  QuasiRandom qr(2 * dim, seed);
  RelativeBounds out{0.0, std::numeric_limits<double>::infinity(), 0.0};
  std::size_t used = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const auto u = qr.next();
    const CellState a = box.map(std::span<const double>(u).first(dim), d);
    const CellState b = box.map(std::span<const double>(u).subspan(dim), d);
    double dist2 = 0.0;
    const auto pa = a.packed();
    const auto pb = b.packed();
    for (std::size_t q = 0; q < pa.size(); ++q) dist2 += (pa[q] - pb[q]) * (pa[q] - pb[q]);
    if (dist2 < 1e-12) continue;
    const double eta = relative_entropy(model, a, b);
    double f2 = 0.0;
    for (double v : relative_flux(model, a, b)) f2 += v * v;
    out.flux_ratio = std::max(out.flux_ratio, std::sqrt(f2) / eta);
    out.lower = std::min(out.lower, eta / dist2);
    out.upper = std::max(out.upper, eta / dist2);
    ++used;
  }
  if (used == 0) out.lower = 0.0;
  return out;
}

double stefan_diffusivity(const MixtureModel& model, std::size_t i, std::size_t j, double total_concentration,
                          std::span<const double> molar_masses, double gas_constant) {
  const std::size_t n = model.species();
  if (i >= n || j >= n || i == j) throw DomainError("stefan_diffusivity: need distinct species indices");
  if (molar_masses.size() != n) throw DimensionError("stefan_diffusivity: one molar mass per species");
  const CrossCoefficient& c = model.cross(i, j);
  if (!c.is_constant()) throw DomainError("stefan_diffusivity: " + pair_name(i, j) + " is not constant");
  if (!(c.constant > 0.0)) throw DomainError("stefan_diffusivity: " + pair_name(i, j) + " is zero");
  if (!(total_concentration > 0.0) || !(gas_constant > 0.0) || !(molar_masses[i] > 0.0) || !(molar_masses[j] > 0.0))
    throw DomainError("stefan_diffusivity: inputs must be positive");
  return gas_constant / (total_concentration * molar_masses[i] * molar_masses[j] * c.constant);
}

}  // namespace msdarcy
