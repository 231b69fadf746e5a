#include "msdarcy/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "msdarcy/certificate.hpp"
#include "msdarcy/errors.hpp"
#include "msdarcy/grid_ops.hpp"
#include "msdarcy/matrix.hpp"
#include "msdarcy/sampling.hpp"

namespace msdarcy {

bool IdentityReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed(); });
}

const IdentityCheck& IdentityReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("identity check not found: " + name);
}

namespace {

using VecFn = std::function<std::vector<double>(const std::vector<double>&)>;

// Central-difference Jacobian of f at u: column k is df/du_k.
DenseMatrix fd_jacobian(const VecFn& f, const std::vector<double>& u) {
  const std::size_t m = f(u).size();
  DenseMatrix j(m, u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double h = 1e-5 * std::max(1.0, std::abs(u[k]));
    auto up = u;
    auto dn = u;
    up[k] += h;
    dn[k] -= h;
    const auto fp = f(up);
    const auto fm = f(dn);
    for (std::size_t r = 0; r < m; ++r) j(r, k) = (fp[r] - fm[r]) / (up[k] - dn[k]);
  }
  return j;
}

double relative_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return (a - b).max_abs() / std::max(1.0, b.max_abs());
}

DenseMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix m(r, c);
  for (double& x : m.data()) x = u(rng);
  return m;
}

}  // namespace

double entropy_compatibility_residual(const MixtureModel& model, const CellState& s) {
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  const auto g = entropy_gradient(model, s);
  double worst = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    const DenseMatrix df = flux_jacobian(model, s, a);
    DenseMatrix lhs(1, g.size());
    for (std::size_t c = 0; c < g.size(); ++c) {
      double acc = 0.0;
      for (std::size_t r = 0; r < g.size(); ++r) acc += g[r] * df(r, c);
      lhs(0, c) = acc;
    }
    const DenseMatrix dq = fd_jacobian(
        [&](const std::vector<double>& u) {
          return std::vector<double>{entropy_flux(model, CellState::unpack(u, n, d))[a]};
        },
        s.packed());
    worst = std::max(worst, relative_diff(lhs, dq));
  }
  return worst;
}

double flux_jacobian_fd_residual(const MixtureModel& model, const CellState& s) {
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  double worst = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    const DenseMatrix fd = fd_jacobian(
        [&](const std::vector<double>& u) { return flux(model, CellState::unpack(u, n, d), a); }, s.packed());
    worst = std::max(worst, relative_diff(flux_jacobian(model, s, a), fd));
  }
  return worst;
}

double entropy_hessian_fd_residual(const MixtureModel& model, const CellState& s) {
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  const DenseMatrix fd = fd_jacobian(
      [&](const std::vector<double>& u) { return entropy_gradient(model, CellState::unpack(u, n, d)); }, s.packed());
  return relative_diff(entropy_hessian(model, s), fd);
}

std::vector<double> calculus_rule_orders(std::size_t dimension) {
  std::vector<CalculusResiduals> res;
  const std::vector<std::size_t> sizes = dimension == 1 ? std::vector<std::size_t>{32, 64, 128, 256}
                                                        : std::vector<std::size_t>{16, 32, 64, 128};
  for (std::size_t nodes : sizes) res.push_back(verify_calculus_rules(UniformGrid::nodes(dimension, nodes, 0.0, 1.0)));
  std::vector<double> orders;
  for (std::size_t k = 1; k < res.size(); ++k) {
    orders.push_back(std::log2(res[k - 1].product_rule / res[k].product_rule));
    orders.push_back(std::log2(res[k - 1].chain_rule / res[k].chain_rule));
  }
  return orders;
}

IdentityReport run_identity_battery(const MixtureModel& model, const StateBox& box, std::size_t samples,
                                    std::uint64_t seed) {
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  box.validate(n);

  double gibbs = 0.0, dissip = 0.0, compat = 0.0, jac = 0.0, hess = 0.0;
  double lam_nsd = 0.0, lam_sym = 0.0, ms_sum = 0.0, ms_off = 0.0, ms_psd = 0.0;
  double quad = 0.0, spectral = 0.0, exchange = 0.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logu(std::log(1e-3), std::log(1e3));
  for (std::size_t k = 0; k < samples; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const double rho = std::exp(logu(rng));
      const PressureLaw& law = model.law(i);
      const double p = law.pressure(rho);
      const double r = rho * free_energy_derivative(law, rho) - free_energy(law, rho) - p;
      gibbs = std::max(gibbs, std::abs(r) / std::max(1.0, p));
    }

  QuasiRandom qr(box.sample_dimension(d), seed);
  double min_mobility = *std::min_element(model.mobilities().begin(), model.mobilities().end());
  for (std::size_t k = 0; k < samples; ++k) {
    const CellState s = box.map(qr.next(), d);
    const CellState eq = CellState::rest(s.r, d);

    const double pairing = dissipation_pairing(model, s, eq);
    const double closed = friction_dissipation(model, s) + entropy_production(model, s);
    dissip = std::max(dissip, std::abs(pairing - closed) / std::max(1.0, std::abs(pairing)));

    compat = std::max(compat, entropy_compatibility_residual(model, s));
    jac = std::max(jac, flux_jacobian_fd_residual(model, s));
    hess = std::max(hess, entropy_hessian_fd_residual(model, s));

    const DenseMatrix lam = lambda_matrix(model, s.r);
    const double lscale = std::max(1.0, lam.max_abs());
    lam_nsd = std::max(lam_nsd, std::max(0.0, symmetric_eigen(lam).values.back()) / lscale);
    lam_sym = std::max(lam_sym, asymmetry(lam) / lscale);

    const DenseMatrix t = maxwell_stefan_matrix(model, s.r);
    const double tscale = std::max(1.0, t.max_abs());
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0, col = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row += t(i, j);
        col += t(j, i);
        if (j != i) ms_off = std::max(ms_off, std::max(0.0, t(i, j)));
      }
      ms_sum = std::max(ms_sum, std::max(std::abs(row), std::abs(col)) / tscale);
    }
    ms_psd = std::max(ms_psd, std::max(0.0, -symmetric_eigen(t).values.front()) / tscale);

    quad = std::max(quad, std::max(0.0, -mobility_quadratic_form_min(model, s.r)));
    spectral = std::max(spectral, std::max(0.0, min_mobility - mobility_spectral_margin(model, s.r)) /
                                      std::max(1.0, min_mobility));

    const auto ex = exchange_source(model, s);
    std::vector<double> total(d, 0.0);
    double mag = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < d; ++a) {
        total[a] += ex[i * d + a];
        mag = std::max(mag, std::abs(ex[i * d + a]));
      }
    for (double v : total) exchange = std::max(exchange, std::abs(v) / mag);
  }

  // Linear algebra identities on random conforming matrices.
  double mixed = 0.0, bilinear = 0.0, gram = 0.0;
  {
    std::mt19937_64 mrng(seed + 17);
    for (int rep = 0; rep < 50; ++rep) {
      const DenseMatrix A = random_matrix(mrng, 2, 3), B = random_matrix(mrng, 3, 2);
      const DenseMatrix C = random_matrix(mrng, 3, 2), D = random_matrix(mrng, 2, 4);
      mixed = std::max(mixed, relative_diff(kron(A, B) * kron(C, D), kron(A * C, B * D)));
      const DenseMatrix A2 = random_matrix(mrng, 2, 3);
      bilinear = std::max(bilinear, relative_diff(kron(A + 2.0 * A2, B), kron(A, B) + 2.0 * kron(A2, B)));
      std::vector<std::vector<double>> xs(3, std::vector<double>(4));
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      std::vector<double> norms(3, 0.0);
      for (std::size_t i = 0; i < 3; ++i)
        for (double& x : xs[i]) {
          x = u(mrng);
          norms[i] += x * x;
        }
      const DenseMatrix bd = blockdiag_vec(xs);
      gram = std::max(gram, relative_diff(bd.transposed() * bd, DenseMatrix::diagonal(norms)));
    }
  }
  double worst_order = 0.0;
  for (double order : calculus_rule_orders(1)) worst_order = std::max(worst_order, std::abs(order - 2.0));

  IdentityReport rep;
  rep.checks = {
      {"gibbs_duhem", gibbs, 1e-12},
      {"dissipation_identity", dissip, 1e-12},
      {"entropy_compatibility_fd", compat, 1e-6},
      {"flux_jacobian_fd", jac, 1e-6},
      {"entropy_hessian_fd", hess, 1e-6},
      {"lambda_symmetry", lam_sym, 1e-12},
      {"lambda_negative_semidefinite", lam_nsd, 1e-12},
      {"maxwell_stefan_zero_sums", ms_sum, 1e-12},
      {"maxwell_stefan_offdiagonal_sign", ms_off, 1e-300},
      {"maxwell_stefan_positive_semidefinite", ms_psd, 1e-12},
      {"mobility_quadratic_form_positive", quad, 1e-10},
      {"mobility_spectrum_above_min_mobility", spectral, 1e-12},
      {"exchange_conserves_momentum", exchange, 1e-12},
      {"kron_mixed_product", mixed, 1e-12},
      {"kron_bilinearity", bilinear, 1e-12},
      {"blockdiag_gram", gram, 1e-12},
      {"calculus_rule_order_deviation", worst_order, 0.2},
  };
  return rep;
}

}  // namespace msdarcy
