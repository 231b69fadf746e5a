#include "msdarcy/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "msdarcy/errors.hpp"
#include "msdarcy/sampling.hpp"

namespace msdarcy {

DenseMatrix flux_jacobian(const MixtureModel& model, const CellState& s, std::size_t alpha) {
  require_state(model, s);
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  if (alpha >= d) throw DimensionError("flux_jacobian: direction index out of range");
  DenseMatrix j(n * (d + 1), n * (d + 1));
  for (std::size_t i = 0; i < n; ++i) {
    j(i, n + i * d + alpha) = 1.0;
    const double rho = s.r[i];
    const double ma = s.m[i * d + alpha];
    const double dp = model.law(i).dpressure(rho);
    for (std::size_t b = 0; b < d; ++b) {
      const std::size_t row = n + i * d + b;
      const double mb = s.m[i * d + b];
      j(row, i) = -ma * mb / (rho * rho) + (b == alpha ? dp : 0.0);
      j(row, n + i * d + b) += ma / rho;
      j(row, n + i * d + alpha) += mb / rho;
    }
  }
  return j;
}

DenseMatrix entropy_hessian(const MixtureModel& model, const CellState& s) {
  require_state(model, s);
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  DenseMatrix h(n * (d + 1), n * (d + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = s.r[i];
    double m2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      const double ma = s.m[i * d + a];
      m2 += ma * ma;
      h(i, n + i * d + a) = h(n + i * d + a, i) = -ma / (rho * rho);
      h(n + i * d + a, n + i * d + a) = 1.0 / rho;
    }
    h(i, i) = model.law(i).dpressure(rho) / rho + m2 / (rho * rho * rho);
  }
  return h;
}

DenseMatrix source_momentum_jacobian(const MixtureModel& model, const CellState& eq) {
  require_state(model, eq);
  for (double v : eq.m)
    if (v != 0.0) throw DomainError("source_momentum_jacobian: equilibrium momenta must vanish");
  const std::size_t n = model.species();
  DenseMatrix a = lambda_matrix(model, eq.r);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) *= eq.r[i];
    a(i, i) -= model.mobility(i);
  }
  return kron(a, DenseMatrix::identity(model.dimension()));
}

namespace {

std::vector<double> sphere_point(std::span<const double> u, std::size_t d) {
  std::vector<double> w(d);
  if (d == 2) {
    const double t = 2.0 * std::numbers::pi * u[0];
    return {std::cos(t), std::sin(t)};
  }
  double norm2 = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    // Box-Muller on consecutive coordinate pairs
    const double r = std::sqrt(-2.0 * std::log(std::max(u[2 * (a / 2)], 1e-300)));
    const double t = 2.0 * std::numbers::pi * u[2 * (a / 2) + 1];
    w[a] = (a % 2 == 0) ? r * std::cos(t) : r * std::sin(t);
    norm2 += w[a] * w[a];
  }
  for (double& x : w) x /= std::sqrt(norm2);
  return w;
}

// Orthonormalises the columns in place (modified Gram-Schmidt); drops
// numerically dependent columns.
std::vector<std::vector<double>> orthonormal(std::vector<std::vector<double>> cols) {
  std::vector<std::vector<double>> out;
  for (auto& v : cols) {
    for (const auto& q : out) {
      double dot = 0.0;
      for (std::size_t k = 0; k < v.size(); ++k) dot += q[k] * v[k];
      for (std::size_t k = 0; k < v.size(); ++k) v[k] -= dot * q[k];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-10) continue;
    for (double& x : v) x /= norm;
    out.push_back(std::move(v));
  }
  return out;
}

ConditionResult finish(double value, double margin, double tol, bool ok, bool sampled, std::vector<double> worst) {
  ConditionResult c;
  c.value = value;
  c.margin = margin;
  c.tolerance = tol;
  c.verdict = ok ? Verdict::pass : Verdict::fail;
  c.sampled = sampled;
  c.worst_sample = std::move(worst);
  return c;
}

}  // namespace

double kernel_condition_margin(const MixtureModel& model, const CellState& eq, const std::vector<double>& omega) {
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  const std::size_t N = n * (d + 1);
  DenseMatrix a(N, N);
  for (std::size_t al = 0; al < d; ++al) a += omega[al] * flux_jacobian(model, eq, al);

  // H A is symmetric with H = D^2 eta(U_hat) SPD, so A = L^-T C L^T with
  // C = L^-1 (H A) L^-T symmetric and eigenvectors v = L^-T w.
  const DenseMatrix h = entropy_hessian(model, eq);
  const DenseMatrix l = cholesky_lower(h);
  const DenseMatrix linv = lower_triangular_inverse(l);
  const DenseMatrix c = symmetric_part(linv * (h * a) * linv.transposed());
  const SymmetricEigen eig = symmetric_eigen(c);
  const DenseMatrix v = linv.transposed() * eig.vectors;

  double scale = 1.0;
  for (double ev : eig.values) scale = std::max(scale, std::abs(ev));
  double margin = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  while (k < N) {
    std::size_t end = k + 1;
    while (end < N && eig.values[end] - eig.values[end - 1] <= 1e-8 * scale) ++end;
    std::vector<std::vector<double>> cols;
    for (std::size_t q = k; q < end; ++q) {
      std::vector<double> col(N);
      for (std::size_t r = 0; r < N; ++r) col[r] = v(r, q);
      cols.push_back(std::move(col));
    }
    const auto basis = orthonormal(std::move(cols));
    // smallest momentum mass over unit vectors of the eigenspace
    DenseMatrix pm(N - n, basis.size());
    for (std::size_t q = 0; q < basis.size(); ++q)
      for (std::size_t r = n; r < N; ++r) pm(r - n, q) = basis[q][r];
    const auto sv = singular_values(pm);
    margin = std::min(margin, basis.size() <= N - n ? sv.back() : 0.0);
    k = end;
  }
  return margin;
}

bool CertificateReport::passed() const {
  return condition1.verdict == Verdict::pass && condition2.verdict == Verdict::pass &&
         condition3.verdict == Verdict::pass && condition4.verdict == Verdict::pass;
}

CertificateReport certify(const MixtureModel& model, const CellState& eq, const StateBox& box,
                          std::size_t sample_count, const CertificateTolerances& tol, std::uint64_t seed) {
  const std::size_t n = model.species();
  const std::size_t d = model.dimension();
  require_state(model, eq);
  for (double v : eq.m)
    if (v != 0.0) throw DomainError("certify: equilibrium momenta must vanish");
  box.validate(n);
  if (!box.contains(eq, 1e-12)) throw ConfigError("certify: equilibrium lies outside the state box");

  CertificateReport rep;
  rep.samples = sample_count;
  rep.seed = seed;

  {
    const DenseMatrix dms = source_momentum_jacobian(model, eq);
    const double smin = singular_values(dms).back();
    rep.symmetric_part_max_eigenvalue = symmetric_eigen(symmetric_part(dms)).values.back();
    rep.condition1 = finish(smin, smin - tol.singular_value, tol.singular_value, smin > tol.singular_value, false,
                            eq.packed());
  }

  QuasiRandom qr(box.sample_dimension(d), seed);
  double worst_sym = 0.0;
  std::vector<double> worst_sym_u = eq.packed();
  double max_ratio = -std::numeric_limits<double>::infinity();
  std::vector<double> worst_diss_u;
  std::size_t used = 0;
  const auto grad_eq = entropy_gradient(model, eq);
  for (std::size_t k = 0; k < sample_count; ++k) {
    const CellState u = box.map(qr.next(), d);
    const DenseMatrix h = entropy_hessian(model, u);
    for (std::size_t al = 0; al < d; ++al) {
      const DenseMatrix hf = h * flux_jacobian(model, u, al);
      const double res = asymmetry(hf) / std::max(hf.max_abs(), 1e-300);
      if (res > worst_sym) {
        worst_sym = res;
        worst_sym_u = u.packed();
      }
    }
    const auto src = full_source(model, u);
    double s2 = 0.0;
    for (double v : src) s2 += v * v;
    if (!(s2 > 0.0)) continue;
    const auto g = entropy_gradient(model, u);
    double pair = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q) pair += (g[q] - grad_eq[q]) * src[q];
    const double ratio = pair / s2;
    ++used;
    if (ratio > max_ratio) {
      max_ratio = ratio;
      worst_diss_u = u.packed();
    }
  }
  rep.condition2 = finish(worst_sym, tol.symmetry - worst_sym, tol.symmetry, worst_sym <= tol.symmetry, true,
                          worst_sym_u);
  rep.condition3_samples_used = used;
  if (used == 0) {
    rep.condition3 = finish(0.0, 0.0, tol.dissipativity, false, true, {});
    rep.condition3.verdict = Verdict::inconclusive;
  } else {
    const double cg = -max_ratio;
    rep.condition3 = finish(cg, cg - tol.dissipativity, tol.dissipativity, cg > tol.dissipativity, true,
                            worst_diss_u);
  }

  {
    std::vector<std::vector<double>> omegas;
    if (d == 1) {
      omegas = {{1.0}, {-1.0}};
    } else {
      QuasiRandom qs(2 * ((d + 1) / 2), seed ^ 0x9e3779b97f4a7c15ULL);
      for (std::size_t k = 0; k < sample_count; ++k) omegas.push_back(sphere_point(qs.next(), d));
    }
    double worst = std::numeric_limits<double>::infinity();
    std::vector<double> worst_omega;
    for (const auto& w : omegas) {
      const double m = kernel_condition_margin(model, eq, w);
      if (m < worst) {
        worst = m;
        worst_omega = w;
      }
    }
    rep.condition4 = finish(worst, worst - tol.eigenvector_mass, tol.eigenvector_mass, worst > tol.eigenvector_mass,
                            d > 1, worst_omega);
  }
  return rep;
}

std::string verdict_string(const ConditionResult& c) {
  switch (c.verdict) {
    case Verdict::pass:
      return c.sampled ? "pass (sampled)" : "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "fail";
}

std::string certificate_json(const CertificateReport& rep) {
  using nlohmann::ordered_json;
  auto cond = [](const ConditionResult& c) {
    ordered_json j;
    j["value"] = c.value;
    j["margin"] = c.margin;
    j["tolerance"] = c.tolerance;
    j["verdict"] = verdict_string(c);
    j["worst_sample"] = c.worst_sample;
    return j;
  };
  ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = "equilibrium_certificate";
  j["samples"] = rep.samples;
  j["seed"] = rep.seed;
  j["condition1"] = cond(rep.condition1);
  j["condition1"]["smallest_singular_value"] = rep.condition1.value;
  j["condition1"]["symmetric_part_max_eigenvalue"] = rep.symmetric_part_max_eigenvalue;
  j["condition2"] = cond(rep.condition2);
  j["condition3"] = cond(rep.condition3);
  j["condition3"]["c_G"] = rep.condition3.value;
  j["condition3"]["samples_used"] = rep.condition3_samples_used;
  j["condition4"] = cond(rep.condition4);
  j["passed"] = rep.passed();
  return j.dump(2);
}

}  // namespace msdarcy
