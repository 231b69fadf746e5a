#include <doctest.h>

#include <chrono>
#include <cmath>
#include <json.hpp>

#include "msdarcy/certificate.hpp"
#include "msdarcy/errors.hpp"
#include "msdarcy/identities.hpp"
#include "msdarcy/sampling.hpp"
#include "msdarcy/scenarios.hpp"

using namespace msdarcy;

TEST_CASE("flux Jacobian examples") {
  const MixtureModel m(1, {{1.0, 2.0}}, {1.0});
  const DenseMatrix j = flux_jacobian(m, CellState{{1.0}, {0.0}}, 0);
  CHECK(j == DenseMatrix(2, 2, {0, 1, 2, 0}));
  const MixtureModel p = scenarios::default_model();
  const DenseMatrix jr = flux_jacobian(p, CellState{{1.3, 0.7}, {0.0, 0.0}}, 0);
  CHECK(jr(2, 2) == 0.0);
  CHECK(jr(2, 3) == 0.0);
  CHECK(jr(3, 2) == 0.0);
  CHECK(jr(3, 3) == 0.0);
  CHECK_THROWS_AS(flux_jacobian(m, CellState{{0.0}, {0.0}}, 0), DomainError);
}

TEST_CASE("flux Jacobian in two dimensions agrees with finite differences") {
  const MixtureModel m = scenarios::default_model(2);
  QuasiRandom q(6, 9);
  const StateBox box = scenarios::default_box();
  for (int s = 0; s < 100; ++s) {
    const CellState u = box.map(q.next(), 2);
    CHECK(flux_jacobian_fd_residual(m, u) < 1e-6);
    CHECK(entropy_hessian_fd_residual(m, u) < 1e-6);
    CHECK(entropy_compatibility_residual(m, u) < 1e-6);
  }
}

TEST_CASE("entropy Hessian examples") {
  const MixtureModel m(1, {{1.0, 2.0}}, {1.0});
  CHECK(entropy_hessian(m, CellState{{1.0}, {0.0}}) == DenseMatrix(2, 2, {2, 0, 0, 1}));
  const DenseMatrix h = entropy_hessian(scenarios::default_model(2), CellState{{0.8, 1.5}, {0.1, -0.4, 0.3, 0.2}});
  CHECK(h == h.transposed());
  CHECK(cholesky_lower(h).rows() == 6);
}

TEST_CASE("source momentum Jacobian examples") {
  const MixtureModel m = scenarios::default_model();
  const DenseMatrix j = source_momentum_jacobian(m, scenarios::default_equilibrium());
  CHECK(j == DenseMatrix(2, 2, {-2, 1, 1, -3}));
  const SymmetricEigen e = symmetric_eigen(j);
  CHECK(e.values[0] == doctest::Approx((-5.0 - std::sqrt(5.0)) / 2.0));
  CHECK(e.values[1] == doctest::Approx((-5.0 + std::sqrt(5.0)) / 2.0));
  const MixtureModel free(1, {{1, 2}, {1, 2}}, {1, 2});
  CHECK(source_momentum_jacobian(free, scenarios::default_equilibrium()) == DenseMatrix(2, 2, {-1, 0, 0, -2}));
  const DenseMatrix j2 = source_momentum_jacobian(scenarios::default_model(2), scenarios::default_equilibrium(2, 2));
  const SymmetricEigen e2 = symmetric_eigen(j2);
  CHECK(e2.values[0] == doctest::Approx(e.values[0]));
  CHECK(e2.values[1] == doctest::Approx(e.values[0]));
  CHECK(e2.values[2] == doctest::Approx(e.values[1]));
  CHECK(e2.values[3] == doctest::Approx(e.values[1]));
  CHECK_THROWS(source_momentum_jacobian(m, CellState{{1.0, 1.0}, {0.2, 0.0}}));
}

TEST_CASE("default model passes every condition") {
  const auto t0 = std::chrono::steady_clock::now();
  const CertificateReport r =
      certify(scenarios::default_model(), scenarios::default_equilibrium(), scenarios::default_box(), 10000);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(r.passed());
  CHECK(r.condition1.verdict == Verdict::pass);
  CHECK(r.condition2.verdict == Verdict::pass);
  CHECK(r.condition3.verdict == Verdict::pass);
  CHECK(r.condition4.verdict == Verdict::pass);
  CHECK(verdict_string(r.condition3) == "pass (sampled)");
  CHECK(r.condition1.value == doctest::Approx((5.0 - std::sqrt(5.0)) / 2.0));
  CHECK(r.symmetric_part_max_eigenvalue < 0.0);
  CHECK(r.condition3.value > 0.0);
  CHECK(secs < 30.0);
}

TEST_CASE("degenerate model fails condition 1") {
  const CertificateReport r =
      certify(scenarios::degenerate_model(), scenarios::default_equilibrium(), scenarios::default_box(), 1000);
  CHECK(r.condition1.verdict == Verdict::fail);
  CHECK(!r.passed());
}

TEST_CASE("single species condition 4 matches closed-form eigenvectors") {
  const MixtureModel m(1, {{1.0, 2.0}}, {1.0});
  const CellState eq{{1.0}, {0.0}};
  // Eigenvectors (1, +-sqrt(p'(1))) normalised have momentum mass sqrt(2/3).
  const double expect = std::sqrt(2.0 / 3.0);
  CHECK(kernel_condition_margin(m, eq, {1.0}) == doctest::Approx(expect));
  CHECK(kernel_condition_margin(m, eq, {-1.0}) == doctest::Approx(expect));
  const CertificateReport r = certify(m, eq, StateBox::uniform(1, 0.5, 2.0, 1.0), 1000);
  CHECK(r.condition4.verdict == Verdict::pass);
  CHECK(r.condition4.value == doctest::Approx(expect));
}

TEST_CASE("condition 3 agrees with the dissipation identity") {
  const MixtureModel m = scenarios::default_model();
  const CellState eq = scenarios::default_equilibrium();
  QuasiRandom q(4, 2);
  for (int s = 0; s < 200; ++s) {
    const CellState u = scenarios::default_box().map(q.next(), 1);
    const auto g = entropy_gradient(m, u);
    const auto ge = entropy_gradient(m, eq);
    const auto src = full_source(m, u);
    double pair = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) pair += (g[k] - ge[k]) * src[k];
    const double closed = friction_dissipation(m, u) + entropy_production(m, u);
    CHECK(pair == doctest::Approx(-closed).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("certificate inconclusive on a degenerate box, error outside the box") {
  const MixtureModel m = scenarios::default_model();
  const StateBox point{{1.0, 1.0}, {1.0, 1.0}, {0.0, 0.0}};
  const CertificateReport r = certify(m, scenarios::default_equilibrium(), point, 100);
  CHECK(r.condition3.verdict == Verdict::inconclusive);
  CHECK(verdict_string(r.condition3) == "inconclusive");
  CHECK_THROWS_AS(certify(m, CellState{{3.0, 1.0}, {0.0, 0.0}}, scenarios::default_box(), 100), ConfigError);
}

TEST_CASE("certificate is deterministic and serialises") {
  const auto a = certify(scenarios::default_model(), scenarios::default_equilibrium(), scenarios::default_box(), 500,
                         {}, 42);
  const auto b = certify(scenarios::default_model(), scenarios::default_equilibrium(), scenarios::default_box(), 500,
                         {}, 42);
  CHECK(certificate_json(a) == certificate_json(b));
  const auto j = nlohmann::json::parse(certificate_json(a));
  CHECK(j["schema_version"] == 1);
  for (const char* key : {"condition1", "condition2", "condition3", "condition4"}) {
    REQUIRE(j.contains(key));
    for (const char* field : {"margin", "tolerance", "verdict", "worst_sample"}) CHECK(j[key].contains(field));
  }
}
