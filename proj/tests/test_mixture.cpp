#include <doctest.h>

#include <cmath>
#include <random>

#include "msdarcy/errors.hpp"
#include "msdarcy/matrix.hpp"
#include "msdarcy/mixture.hpp"

using namespace msdarcy;

namespace {

MixtureModel pair_model(double m1, double m2, double lambda, double k = 1.0, double gamma = 2.0) {
  std::vector<Coupling> c;
  if (lambda != 0.0) c.push_back({0, 1, {lambda, 0.0, 0.0}});
  return MixtureModel(1, {{k, gamma}, {k, gamma}}, {m1, m2}, c);
}

MixtureModel single(double m, double k = 1.0, double gamma = 2.0) { return MixtureModel(1, {{k, gamma}}, {m}); }

void check_matrix(const DenseMatrix& a, std::initializer_list<double> expected, double tol = 1e-14) {
  REQUIRE(a.rows() * a.cols() == expected.size());
  std::size_t k = 0;
  for (double e : expected) {
    CHECK(a.data()[k] == doctest::Approx(e).epsilon(tol));
    ++k;
  }
}

}  // namespace

TEST_CASE("free energy closed forms satisfy rho h' - h = p") {
  const PressureLaw quad{1.0, 2.0};
  CHECK(free_energy(quad, 2.0) == doctest::Approx(4.0));
  CHECK(2.0 * free_energy_derivative(quad, 2.0) - free_energy(quad, 2.0) == doctest::Approx(quad.pressure(2.0)));
  CHECK(free_energy(PressureLaw{1.0, 1.0}, 1.0) == 0.0);
  CHECK(free_energy(PressureLaw{2.0, 1.4}, 1.0) == doctest::Approx(5.0));
  CHECK_THROWS_AS(free_energy(quad, 0.0), DomainError);
  CHECK_THROWS_AS(free_energy(quad, -1.0), DomainError);
}

TEST_CASE("free energy is strictly convex") {
  for (const PressureLaw law : {PressureLaw{1.0, 1.0}, PressureLaw{1.0, 2.0}, PressureLaw{0.7, 1.4}})
    for (double r : {1e-3, 0.1, 1.0, 10.0, 1e3}) CHECK(free_energy_second_derivative(law, r) > 0.0);
}

TEST_CASE("pressure law validation") {
  CHECK_THROWS_AS(PressureLaw({1.0, 0.5}).validate(), ConfigError);
  CHECK_THROWS_AS(PressureLaw({0.0, 2.0}).validate(), ConfigError);
  CHECK_NOTHROW(PressureLaw({1.0, 1.0}).validate());
}

TEST_CASE("pressure growth condition p'' <= gamma p'/rho") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lg(-3.0, 3.0), gam(1.0, 3.0);
  for (int s = 0; s < 1000; ++s) {
    const PressureLaw law{1.0, gam(rng)};
    const double r = std::pow(10.0, lg(rng));
    CHECK(law.dpressure(r) > 0.0);
    CHECK(law.d2pressure(r) <= law.growth_constant() * law.dpressure(r) / r * (1.0 + 1e-12));
  }
}

TEST_CASE("lambda matrix examples") {
  const MixtureModel m = pair_model(1, 1, 1);
  const std::vector<double> r11{1.0, 1.0}, r12{1.0, 2.0};
  check_matrix(lambda_matrix(m, r11), {-1, 1, 1, -1});
  const SymmetricEigen e = symmetric_eigen(lambda_matrix(m, r11));
  CHECK(e.values[0] == doctest::Approx(-2.0));
  CHECK(std::fabs(e.values[1]) < 1e-14);
  const DenseMatrix l = lambda_matrix(m, r12);
  check_matrix(l, {-2, 1, 1, -0.5});
  CHECK(l(0, 0) * l(1, 1) - l(0, 1) * l(1, 0) == doctest::Approx(0.0));
  CHECK(l(0, 0) + l(1, 1) == doctest::Approx(-2.5));
  const std::vector<double> one{3.0};
  check_matrix(lambda_matrix(single(1), one), {0});
  const std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(lambda_matrix(m, bad), DomainError);
}

TEST_CASE("Maxwell-Stefan matrix examples") {
  const MixtureModel m = pair_model(1, 1, 1);
  const std::vector<double> r{1.0, 2.0};
  const DenseMatrix t = maxwell_stefan_matrix(m, r);
  check_matrix(t, {2, -2, -2, 2});
  const std::vector<double> ones{1.0, 1.0};
  for (double v : t.apply(ones)) CHECK(v == 0.0);
  const std::vector<double> one{2.0};
  check_matrix(maxwell_stefan_matrix(single(1), one), {0});
}

TEST_CASE("source examples") {
  const MixtureModel m = pair_model(1, 1, 1);
  const auto s = source(m, CellState{{1.0, 1.0}, {1.0, 0.0}});
  CHECK(s[0] == doctest::Approx(-2.0));
  CHECK(s[1] == doctest::Approx(1.0));
  const auto z = source(m, CellState{{0.3, 2.0}, {0.0, 0.0}});
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);
  const auto s1 = source(single(3), CellState{{2.0}, {4.0}});
  CHECK(s1[0] == doctest::Approx(-12.0));
  const auto full = full_source(m, CellState{{1.0, 1.0}, {1.0, 0.0}});
  REQUIRE(full.size() == 4);
  CHECK(full[0] == 0.0);
  CHECK(full[1] == 0.0);
  CHECK(full[2] == doctest::Approx(-2.0));
  CHECK_THROWS_AS(source(m, CellState{{1.0, -1.0}, {0.0, 0.0}}), DomainError);
}

TEST_CASE("entropy and entropy flux examples") {
  const MixtureModel m = single(1);
  CHECK(entropy(m, CellState{{1.0}, {0.0}}) == doctest::Approx(1.0));
  CHECK(entropy_flux(m, CellState{{1.0}, {0.0}})[0] == 0.0);
  CHECK(entropy(m, CellState{{1.0}, {2.0}}) == doctest::Approx(3.0));
  const MixtureModel p = pair_model(1, 2, 1);
  const CellState u{{0.7, 1.3}, {0.4, -0.9}};
  const CellState rest{{0.7, 1.3}, {0.0, 0.0}};
  const double kinetic = 0.5 * 0.16 / 0.7 + 0.5 * 0.81 / 1.3;
  CHECK(entropy(p, u) - entropy(p, rest) == doctest::Approx(kinetic));
}

TEST_CASE("entropy production examples") {
  const MixtureModel m = pair_model(1, 1, 1);
  CHECK(entropy_production(m, CellState{{1.0, 1.0}, {1.0, 0.0}}) == doctest::Approx(1.0));
  CHECK(entropy_production(m, CellState{{1.0, 2.0}, {0.5, 1.0}}) == doctest::Approx(0.0));
  CHECK(entropy_production(single(1), CellState{{2.0}, {5.0}}) == 0.0);
}

TEST_CASE("dissipation pairing examples") {
  const MixtureModel m = pair_model(1, 1, 1);
  const CellState u{{1.0, 1.0}, {1.0, 0.0}};
  CHECK(dissipation_pairing(m, u, CellState{{1.0, 1.0}, {0.0, 0.0}}) == doctest::Approx(2.0));
  CHECK(dissipation_pairing(m, u, CellState{{0.3, 4.0}, {0.0, 0.0}}) == doctest::Approx(2.0));
  CHECK(friction_dissipation(m, u) + entropy_production(m, u) == doctest::Approx(2.0));
  CHECK(dissipation_pairing(m, CellState{{1.0, 1.0}, {0.0, 0.0}}, CellState{{1.0, 1.0}, {0.0, 0.0}}) == 0.0);
  CHECK_THROWS(dissipation_pairing(m, u, CellState{{1.0, 1.0}, {0.1, 0.0}}));
}

TEST_CASE("mobility matrix examples") {
  const std::vector<double> r{1.0, 1.0};
  check_matrix(mobility_matrix(pair_model(1, 2, 1), r), {2, -1, -1, 3});
  check_matrix(mobility_matrix(pair_model(1, 2, 0), r), {1, 0, 0, 2});
  const std::vector<double> one{0.4};
  check_matrix(mobility_matrix(single(5), one), {5});
  const DenseMatrix b = mobility_matrix_extended(pair_model(1, 2, 1).with_dimension(2), r);
  CHECK(b == kron(mobility_matrix(pair_model(1, 2, 1), r), DenseMatrix::identity(2)));
  CHECK(mobility_spectral_margin(pair_model(1, 2, 1), r) >= 1.0 - 1e-12);
}

TEST_CASE("relative entropy examples") {
  const MixtureModel m = single(1);
  const CellState u{{2.0}, {0.0}}, ub{{1.0}, {0.0}};
  CHECK(relative_entropy(m, u, u) == 0.0);
  CHECK(relative_entropy(m, u, ub) == doctest::Approx(1.0));
  CHECK(relative_entropy(m, CellState{{1.0}, {1.0}}, ub) == doctest::Approx(0.5));
  for (double v : relative_entropy_flux(m, u, u)) CHECK(v == 0.0);
}

TEST_CASE("relative flux and relative pressure examples") {
  const PressureLaw law{1.0, 2.0};
  CHECK(relative_pressure(law, 2.0, 1.0) == doctest::Approx(1.0));
  CHECK(relative_pressure(law, 1.3, 1.3) == 0.0);
  const MixtureModel m = pair_model(1, 2, 1);
  const CellState u{{1.2, 0.8}, {0.3, -0.1}};
  for (double v : relative_flux(m, u, u)) CHECK(v == 0.0);
}

TEST_CASE("relative flux bound constant is finite on a box") {
  const MixtureModel m = pair_model(1, 2, 1);
  const RelativeBounds b = relative_bounds(m, StateBox::uniform(2, 0.5, 2.0, 1.0), 1000, 3);
  CHECK(std::isfinite(b.flux_ratio));
  CHECK(b.flux_ratio > 0.0);
  CHECK(b.lower > 0.0);
  CHECK(b.upper >= b.lower);
}

TEST_CASE("Stefan diffusivity examples") {
  const std::vector<double> mm{1.0, 1.0};
  CHECK(stefan_diffusivity(pair_model(1, 1, 1), 0, 1, 1.0, mm, 1.0) == doctest::Approx(1.0));
  CHECK(stefan_diffusivity(pair_model(1, 1, 2), 0, 1, 1.0, mm, 1.0) == doctest::Approx(0.5));
  const std::vector<double> gas{0.004, 0.028};
  CHECK(stefan_diffusivity(pair_model(1, 1, 1), 0, 1, 40.0, gas, 8.314) ==
        doctest::Approx(8.314 / (40.0 * 0.004 * 0.028)));
  CHECK(stefan_diffusivity(pair_model(1, 1, 1), 0, 1, 40.0, gas, 8.314) == doctest::Approx(1855.8).epsilon(1e-4));
  CHECK_THROWS(stefan_diffusivity(pair_model(1, 1, 0), 0, 1, 1.0, mm, 1.0));
  const MixtureModel affine(1, {{1, 2}, {1, 2}}, {1, 1}, {{0, 1, {1.0, 0.5, 0.0}}});
  CHECK_THROWS(stefan_diffusivity(affine, 0, 1, 1.0, mm, 1.0));
  CHECK_THROWS(stefan_diffusivity(pair_model(1, 1, 1), 0, 0, 1.0, mm, 1.0));
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(MixtureModel(1, {{1, 2}, {1, 2}}, {1, 1}, {{0, 1, {1, 0, 0}}, {1, 0, {2, 0, 0}}}), ConfigError);
  CHECK_THROWS_AS(MixtureModel(1, {{1, 2}, {1, 2}}, {1, 1}, {{0, 1, {-1, 0, 0}}}), ConfigError);
  CHECK_THROWS_AS(MixtureModel(1, {{1, 2}}, {-1}), ConfigError);
  CHECK_THROWS_AS(MixtureModel(0, {{1, 2}}, {1}), ConfigError);
  CHECK_THROWS_AS(MixtureModel(1, {{1, 2}, {1, 2}}, {1, 1}, {{0, 2, {1, 0, 0}}}), ConfigError);
  const MixtureModel affine(1, {{1, 2}, {1, 2}}, {1, 1}, {{0, 1, {0.5, 2.0, 3.0}}});
  CHECK(affine.lambda(0, 1, 1.0, 10.0) == doctest::Approx(0.5 + 2.0 + 30.0));
  CHECK(affine.lambda(1, 0, 10.0, 1.0) == doctest::Approx(affine.lambda(0, 1, 1.0, 10.0)));
}
