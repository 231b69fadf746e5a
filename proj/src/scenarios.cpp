#include "msdarcy/scenarios.hpp"

#include "msdarcy/errors.hpp"

namespace msdarcy::scenarios {

namespace {

Grid1D farfield_grid(double lo, double hi, std::size_t cells, std::vector<double> base) {
  return {lo, hi, cells, Boundary::farfield, std::move(base)};
}

HyperbolicConfig limit_hyperbolic() {
  HyperbolicConfig h;
  h.cfl = 0.1;
  h.splitting = Splitting::strang;
  h.source = SourceIntegrator::exponential;
  h.reconstruction = Reconstruction::van_leer;
  return h;
}

MixtureModel three_species(double l12, double l23, double l13) {
  std::vector<Coupling> c;
  if (l12 > 0.0) c.push_back({0, 1, {l12, 0.0, 0.0}});
  if (l23 > 0.0) c.push_back({1, 2, {l23, 0.0, 0.0}});
  if (l13 > 0.0) c.push_back({0, 2, {l13, 0.0, 0.0}});
  return MixtureModel(1, std::vector<PressureLaw>(3, {1.0, 2.0}), {1.0, 1.0, 1.0}, c);
}

}  // namespace

MixtureModel default_model(std::size_t dimension) {
  return MixtureModel(dimension, {{1.0, 2.0}, {1.0, 2.0}}, {1.0, 2.0}, {{0, 1, {1.0, 0.0, 0.0}}});
}

StateBox default_box(std::size_t species) { return StateBox::uniform(species, 0.5, 2.0, 1.0); }

CellState default_equilibrium(std::size_t species, std::size_t dimension) {
  return CellState::rest(std::vector<double>(species, 1.0), dimension);
}

MixtureModel degenerate_model(std::size_t dimension) {
  return MixtureModel(dimension, {{1.0, 2.0}, {1.0, 2.0}}, {0.0, 0.0});
}

Scenario single_species_limit() {
  Scenario s{.name = "single-species", .model = MixtureModel(1, {{1.0, 2.0}}, {1.0})};
  s.base = {1.0};
  s.grid = farfield_grid(-6.0, 6.0, 1024, s.base);
  s.bump = {{0.5}, 0.0, 2.0};
  s.t_end = 0.5;
  s.epsilons = {0.2, 0.1, 0.05};
  s.hyperbolic = limit_hyperbolic();
  return s;
}

Scenario two_species_limit() {
  Scenario s{.name = "two-species",
             .model = MixtureModel(1, {{1.0, 2.0}, {1.0, 2.0}}, {1.0, 2.0}, {{0, 1, {0.5, 0.0, 0.0}}})};
  s.base = {1.0, 1.0};
  s.grid = farfield_grid(-6.0, 6.0, 1024, s.base);
  s.bump = {{0.5, 0.3}, 0.0, 2.0};
  s.t_end = 0.5;
  s.epsilons = {0.2, 0.1, 0.05};
  s.hyperbolic = limit_hyperbolic();
  return s;
}

Scenario entropy_audit(std::size_t cells) {
  Scenario s{.name = "entropy-audit", .model = default_model()};
  s.base = {1.0, 1.0};
  s.grid = {0.0, 1.0, cells, Boundary::periodic, {}};
  s.profile = Profile::sine;
  s.sine = {{0.1, -0.05}, {0.05, -0.05}, 1.0};
  s.well_prepared = false;
  s.t_end = 0.1;
  s.epsilons = {1.0};
  s.checkpoints = 1;
  s.hyperbolic.cfl = 0.4;
  s.hyperbolic.splitting = Splitting::strang;
  s.hyperbolic.source = SourceIntegrator::exponential;
  s.hyperbolic.reconstruction = Reconstruction::van_leer;
  return s;
}

Scenario duncan_toor() {
  Scenario s{.name = "duncan-toor", .model = three_species(20.0, 0.2, 1.0)};
  s.base = {1.0, 1.0, 1.0};
  s.grid = farfield_grid(-6.0, 6.0, 512, s.base);
  s.bump = {{0.5, 0.0, -0.5}, 0.0, 2.0};
  s.t_end = 0.5;
  s.epsilons = {0.2};
  s.hyperbolic = limit_hyperbolic();
  s.hyperbolic.cfl = 0.2;
  return s;
}

Scenario duncan_toor_control() {
  Scenario s = duncan_toor();
  s.name = "duncan-toor-control";
  s.model = three_species(0.0, 0.0, 0.0);
  return s;
}

std::vector<std::string> preset_names() {
  return {"default", "degenerate", "single-species", "two-species", "entropy-audit", "duncan-toor",
          "duncan-toor-control"};
}

RunConfig preset(const std::string& name) {
  auto wrap = [](Scenario s) {
    RunConfig c{.scenario = std::move(s)};
    const std::size_t n = c.model().species();
    c.certificate.equilibrium = c.scenario.base;
    c.certificate.box = default_box(n);
    return c;
  };
  if (name == "default" || name == "degenerate") {
    Scenario s = two_species_limit();
    s.name = name;
    s.model = name == "default" ? default_model() : degenerate_model();
    return wrap(std::move(s));
  }
  if (name == "single-species") return wrap(single_species_limit());
  if (name == "two-species") return wrap(two_species_limit());
  if (name == "entropy-audit") return wrap(entropy_audit());
  if (name == "duncan-toor") return wrap(duncan_toor());
  if (name == "duncan-toor-control") return wrap(duncan_toor_control());
  std::string known;
  for (const auto& p : preset_names()) known += (known.empty() ? "" : ", ") + p;
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace msdarcy::scenarios
