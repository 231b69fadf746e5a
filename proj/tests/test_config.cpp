#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "msdarcy/config.hpp"
#include "msdarcy/errors.hpp"
#include "msdarcy/scenarios.hpp"

using namespace msdarcy;

namespace {

const char* const minimal = R"(# two species
[mixture]
species = 2

[species.1]
k = 1
gamma = 2
mobility = 1

[species.2]
k = 1
gamma = 2
mobility = 2

[lambda.1.2]
constant = 1
)";

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text, "test.ini");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal configuration parses with defaults") {
  const RunConfig c = parse_config_text(minimal);
  CHECK(c.model().species() == 2);
  CHECK(c.model().dimension() == 1);
  CHECK(c.model().mobility(1) == 2.0);
  CHECK(c.model().lambda(0, 1, 1.0, 1.0) == 1.0);
  CHECK(c.model().lambda(1, 0, 1.0, 1.0) == 1.0);
  CHECK(c.scenario.base == std::vector<double>{1.0, 1.0});
  CHECK(c.certificate.equilibrium == c.scenario.base);
  CHECK(c.seed == 1);
}

TEST_CASE("canonical text round-trips for every preset") {
  for (const std::string& name : scenarios::preset_names()) {
    CAPTURE(name);
    const RunConfig c = scenarios::preset(name);
    const std::string text = to_config_text(c);
    const RunConfig back = parse_config_text(text);
    CHECK(to_config_text(back) == text);
    CHECK(back.scenario.name == c.scenario.name);
    CHECK(back.scenario.grid == c.scenario.grid);
    CHECK(back.scenario.epsilons == c.scenario.epsilons);
    CHECK(back.scenario.hyperbolic.cfl == c.scenario.hyperbolic.cfl);
    CHECK(back.certificate.box.rho_hi == c.certificate.box.rho_hi);
    for (std::size_t i = 0; i < c.model().species(); ++i) {
      CHECK(back.model().mobility(i) == c.model().mobility(i));
      for (std::size_t j = 0; j < c.model().species(); ++j) CHECK(back.model().cross(i, j) == c.model().cross(i, j));
    }
  }
}

TEST_CASE("shortest round-trip numbers survive") {
  RunConfig c = scenarios::preset("single-species");
  c.scenario.t_end = 0.1 + 0.2;
  c.scenario.hyperbolic.cfl = 1.0 / 3.0;
  const RunConfig back = parse_config_text(to_config_text(c));
  CHECK(back.scenario.t_end == c.scenario.t_end);
  CHECK(back.scenario.hyperbolic.cfl == c.scenario.hyperbolic.cfl);
}

TEST_CASE("asymmetric friction names both keys") {
  const std::string text = std::string(minimal) + "\n[lambda.2.1]\nconstant = 2\n";
  const std::string err = error_of(text);
  CHECK(err.find("lambda.1.2") != std::string::npos);
  CHECK(err.find("lambda.2.1") != std::string::npos);
  CHECK(err.find("symmetric") != std::string::npos);
  const std::string consistent = std::string(minimal) + "\n[lambda.2.1]\nconstant = 1\n";
  CHECK_NOTHROW(parse_config_text(consistent));
}

TEST_CASE("pressure exponent below one is rejected") {
  std::string text = minimal;
  text.replace(text.find("gamma = 2"), 9, "gamma = 0.5");
  const std::string err = error_of(text);
  CHECK(err.find("species.1") != std::string::npos);
  CHECK(err.find("gamma") != std::string::npos);
}

TEST_CASE("unknown keys and sections report their line") {
  const std::string text = std::string(minimal) + "[grid]\ncells = 64\ncels = 3\n";
  const std::string err = error_of(text);
  CHECK(err.find("test.ini:19") != std::string::npos);
  CHECK(err.find("grid.cels") != std::string::npos);
  CHECK(err.find("unknown key") != std::string::npos);
  CHECK(error_of(std::string(minimal) + "[gird]\n").find("unknown section") != std::string::npos);
}

TEST_CASE("syntax errors report their line") {
  const std::string err = error_of("[mixture]\nspecies 2\n");
  CHECK(err.find("test.ini:2") != std::string::npos);
  CHECK(error_of("[mixture\n").find("unterminated") != std::string::npos);
  CHECK(error_of("species = 2\n").find("outside") != std::string::npos);
  CHECK(error_of("[mixture]\nspecies = 2\nspecies = 3\n").find("duplicate") != std::string::npos);
  CHECK(error_of("[mixture]\nspecies = two\n").find("mixture.species") != std::string::npos);
}

TEST_CASE("structural errors") {
  CHECK(error_of("[mixture]\nspecies = 2\n[species.1]\nk = 1\ngamma = 1\nmobility = 1\n").find("species.2") !=
        std::string::npos);
  CHECK(error_of(std::string(minimal) + "[lambda.1.3]\nconstant = 1\n").find("out of range") != std::string::npos);
  CHECK(error_of(std::string(minimal) + "[scenario]\nbase = 1\n").find("scenario.base") != std::string::npos);
  CHECK(error_of(std::string(minimal) + "[grid]\nboundary = open\n").find("grid.boundary") != std::string::npos);
  CHECK(error_of(std::string(minimal) + "[scenario]\nwavenumber = 2\n").find("sine") != std::string::npos);
  CHECK(error_of(std::string(minimal) + "[hyperbolic]\ncfl = 1.5\n") != "");
}

TEST_CASE("files are read from disk") {
  const auto dir = std::filesystem::temp_directory_path() / "msdarcy_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "minimal.ini";
  std::ofstream(path) << minimal;
  CHECK(parse_config(path).model().species() == 2);
  try {
    parse_config(dir / "missing.ini");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("missing.ini") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
