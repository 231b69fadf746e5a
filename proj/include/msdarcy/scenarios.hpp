#pragma once

#include <string>
#include <vector>

#include "msdarcy/config.hpp"
#include "msdarcy/harness.hpp"
#include "msdarcy/mixture.hpp"

namespace msdarcy::scenarios {

/// Two species, k = 1, gamma = 2, M = (1, 2), lambda_12 = 1, d = 1.
MixtureModel default_model(std::size_t dimension = 1);
/// rho in [0.5, 2], |m| <= 1 for every species.
StateBox default_box(std::size_t species = 2);
CellState default_equilibrium(std::size_t species = 2, std::size_t dimension = 1);
/// Two species with M = 0 and lambda = 0.
MixtureModel degenerate_model(std::size_t dimension = 1);

/// n = 1, M = 1, k = 1, gamma = 2 on [-6, 6] with a compact bump.
Scenario single_species_limit();
/// Two species, M = (1, 2), lambda_12 = 0.5 (coupling ratio 2).
Scenario two_species_limit();
/// Periodic smooth data for the discrete entropy balance at epsilon = 1.
Scenario entropy_audit(std::size_t cells = 512);
/// Three species with strong 1-2 friction and weak 2-3 friction; species 2
/// starts uniform.
Scenario duncan_toor();
/// duncan_toor() with every lambda set to zero.
Scenario duncan_toor_control();

std::vector<std::string> preset_names();
/// Full run configuration for a named preset; ConfigError if unknown.
RunConfig preset(const std::string& name);

}  // namespace msdarcy::scenarios
