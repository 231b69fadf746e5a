#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "msdarcy/harness.hpp"
#include "msdarcy/mixture.hpp"

namespace msdarcy {

struct CertificateSettings {
  std::vector<double> equilibrium;  // defaults to the scenario base densities
  StateBox box;                     // defaults to [0.5, 2] * equilibrium, |m| <= 1
  std::size_t samples = 10000;
};

struct RunConfig {
  Scenario scenario;
  std::size_t threads = 0;
  std::size_t identity_samples = 1000;
  CertificateSettings certificate{};
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  const MixtureModel& model() const noexcept { return scenario.model; }
};

/// Parses the sectioned key = value format. `source` names the input in
/// error messages.
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
RunConfig parse_config(const std::filesystem::path& path);

/// Canonical text form; parse_config_text(to_config_text(c)) reproduces c.
std::string to_config_text(const RunConfig& config);

}  // namespace msdarcy
