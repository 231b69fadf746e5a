#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "msdarcy/cli.hpp"

namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "msdarcy");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return msdarcy::cli::main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("msdarcy_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& leaf = "") const { return (path / leaf).string(); }
};

const char* const small_run = R"([mixture]
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
constant = 0.5
[grid]
x_min = -6
x_max = 6
cells = 64
boundary = farfield
[hyperbolic]
epsilon = 0.2
cfl = 0.2
[scenario]
base = 1, 1
amplitude = AMP
radius = 2
t_end = 0.05
checkpoints = 2
[sweep]
epsilons = 0.2, 0.1
)";

std::string write_config(const TempDir& dir, const std::string& amplitude) {
  std::string text = small_run;
  text.replace(text.find("AMP"), 3, amplitude);
  const std::string path = dir.str("run.ini");
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("identities battery exits cleanly") {
  TempDir dir("identities");
  CHECK(run({"identities", "--out", dir.str(), "--quiet"}) == 0);
  CHECK(fs::exists(dir.path / "identities.json"));
}

TEST_CASE("certify fails on the degenerate preset") {
  TempDir dir("certify");
  CHECK(run({"--preset", "degenerate", "certify", "--out", dir.str(), "--quiet"}) == 3);
  CHECK(slurp(dir.path / "certificate.json").find("\"passed\": false") != std::string::npos);
  CHECK(run({"certify", "--out", dir.str(), "--quiet"}) == 0);
}

TEST_CASE("equilibrium data stays constant through simulate") {
  TempDir dir("simulate");
  const std::string cfg = write_config(dir, "0, 0");
  REQUIRE(run({"--config", cfg, "simulate", "--out", dir.str("out"), "--quiet"}) == 0);
  std::ifstream in(dir.path / "out" / "snapshots.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,rho_1,rho_2,m_1,m_2");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto rest = line.substr(line.find(',', line.find(',') + 1) + 1);
    CHECK(rest == "1,1,0,0");
  }
  CHECK(rows == 2 * 64);
  CHECK(fs::exists(dir.path / "out" / "audit.csv"));
}

TEST_CASE("configuration problems exit with code 1") {
  TempDir dir("bad");
  const std::string bad = dir.str("bad.ini");
  std::ofstream(bad) << "[mixture]\nspecies = 2\n";
  CHECK(run({"--config", bad, "simulate", "--out", dir.str(), "--quiet"}) == 1);
  CHECK(run({"--config", dir.str("missing.ini"), "simulate"}) == 1);
  CHECK(run({"--preset", "nope", "simulate"}) == 1);
  CHECK(run({"frobnicate"}) == 1);
  CHECK(run({"--preset", "default", "--config", bad, "simulate"}) == 1);
}

TEST_CASE("solver aborts exit with code 2") {
  TempDir dir("abort");
  std::string text = small_run;
  text.replace(text.find("AMP"), 3, "0.5, 0.3");
  text.replace(text.find("cfl = 0.2"), 9, "cfl = 0.2\nmax_steps = 2");
  const std::string cfg = dir.str("abort.ini");
  std::ofstream(cfg) << text;
  CHECK(run({"--config", cfg, "simulate", "--out", dir.str(), "--quiet"}) == 2);
}

TEST_CASE("outputs are byte-identical across runs") {
  TempDir dir("determinism");
  const std::string cfg = write_config(dir, "0.5, 0.3");
  for (const char* sub : {"sweep", "limit", "simulate"}) {
    CAPTURE(sub);
    REQUIRE(run({"--config", cfg, sub, "--out", dir.str("a"), "--quiet"}) == 0);
    REQUIRE(run({"--config", cfg, sub, "--out", dir.str("b"), "--quiet"}) == 0);
  }
  for (const char* f : {"sweep.json", "sweep.csv", "limit.csv", "limit_momentum.csv", "snapshots.csv", "audit.csv"}) {
    CAPTURE(f);
    const std::string a = slurp(dir.path / "a" / f);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir.path / "b" / f));
  }
}

TEST_CASE("print-config output parses back to the same text") {
  TempDir dir("print");
  const std::string cfg = write_config(dir, "0.5, 0.3");
  std::ostringstream captured;
  auto* old = std::cout.rdbuf(captured.rdbuf());
  const int code = run({"--config", cfg, "print-config"});
  std::cout.rdbuf(old);
  REQUIRE(code == 0);
  const std::string canon = dir.str("canon.ini");
  std::ofstream(canon) << captured.str();
  std::ostringstream again;
  old = std::cout.rdbuf(again.rdbuf());
  CHECK(run({"--config", canon, "print-config"}) == 0);
  std::cout.rdbuf(old);
  CHECK(again.str() == captured.str());
}
