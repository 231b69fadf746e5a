#include "msdarcy/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "msdarcy/errors.hpp"

namespace msdarcy {

namespace {

void put(std::string& out, double v) {
  char buf[32];
  // Adding zero folds -0 into 0.
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  out += buf;
}

void header(std::string& out, std::initializer_list<const char*> fixed,
            std::initializer_list<std::pair<const char*, std::size_t>> families) {
  bool first = true;
  for (const char* f : fixed) {
    out += first ? "" : ",";
    out += f;
    first = false;
  }
  for (const auto& [prefix, count] : families)
    for (std::size_t i = 0; i < count; ++i) {
      out += first ? "" : ",";
      out += prefix;
      out += std::to_string(i + 1);
      first = false;
    }
  out += '\n';
}

// Infinity has no JSON literal; such entries become null.
nlohmann::ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string snapshot_csv(const Grid1D& grid, std::span<const FieldSnapshot> snapshots) {
  const std::size_t n = snapshots.empty() ? 0 : snapshots.front().species;
  std::string out;
  header(out, {"t", "x"}, {{"rho_", n}, {"m_", n}});
  for (const FieldSnapshot& s : snapshots) {
    if (s.species != n || s.cells != grid.cells) throw DimensionError("snapshot_csv: inconsistent snapshots");
    for (std::size_t c = 0; c < s.cells; ++c) {
      put(out, s.time);
      out += ',';
      put(out, grid.center(c));
      for (std::size_t i = 0; i < n; ++i) out += ',', put(out, s.r(i, c));
      for (std::size_t i = 0; i < n; ++i) out += ',', put(out, s.m(i, c));
      out += '\n';
    }
  }
  return out;
}

std::string audit_csv(std::span<const EntropyAuditRow> audit) {
  std::string out = "step,t,total_entropy,dissipation,residual\n";
  for (const EntropyAuditRow& r : audit) {
    out += std::to_string(r.step);
    for (double v : {r.t, r.total_entropy, r.dissipation, r.residual}) out += ',', put(out, v);
    out += '\n';
  }
  return out;
}

std::string density_csv(const Grid1D& grid, std::span<const DensityField> fields) {
  const std::size_t n = fields.empty() ? 0 : fields.front().species;
  std::string out;
  header(out, {"t", "x"}, {{"rho_", n}});
  for (const DensityField& f : fields) {
    if (f.species != n || f.cells != grid.cells) throw DimensionError("density_csv: inconsistent fields");
    for (std::size_t c = 0; c < f.cells; ++c) {
      put(out, f.time);
      out += ',';
      put(out, grid.center(c));
      for (std::size_t i = 0; i < n; ++i) out += ',', put(out, f.r(i, c));
      out += '\n';
    }
  }
  return out;
}

std::string momentum_csv(const Grid1D& grid, std::span<const std::pair<double, LimitMomentum>> series) {
  const std::size_t n = series.empty() ? 0 : series.front().second.species;
  std::string out;
  header(out, {"t", "x"}, {{"mbar_", n}, {"ebar_", n}});
  for (const auto& [t, lm] : series) {
    if (lm.species != n || lm.cells != grid.cells) throw DimensionError("momentum_csv: inconsistent fields");
    for (std::size_t c = 0; c < lm.cells; ++c) {
      put(out, t);
      out += ',';
      put(out, grid.center(c));
      for (std::size_t i = 0; i < n; ++i) out += ',', put(out, lm.mbar[i * lm.cells + c]);
      for (std::size_t i = 0; i < n; ++i) out += ',', put(out, lm.ebar[i * lm.cells + c]);
      out += '\n';
    }
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "epsilon,t,phi,R1,R2,Q,E,l2_gap\n";
  for (const EpsilonRecord& r : result.records)
    for (std::size_t k = 0; k < r.t.size(); ++k) {
      put(out, r.epsilon);
      for (double v : {r.t[k], r.phi[k], r.r1[k], r.r2[k], r.q[k], r.e[k], r.l2_gap_series[k]}) out += ',', put(out, v);
      out += '\n';
    }
  return out;
}

std::string sweep_json(const SweepResult& result) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = "sweep";
  j["scenario"] = result.scenario;
  ordered_json records = ordered_json::array();
  for (const EpsilonRecord& r : result.records) {
    ordered_json e;
    e["epsilon"] = r.epsilon;
    e["ok"] = r.ok;
    if (!r.ok) e["failure"] = r.failure;
    ordered_json series = ordered_json::array();
    for (std::size_t k = 0; k < r.t.size(); ++k)
      series.push_back({{"t", r.t[k]}, {"phi", r.phi[k]}, {"R1", r.r1[k]}, {"R2", r.r2[k]}, {"Q", r.q[k]},
                        {"E", r.e[k]}, {"l2_gap", r.l2_gap_series[k]}});
    e["series"] = series;
    e["phi0"] = r.phi0;
    e["phi_final"] = r.phi_final;
    e["integrals"] = {{"abs_Q", r.abs_q_integral}, {"abs_E", r.abs_e_integral}, {"R_over_eps2", r.r_integral}};
    e["l2_gap"] = r.l2_gap;
    e["l2_gap_total"] = r.l2_gap_total;
    e["K1"] = r.k1;
    e["K2"] = r.k2;
    e["K"] = r.k_ratio;
    e["R1_nonnegative"] = r.r1_nonnegative;
    e["hyperbolic_steps"] = r.hyperbolic_steps;
    e["parabolic_steps"] = r.parabolic_steps;
    records.push_back(e);
  }
  j["records"] = records;
  j["observed_order"] = result.order.valid ? ordered_json(result.order.slope) : ordered_json(nullptr);
  j["order_fit"] = {{"slope", result.order.slope},
                    {"intercept", result.order.intercept},
                    {"points", result.order.points},
                    {"valid", result.order.valid}};
  j["K_estimate"] = result.k_estimate;
  ordered_json kbe = ordered_json::array();
  for (const EpsilonRecord& r : result.records) kbe.push_back(r.ok ? ordered_json(r.k_ratio) : ordered_json(nullptr));
  j["K_by_epsilon"] = kbe;
  j["K1_max"] = result.k1_max;
  j["K2_max"] = result.k2_max;
  ordered_json ratios = ordered_json::array();
  for (double v : result.coupling.ratio) ratios.push_back(finite_or_null(v));
  j["coupling_check"] = {{"c_i", 1.0},
                         {"ratio", ratios},
                         {"min_ratio", finite_or_null(result.coupling.min_ratio)},
                         {"satisfied", result.coupling.satisfied}};
  j["complete"] = result.complete;
  return j.dump(2);
}

std::string uphill_json(const UphillReport& rep) {
  using nlohmann::ordered_json;
  auto list = [](const std::vector<UphillWitness>& w) {
    ordered_json a = ordered_json::array();
    for (const UphillWitness& x : w)
      a.push_back({{"species", x.species + 1}, {"cell", x.cell}, {"x", x.x}, {"t", x.t}, {"value", x.value}});
    return a;
  };
  ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = "uphill_probe";
  j["epsilon"] = rep.epsilon;
  j["threshold"] = rep.threshold;
  j["hyperbolic"] = {{"count", rep.hyperbolic_count},
                     {"max_value", finite_or_null(rep.hyperbolic_max)},
                     {"witnesses", list(rep.hyperbolic)}};
  j["parabolic"] = {{"count", rep.parabolic_count},
                    {"max_value", finite_or_null(rep.parabolic_max)},
                    {"witnesses", list(rep.parabolic)}};
  return j.dump(2);
}

std::string identities_json(const IdentityReport& report, std::span<const double> rule_orders) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = "identity_battery";
  ordered_json checks = ordered_json::array();
  for (const IdentityCheck& c : report.checks)
    checks.push_back(
        {{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"passed", c.passed()}});
  j["checks"] = checks;
  j["calculus_rule_orders"] = std::vector<double>(rule_orders.begin(), rule_orders.end());
  j["passed"] = report.passed();
  return j.dump(2);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string() + ": cannot open for writing");
  out << content;
  if (!out) throw ConfigError(path.string() + ": write failed");
}

}  // namespace msdarcy
