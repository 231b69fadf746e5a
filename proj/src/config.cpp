#include "msdarcy/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "msdarcy/errors.hpp"

namespace msdarcy {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
  bool used = false;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt(v[k]);
  return s;
}

class Reader {
 public:
  Reader(std::string source, std::vector<Section> sections) : source_(std::move(source)), sections_(std::move(sections)) {}

  Section* find(const std::string& name) {
    for (auto& s : sections_)
      if (s.name == name) return &s;
    return nullptr;
  }
  std::vector<Section>& sections() { return sections_; }

  [[noreturn]] void fail(const std::string& path, const std::string& msg, std::size_t line = 0) const {
    std::string where = source_;
    if (line) where += ":" + std::to_string(line);
    throw ConfigError(where + ": " + path + ": " + msg);
  }

  const Entry* entry(Section* s, const std::string& key) {
    if (!s) return nullptr;
    auto it = s->entries.find(key);
    if (it == s->entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  std::optional<double> number(Section* s, const std::string& key) {
    const Entry* e = entry(s, key);
    if (!e) return std::nullopt;
    return parse_double(e->value, s->name + "." + key, e->line);
  }

  std::optional<std::size_t> count(Section* s, const std::string& key) {
    const Entry* e = entry(s, key);
    if (!e) return std::nullopt;
    std::size_t v = 0;
    const char* b = e->value.data();
    auto [p, ec] = std::from_chars(b, b + e->value.size(), v);
    if (ec != std::errc{} || p != b + e->value.size())
      fail(s->name + "." + key, "expected a non-negative integer, got '" + e->value + "'", e->line);
    return v;
  }

  std::optional<std::vector<double>> list(Section* s, const std::string& key) {
    const Entry* e = entry(s, key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    for (const std::string& item : split(e->value, ',')) out.push_back(parse_double(item, s->name + "." + key, e->line));
    return out;
  }

  std::optional<std::string> text(Section* s, const std::string& key) {
    const Entry* e = entry(s, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::optional<bool> flag(Section* s, const std::string& key) {
    const Entry* e = entry(s, key);
    if (!e) return std::nullopt;
    if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no") return false;
    fail(s->name + "." + key, "expected true or false, got '" + e->value + "'", e->line);
  }

  std::size_t line_of(Section* s, const std::string& key) const {
    if (!s) return 0;
    auto it = s->entries.find(key);
    return it == s->entries.end() ? s->line : it->second.line;
  }

  void reject_unused() const {
    for (const auto& s : sections_)
      for (const auto& [k, e] : s.entries)
        if (!e.used) fail(s.name + "." + k, "unknown key", e.line);
  }

 private:
  double parse_double(const std::string& v, const std::string& path, std::size_t line) const {
    double x = 0.0;
    const char* b = v.data();
    auto [p, ec] = std::from_chars(b, b + v.size(), x);
    if (ec != std::errc{} || p != b + v.size() || v.empty()) fail(path, "expected a number, got '" + v + "'", line);
    return x;
  }

  std::string source_;
  std::vector<Section> sections_;
};

std::vector<Section> lex(const std::string& text, const std::string& source) {
  std::vector<Section> sections;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  auto error = [&](const std::string& msg) { throw ConfigError(source + ":" + std::to_string(line) + ": " + msg); };
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') error("unterminated section header");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (name.empty()) error("empty section name");
      if (!seen.insert(name).second) error("duplicate section [" + name + "]");
      sections.push_back({name, line, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) error("expected 'key = value'");
    if (sections.empty()) error("key outside of any section");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) error("missing key before '='");
    if (value.empty()) error("missing value for '" + key + "'");
    auto& entries = sections.back().entries;
    if (entries.count(key)) error("duplicate key '" + sections.back().name + "." + key + "'");
    entries[key] = {value, line, false};
  }
  return sections;
}

std::optional<std::size_t> parse_index(const std::string& s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || v == 0) return std::nullopt;
  return v;
}

template <typename Fn>
void with_path(Reader& r, const std::string& path, std::size_t line, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    r.fail(path, e.what(), line);
  }
}

const char* name_of(Boundary b) { return b == Boundary::periodic ? "periodic" : "farfield"; }
const char* name_of(Splitting s) { return s == Splitting::lie ? "lie" : "strang"; }
const char* name_of(SourceIntegrator s) { return s == SourceIntegrator::implicit_euler ? "implicit" : "exponential"; }
const char* name_of(Reconstruction r) {
  return r == Reconstruction::first_order ? "first_order" : r == Reconstruction::minmod ? "minmod" : "van_leer";
}
const char* name_of(Profile p) { return p == Profile::bump ? "bump" : "sine"; }

template <typename E>
E choose(Reader& r, Section* s, const std::string& key, E fallback, std::initializer_list<E> options) {
  const auto v = r.text(s, key);
  if (!v) return fallback;
  std::string allowed;
  for (E o : options) {
    if (*v == name_of(o)) return o;
    allowed += (allowed.empty() ? "" : ", ") + std::string(name_of(o));
  }
  r.fail(s->name + "." + key, "expected one of " + allowed + ", got '" + *v + "'", r.line_of(s, key));
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  Reader r(source, lex(text, source));

  for (auto& s : r.sections()) {
    const auto parts = split(s.name, '.');
    const std::string& head = parts.front();
    static const std::set<std::string> plain{"mixture", "grid", "hyperbolic", "parabolic", "scenario",
                                             "sweep", "certificate", "identities", "run"};
    const bool ok = (parts.size() == 1 && plain.count(head)) || (parts.size() == 2 && head == "species") ||
                    (parts.size() == 3 && head == "lambda");
    if (!ok) r.fail("[" + s.name + "]", "unknown section", s.line);
  }

  Section* mix = r.find("mixture");
  if (!mix) r.fail("[mixture]", "section missing");
  const auto n_opt = r.count(mix, "species");
  if (!n_opt) r.fail("mixture.species", "required", mix->line);
  const std::size_t n = *n_opt;
  if (n == 0) r.fail("mixture.species", "must be >= 1", r.line_of(mix, "species"));
  const std::size_t d = r.count(mix, "dimension").value_or(1);
  if (d == 0) r.fail("mixture.dimension", "must be >= 1", r.line_of(mix, "dimension"));

  std::vector<PressureLaw> laws(n);
  std::vector<double> mobility(n);
  std::vector<Coupling> couplings;
  std::map<std::pair<std::size_t, std::size_t>, std::pair<CrossCoefficient, std::string>> pairs;
  for (auto& s : r.sections()) {
    const auto parts = split(s.name, '.');
    if (parts.front() == "species") {
      const auto i = parse_index(parts[1]);
      if (!i || *i > n) r.fail(s.name, "species index out of range (species = " + std::to_string(n) + ")", s.line);
    } else if (parts.front() == "lambda") {
      const auto i = parse_index(parts[1]);
      const auto j = parse_index(parts[2]);
      if (!i || !j || *i > n || *j > n)
        r.fail(s.name, "species index out of range (species = " + std::to_string(n) + ")", s.line);
      if (*i == *j) r.fail(s.name, "a species has no friction with itself", s.line);
      const std::string ci = "coef_" + parts[1];
      const std::string cj = "coef_" + parts[2];
      CrossCoefficient c;
      c.constant = r.number(&s, "constant").value_or(0.0);
      c.self = r.number(&s, ci).value_or(0.0);
      c.other = r.number(&s, cj).value_or(0.0);
      if (c.constant < 0.0 || c.self < 0.0 || c.other < 0.0)
        r.fail(s.name, "coefficients must be >= 0", s.line);
      const std::pair<std::size_t, std::size_t> key{std::min(*i, *j) - 1, std::max(*i, *j) - 1};
      const CrossCoefficient oriented = *i - 1 == key.first ? c : c.swapped();
      auto it = pairs.find(key);
      if (it != pairs.end()) {
        if (!(it->second.first == oriented))
          r.fail(it->second.second + " and " + s.name, "friction coefficients must be symmetric", s.line);
        continue;
      }
      pairs[key] = {oriented, s.name};
      couplings.push_back({key.first, key.second, oriented});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = "species." + std::to_string(i + 1);
    Section* s = r.find(name);
    if (!s) r.fail("[" + name + "]", "section missing");
    for (const char* key : {"k", "gamma", "mobility"})
      if (!s->entries.count(key)) r.fail(name + "." + key, "required", s->line);
    laws[i].k = *r.number(s, "k");
    laws[i].gamma = *r.number(s, "gamma");
    mobility[i] = *r.number(s, "mobility");
    with_path(r, name, s->line, [&] { laws[i].validate(); });
    if (!(mobility[i] >= 0.0)) r.fail(name + ".mobility", "must be >= 0", r.line_of(s, "mobility"));
  }

  std::optional<MixtureModel> model;
  with_path(r, "mixture", mix->line, [&] { model.emplace(d, laws, mobility, couplings); });

  Section* sc = r.find("scenario");
  Section* gr = r.find("grid");
  Section* hy = r.find("hyperbolic");
  Section* pa = r.find("parabolic");
  Section* sw = r.find("sweep");

  Scenario scenario{.name = r.text(sc, "name").value_or("custom"), .model = *model};
  scenario.base = r.list(sc, "base").value_or(std::vector<double>(n, 1.0));
  scenario.profile = choose(r, sc, "profile", Profile::bump, {Profile::bump, Profile::sine});
  const auto amplitude = r.list(sc, "amplitude").value_or(std::vector<double>(n, 0.0));
  if (scenario.profile == Profile::bump) {
    scenario.bump.amplitude = amplitude;
    scenario.bump.center = r.number(sc, "center").value_or(0.0);
    scenario.bump.radius = r.number(sc, "radius").value_or(1.0);
    for (const char* key : {"momentum", "wavenumber"})
      if (sc && sc->entries.count(key))
        r.fail(std::string("scenario.") + key, "only valid with profile = sine", r.line_of(sc, key));
  } else {
    scenario.sine.amplitude = amplitude;
    scenario.sine.momentum = r.list(sc, "momentum").value_or(std::vector<double>(n, 0.0));
    scenario.sine.wavenumber = r.number(sc, "wavenumber").value_or(1.0);
    for (const char* key : {"center", "radius"})
      if (sc && sc->entries.count(key))
        r.fail(std::string("scenario.") + key, "only valid with profile = bump", r.line_of(sc, key));
  }
  scenario.t_end = r.number(sc, "t_end").value_or(0.5);
  scenario.well_prepared = r.flag(sc, "well_prepared").value_or(true);
  scenario.checkpoints = r.count(sc, "checkpoints").value_or(20);

  scenario.grid.x_min = r.number(gr, "x_min").value_or(0.0);
  scenario.grid.x_max = r.number(gr, "x_max").value_or(1.0);
  scenario.grid.cells = r.count(gr, "cells").value_or(64);
  scenario.grid.boundary = choose(r, gr, "boundary", Boundary::periodic, {Boundary::periodic, Boundary::farfield});
  if (scenario.grid.boundary == Boundary::farfield) scenario.grid.farfield = scenario.base;

  HyperbolicConfig& hc = scenario.hyperbolic;
  hc.epsilon = r.number(hy, "epsilon").value_or(hc.epsilon);
  hc.cfl = r.number(hy, "cfl").value_or(hc.cfl);
  hc.density_floor = r.number(hy, "density_floor").value_or(hc.density_floor);
  hc.output_interval = r.number(hy, "output_interval").value_or(hc.output_interval);
  hc.max_steps = r.count(hy, "max_steps").value_or(hc.max_steps);
  hc.splitting = choose(r, hy, "splitting", hc.splitting, {Splitting::lie, Splitting::strang});
  hc.source = choose(r, hy, "source", hc.source, {SourceIntegrator::implicit_euler, SourceIntegrator::exponential});
  hc.reconstruction = choose(r, hy, "reconstruction", hc.reconstruction,
                             {Reconstruction::first_order, Reconstruction::minmod, Reconstruction::van_leer});
  hc.t_end = scenario.t_end;

  ParabolicConfig& pc = scenario.parabolic;
  pc.sigma = r.number(pa, "sigma").value_or(pc.sigma);
  pc.density_floor = r.number(pa, "density_floor").value_or(pc.density_floor);
  pc.output_interval = r.number(pa, "output_interval").value_or(pc.output_interval);
  pc.max_steps = r.count(pa, "max_steps").value_or(pc.max_steps);
  pc.t_end = scenario.t_end;

  scenario.epsilons = r.list(sw, "epsilons").value_or(scenario.epsilons);

  RunConfig cfg{.scenario = scenario};
  cfg.threads = r.count(sw, "threads").value_or(0);
  Section* id = r.find("identities");
  cfg.identity_samples = r.count(id, "samples").value_or(cfg.identity_samples);
  Section* ce = r.find("certificate");
  cfg.certificate.equilibrium = r.list(ce, "equilibrium").value_or(cfg.scenario.base);
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n && i < cfg.certificate.equilibrium.size(); ++i) {
    lo[i] = 0.5 * cfg.certificate.equilibrium[i];
    hi[i] = 2.0 * cfg.certificate.equilibrium[i];
  }
  cfg.certificate.box.rho_lo = r.list(ce, "rho_lo").value_or(lo);
  cfg.certificate.box.rho_hi = r.list(ce, "rho_hi").value_or(hi);
  cfg.certificate.box.momentum_bound = r.list(ce, "momentum_bound").value_or(std::vector<double>(n, 1.0));
  cfg.certificate.samples = r.count(ce, "samples").value_or(cfg.certificate.samples);
  Section* run = r.find("run");
  cfg.output_dir = r.text(run, "out").value_or(cfg.output_dir);
  cfg.seed = r.count(run, "seed").value_or(cfg.seed);

  r.reject_unused();

  // Shape checks carry the key path of the offending list.
  auto require_size = [&](const std::vector<double>& v, Section* s, const std::string& path, const char* key) {
    if (v.size() != n)
      r.fail(path, "expected " + std::to_string(n) + " values, got " + std::to_string(v.size()), r.line_of(s, key));
  };
  require_size(scenario.base, sc, "scenario.base", "base");
  require_size(amplitude, sc, "scenario.amplitude", "amplitude");
  if (scenario.profile == Profile::sine) require_size(scenario.sine.momentum, sc, "scenario.momentum", "momentum");
  require_size(cfg.certificate.equilibrium, ce, "certificate.equilibrium", "equilibrium");
  require_size(cfg.certificate.box.rho_lo, ce, "certificate.rho_lo", "rho_lo");
  require_size(cfg.certificate.box.rho_hi, ce, "certificate.rho_hi", "rho_hi");
  require_size(cfg.certificate.box.momentum_bound, ce, "certificate.momentum_bound", "momentum_bound");
  with_path(r, "certificate", ce ? ce->line : 0, [&] { cfg.certificate.box.validate(n); });
  if (cfg.certificate.samples == 0) r.fail("certificate.samples", "must be >= 1", r.line_of(ce, "samples"));
  if (cfg.identity_samples == 0) r.fail("identities.samples", "must be >= 1", r.line_of(id, "samples"));
  with_path(r, "grid", gr ? gr->line : 0, [&] { cfg.scenario.grid.validate(n); });
  with_path(r, "hyperbolic", hy ? hy->line : 0, [&] { cfg.scenario.hyperbolic.validate(); });
  with_path(r, "parabolic", pa ? pa->line : 0, [&] { cfg.scenario.parabolic.validate(); });
  if (d == 1 && cfg.model().has_positive_mobilities())
    with_path(r, "scenario", sc ? sc->line : 0, [&] { cfg.scenario.validate(); });
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open configuration file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

std::string to_config_text(const RunConfig& cfg) {
  const MixtureModel& m = cfg.model();
  const Scenario& s = cfg.scenario;
  const std::size_t n = m.species();
  std::ostringstream o;
  o << "[mixture]\nspecies = " << n << "\ndimension = " << m.dimension() << "\n";
  for (std::size_t i = 0; i < n; ++i)
    o << "\n[species." << i + 1 << "]\nk = " << fmt(m.law(i).k) << "\ngamma = " << fmt(m.law(i).gamma)
      << "\nmobility = " << fmt(m.mobility(i)) << "\n";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const CrossCoefficient& c = m.cross(i, j);
      if (c == CrossCoefficient{}) continue;
      o << "\n[lambda." << i + 1 << "." << j + 1 << "]\nconstant = " << fmt(c.constant) << "\ncoef_" << i + 1
        << " = " << fmt(c.self) << "\ncoef_" << j + 1 << " = " << fmt(c.other) << "\n";
    }
  o << "\n[grid]\nx_min = " << fmt(s.grid.x_min) << "\nx_max = " << fmt(s.grid.x_max) << "\ncells = " << s.grid.cells
    << "\nboundary = " << name_of(s.grid.boundary) << "\n";
  const HyperbolicConfig& h = s.hyperbolic;
  o << "\n[hyperbolic]\nepsilon = " << fmt(h.epsilon) << "\ncfl = " << fmt(h.cfl)
    << "\ndensity_floor = " << fmt(h.density_floor) << "\nsplitting = " << name_of(h.splitting)
    << "\nsource = " << name_of(h.source) << "\nreconstruction = " << name_of(h.reconstruction)
    << "\noutput_interval = " << fmt(h.output_interval) << "\nmax_steps = " << h.max_steps << "\n";
  const ParabolicConfig& p = s.parabolic;
  o << "\n[parabolic]\nsigma = " << fmt(p.sigma) << "\ndensity_floor = " << fmt(p.density_floor)
    << "\noutput_interval = " << fmt(p.output_interval) << "\nmax_steps = " << p.max_steps << "\n";
  o << "\n[scenario]\nname = " << s.name << "\nprofile = " << name_of(s.profile) << "\nbase = " << fmt_list(s.base)
    << "\n";
  if (s.profile == Profile::bump)
    o << "amplitude = " << fmt_list(s.bump.amplitude) << "\ncenter = " << fmt(s.bump.center)
      << "\nradius = " << fmt(s.bump.radius) << "\n";
  else
    o << "amplitude = " << fmt_list(s.sine.amplitude) << "\nmomentum = " << fmt_list(s.sine.momentum)
      << "\nwavenumber = " << fmt(s.sine.wavenumber) << "\n";
  o << "t_end = " << fmt(s.t_end) << "\nwell_prepared = " << (s.well_prepared ? "true" : "false")
    << "\ncheckpoints = " << s.checkpoints << "\n";
  o << "\n[sweep]\nepsilons = " << fmt_list(s.epsilons) << "\nthreads = " << cfg.threads << "\n";
  o << "\n[certificate]\nequilibrium = " << fmt_list(cfg.certificate.equilibrium)
    << "\nrho_lo = " << fmt_list(cfg.certificate.box.rho_lo) << "\nrho_hi = " << fmt_list(cfg.certificate.box.rho_hi)
    << "\nmomentum_bound = " << fmt_list(cfg.certificate.box.momentum_bound)
    << "\nsamples = " << cfg.certificate.samples << "\n";
  o << "\n[identities]\nsamples = " << cfg.identity_samples << "\n";
  o << "\n[run]\nout = " << cfg.output_dir << "\nseed = " << cfg.seed << "\n";
  return o.str();
}

}  // namespace msdarcy
