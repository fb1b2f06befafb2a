#include "qnls/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "qnls/errors.hpp"

namespace qnls {

Grid GridConfig::build() const {
  return kind == GridKind::Radial5D ? make_radial_grid(n, extent, cluster)
                                    : make_periodic_grid(n, extent);
}

EvolveOptions RunConfig::evolve_options() const {
  EvolveOptions o = evolve;
  o.sample_every = output.sample_every;
  o.snapshot_every = output.snapshot_every;
  o.virial_radius = diagnostics.virial_radius;
  return o;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"scatter-radial", "blowup-radial", "galilean-1d",
                                              "virial-radial", "groundstate-sweep"};
  return names;
}

namespace {

std::string joined_presets() {
  std::string s;
  for (const auto& n : preset_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

}  // namespace

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "scatter-radial") {
    // below threshold with K > 0: a Gaussian at 0.3 of the ground-state peak
    c.grid = {GridKind::Radial5D, 256, 30.0, kDefaultRadialCluster};
    c.initial.kind = "scaled-gaussian";
    c.initial.scale = 0.3;
    c.initial.width = 1.0;
    c.evolve.dt = 1e-3;
    c.evolve.t_end = 2.0;
    c.evolve.adapt = true;
    c.evolve.absorber_strength = 5.0;
    c.output.sample_every = 20;
  } else if (name == "blowup-radial") {
    // below threshold with K < 0: 1.1 times the ground state, on a grid
    // clustered toward the origin so the collapse stays resolved longer
    c.grid = {GridKind::Radial5D, 256, 20.0, 24.0};
    c.initial.kind = "ground-state";
    c.initial.scale = 1.1;
    c.evolve.dt = 1e-3;
    c.evolve.t_end = 1.0;
    c.evolve.adapt = true;
    c.evolve.dt_min = 1e-6;
    c.evolve.absorber_strength = 5.0;
    c.output.sample_every = 50;
  } else if (name == "galilean-1d") {
    c.grid = {GridKind::Periodic1D, 1024, 8.0 * kPi, 0.0};
    c.physics.kappa = 0.5;
    c.initial = {"gaussian", 1.0, 0.5, 1.0, 1.0, 2.0, ""};
    c.evolve.dt = 1e-3;
    c.evolve.t_end = 1.0;
    c.output.sample_every = 10;
    c.diagnostics.xi = 2.0;
    c.diagnostics.galilean_t = 1.0;
  } else if (name == "virial-radial") {
    c.grid = {GridKind::Radial5D, 256, 20.0, kDefaultRadialCluster};
    c.initial = {"gaussian", 1.0, 0.5, 1.0, 1.0, 0.0, ""};
    c.evolve.dt = 1e-3;
    c.evolve.t_end = 0.2;
    c.output.sample_every = 10;
    c.output.snapshot_every = 1;
    c.diagnostics.virial_radius = 10.0;
  } else if (name == "groundstate-sweep") {
    c.grid = {GridKind::Radial5D, 256, 20.0, kDefaultRadialCluster};
    c.sweep.kappas = {0.5, 1.0, 2.0};
    c.sweep.omegas = {0.5, 1.0, 2.0, 4.0};
  } else {
    throw ConfigError(ConfigError::Kind::UnknownChoice,
                      "unknown preset '" + name + "'; valid presets: " + joined_presets());
  }
  c.output.directory = "out/" + name;
  return c;
}

// ---------------------------------------------------------------------------
// TOML-subset parsing

namespace {

struct Value {
  std::variant<bool, double, std::string, std::vector<double>> v;
  bool integral = false;
  int line = 0;
};

struct Document {
  std::string preset;
  int preset_line = 0;
  std::map<std::string, Value> entries;  // "section.key"
};

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& what) {
  throw ConfigError(ConfigError::Kind::Parse, origin + ":" + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && in_str) {
      ++i;
      continue;
    }
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; });
}

bool parse_number(const std::string& s, double& out, bool& integral) {
  if (s.empty()) return false;
  std::string t;
  for (char c : s)
    if (c != '_') t += c;
  std::size_t pos = 0;
  try {
    out = std::stod(t, &pos);
  } catch (const std::exception&) {
    return false;
  }
  if (pos != t.size() || !std::isfinite(out)) return false;
  integral = t.find_first_of(".eE") == std::string::npos;
  return true;
}

Value parse_value(const std::string& raw, const std::string& origin, int line) {
  Value val;
  val.line = line;
  const std::string s = trim(raw);
  if (s.empty()) parse_fail(origin, line, "missing value");
  if (s == "true" || s == "false") {
    val.v = (s == "true");
    return val;
  }
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') parse_fail(origin, line, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\') {
        if (i + 2 >= s.size()) parse_fail(origin, line, "bad escape in string");
        const char e = s[++i];
        if (e == 'n') out += '\n';
        else if (e == 't') out += '\t';
        else if (e == '"' || e == '\\') out += e;
        else parse_fail(origin, line, std::string("unsupported escape \\") + e);
      } else if (s[i] == '"') {
        parse_fail(origin, line, "unexpected quote in string");
      } else {
        out += s[i];
      }
    }
    val.v = out;
    return val;
  }
  if (s.front() == '[') {
    if (s.back() != ']') parse_fail(origin, line, "unterminated array (arrays must fit on one line)");
    std::vector<double> arr;
    std::stringstream ss(s.substr(1, s.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) {
        if (ss.eof()) break;  // trailing comma
        parse_fail(origin, line, "empty array element");
      }
      double x;
      bool integral;
      if (!parse_number(item, x, integral)) parse_fail(origin, line, "array elements must be numbers, got '" + item + "'");
      arr.push_back(x);
    }
    val.v = arr;
    return val;
  }
  double x;
  if (!parse_number(s, x, val.integral)) parse_fail(origin, line, "cannot parse value '" + s + "'");
  val.v = x;
  return val;
}

Document parse_document(const std::string& text, const std::string& origin) {
  Document doc;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') parse_fail(origin, line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!valid_key(section)) parse_fail(origin, line, "invalid section name '" + section + "'");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) parse_fail(origin, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    if (!valid_key(key)) parse_fail(origin, line, "invalid key '" + key + "'");
    Value val = parse_value(s.substr(eq + 1), origin, line);
    if (section.empty()) {
      if (key != "preset") parse_fail(origin, line, "only 'preset' may appear before the first section");
      if (!std::holds_alternative<std::string>(val.v)) parse_fail(origin, line, "preset must be a string");
      if (doc.preset_line) parse_fail(origin, line, "duplicate key 'preset'");
      doc.preset = std::get<std::string>(val.v);
      doc.preset_line = line;
      continue;
    }
    const std::string full = section + "." + key;
    if (doc.entries.count(full)) parse_fail(origin, line, "duplicate key '" + full + "'");
    doc.entries.emplace(full, std::move(val));
  }
  return doc;
}

// Applies document entries onto a RunConfig, consuming each key it knows.
class Binder {
 public:
  Binder(Document& doc, const std::string& origin) : doc_(doc), origin_(origin) {}

  void real(const std::string& key, double& target) {
    if (auto* v = take(key)) {
      if (!std::holds_alternative<double>(v->v)) type_fail(key, *v, "a number");
      target = std::get<double>(v->v);
    }
  }
  void integer(const std::string& key, int& target) {
    if (auto* v = take(key)) {
      if (!std::holds_alternative<double>(v->v) || !v->integral) type_fail(key, *v, "an integer");
      const double x = std::get<double>(v->v);
      if (std::abs(x) > 1e9) range_fail(key, *v, "is out of range");
      target = static_cast<int>(x);
    }
  }
  void boolean(const std::string& key, bool& target) {
    if (auto* v = take(key)) {
      if (!std::holds_alternative<bool>(v->v)) type_fail(key, *v, "true or false");
      target = std::get<bool>(v->v);
    }
  }
  void string(const std::string& key, std::string& target) {
    if (auto* v = take(key)) {
      if (!std::holds_alternative<std::string>(v->v)) type_fail(key, *v, "a string");
      target = std::get<std::string>(v->v);
    }
  }
  void reals(const std::string& key, std::vector<double>& target) {
    if (auto* v = take(key)) {
      if (!std::holds_alternative<std::vector<double>>(v->v)) type_fail(key, *v, "an array of numbers");
      target = std::get<std::vector<double>>(v->v);
    }
  }
  template <class E, class F>
  void choice(const std::string& key, E& target, F&& from_string, const std::string& choices) {
    std::string s;
    if (auto* v = peek(key)) {
      string(key, s);
      try {
        target = from_string(s);
      } catch (const InvalidParameter&) {
        throw ConfigError(ConfigError::Kind::UnknownChoice,
                          where(key, *v) + ": unknown value '" + s + "'; valid values: " + choices);
      }
    }
  }

  void finish() {
    for (const auto& [key, v] : doc_.entries)
      if (!used_.count(key)) parse_fail(origin_, v.line, "unknown key '" + key + "'");
  }

  std::map<std::string, int> lines() const {
    std::map<std::string, int> out;
    for (const auto& [k, v] : doc_.entries) out[k] = v.line;
    return out;
  }

 private:
  Value* peek(const std::string& key) {
    auto it = doc_.entries.find(key);
    return it == doc_.entries.end() ? nullptr : &it->second;
  }
  Value* take(const std::string& key) {
    used_[key] = true;
    return peek(key);
  }
  std::string where(const std::string& key, const Value& v) const {
    return origin_ + ":" + std::to_string(v.line) + ": " + key;
  }
  [[noreturn]] void type_fail(const std::string& key, const Value& v, const std::string& want) const {
    throw ConfigError(ConfigError::Kind::Parse, where(key, v) + " must be " + want);
  }
  [[noreturn]] void range_fail(const std::string& key, const Value& v, const std::string& what) const {
    throw ConfigError(ConfigError::Kind::Range, where(key, v) + " " + what);
  }

  Document& doc_;
  std::string origin_;
  std::map<std::string, bool> used_;
};

void bind_grid(Binder& b, const std::string& sec, GridConfig& g) {
  b.choice(sec + ".kind", g.kind, grid_kind_from_string, "radial5d, periodic1d");
  b.integer(sec + ".n", g.n);
  b.real(sec + ".extent", g.extent);
  b.real(sec + ".cluster", g.cluster);
}

void bind_all(Binder& b, RunConfig& c) {
  bind_grid(b, "grid", c.grid);

  b.real("physics.kappa", c.physics.kappa);
  b.real("physics.omega", c.physics.omega);

  auto& in = c.initial;
  b.string("initial.kind", in.kind);
  b.real("initial.amplitude", in.amplitude);
  b.real("initial.v_amplitude", in.v_amplitude);
  b.real("initial.width", in.width);
  b.real("initial.scale", in.scale);
  b.real("initial.xi", in.xi);
  b.string("initial.checkpoint", in.checkpoint);

  auto& gs = c.ground_state;
  bind_grid(b, "ground_state", gs.grid);
  b.integer("ground_state.max_iter", gs.solver.max_iter);
  b.real("ground_state.residual_tol", gs.solver.residual_tol);
  b.real("ground_state.pohozaev_tol", gs.solver.pohozaev_tol);
  b.real("ground_state.initial_amplitude", gs.solver.initial_amplitude);
  b.reals("ground_state.widths", gs.widths);

  auto& e = c.evolve;
  b.choice("evolve.scheme", e.scheme, scheme_from_string, "strang, yoshida4");
  b.real("evolve.dt", e.dt);
  b.real("evolve.t_end", e.t_end);
  b.boolean("evolve.adapt", e.adapt);
  b.real("evolve.dt_min", e.dt_min);
  b.real("evolve.absorber_strength", e.absorber_strength);
  b.real("evolve.absorber_start_fraction", e.absorber_start_fraction);
  b.real("evolve.nonlinear_cfl", e.nonlinear_cfl);
  b.real("evolve.blowup_growth", e.blowup_growth);

  auto& d = c.diagnostics;
  b.real("diagnostics.virial_radius", d.virial_radius);
  b.real("diagnostics.n_remnant", d.classifier.n_remnant);
  b.real("diagnostics.l_stabilization", d.classifier.l_stabilization);
  b.real("diagnostics.s_saturation", d.classifier.s_saturation);
  b.real("diagnostics.final_fraction", d.classifier.final_fraction);
  b.real("diagnostics.xi", d.xi);
  b.real("diagnostics.galilean_t", d.galilean_t);
  b.real("diagnostics.virial_tol", d.virial_tol);
  b.real("diagnostics.covariance_tol", d.covariance_tol);
  b.real("diagnostics.x_of_t_tol", d.x_of_t_tol);

  b.string("output.directory", c.output.directory);
  b.integer("output.sample_every", c.output.sample_every);
  b.integer("output.snapshot_every", c.output.snapshot_every);

  b.reals("sweep.kappas", c.sweep.kappas);
  b.reals("sweep.omegas", c.sweep.omegas);
  b.real("sweep.product_tol", c.sweep.product_tol);
}

const std::vector<std::string> kInitialKinds{"zero", "gaussian", "scaled-gaussian", "ground-state",
                                             "checkpoint"};

using LineMap = std::map<std::string, int>;

void validate_impl(const RunConfig& c, const LineMap* lines, const std::string& origin) {
  auto check = [&](bool ok, const std::string& key, const std::string& what) {
    if (ok) return;
    std::string loc = key;
    if (lines) {
      auto it = lines->find(key);
      loc = it != lines->end() ? origin + ":" + std::to_string(it->second) + ": " + key
                               : origin + ": " + key + " (default or preset value)";
    }
    throw ConfigError(ConfigError::Kind::Range, loc + " " + what);
  };
  auto pos = [](double x) { return std::isfinite(x) && x > 0.0; };
  auto pow2 = [](int n) { return n >= 16 && (n & (n - 1)) == 0; };

  auto check_grid = [&](const GridConfig& g, const std::string& sec) {
    if (g.kind == GridKind::Radial5D)
      check(g.n >= 16, sec + ".n", "must be >= 16");
    else
      check(pow2(g.n), sec + ".n", "must be a power of two >= 16");
    check(pos(g.extent), sec + ".extent", "must be finite and > 0");
    check(std::isfinite(g.cluster) && g.cluster >= 0.0, sec + ".cluster", "must be >= 0");
  };
  check_grid(c.grid, "grid");
  check_grid(c.ground_state.grid, "ground_state");
  check(c.ground_state.grid.kind == GridKind::Radial5D, "ground_state.kind", "must be radial5d");

  check(pos(c.physics.kappa), "physics.kappa", "must be finite and > 0");
  check(pos(c.physics.omega), "physics.omega", "must be finite and > 0");

  const auto& in = c.initial;
  if (std::find(kInitialKinds.begin(), kInitialKinds.end(), in.kind) == kInitialKinds.end()) {
    std::string all;
    for (const auto& k : kInitialKinds) all += (all.empty() ? "" : ", ") + k;
    std::string loc = "initial.kind";
    if (lines && lines->count(loc)) loc = origin + ":" + std::to_string(lines->at(loc)) + ": " + loc;
    throw ConfigError(ConfigError::Kind::UnknownChoice,
                      loc + ": unknown value '" + in.kind + "'; valid values: " + all);
  }
  check(std::isfinite(in.amplitude), "initial.amplitude", "must be finite");
  check(std::isfinite(in.v_amplitude), "initial.v_amplitude", "must be finite");
  check(pos(in.width), "initial.width", "must be finite and > 0");
  check(std::isfinite(in.scale) && in.scale >= 0.0, "initial.scale", "must be finite and >= 0");
  check(std::isfinite(in.xi), "initial.xi", "must be finite");
  check(in.xi == 0.0 || c.grid.kind == GridKind::Periodic1D, "initial.xi", "is only allowed on periodic grids");
  check(in.kind == "zero" || in.kind == "gaussian" || c.grid.kind == GridKind::Radial5D, "initial.kind",
        "must be zero or gaussian on periodic grids");
  if (in.kind == "checkpoint") {
    check(!in.checkpoint.empty(), "initial.checkpoint", "is required when initial.kind = \"checkpoint\"");
    if (!std::ifstream(in.checkpoint))
      throw ConfigError(ConfigError::Kind::MissingFile, "initial.checkpoint: file not found: " + in.checkpoint);
  }

  const auto& s = c.ground_state.solver;
  check(s.max_iter >= 1, "ground_state.max_iter", "must be >= 1");
  check(pos(s.residual_tol), "ground_state.residual_tol", "must be > 0");
  check(pos(s.pohozaev_tol), "ground_state.pohozaev_tol", "must be > 0");
  check(std::isfinite(s.initial_amplitude) && s.initial_amplitude >= 0.0, "ground_state.initial_amplitude",
        "must be >= 0");
  check(!c.ground_state.widths.empty(), "ground_state.widths", "must not be empty");
  for (double w : c.ground_state.widths) check(pos(w), "ground_state.widths", "entries must be > 0");

  const auto& e = c.evolve;
  check(pos(e.dt), "evolve.dt", "must be finite and > 0");
  check(pos(e.t_end), "evolve.t_end", "must be finite and > 0");
  check(pos(e.dt_min) && e.dt_min <= e.dt, "evolve.dt_min", "must be in (0, evolve.dt]");
  check(std::isfinite(e.absorber_strength) && e.absorber_strength >= 0.0, "evolve.absorber_strength",
        "must be >= 0");
  check(e.absorber_start_fraction > 0.0 && e.absorber_start_fraction < 1.0, "evolve.absorber_start_fraction",
        "must be in (0, 1)");
  check(std::isfinite(e.nonlinear_cfl) && e.nonlinear_cfl >= 0.0, "evolve.nonlinear_cfl", "must be >= 0");
  check(std::isfinite(e.blowup_growth) && e.blowup_growth > 1.0, "evolve.blowup_growth", "must be > 1");

  const auto& d = c.diagnostics;
  check(std::isfinite(d.virial_radius) && d.virial_radius >= 0.0, "diagnostics.virial_radius", "must be >= 0");
  check(d.classifier.n_remnant > 0.0 && d.classifier.n_remnant < 1.0, "diagnostics.n_remnant", "must be in (0, 1)");
  check(pos(d.classifier.l_stabilization), "diagnostics.l_stabilization", "must be > 0");
  check(pos(d.classifier.s_saturation), "diagnostics.s_saturation", "must be > 0");
  check(d.classifier.final_fraction > 0.0 && d.classifier.final_fraction < 1.0, "diagnostics.final_fraction",
        "must be in (0, 1)");
  check(std::isfinite(d.xi), "diagnostics.xi", "must be finite");
  check(pos(d.galilean_t), "diagnostics.galilean_t", "must be > 0");
  check(pos(d.virial_tol), "diagnostics.virial_tol", "must be > 0");
  check(pos(d.covariance_tol), "diagnostics.covariance_tol", "must be > 0");
  check(pos(d.x_of_t_tol), "diagnostics.x_of_t_tol", "must be > 0");

  check(!c.output.directory.empty(), "output.directory", "must not be empty");
  check(c.output.sample_every >= 1, "output.sample_every", "must be >= 1");
  check(c.output.snapshot_every >= 0, "output.snapshot_every", "must be >= 0");

  check(!c.sweep.kappas.empty(), "sweep.kappas", "must not be empty");
  check(!c.sweep.omegas.empty(), "sweep.omegas", "must not be empty");
  for (double k : c.sweep.kappas) check(pos(k), "sweep.kappas", "entries must be > 0");
  for (double w : c.sweep.omegas) check(pos(w), "sweep.omegas", "entries must be > 0");
  check(pos(c.sweep.product_tol), "sweep.product_tol", "must be > 0");
}

}  // namespace

void validate_config(const RunConfig& cfg) { validate_impl(cfg, nullptr, ""); }

RunConfig parse_config(const std::string& text, const std::string& origin) {
  Document doc = parse_document(text, origin);
  RunConfig cfg;
  if (!doc.preset.empty()) {
    try {
      cfg = preset_config(doc.preset);
    } catch (const ConfigError& e) {
      throw ConfigError(e.kind(), origin + ":" + std::to_string(doc.preset_line) + ": " + e.what());
    }
  }
  Binder b(doc, origin);
  bind_all(b, cfg);
  b.finish();
  const auto lines = b.lines();
  validate_impl(cfg, &lines, origin);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(ConfigError::Kind::MissingFile, "config file not found or unreadable: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

namespace {

std::string num(double x) {
  // shortest text that reads back to the same double
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  // keep floats recognizably non-integral so they read back as reals
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '\t') {
      out += "\\t";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string arr(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + "]";
}

void dump_grid(std::ostringstream& o, const GridConfig& g) {
  o << "kind = " << quoted(to_string(g.kind)) << "\n"
    << "n = " << g.n << "\n"
    << "extent = " << num(g.extent) << "\n"
    << "cluster = " << num(g.cluster) << "\n";
}

}  // namespace

std::string dump_config(const RunConfig& c) {
  std::ostringstream o;
  if (!c.preset.empty()) o << "preset = " << quoted(c.preset) << "\n\n";
  o << "[grid]\n";
  dump_grid(o, c.grid);
  o << "\n[physics]\n"
    << "kappa = " << num(c.physics.kappa) << "\n"
    << "omega = " << num(c.physics.omega) << "\n";
  const auto& in = c.initial;
  o << "\n[initial]\n"
    << "kind = " << quoted(in.kind) << "\n"
    << "amplitude = " << num(in.amplitude) << "\n"
    << "v_amplitude = " << num(in.v_amplitude) << "\n"
    << "width = " << num(in.width) << "\n"
    << "scale = " << num(in.scale) << "\n"
    << "xi = " << num(in.xi) << "\n"
    << "checkpoint = " << quoted(in.checkpoint) << "\n";
  const auto& gs = c.ground_state;
  o << "\n[ground_state]\n";
  dump_grid(o, gs.grid);
  o << "max_iter = " << gs.solver.max_iter << "\n"
    << "residual_tol = " << num(gs.solver.residual_tol) << "\n"
    << "pohozaev_tol = " << num(gs.solver.pohozaev_tol) << "\n"
    << "initial_amplitude = " << num(gs.solver.initial_amplitude) << "\n"
    << "widths = " << arr(gs.widths) << "\n";
  const auto& e = c.evolve;
  o << "\n[evolve]\n"
    << "scheme = " << quoted(to_string(e.scheme)) << "\n"
    << "dt = " << num(e.dt) << "\n"
    << "t_end = " << num(e.t_end) << "\n"
    << "adapt = " << (e.adapt ? "true" : "false") << "\n"
    << "dt_min = " << num(e.dt_min) << "\n"
    << "absorber_strength = " << num(e.absorber_strength) << "\n"
    << "absorber_start_fraction = " << num(e.absorber_start_fraction) << "\n"
    << "nonlinear_cfl = " << num(e.nonlinear_cfl) << "\n"
    << "blowup_growth = " << num(e.blowup_growth) << "\n";
  const auto& d = c.diagnostics;
  o << "\n[diagnostics]\n"
    << "virial_radius = " << num(d.virial_radius) << "\n"
    << "n_remnant = " << num(d.classifier.n_remnant) << "\n"
    << "l_stabilization = " << num(d.classifier.l_stabilization) << "\n"
    << "s_saturation = " << num(d.classifier.s_saturation) << "\n"
    << "final_fraction = " << num(d.classifier.final_fraction) << "\n"
    << "xi = " << num(d.xi) << "\n"
    << "galilean_t = " << num(d.galilean_t) << "\n"
    << "virial_tol = " << num(d.virial_tol) << "\n"
    << "covariance_tol = " << num(d.covariance_tol) << "\n"
    << "x_of_t_tol = " << num(d.x_of_t_tol) << "\n";
  o << "\n[output]\n"
    << "directory = " << quoted(c.output.directory) << "\n"
    << "sample_every = " << c.output.sample_every << "\n"
    << "snapshot_every = " << c.output.snapshot_every << "\n";
  o << "\n[sweep]\n"
    << "kappas = " << arr(c.sweep.kappas) << "\n"
    << "omegas = " << arr(c.sweep.omegas) << "\n"
    << "product_tol = " << num(c.sweep.product_tol) << "\n";
  return o.str();
}

}  // namespace qnls
