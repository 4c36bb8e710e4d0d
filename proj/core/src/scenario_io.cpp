#include "flocksim/scenario_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "flocksim/errors.hpp"

namespace flocksim {

namespace {

enum class Dim {
  None,       // dimensionless
  Length,     // m
  Time,       // s
  Velocity,   // m/s
  Accel,      // m/s^2
  Mass,       // kg
  GravParam,  // m^3/s^2
  Force,      // N
};

std::optional<double> unit_factor(Dim dim, const std::string& unit) {
  switch (dim) {
    case Dim::None:
      if (unit.empty()) return 1.0;
      return std::nullopt;
    case Dim::Length:
      if (unit == "m") return 1.0;
      if (unit == "km") return 1e3;
      return std::nullopt;
    case Dim::Time:
      if (unit == "s") return 1.0;
      if (unit == "min") return 60.0;
      return std::nullopt;
    case Dim::Velocity:
      if (unit == "m/s") return 1.0;
      if (unit == "km/s") return 1e3;
      return std::nullopt;
    case Dim::Accel:
      if (unit == "m/s^2") return 1.0;
      return std::nullopt;
    case Dim::Mass:
      if (unit == "kg") return 1.0;
      return std::nullopt;
    case Dim::GravParam:
      if (unit == "m^3/s^2") return 1.0;
      if (unit == "km^3/s^2") return 1e9;
      return std::nullopt;
    case Dim::Force:
      if (unit == "N") return 1.0;
      return std::nullopt;
  }
  return std::nullopt;
}

std::string dim_name(Dim dim) {
  switch (dim) {
    case Dim::None: return "a dimensionless number";
    case Dim::Length: return "a length (m, km)";
    case Dim::Time: return "a time (s, min)";
    case Dim::Velocity: return "a velocity (m/s, km/s)";
    case Dim::Accel: return "an acceleration (m/s^2)";
    case Dim::Mass: return "a mass (kg)";
    case Dim::GravParam: return "a gravitational parameter (m^3/s^2, km^3/s^2)";
    case Dim::Force: return "a force (N)";
  }
  return "?";
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool parse_number(const std::string& tok, double& out) {
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

struct RawValue {
  std::string text;
  int line = 0;
  mutable bool consumed = false;
};

class Section {
 public:
  Section(std::string name, std::string file) : name_(std::move(name)), file_(std::move(file)) {}

  void add(const std::string& key, const std::string& value, int line) {
    if (values_.count(key))
      throw ConfigError(path(key) + ": duplicate key (line " +
                        std::to_string(line) + ")");
    values_[key] = {value, line, false};
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string path(const std::string& key) const { return name_ + "." + key; }

  const RawValue* find(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return nullptr;
    it->second.consumed = true;
    return &it->second;
  }

  const RawValue& require(const std::string& key) const {
    const RawValue* v = find(key);
    if (!v) throw ConfigError(path(key) + ": missing required key");
    return *v;
  }

  // scalar with unit
  double quantity(const std::string& key, Dim dim) const {
    return parse_quantity(require(key), key, dim);
  }
  double quantity_or(const std::string& key, Dim dim, double fallback) const {
    const RawValue* v = find(key);
    return v ? parse_quantity(*v, key, dim) : fallback;
  }

  Vec vec3(const std::string& key, Dim dim) const {
    const RawValue& v = require(key);
    auto toks = split_ws(v.text);
    std::string unit;
    if (dim != Dim::None) {
      if (toks.empty()) throw unit_error(key, dim);
      double probe;
      if (!parse_number(toks.back(), probe)) {
        unit = toks.back();
        toks.pop_back();
      }
    }
    const auto factor = unit_factor(dim, unit);
    if (!factor) throw unit_error(key, dim);
    if (toks.size() != 3)
      throw ConfigError(path(key) + ": expected 3 components (line " +
                        std::to_string(v.line) + ")");
    Vec out(3);
    for (int k = 0; k < 3; ++k) {
      double x;
      if (!parse_number(toks[k], x))
        throw ConfigError(path(key) + ": bad number '" + toks[k] +
                          "' (line " + std::to_string(v.line) + ")");
      out(k) = x * *factor;
    }
    return out;
  }

  std::string word(const std::string& key) const {
    const RawValue& v = require(key);
    auto toks = split_ws(v.text);
    if (toks.size() != 1)
      throw ConfigError(path(key) + ": expected a single word (line " +
                        std::to_string(v.line) + ")");
    return toks[0];
  }
  std::string word_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? word(key) : fallback;
  }

  long integer(const std::string& key) const {
    const double x = quantity(key, Dim::None);
    const long n = static_cast<long>(x);
    if (static_cast<double>(n) != x)
      throw ConfigError(path(key) + ": expected an integer");
    return n;
  }
  long integer_or(const std::string& key, long fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  void finish() const {
    for (const auto& [key, v] : values_) {
      if (!v.consumed)
        throw ConfigError(path(key) + ": unknown or inapplicable key (line " +
                          std::to_string(v.line) + ")");
    }
  }

 private:
  ConfigError unit_error(const std::string& key, Dim dim) const {
    return ConfigError(path(key) + ": unit mismatch, expected " + dim_name(dim));
  }

  double parse_quantity(const RawValue& v, const std::string& key, Dim dim) const {
    auto toks = split_ws(v.text);
    double x;
    if (toks.size() == 1 && parse_number(toks[0], x)) {
      if (dim != Dim::None) throw unit_error(key, dim);
      return x;
    }
    if (toks.size() == 2 && parse_number(toks[0], x)) {
      const auto factor = unit_factor(dim, toks[1]);
      if (!factor) throw unit_error(key, dim);
      return x * *factor;
    }
    if (!toks.empty() && parse_number(toks[0], x)) throw unit_error(key, dim);
    throw ConfigError(path(key) + ": bad value '" + v.text + "' (line " +
                      std::to_string(v.line) + ")");
  }

  std::string name_;
  std::string file_;
  std::map<std::string, RawValue> values_;
};

std::map<std::string, Section> read_sections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open scenario file: " + path.string());
  static const char* kKnown[] = {"plant",      "leader",      "potential",
                                 "controller", "integration", "output"};
  std::map<std::string, Section> sections;
  for (const char* s : kKnown) sections.emplace(s, Section(s, path.string()));

  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (!sections.count(current))
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": unknown section [" + current + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
    if (current.empty())
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": empty key or value");
    sections.at(current).add(key, value, lineno);
  }
  return sections;
}

LeaderTrajectory parse_leader(const Section& s) {
  LeaderTrajectory traj;
  const std::string kind = s.word("kind");
  traj.q_initial = s.vec3("position", Dim::Length);
  if (kind == "constant_velocity") {
    traj.kind = LeaderTrajectory::Kind::ConstantVelocity;
    traj.v_initial = s.vec3("velocity", Dim::Velocity);
  } else if (kind == "sinusoidal") {
    traj.kind = LeaderTrajectory::Kind::Sinusoidal;
    traj.amplitude = s.quantity("amplitude", Dim::Velocity);
    traj.period = s.quantity("period", Dim::Time);
    traj.vertical_rate = s.quantity("vertical_rate", Dim::Velocity);
  } else if (kind == "custom_table") {
    traj.kind = LeaderTrajectory::Kind::CustomTable;
    traj.v_initial = s.vec3("velocity", Dim::Velocity);
    for (int k = 1;; ++k) {
      const std::string key = "segment_" + std::to_string(k);
      if (!s.has(key)) break;
      const RawValue& raw = *s.find(key);
      const auto colon = raw.text.find(':');
      if (colon == std::string::npos)
        throw ConfigError(s.path(key) +
                          ": expected '<start> s : <ax> <ay> <az> m/s^2'");
      // reuse the quantity machinery through a scratch section
      Section scratch("leader", "");
      scratch.add(key + ".start", trim(raw.text.substr(0, colon)), raw.line);
      scratch.add(key + ".accel", trim(raw.text.substr(colon + 1)), raw.line);
      LeaderTrajectory::AccelSegment seg;
      seg.t_start = scratch.quantity(key + ".start", Dim::Time);
      seg.accel = scratch.vec3(key + ".accel", Dim::Accel);
      traj.segments.push_back(std::move(seg));
    }
    if (traj.segments.empty())
      throw ConfigError("leader.segment_1: missing required key");
  } else {
    throw ConfigError("leader.kind: unknown kind '" + kind + "'");
  }
  return traj;
}

ControllerParams parse_controller(const Section& s, int ptheta) {
  ControllerParams c;
  const std::string kind = s.word("kind");
  c.Gamma = s.quantity_or("Gamma", Dim::None, 5.0) * Mat::Identity(ptheta, ptheta);
  auto sgn = [&] {
    const std::string mode = s.word_or("sgn_mode", "tanh");
    if (mode == "tanh") {
      c.sgn_mode = SgnMode::Tanh;
      c.tanh_k = s.quantity_or("tanh_k", Dim::None, 1000.0);
    } else if (mode == "exact") {
      c.sgn_mode = SgnMode::Exact;
    } else {
      throw ConfigError("controller.sgn_mode: must be 'tanh' or 'exact'");
    }
  };
  if (kind == "const_vel") {
    c.kind = ControllerKind::ConstVel;
    c.gamma = s.quantity("gamma", Dim::None);
  } else if (kind == "varying") {
    c.kind = ControllerKind::Varying;
    c.alpha = s.quantity("alpha", Dim::None);
    sgn();
  } else if (kind == "adaptive") {
    c.kind = ControllerKind::Adaptive;
    c.gamma1 = s.quantity("gamma1", Dim::None);
    c.gamma2 = s.quantity("gamma2", Dim::None);
    sgn();
    const std::string law = s.word_or("gain_law", "per_edge");
    if (law == "per_edge") {
      c.gain_law = GainLaw::PerEdge;
    } else if (law == "printed") {
      c.gain_law = GainLaw::Printed;
    } else {
      throw ConfigError("controller.gain_law: must be 'per_edge' or 'printed'");
    }
  } else {
    throw ConfigError("controller.kind: unknown kind '" + kind + "'");
  }
  return c;
}

}  // namespace

Scenario parse_scenario(const std::filesystem::path& path) {
  auto sections = read_sections(path);
  const Section& plant = sections.at("plant");
  const Section& leader = sections.at("leader");
  const Section& potential = sections.at("potential");
  const Section& controller = sections.at("controller");
  const Section& integration = sections.at("integration");
  const Section& output = sections.at("output");

  Scenario sc;
  sc.name = path.stem().string();

  const std::string model = plant.word("model");
  if (model != "spacecraft")
    throw ConfigError("plant.model: unknown model '" + model + "'");
  const long n = plant.integer("followers");
  if (n < 1) throw ConfigError("plant.followers: must be >= 1");
  const double r0 = plant.quantity("r0", Dim::Length);
  const double mu = plant.quantity_or("mu_earth", Dim::GravParam, 3.986004418e14);
  for (long i = 1; i <= n; ++i) {
    const std::string suffix = "_" + std::to_string(i);
    SpacecraftParams params;
    params.mass = plant.quantity("mass" + suffix, Dim::Mass);
    params.r0 = r0;
    params.mu_earth = mu;
    sc.plants.push_back(std::make_shared<SpacecraftPlant>(params));
    sc.q_initial.push_back(plant.vec3("position" + suffix, Dim::Length));
    sc.qd_initial.push_back(plant.vec3("velocity" + suffix, Dim::Velocity));
  }

  sc.leader = parse_leader(leader);

  sc.potential.R = potential.quantity("R", Dim::Length);
  sc.potential.dbar = potential.quantity("dbar", Dim::Length);
  sc.potential.smooth_scale =
      potential.quantity_or("smooth_scale", Dim::None, 250.0);
  sc.potential.barrier_scale =
      potential.quantity_or("barrier_scale", Dim::None, 25.0);

  sc.controller = parse_controller(controller, sc.plants[0]->param_dim());
  if (sc.controller.kind == ControllerKind::Adaptive) {
    sc.alpha_bar = controller.quantity_or("alpha_bar", Dim::None, 0.0);
    sc.beta_bar = controller.quantity_or("beta_bar", Dim::None, 0.0);
  }

  sc.dt = integration.quantity("dt", Dim::Time);
  sc.t_end = integration.quantity("t_end", Dim::Time);
  sc.gradient_cap = integration.quantity_or("gradient_cap", Dim::Force, 1000.0);

  sc.decimation = static_cast<int>(output.integer_or("decimation", 10));

  for (const auto& [name, section] : sections) section.finish();

  sc.validate();
  if (sc.t_end < sc.dt)
    throw ConfigError("integration.t_end: must be >= integration.dt");
  return sc;
}

Scenario spacecraft_case(int which) {
  if (which < 1 || which > 3)
    throw ContractViolation("spacecraft_case: which must be 1, 2 or 3");
  Scenario sc;
  sc.name = "case" + std::to_string(which);
  for (int i = 1; i <= 4; ++i) {
    SpacecraftParams params;
    params.mass = 30.0 + 5.0 * i;
    params.r0 = 7000e3;
    params.mu_earth = 3.986004418e14;
    sc.plants.push_back(std::make_shared<SpacecraftPlant>(params));
  }
  auto v3 = [](double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
  };
  sc.q_initial = {v3(-80, 90, 0), v3(100, 90, 0), v3(100, -100, 0),
                  v3(-80, -100, 0)};
  sc.qd_initial = {v3(0, 0, 0), v3(0, 0, 0), v3(0, 0, 0), v3(0, 0, 0)};

  sc.leader.q_initial = v3(-80, 200, 0);
  if (which == 1) {
    sc.leader.kind = LeaderTrajectory::Kind::ConstantVelocity;
    sc.leader.v_initial = v3(0.1, 0.1, 0.2);
  } else {
    sc.leader.kind = LeaderTrajectory::Kind::Sinusoidal;
    sc.leader.amplitude = 0.1;
    sc.leader.period = 60.0;
    sc.leader.vertical_rate = 0.2;
  }

  sc.potential = PotentialParams{};  // R = 200 m, dbar = 80 m, 250/25 scales

  sc.controller.Gamma = 5.0 * Mat::Identity(1, 1);
  if (which == 1) {
    sc.controller.kind = ControllerKind::ConstVel;
    sc.controller.gamma = 0.04;
  } else if (which == 2) {
    sc.controller.kind = ControllerKind::Varying;
    sc.controller.alpha = 0.04;
    sc.controller.sgn_mode = SgnMode::Tanh;
    sc.controller.tanh_k = 1000.0;
  } else {
    sc.controller.kind = ControllerKind::Adaptive;
    sc.controller.gamma1 = 0.003;
    sc.controller.gamma2 = 0.003;
    sc.controller.sgn_mode = SgnMode::Tanh;
    sc.controller.tanh_k = 1000.0;
    sc.controller.gain_law = GainLaw::PerEdge;
  }

  sc.dt = 0.01;
  sc.t_end = 300.0;
  sc.gradient_cap = 1000.0;
  sc.decimation = 10;
  return sc;
}

}  // namespace flocksim
