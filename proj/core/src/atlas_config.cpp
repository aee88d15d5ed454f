#include "blockade/atlas.hpp"
#include "blockade/errors.hpp"
#include "overload.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace blockade {

using detail::overload;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double number(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
  }
}

int integer(const std::string& key, const std::string& v) {
  const double x = number(key, v);
  if (x != std::floor(x)) throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

SystemParams system_from(const std::string& v) {
  if (v == "RF") return RF{};
  if (v == "AO") return AO{};
  if (v == "JC") return JC{};
  if (v == "POL") return POL{};
  throw ConfigError("unknown system '" + v + "' (expected RF, AO, JC or POL)");
}

Axis parse_axis(const std::string& v) {
  const auto w = words(v);
  if (w.size() != 4 && w.size() != 5) throw ConfigError("axis: expected '<param> <min> <max> <count> [linear|log]'");
  Axis a;
  a.param = w[0];
  a.min = number("axis", w[1]);
  a.max = number("axis", w[2]);
  a.count = integer("axis", w[3]);
  if (w.size() == 5) {
    if (w[4] == "log") a.log = true;
    else if (w[4] != "linear") throw ConfigError("axis scale must be linear or log");
  }
  if (a.count < 2) throw ConfigError("axis '" + a.param + "': count must be at least 2");
  if (a.log && !(a.min > 0 && a.max > 0)) throw ConfigError("axis '" + a.param + "': log axes need positive bounds");
  return a;
}

bool observable_known(const std::string& o) {
  if (o == "n" || o == "I0" || o == "I1" || o == "I2") return true;
  if (o.size() == 2 && o[0] == 'g' && o[1] >= '2' && o[1] <= '6') return true;
  if (o.size() == 2 && o[0] == 'J' && o[1] >= '0' && o[1] <= '4') return true;
  if (o.rfind("n_norm(", 0) == 0 && o.back() == ')') {
    const std::string k = o.substr(7, o.size() - 8);
    return k.size() == 1 && k[0] >= '1' && k[0] <= '5';
  }
  return false;
}

}  // namespace

std::vector<double> Axis::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    const double t = double(i) / (count - 1);
    v[i] = log ? min * std::pow(max / min, t) : min + (max - min) * t;
  }
  return v;
}

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::analytic: return "analytic";
    case Engine::recursive: return "recursive";
    case Engine::liouvillian: return "liouvillian";
    case Engine::wavefunction: return "wavefunction";
  }
  return "?";
}

void ParamPoint::set(const std::string& name, double v) {
  if (name == "laser.F") { signal.laser.F = v; return; }
  if (name == "laser.phi") { signal.laser.phi = v; return; }
  if (name == "laser.T") { signal.laser.T = v; return; }
  if (name == "omega_L") { omega_L = v; return; }
  if (name == "omega_cav") { omega_cav = v; return; }
  if (name == "omega_matter") { omega_matter = v; return; }
  if (name == "drive") { system = with_drive(system, v); return; }

  bool ok = true;
  std::visit(overload{
      [&](RF& p) {
        if (name == "delta") p.delta = v;
        else if (name == "gamma") p.gamma = v;
        else ok = false;
      },
      [&](AO& p) {
        if (name == "delta") p.delta = v;
        else if (name == "gamma") p.gamma = v;
        else if (name == "U") p.U = v;
        else ok = false;
      },
      [&](JC& p) {
        if (name == "delta_a") p.delta_a = v;
        else if (name == "delta_s") p.delta_s = v;
        else if (name == "g") p.g = v;
        else if (name == "chi") p.chi = v;
        else if (name == "phi") p.phi = v;
        else if (name == "gamma_a") p.gamma_a = v;
        else if (name == "gamma_s") p.gamma_s = v;
        else ok = false;
      },
      [&](POL& p) {
        if (name == "delta_a") p.delta_a = v;
        else if (name == "delta_b") p.delta_b = v;
        else if (name == "g") p.g = v;
        else if (name == "U") p.U = v;
        else if (name == "chi") p.chi = v;
        else if (name == "phi") p.phi = v;
        else if (name == "gamma_a") p.gamma_a = v;
        else if (name == "gamma_b") p.gamma_b = v;
        else ok = false;
      }},
             system);
  if (!ok) throw ConfigError("unknown parameter '" + name + "' for system " + system_name(system));
}

SystemParams ParamPoint::resolved() const {
  if (!omega_L) return system;
  const double wl = *omega_L;
  SystemParams p = system;
  std::visit(overload{[&](RF& s) { s.delta = omega_matter - wl; }, [&](AO& s) { s.delta = omega_matter - wl; },
                      [&](JC& s) {
                        s.delta_a = omega_cav - wl;
                        s.delta_s = omega_matter - wl;
                      },
                      [&](POL& s) {
                        s.delta_a = omega_cav - wl;
                        s.delta_b = omega_matter - wl;
                      }},
             p);
  return p;
}

SweepConfig parse_config(const std::string& text) {
  SweepConfig c;
  std::vector<std::pair<std::string, std::string>> kv;
  std::istringstream in(text);
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }

  // The system must be known before its parameters can be placed.
  bool have_system = false, have_mode = false, have_window = false;
  for (const auto& [k, v] : kv)
    if (k == "system") {
      c.base.system = system_from(v);
      have_system = true;
    }
  if (!have_system) throw ConfigError("missing 'system'");

  int axis_no = 0;
  for (const auto& [k, v] : kv) {
    c.echo[k == "axis" ? "axis." + std::to_string(++axis_no) : k] = v;
    if (k == "system") continue;
    if (k == "name") {
      if (v.empty() || v.find('/') != std::string::npos) throw ConfigError("name must be a plain file stem");
      c.name = v;
    } else if (k == "output") {
      c.output_dir = v;
    } else if (k == "engine") {
      if (v == "analytic") c.engine = Engine::analytic;
      else if (v == "recursive") c.engine = Engine::recursive;
      else if (v == "liouvillian") c.engine = Engine::liouvillian;
      else if (v == "wavefunction") c.engine = Engine::wavefunction;
      else throw ConfigError("unknown engine '" + v + "'");
    } else if (k == "observables") {
      c.observables = words(v);
      for (const auto& o : c.observables)
        if (!observable_known(o)) throw ConfigError("unknown observable '" + o + "'");
      if (c.observables.empty()) throw ConfigError("observables: list is empty");
    } else if (k == "signal") {
      if (v == "bare") c.base.signal.kind = Signal::Kind::bare;
      else if (v == "fluctuations") c.base.signal.kind = Signal::Kind::fluctuations;
      else if (v == "homodyne") c.base.signal.kind = Signal::Kind::homodyne;
      else throw ConfigError("unknown signal '" + v + "'");
    } else if (k == "mode") {
      if (v == "cavity") c.base.signal.role = Role::cavity;
      else if (v == "matter") c.base.signal.role = Role::matter;
      else throw ConfigError("mode must be cavity or matter");
      have_mode = true;
    } else if (k == "truncation") {
      c.truncation.photons = integer(k, v);
      if (c.truncation.photons < 1) throw ConfigError("truncation must be at least 1 photon");
    } else if (k == "top_threshold") {
      c.truncation.top_threshold = number(k, v);
    } else if (k == "axis") {
      c.axes.push_back(parse_axis(v));
    } else if (k == "powers") {
      for (const auto& w : words(v)) c.powers.push_back(integer(k, w));
    } else if (k == "drives") {
      const auto w = words(v);
      if (w.size() != 3) throw ConfigError("drives: expected '<lo> <hi> <count>'");
      c.drives = DriveWindow{number(k, w[0]), number(k, w[1]), integer(k, w[2])};
    } else if (k == "window") {
      const auto w = words(v);
      if (w.size() != 4) throw ConfigError("window: expected '<wa_min> <wa_max> <wl_min> <wl_max>'");
      c.window.wa_min = number(k, w[0]);
      c.window.wa_max = number(k, w[1]);
      c.window.wl_min = number(k, w[2]);
      c.window.wl_max = number(k, w[3]);
      have_window = true;
    } else if (k == "samples") {
      c.window.samples = integer(k, v);
      if (c.window.samples < 2) throw ConfigError("samples must be at least 2");
    } else {
      c.base.set(k, number(k, v));
      if (k == "drive") c.drive_given = true;
    }
  }

  if (!have_mode) c.base.signal.role = default_role(c.base.system);
  c.window.omega_matter = c.base.omega_matter;
  if (!have_window && c.axes.size() == 2 && c.axes[0].param == "omega_cav" && c.axes[1].param == "omega_L") {
    c.window.wa_min = c.axes[0].min;
    c.window.wa_max = c.axes[0].max;
    c.window.wl_min = c.axes[1].min;
    c.window.wl_max = c.axes[1].max;
  }
  if (c.axes.size() > 2) throw ConfigError("at most two axes");
  for (const auto& a : c.axes) {
    ParamPoint probe = c.base;
    probe.set(a.param, a.min);  // rejects unknown names
    if (a.param == "drive") c.drive_given = true;
  }
  if (c.drive_given && c.engine != Engine::liouvillian)
    throw ConfigError(std::string("the ") + engine_name(c.engine) +
                      " engine is a vanishing-drive limit and takes no 'drive'");
  try {
    validate(c.base.resolved());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return c;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace blockade
