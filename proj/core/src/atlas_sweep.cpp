#include "blockade/atlas.hpp"
#include "blockade/errors.hpp"
#include "blockade/wavefunction.hpp"

#include <json.hpp>

#include <Eigen/Core>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#ifndef BLOCKADE_VERSION
#define BLOCKADE_VERSION "unknown"
#endif

namespace blockade {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ObsSpec {
  enum Kind { n, g, I, J, norm } kind;
  int k = 0;
};

ObsSpec parse_obs(const std::string& o) {
  if (o == "n") return {ObsSpec::n, 1};
  if (o[0] == 'g') return {ObsSpec::g, o[1] - '0'};
  if (o[0] == 'I') return {ObsSpec::I, o[1] - '0'};
  if (o[0] == 'J') return {ObsSpec::J, o[1] - '0'};
  return {ObsSpec::norm, o[7] - '0'};
}

// Highest exponent N of <s^dag^N s^N> the observable needs.
int order_needed(const ObsSpec& s) {
  switch (s.kind) {
    case ObsSpec::n: return 1;
    case ObsSpec::g: return s.k;
    case ObsSpec::I: return 2;
    case ObsSpec::J: return 3;
    case ObsSpec::norm: return s.k + 1;
  }
  return 1;
}

double mode_gamma(const SystemParams& p, Role r) {
  const Model m = model_of(with_drive(p, 1.0));
  const int i = m.mode_index(r);
  if (i < 0) throw ConfigError("system has no " + std::string(r == Role::cavity ? "cavity" : "matter") + " mode");
  return m.modes[i].gamma;
}

double from_table(const CorrelatorTable& t, const ObsSpec& s, bool vanishing) {
  switch (s.kind) {
    case ObsSpec::n: return t.at(1, 1).real();
    case ObsSpec::g: return gN_of_table(t, s.k);
    case ObsSpec::I: {
      const auto d = decompose_g2(t.at(0, 1), t);
      return s.k == 0 ? d.I0 : (s.k == 1 ? d.I1 : d.I2);
    }
    case ObsSpec::J: return decompose_g3(t.at(0, 1), t).J[s.k];
    case ObsSpec::norm: {
      std::vector<double> g;
      for (int N = 2; N <= s.k + 1; ++N) g.push_back(gN_of_table(t, N));
      return n_norm(g, s.k, vanishing).value;
    }
  }
  return kNaN;
}

[[noreturn]] void unsupported(const std::string& what) {
  throw ConfigError(what + " has no closed form here; use the recursive or liouvillian engine");
}

double analytic_value(const SystemParams& p, const Signal& sig, const ObsSpec& s) {
  const bool homo = sig.kind == Signal::Kind::homodyne;
  if (sig.kind == Signal::Kind::fluctuations) unsupported("the fluctuation field at vanishing drive");
  if (const auto* rf = std::get_if<RF>(&p)) {
    if (sig.role != Role::matter) throw ConfigError("RF has only the emitter mode");
    if (s.kind != ObsSpec::n && s.kind != ObsSpec::g) unsupported("this RF observable");
    if (homo) {
      const auto h = rf_homodyne_gN(std::max(s.k, 1), sig.laser.F, sig.laser.phi, 1.0, rf->gamma, rf->delta, sig.laser.T);
      return s.kind == ObsSpec::n ? h.n_s : h.gN;
    }
    return s.kind == ObsSpec::n ? 4 / Gamma2(rf->gamma, rf->delta) : 0.0;
  }
  if (const auto* ao = std::get_if<AO>(&p)) {
    if (sig.role != Role::matter) throw ConfigError("AO has only the oscillator mode");
    if (homo) {
      if (s.kind == ObsSpec::norm || s.kind == ObsSpec::I || s.kind == ObsSpec::J || (s.kind == ObsSpec::g && s.k > 2))
        unsupported("this mixed-oscillator observable");
      const auto h = ao_homodyne(ao->U, 1.0, ao->gamma, ao->delta, sig.laser.F, sig.laser.phi, sig.laser.T);
      return s.kind == ObsSpec::n ? h.n_s : h.gN;
    }
    switch (s.kind) {
      case ObsSpec::n: return ao_observables(1, ao->U, 1.0, ao->gamma, ao->delta).n;
      case ObsSpec::g: return ao_observables(s.k, ao->U, 1.0, ao->gamma, ao->delta).gN;
      case ObsSpec::I: {
        const auto d = ao_decompose(ao->U, ao->gamma, ao->delta);
        return s.k == 0 ? d.I0 : (s.k == 1 ? d.I1 : d.I2);
      }
      case ObsSpec::norm: {
        std::vector<double> g;
        for (int N = 2; N <= s.k + 1; ++N) g.push_back(ao_observables(N, ao->U, 1.0, ao->gamma, ao->delta).gN);
        return n_norm(g, s.k).value;
      }
      default: unsupported("g^(3) decomposition of the oscillator");
    }
  }
  if (homo) unsupported("homodyne mixing of JC/POL");
  const bool cav = sig.role == Role::cavity;
  if (const auto* jc = std::get_if<JC>(&p)) {
    JC q = *jc;
    q.omega_a = 1;
    if (s.kind == ObsSpec::n) return cav ? jc_populations(q).n_a : jc_populations(q).n_matter;
    if (!cav) {
      if (s.kind == ObsSpec::g) return 0.0;  // two-level emitter
      unsupported("this emitter observable");
    }
    if (s.kind == ObsSpec::g && s.k == 2) return jc_g2(q);
    if (s.kind == ObsSpec::I) {
      const auto d = jc_g2_decomposition(q);
      return s.k == 0 ? d.I0 : (s.k == 1 ? d.I1 : d.I2);
    }
    unsupported("this JC observable");
  }
  POL q = std::get<POL>(p);
  q.omega_a = 1;
  if (s.kind == ObsSpec::n) return cav ? pol_populations(q).n_a : pol_populations(q).n_matter;
  if (s.kind == ObsSpec::g && s.k == 2) return pol_g2(q, cav ? Mode::cavity : Mode::exciton);
  if (s.kind == ObsSpec::I && cav) {
    const auto d = pol_g2_decomposition(q);
    return s.k == 0 ? d.I0 : (s.k == 1 ? d.I1 : d.I2);
  }
  unsupported("this polariton observable");
}

CorrelatorTable recursive_table(const SystemParams& p, const Signal& sig, int N) {
  if (sig.kind == Signal::Kind::fluctuations)
    throw ConfigError("the fluctuation field has no vanishing-drive limit; use the liouvillian engine");
  const SystemParams unit = with_drive(p, 1.0);
  const CorrelatorTable single = low_drive_correlators(unit, 2 * N).single_mode(sig.role);
  if (sig.kind == Signal::Kind::homodyne)
    return homodyne_moments(sig.laser, 1.0, mode_gamma(p, sig.role), single, N);
  return mix(0.0, single, N);
}

double wavefunction_value(const SystemParams& p, const Signal& sig, const ObsSpec& s) {
  if (s.kind != ObsSpec::n && !(s.kind == ObsSpec::g && s.k == 2))
    throw ConfigError("the wavefunction engine stops at two excitations: only n and g2");
  if (sig.kind == Signal::Kind::fluctuations) throw ConfigError("the wavefunction engine has no fluctuation field");
  const Model m = model_of(with_drive(p, 1.0));
  const double omega = 1e-4 * m.min_gamma() / std::max(1.0, m.drive_scale);
  if (const auto* rf = std::get_if<RF>(&p)) {
    // The emitter is read through a sensor cavity whose gain is not an emitter population.
    if (s.kind == ObsSpec::n) throw ConfigError("the wavefunction engine reports only g2 for RF");
    RF q = *rf;
    q.omega = omega;
    const Homodyne h = sig.kind == Signal::Kind::homodyne ? sig.laser : Homodyne{};
    return wavefunction_coefficients(RfSensor{q, h.F, h.phi}).g2_a;
  }
  if (sig.kind == Signal::Kind::homodyne) throw ConfigError("the wavefunction engine mixes a laser only for RF");
  const WavefunctionCoeffs w = wavefunction_coefficients(std::visit(
      [](const auto& v) -> WavefunctionInput {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, RF>) {
          return RfSensor{v};
        } else {
          return v;
        }
      },
      with_drive(p, omega)));
  const bool cav = sig.role == Role::cavity || std::holds_alternative<AO>(p);
  if (s.kind == ObsSpec::n) return (cav && !std::holds_alternative<AO>(p) ? w.n_a : w.n_matter) / (omega * omega);
  if (std::holds_alternative<AO>(p)) return w.g2_b;
  if (!cav && std::holds_alternative<JC>(p)) return 0.0;
  return cav ? w.g2_a : w.g2_b;
}

}  // namespace

const char* status_name(CellStatus s) {
  switch (s) {
    case CellStatus::ok: return "ok";
    case CellStatus::undefined: return "undefined";
    case CellStatus::truncation_warning: return "truncation-warning";
    case CellStatus::failed: return "failed";
  }
  return "?";
}

int thread_count() {
  if (const char* env = std::getenv("BLOCKADE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Cell evaluate_cell(const SweepConfig& c, const ParamPoint& point) {
  Cell cell;
  const SystemParams p = point.resolved();
  const Signal& sig = point.signal;
  std::vector<ObsSpec> specs;
  int N = 1;
  for (const auto& o : c.observables) {
    specs.push_back(parse_obs(o));
    N = std::max(N, order_needed(specs.back()));
  }
  cell.values.assign(specs.size(), kNaN);

  auto undefined = [&](size_t i, const UndefinedCorrelation& e) {
    cell.values[i] = kNaN;
    cell.status = CellStatus::undefined;
    cell.raw_moment = e.raw_moment.real();
    cell.message = e.what();
  };

  try {
    validate(p);
    if (c.engine == Engine::analytic || c.engine == Engine::wavefunction) {
      for (size_t i = 0; i < specs.size(); ++i) {
        try {
          cell.values[i] = c.engine == Engine::analytic ? analytic_value(p, sig, specs[i])
                                                        : wavefunction_value(p, sig, specs[i]);
        } catch (const UndefinedCorrelation& e) {
          undefined(i, e);
        }
      }
      return cell;
    }

    CorrelatorTable t;
    bool warned = false;
    if (c.engine == Engine::recursive) {
      t = recursive_table(p, sig, N);
    } else {
      const SteadyResult r = solve_steady(p, c.truncation);
      t = signal_moments(r.system, r.rho, sig, drive_of(p), N);
      warned = !r.warnings.empty();
      if (warned) cell.message = r.warnings.front();
    }
    for (size_t i = 0; i < specs.size(); ++i) {
      try {
        cell.values[i] = from_table(t, specs[i], c.engine != Engine::liouvillian);
      } catch (const UndefinedCorrelation& e) {
        undefined(i, e);
      }
    }
    if (warned && cell.status == CellStatus::ok) cell.status = CellStatus::truncation_warning;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    cell.status = CellStatus::failed;
    cell.message = e.what();
  }
  return cell;
}

std::vector<FeatureCondition> classify_features(const SystemParams& p, const FeatureWindow& w) {
  if (const auto* jc = std::get_if<JC>(&p)) return jc_feature_conditions(*jc, w);
  if (const auto* pol = std::get_if<POL>(&p)) return pol_feature_conditions(*pol, w);
  return {};
}

SweepResult run_sweep(const SweepConfig& c) {
  if (c.engine == Engine::liouvillian && !c.drive_given)
    throw ConfigError("the liouvillian engine needs an explicit 'drive'");
  SweepResult r;
  r.observables = c.observables;
  std::vector<std::vector<double>> grid;
  for (const auto& a : c.axes) {
    r.axis_names.push_back(a.param);
    r.shape.push_back(a.count);
    grid.push_back(a.values());
  }
  size_t total = 1;
  for (int n : r.shape) total *= n;

  std::vector<ParamPoint> points(total, c.base);
  std::vector<std::vector<double>> coords(total);
  for (size_t idx = 0; idx < total; ++idx) {
    size_t rest = idx;
    coords[idx].resize(grid.size());
    for (int a = static_cast<int>(grid.size()) - 1; a >= 0; --a) {
      const size_t k = rest % grid[a].size();
      rest /= grid[a].size();
      coords[idx][a] = grid[a][k];
    }
    for (size_t a = 0; a < grid.size(); ++a) points[idx].set(c.axes[a].param, coords[idx][a]);
  }

  r.cells.resize(total);
  // The first cell runs alone so that unsupported combinations surface as config errors.
  r.cells[0] = evaluate_cell(c, points[0]);
  std::atomic<size_t> next{1};
  auto worker = [&] {
    for (size_t i = next++; i < total; i = next++) r.cells[i] = evaluate_cell(c, points[i]);
  };
  const int nt = std::min<int>(thread_count(), static_cast<int>(std::max<size_t>(1, total - 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (size_t i = 0; i < total; ++i) r.cells[i].coords = coords[i];

  if (c.axes.size() == 2 && c.axes[0].param == "omega_cav" && c.axes[1].param == "omega_L")
    r.features = classify_features(c.base.resolved(), c.window);
  return r;
}

SeriesFit run_expand(const SweepConfig& c) {
  if (c.observables.size() != 1) throw ConfigError("expand fits exactly one observable");
  const std::string& o = c.observables[0];
  Observable obs;
  if (o == "n") obs = Observable::n;
  else if (o == "g2") obs = Observable::g2;
  else if (o == "g3") obs = Observable::g3;
  else throw ConfigError("expand supports n, g2 and g3");
  if (c.powers.empty()) throw ConfigError("expand needs 'powers'");
  try {
    return series_expand(c.base.resolved(), obs, c.base.signal, c.powers, c.drives, c.truncation);
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
}

// ---- output ----

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

nlohmann::json features_json(const std::vector<FeatureCondition>& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& fc : f) {
    nlohmann::json j;
    j["kind"] = feature_name(fc.kind);
    j["label"] = fc.label;
    j["exact"] = fc.exact;
    j["curve"] = fc.curve;
    j["point"] = fc.point ? nlohmann::json(*fc.point) : nlohmann::json();
    j["auxiliary"] = fc.auxiliary ? nlohmann::json(*fc.auxiliary) : nlohmann::json();
    arr.push_back(j);
  }
  return arr;
}

nlohmann::json base_meta(const SweepConfig& c, const std::string& command) {
  nlohmann::json m;
  m["name"] = c.name;
  m["command"] = command;
  m["config"] = c.echo;
  m["system"] = system_name(c.base.system);
  m["engine"] = engine_name(c.engine);
  m["versions"] = {{"blockade", BLOCKADE_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)}};
  return m;
}

}  // namespace

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream out;
  for (const auto& a : r.axis_names) out << a << ',';
  for (const auto& o : r.observables) out << o << ',';
  out << "status,raw_moment\n";
  for (const auto& cell : r.cells) {
    for (double x : cell.coords) out << fmt(x) << ',';
    for (double v : cell.values) out << fmt(v) << ',';
    out << status_name(cell.status) << ',' << (cell.status == CellStatus::undefined ? fmt(cell.raw_moment) : "")
        << '\n';
  }
  return out.str();
}

std::string sweep_meta(const SweepConfig& c, const SweepResult& r) {
  nlohmann::json m = base_meta(c, "sweep");
  nlohmann::json axes = nlohmann::json::array();
  for (const auto& a : c.axes)
    axes.push_back({{"param", a.param}, {"min", a.min}, {"max", a.max}, {"count", a.count},
                    {"scale", a.log ? "log" : "linear"}});
  m["axes"] = axes;
  m["shape"] = r.shape;
  m["observables"] = r.observables;
  std::map<std::string, int> counts;
  nlohmann::json notes = nlohmann::json::array();
  for (size_t i = 0; i < r.cells.size(); ++i) {
    ++counts[status_name(r.cells[i].status)];
    if (r.cells[i].status != CellStatus::ok)
      notes.push_back({{"cell", i}, {"status", status_name(r.cells[i].status)}, {"message", r.cells[i].message}});
  }
  m["status_counts"] = counts;
  m["cell_notes"] = notes;
  m["features"] = features_json(r.features);
  return m.dump(2) + "\n";
}

std::string features_csv(const std::vector<FeatureCondition>& f) {
  std::ostringstream out;
  out << "kind,label,exact,segment,omega_a,omega_L\n";
  for (const auto& fc : f)
    for (size_t s = 0; s < fc.curve.size(); ++s)
      for (const auto& q : fc.curve[s])
        out << feature_name(fc.kind) << ',' << csv_field(fc.label) << ',' << (fc.exact ? 1 : 0) << ',' << s << ','
            << fmt(q[0]) << ',' << fmt(q[1]) << '\n';
  return out.str();
}

std::string features_meta(const SweepConfig& c, const std::vector<FeatureCondition>& f) {
  nlohmann::json m = base_meta(c, "features");
  m["window"] = {{"omega_a", {c.window.wa_min, c.window.wa_max}},
                 {"omega_L", {c.window.wl_min, c.window.wl_max}},
                 {"omega_matter", c.window.omega_matter},
                 {"samples", c.window.samples}};
  m["features"] = features_json(f);
  return m.dump(2) + "\n";
}

std::string expand_csv(const SeriesFit& f) {
  std::ostringstream out;
  out << "power,coefficient\n";
  for (size_t k = 0; k < f.powers.size(); ++k) out << f.powers[k] << ',' << fmt(f.coefficients[k]) << '\n';
  return out.str();
}

std::string expand_meta(const SweepConfig& c, const SeriesFit& f) {
  nlohmann::json m = base_meta(c, "expand");
  m["engine"] = "liouvillian";
  m["observable"] = c.observables.front();
  m["drives"] = f.drives;
  m["values"] = f.values;
  m["max_rel_residual"] = f.max_rel_residual;
  m["condition"] = f.condition;
  return m.dump(2) + "\n";
}

std::string write_output(const SweepConfig& c, const std::string& suffix, const std::string& content) {
  namespace fs = std::filesystem;
  fs::create_directories(c.output_dir);
  const fs::path path = fs::path(c.output_dir) / (c.name + suffix);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
  return path.string();
}

}  // namespace blockade
