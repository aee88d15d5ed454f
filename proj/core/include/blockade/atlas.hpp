#pragma once

#include "blockade/analytic.hpp"
#include "blockade/series.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace blockade {

// ---- configuration ----

struct Axis {
  std::string param;
  double min = 0, max = 1;
  int count = 2;
  bool log = false;

  std::vector<double> values() const;
};

enum class Engine { analytic, recursive, liouvillian, wavefunction };
const char* engine_name(Engine e);

// A parameter point. When omega_L is set, detunings follow from absolute frequencies:
// Delta_cavity = omega_cav - omega_L and Delta_matter = omega_matter - omega_L.
struct ParamPoint {
  SystemParams system = RF{};
  Signal signal{};
  std::optional<double> omega_L;
  double omega_cav = 0, omega_matter = 0;

  void set(const std::string& name, double value);  // throws ConfigError on unknown names
  SystemParams resolved() const;
};

struct SweepConfig {
  std::string name = "sweep";
  std::string output_dir = ".";
  ParamPoint base{};
  bool drive_given = false;  // vanishing-drive engines refuse an explicit drive
  std::vector<Axis> axes;
  std::vector<std::string> observables{"g2"};
  Engine engine = Engine::analytic;
  Truncation truncation{};
  // expand only
  std::vector<int> powers;
  DriveWindow drives{};
  // features only
  FeatureWindow window{};
  std::map<std::string, std::string> echo;  // raw key/value pairs as read
};

// Parses the key = value format documented in docs/config.md. Throws ConfigError.
SweepConfig parse_config(const std::string& text);
SweepConfig load_config(const std::string& path);

// ---- sweeps ----

enum class CellStatus { ok, undefined, truncation_warning, failed };
const char* status_name(CellStatus s);

struct Cell {
  std::vector<double> coords;
  std::vector<double> values;  // NaN where undefined
  CellStatus status = CellStatus::ok;
  double raw_moment = 0;  // the moment that failed normalisation, for undefined cells
  std::string message;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<int> shape;
  std::vector<std::string> observables;
  std::vector<Cell> cells;  // row-major, last axis fastest
  std::vector<FeatureCondition> features;
};

// Thread count from BLOCKADE_THREADS, falling back to the hardware concurrency.
int thread_count();

SweepResult run_sweep(const SweepConfig& c);

// Evaluate every observable at a single parameter point.
Cell evaluate_cell(const SweepConfig& c, const ParamPoint& p);

// Fit the configured observable over the configured drive window.
SeriesFit run_expand(const SweepConfig& c);

std::vector<FeatureCondition> classify_features(const SystemParams& p, const FeatureWindow& w);

// ---- output ----

std::string sweep_csv(const SweepResult& r);
std::string sweep_meta(const SweepConfig& c, const SweepResult& r);
std::string features_csv(const std::vector<FeatureCondition>& f);
std::string features_meta(const SweepConfig& c, const std::vector<FeatureCondition>& f);
std::string expand_csv(const SeriesFit& f);
std::string expand_meta(const SweepConfig& c, const SeriesFit& f);

// Writes <dir>/<name><suffix>; returns the path.
std::string write_output(const SweepConfig& c, const std::string& suffix, const std::string& content);

// ---- verification ----

struct Check {
  std::string name;
  std::string engines;
  double deviation = 0;
  double tolerance = 0;
  bool pass = false;
  double seconds = 0;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::vector<Check> checks;
  bool pass() const;
  std::string json() const;
  std::string text() const;
};

struct VerifyOptions {
  unsigned seed = 1;
  std::optional<double> tolerance;  // overrides the per-check default
  int draws = 50;
};

VerifyReport verify(const std::string& suite, const VerifyOptions& o = {});

}  // namespace blockade
