// blockade: sweeps, feature overlays, series fits and verification suites.
#include "blockade/atlas.hpp"
#include "blockade/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kConfigError = 2 };

int sweep(const std::string& path) {
  const auto c = blockade::load_config(path);
  const auto r = blockade::run_sweep(c);
  std::cout << blockade::write_output(c, ".csv", blockade::sweep_csv(r)) << "\n";
  std::cout << blockade::write_output(c, ".meta.json", blockade::sweep_meta(c, r)) << "\n";
  int flagged = 0;
  for (const auto& cell : r.cells) flagged += cell.status != blockade::CellStatus::ok;
  std::cout << r.cells.size() << " cells, " << flagged << " flagged\n";
  return kOk;
}

int features(const std::string& path) {
  const auto c = blockade::load_config(path);
  const auto f = blockade::classify_features(c.base.resolved(), c.window);
  std::cout << blockade::write_output(c, ".features.csv", blockade::features_csv(f)) << "\n";
  std::cout << blockade::write_output(c, ".features.meta.json", blockade::features_meta(c, f)) << "\n";
  return kOk;
}

int expand(const std::string& path) {
  const auto c = blockade::load_config(path);
  const auto fit = blockade::run_expand(c);
  std::cout << blockade::write_output(c, ".expand.csv", blockade::expand_csv(fit)) << "\n";
  std::cout << blockade::write_output(c, ".expand.meta.json", blockade::expand_meta(c, fit)) << "\n";
  for (size_t k = 0; k < fit.powers.size(); ++k)
    std::printf("Omega^%d: %.10g\n", fit.powers[k], fit.coefficients[k]);
  return kOk;
}

int verify(const std::string& suite, const blockade::VerifyOptions& o, bool json) {
  const auto r = blockade::verify(suite, o);
  std::cout << (json ? r.json() : r.text());
  return r.pass() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-statistics atlas for driven dissipative quantum optical systems"};
  app.require_subcommand(1);

  std::string config;
  auto* s = app.add_subcommand("sweep", "evaluate observables on a 1-2 axis grid");
  s->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
  auto* f = app.add_subcommand("features", "sample CA/CB/UA/UB condition curves");
  f->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
  auto* e = app.add_subcommand("expand", "fit a drive power series to one observable");
  e->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);

  std::string suite;
  blockade::VerifyOptions vo;
  double tol = 0;
  bool json = false;
  auto* v = app.add_subcommand("verify", "run a verification suite");
  v->add_option("suite", suite, "identities, oracles or landmarks")
      ->required()
      ->check(CLI::IsMember({"identities", "oracles", "landmarks"}));
  v->add_option("--seed", vo.seed, "random seed");
  auto* tol_opt = v->add_option("--tol", tol, "override every tolerance")->check(CLI::PositiveNumber);
  v->add_option("--draws", vo.draws, "random draws per system")->check(CLI::Range(1, 100000));
  v->add_flag("--json", json, "machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*s) return sweep(config);
    if (*f) return features(config);
    if (*e) return expand(config);
    if (*tol_opt) vo.tolerance = tol;
    return verify(suite, vo, json);
  } catch (const blockade::Error& err) {
    std::cerr << "blockade: " << err.what() << "\n";
    return kConfigError;
  }
}
