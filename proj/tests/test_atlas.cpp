#include "blockade/atlas.hpp"
#include "blockade/errors.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace blockade;

namespace {

std::string tmp_dir() {
  const char* env = std::getenv("BLOCKADE_TEST_TMP");
  return env ? env : (std::filesystem::temp_directory_path() / "blockade_tests").string();
}

size_t argmin(const SweepResult& r, size_t obs = 0) {
  size_t best = 0;
  for (size_t i = 1; i < r.cells.size(); ++i)
    if (r.cells[i].values[obs] < r.cells[best].values[obs]) best = i;
  return best;
}

}  // namespace

TEST_SUITE("atlas") {
  TEST_CASE("config errors name the problem") {
    CHECK_THROWS_WITH_AS(parse_config("g = 1\n"), "missing 'system'", ConfigError);
    CHECK_THROWS_AS(parse_config("system = JC\nkappa = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("system = JC\naxis = g 0 1 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("system = JC\naxis = g 0 1 5 log\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("system = JC\nobservables = g7\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("system = JC\ndrive = 0.01\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("system = JC\ngamma_a = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("system = JC\nno equals sign\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("system = XY\n"), ConfigError);
    CHECK_NOTHROW(parse_config("system = JC\nengine = liouvillian\ndrive = 0.01\n"));
  }

  TEST_CASE("axis sampling") {
    const Axis lin{"g", 0, 1, 5, false};
    CHECK(lin.values() == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
    const auto lg = Axis{"g", 1e-3, 1e-1, 3, true}.values();
    CHECK(lg[1] == doctest::Approx(1e-2).epsilon(1e-14));
    CHECK(lg.back() == doctest::Approx(1e-1).epsilon(1e-14));
  }

  TEST_CASE("absolute frequencies become detunings") {
    const SweepConfig c = parse_config("system = JC\ng = 1\nomega_cav = 0.5\nomega_matter = -0.2\nomega_L = 0.1\n");
    const JC p = std::get<JC>(c.base.resolved());
    CHECK(p.delta_a == doctest::Approx(0.4));
    CHECK(p.delta_s == doctest::Approx(-0.3));
  }

  TEST_CASE("a single-point sweep equals the direct call") {
    const SweepConfig c = parse_config(
        "system = JC\ng = 1.1\ndelta_a = 0.3\ndelta_s = -0.2\ngamma_a = 0.4\ngamma_s = 0.05\nobservables = g2 n\n");
    const SweepResult r = run_sweep(c);
    REQUIRE(r.cells.size() == 1);
    JC p{0.3, -0.2, 1.1, 1, 0, 0, 0.4, 0.05};
    CHECK(r.cells[0].values[0] == jc_g2(p));
    CHECK(r.cells[0].values[1] == jc_populations(p).n_a);
  }

  TEST_CASE("RF homodyne map has its N=2 zero at F=4, phi=pi") {
    const SweepConfig c = parse_config(
        "system = RF\nsignal = homodyne\naxis = laser.F 0 8 9\naxis = laser.phi 0 6.283185307179586 9\n");
    const SweepResult r = run_sweep(c);
    // Without the laser the bare emitter is trivially antibunched, so skip the F = 0 row.
    // F = 2, phi = pi empties the coherent part at leading order and is flagged instead.
    int zeros = 0;
    for (const auto& cell : r.cells) {
      if (cell.status == CellStatus::undefined) {
        CHECK(cell.coords[0] == doctest::Approx(2));
        continue;
      }
      if (cell.coords[0] == 0 || cell.values[0] > 1e-6) continue;
      ++zeros;
      CHECK(cell.coords[0] == doctest::Approx(4));
      CHECK(cell.coords[1] == doctest::Approx(kPi));
      CHECK(cell.values[0] < 1e-10);
    }
    CHECK(zeros == 1);
  }

  TEST_CASE("AO homodyne map minima sit on the computed zeros") {
    const double d = ao_extrema(1, 1).delta_minus;
    const SweepConfig c = parse_config("system = AO\nU = 1\ngamma = 1\ndelta = " + std::to_string(d) +
                                       "\nsignal = homodyne\naxis = laser.F 0 4 81\naxis = laser.phi 0 6.2831853 121\n");
    const SweepResult r = run_sweep(c);
    const auto& best = r.cells[argmin(r)];
    REQUIRE(best.coords[0] > 0);
    const double dF = 4.0 / 80, dphi = 6.2831853 / 120;
    bool near = false;
    for (auto [F, phi] : ao_g2_zeros(1, 1, d))
      near = near || (std::abs(best.coords[0] - F) <= dF && std::abs(best.coords[1] - phi) <= dphi);
    CHECK(near);
  }

  TEST_CASE("engines agree cell by cell") {
    const std::string base =
        "system = POL\ng = 0.7\nU = 0.5\ngamma_a = 0.2\ngamma_b = 0.1\ndelta_b = 0.2\naxis = delta_a -1 1 5\n";
    const SweepResult a = run_sweep(parse_config(base + "engine = analytic\n"));
    const SweepResult b = run_sweep(parse_config(base + "engine = recursive\n"));
    const SweepResult w = run_sweep(parse_config(base + "engine = wavefunction\n"));
    const SweepResult l = run_sweep(parse_config(base + "engine = liouvillian\ndrive = 1e-4\n"));
    for (size_t i = 0; i < a.cells.size(); ++i) {
      CHECK(b.cells[i].values[0] == doctest::Approx(a.cells[i].values[0]).epsilon(1e-10));
      CHECK(w.cells[i].values[0] == doctest::Approx(a.cells[i].values[0]).epsilon(1e-3));
      CHECK(l.cells[i].values[0] == doctest::Approx(a.cells[i].values[0]).epsilon(1e-3));
    }
  }

  TEST_CASE("empty modes are flagged with their raw moment") {
    const SweepConfig c = parse_config("system = RF\nengine = liouvillian\naxis = drive 0 0.1 3\nobservables = n g2\n");
    const SweepResult r = run_sweep(c);
    CHECK(r.cells[0].status == CellStatus::undefined);
    CHECK(std::isnan(r.cells[0].values[1]));
    CHECK(r.cells[0].raw_moment == 0);
    CHECK(r.cells[1].status == CellStatus::ok);
    CHECK(sweep_csv(r).find("undefined,0") != std::string::npos);
  }

  TEST_CASE("vanishing-drive engines refuse a drive, the liouvillian needs one") {
    CHECK_THROWS_AS(parse_config("system = RF\naxis = drive 0.01 0.1 3\n"), ConfigError);
    CHECK_THROWS_AS(run_sweep(parse_config("system = RF\nengine = liouvillian\n")), ConfigError);
    CHECK_THROWS_AS(run_sweep(parse_config("system = JC\nsignal = homodyne\n")), ConfigError);
  }

  TEST_CASE("output is identical across thread counts and reruns") {
    const SweepConfig c = parse_config(
        "system = JC\ng = 1\ngamma_a = 0.1\ngamma_s = 0.01\nengine = liouvillian\ndrive = 0.01\n"
        "truncation = 4\naxis = omega_cav -1 1 4\naxis = omega_L -1 1 5\nobservables = g2 n I2\n");
    setenv("BLOCKADE_THREADS", "1", 1);
    const SweepResult one = run_sweep(c);
    setenv("BLOCKADE_THREADS", "3", 1);
    const SweepResult three = run_sweep(c);
    const SweepResult again = run_sweep(c);
    unsetenv("BLOCKADE_THREADS");
    CHECK(sweep_csv(one) == sweep_csv(three));
    CHECK(sweep_csv(three) == sweep_csv(again));
    CHECK(sweep_meta(c, one) == sweep_meta(c, three));
    CHECK_FALSE(one.features.empty());
  }

  TEST_CASE("files land under the output directory") {
    SweepConfig c = parse_config("system = JC\ng = 1\nname = tiny\naxis = delta_a -1 1 3\n");
    c.output_dir = tmp_dir();
    const SweepResult r = run_sweep(c);
    const std::string csv = write_output(c, ".csv", sweep_csv(r));
    const std::string meta = write_output(c, ".meta.json", sweep_meta(c, r));
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "delta_a,g2,status,raw_moment");
    CHECK(std::filesystem::exists(meta));
  }

  TEST_CASE("series fit through the config path") {
    const SweepConfig c = parse_config("system = AO\nU = 0\ndelta = 0.4\nobservables = n\npowers = 2 4\n");
    CHECK(run_expand(c).coefficient(2) == doctest::Approx(1 / 0.41).epsilon(1e-6));
  }

  TEST_CASE("identities suite passes") {
    VerifyOptions o;
    o.draws = 10;
    const VerifyReport r = verify("identities", o);
    for (const auto& c : r.checks) CHECK_MESSAGE(c.pass, c.name << ": " << c.deviation);
    CHECK(r.json().find("\"suite\": \"identities\"") != std::string::npos);
    CHECK_THROWS_AS(verify("nonsense"), ConfigError);
  }
}
