#include "blockade/analytic.hpp"
#include "blockade/errors.hpp"
#include "blockade/series.hpp"

#include <doctest.h>

using namespace blockade;

TEST_SUITE("series") {
  TEST_CASE("linear cavity population is exactly quadratic") {
    const AO ao{0.4, 0, 0, 1.0};
    const SeriesFit f = series_expand(ao, Observable::n, Signal{Signal::Kind::bare, Role::matter, {}}, {2, 4},
                                      DriveWindow{1e-2, 1e-1, 6}, Truncation{12});
    CHECK(f.coefficient(2) == doctest::Approx(1 / (0.25 + 0.16)).epsilon(1e-8));
    CHECK(std::abs(f.coefficient(4)) < 1e-6);
    CHECK(f.max_rel_residual < 1e-8);
  }

  TEST_CASE("two-level population follows 4 W^2 / (G^2 + 8 W^2)") {
    const RF rf{0.3, 0, 1.0};
    const double G2 = Gamma2(1.0, 0.3);
    const SeriesFit f =
        series_expand(rf, Observable::n, Signal{Signal::Kind::bare, Role::matter, {}}, {2, 4, 6, 8});
    CHECK(f.coefficient(2) == doctest::Approx(4 / G2).epsilon(1e-7));
    CHECK(f.coefficient(4) == doctest::Approx(-32 / (G2 * G2)).epsilon(1e-3));
    CHECK_THROWS_AS(f.coefficient(3), InvalidParameter);
  }

  TEST_CASE("fluctuation g2 of the emitter diverges as W^-4") {
    const SeriesFit f = series_expand(RF{0, 0, 1.0}, Observable::g2,
                                      Signal{Signal::Kind::fluctuations, Role::matter, {}}, {-4, -2, 0, 2});
    CHECK(f.coefficient(-4) == doctest::Approx(1.0 / 64).epsilon(1e-3));
  }

  TEST_CASE("zero-drive extrapolation is exact on even quartics") {
    auto f = [](double x) { return 0.38 - 2 * x * x + 7 * x * x * x * x; };
    CHECK(extrapolate_zero_drive({0.01, 0.02, 0.04}, {f(0.01), f(0.02), f(0.04)}) == doctest::Approx(0.38).epsilon(1e-12));
  }

  TEST_CASE("bad windows are refused") {
    const Signal s{Signal::Kind::bare, Role::matter, {}};
    CHECK_THROWS_AS(series_expand(RF{0, 0, 1}, Observable::n, s, {2, 4}, DriveWindow{1e-2, 1e-1, 3}), InvalidParameter);
    CHECK_THROWS_AS(series_expand(RF{0, 0, 1}, Observable::n, s, {2, 4}, DriveWindow{1e-1, 1e-2, 6}), InvalidParameter);
    CHECK_THROWS_AS(series_expand(RF{0, 0, 1}, Observable::n, s, {2, 4, 6, 8, 10, 12},
                                  DriveWindow{0.05, 0.0500001, 6}),
                    WindowTooWide);
  }

  TEST_CASE("homodyne signal through the Liouvillian matches the closed form") {
    const Homodyne h{1.5, 2.0, 1.0};
    const RF rf{0.4, 1e-3, 1.0};
    const double closed = rf_homodyne_gN(2, h.F, h.phi, rf.omega, rf.gamma, rf.delta).gN;
    CHECK(observable_at(rf, Observable::g2, Signal{Signal::Kind::homodyne, Role::matter, h}) ==
          doctest::Approx(closed).epsilon(1e-4));
  }
}
