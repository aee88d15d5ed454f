#include "blockade/errors.hpp"
#include "blockade/steady.hpp"
#include "blockade/wavefunction.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace blockade;

namespace {

// Bloch-equation steady state of a driven two-level system, H = Delta s+s + Omega (s + s+).
double bloch_population(double omega, double gamma, double delta) {
  return 4 * omega * omega / (gamma * gamma + 4 * delta * delta + 8 * omega * omega);
}

void check_physical(const DensityMatrix& rho) {
  const Mat& r = rho.matrix();
  CHECK((r - r.adjoint()).norm() < 1e-10);
  CHECK(std::abs(r.trace() - 1.0) < 1e-10);
  CHECK(Eigen::SelfAdjointEigenSolver<Mat>((r + r.adjoint()) / 2.0).eigenvalues().minCoeff() > -1e-8);
}

}  // namespace

TEST_SUITE("steady") {
  TEST_CASE("two-level emitter matches the Bloch solution") {
    for (double omega : {1e-3, 0.1, 2.0})
      for (double delta : {0.0, 0.8}) {
        const SteadyResult s = solve_steady(RF{delta, omega, 1.0});
        check_physical(s.rho);
        const Operator& sm = s.system.op(Role::matter);
        const double n = (sm.adjoint() * sm).expect(s.rho).real();
        CHECK(n == doctest::Approx(bloch_population(omega, 1.0, delta)).epsilon(1e-10));
        CHECK(gN(s.rho, sm, 2) == 0);
      }
  }

  TEST_CASE("linear cavity settles into a coherent state") {
    AO ao;
    ao.delta = 0.4;
    ao.omega = 0.3;
    ao.gamma = 1.0;
    const SteadyResult s = solve_steady(ao, Truncation{20});
    check_physical(s.rho);
    const Operator& a = s.system.op(Role::matter);
    const cplx alpha = -kI * ao.omega / (ao.gamma / 2 + kI * ao.delta);
    CHECK(std::abs(a.expect(s.rho) - alpha) < 1e-10);
    CHECK(gN(s.rho, a, 2) == doctest::Approx(1).epsilon(1e-8));
    CHECK(gN(s.rho, a, 3) == doctest::Approx(1).epsilon(1e-8));
  }

  TEST_CASE("JC and POL states are physical at strong and weak drive") {
    JC jc{0.3, -0.2, 1, 0.2, 0.5, 1.0, 0.4, 0.05};
    POL pol{0.1, 0.2, 0.7, 0.5, 0.3, 0.2, 1.5, 0.2, 0.1};
    for (double drive : {1e-5, 0.3}) {
      check_physical(solve_steady(with_drive(jc, drive)).rho);
      check_physical(solve_steady(with_drive(pol, drive)).rho);
    }
  }

  TEST_CASE("doubling the truncation leaves g2 alone at modest drive") {
    JC jc{0.3, -0.2, 1, 0.05, 0, 0, 0.4, 0.05};
    const double g_small = gN(solve_steady(jc, Truncation{6}).rho, build_system(jc, Truncation{6}).op(Role::cavity), 2);
    const double g_big = gN(solve_steady(jc, Truncation{12}).rho, build_system(jc, Truncation{12}).op(Role::cavity), 2);
    CHECK(g_big == doctest::Approx(g_small).epsilon(1e-6));
  }

  TEST_CASE("a crowded top level raises a warning") {
    AO ao;
    ao.omega = 3.0;
    const SteadyResult s = solve_steady(ao, Truncation{3});
    CHECK(s.top_population > 1e-10);
    CHECK_FALSE(s.warnings.empty());
  }

  TEST_CASE("no dissipation path means no unique steady state") {
    // Decoupled, undriven matter with a driven cavity: the matter population is a free constant.
    Model m = model_of(JC{0, 0, 0, 0.1, 0, 0, 1, 1});
    m.modes[1].gamma = 0;
    const System s = build_system(m, {4, 2});
    CHECK_THROWS_AS(steady_state(build_liouvillian(s)), AmbiguousSteadyState);
  }

  TEST_CASE("recursive table is conjugation symmetric with unit vacuum") {
    JC jc{0.3, -0.2, 1, 1.0, 0.5, 1.0, 0.4, 0.05};
    const CorrelatorTable t = low_drive_correlators(jc, 6);
    CHECK(t.conjugation_defect() == 0);
    CHECK(t.at(0, 0, 0, 0) == cplx(1));
    for (const auto& [k, v] : t.entries()) {
      const Key c{k[1], k[0], k[3], k[2]};
      CHECK(std::abs(t.at(c) - std::conj(v)) == 0);
    }
  }

  TEST_CASE("recursive coefficients scale with their recorded drive order") {
    JC jc{0.3, -0.2, 1, 1.0, 0.5, 1.0, 0.4, 0.05};
    const double w1 = 1e-4, w2 = 2e-4;
    const SteadyResult s1 = solve_steady(with_drive(jc, w1)), s2 = solve_steady(with_drive(jc, w2));
    const CorrelatorTable t1 = moments_from_density(s1.system, s1.rho, 4);
    const CorrelatorTable t2 = moments_from_density(s2.system, s2.rho, 4);
    const CorrelatorTable lim = low_drive_correlators(jc, 4);
    for (const Key& k : {Key{0, 0, 0, 1}, Key{0, 0, 1, 1}, Key{0, 0, 2, 2}, Key{1, 1, 0, 0}, Key{0, 1, 1, 1}}) {
      const double slope = std::log(std::abs(t2.at(k)) / std::abs(t1.at(k))) / std::log(w2 / w1);
      CHECK(slope == doctest::Approx(lim.drive_order(k)).epsilon(0.02 / lim.drive_order(k)));
    }
  }

  TEST_CASE("vanishing-drive g2 agrees with the full solve") {
    JC jc{0.3, -0.2, 1, 1e-4, 0.5, 1.0, 0.4, 0.05};
    const SteadyResult s = solve_steady(jc);
    CHECK(gN(s.rho, s.system.op(Role::cavity), 2) == doctest::Approx(gN_limit(jc, Role::cavity, 2)).epsilon(1e-3));
  }

  TEST_CASE("wavefunction amplitudes are dominated by the vacuum") {
    JC jc{0.3, -0.2, 1, 1e-4, 0, 0, 0.4, 0.05};
    const WavefunctionCoeffs c = wavefunction_coefficients(jc);
    CHECK(std::norm(c.at(0, 0)) > 0.99);
    CHECK(c.g2_a == doctest::Approx(gN_limit(jc, Role::cavity, 2)).epsilon(1e-4));
  }

  TEST_CASE("g2 of an empty mode is undefined, not NaN") {
    const SteadyResult s = solve_steady(RF{0, 0, 1});
    CHECK_THROWS_AS(gN(s.rho, s.system.op(Role::matter), 2), UndefinedCorrelation);
  }
}
