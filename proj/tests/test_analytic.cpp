#include "blockade/analytic.hpp"
#include "blockade/errors.hpp"
#include "blockade/series.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace blockade;

namespace {

// <(c - <c>)^dag^N (c - <c>)^N> / <(c - <c>)^dag (c - <c>)>^N straight from the density matrix.
double fluct_gN(const SteadyResult& s, Role r, int N) {
  const Operator& c = s.system.op(r);
  const cplx m = c.expect(s.rho);
  const Operator d = c - m * Operator::identity(s.system.dim);
  return gN(s.rho, d, N);
}

JC sample_jc() { return JC{0.3, -0.2, 1.1, 1.0, 0, 0, 0.4, 0.05}; }

}  // namespace

TEST_SUITE("analytic") {
  TEST_CASE("RF fluctuation statistics against the full solve") {
    for (double omega : {0.05, 0.5})
      for (double delta : {0.0, 0.6}) {
        const SteadyResult s = solve_steady(RF{delta, omega, 1.0});
        for (int N = 2; N <= 3; ++N)
          CHECK(rf_gN_fluct(N, omega, 1.0, delta) == doctest::Approx(fluct_gN(s, Role::matter, N)).epsilon(1e-9));
      }
  }

  TEST_CASE("RF fluctuation forms agree") {
    for (int N = 2; N <= 4; ++N)
      CHECK(rf_gN_fluct_physical(N, 0.03, 1.0, 0.4) == doctest::Approx(rf_gN_fluct(N, 0.03, 1.0, 0.4)).epsilon(1e-12));
  }

  TEST_CASE("RF homodyne cancels at F = 2N, phi = pi on resonance") {
    for (int N = 2; N <= 4; ++N) {
      const auto [phi, F] = rf_interference_conditions(N, 1.0, 0.0);
      CHECK(F == doctest::Approx(2 * N));
      CHECK(phi == doctest::Approx(kPi));
      CHECK(rf_homodyne_gN(N, F, phi, 1e-3, 1.0, 0.0).gN < 1e-10);
    }
  }

  TEST_CASE("AO closed forms against the recursion") {
    for (double U : {0.3, 1.0, 2.5})
      for (double delta : {-0.7, 0.2}) {
        AO ao{delta, U, 1.0, 1.0};
        CHECK(ao_observables(2, U, 1e-4, 1.0, delta).gN == doctest::Approx(gN_limit(ao, Role::matter, 2)).epsilon(1e-8));
        CHECK(ao_observables(3, U, 1e-4, 1.0, delta).gN == doctest::Approx(gN_limit(ao, Role::matter, 3)).epsilon(1e-8));
      }
  }

  TEST_CASE("AO g2 extremum is stationary") {
    const AoExtrema e = ao_extrema(1, 1);
    const double h = 1e-5;
    auto g2 = [](double d) { return ao_observables(2, 1, 1e-4, 1, d).gN; };
    CHECK(g2(e.delta_minus) < g2(e.delta_minus - h));
    CHECK(g2(e.delta_minus) < g2(e.delta_minus + h));
    CHECK(e.g2_minus == doctest::Approx(g2(e.delta_minus)).epsilon(1e-6));
  }

  TEST_CASE("AO laser zeros cancel g2") {
    const double d = ao_extrema(1, 1).delta_minus;
    const auto z = ao_g2_zeros(1, 1, d);
    REQUIRE(z.size() == 2);
    for (auto [F, phi] : z) CHECK(ao_homodyne(1, 1e-4, 1, d, F, phi).gN < 1e-9);
  }

  TEST_CASE("JC g2: amplitude form, long form, recursion and wavefunction") {
    JC p = sample_jc();
    const double g2 = jc_g2(p);
    CHECK(jc_g2_long_form(p) == doctest::Approx(g2).epsilon(1e-10));
    CHECK(jc_g2_cavity_driven(p) == doctest::Approx(g2).epsilon(1e-10));
    CHECK(gN_limit(p, Role::cavity, 2) == doctest::Approx(g2).epsilon(1e-10));
    p.chi = 0.7;
    p.phi = 2.0;
    CHECK(gN_limit(p, Role::cavity, 2) == doctest::Approx(jc_g2(p)).epsilon(1e-10));
  }

  TEST_CASE("JC populations are the squared one-excitation amplitudes") {
    const JC p = sample_jc();
    const Populations n = jc_populations(p);
    const CorrelatorTable t = low_drive_correlators(p, 2);
    CHECK(n.n_a == doctest::Approx(t.at(0, 0, 1, 1).real()).epsilon(1e-12));
    CHECK(n.n_matter == doctest::Approx(t.at(1, 1, 0, 0).real()).epsilon(1e-12));
  }

  TEST_CASE("JC decomposition sums to g2") {
    const JC p = sample_jc();
    CHECK(jc_g2_decomposition(p).total() == doctest::Approx(jc_g2(p)).epsilon(1e-12));
  }

  TEST_CASE("JC first rung from the non-Hermitian Hamiltonian") {
    const double wa = 0.4, ws = -0.3, g = 1, ga = 0.1, gs = 0.01;
    Eigen::Matrix2cd h;
    h << cplx(wa, -ga / 2), g, g, cplx(ws, -gs / 2);
    Eigen::Vector2cd ev = Eigen::ComplexEigenSolver<Eigen::Matrix2cd>(h).eigenvalues();
    if (ev(0).real() > ev(1).real()) std::swap(ev(0), ev(1));
    const DressedLevels l = jc_dressed_energies(1, wa, ws, g, ga, gs);
    REQUIRE(l.E.size() == 2);
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(l.E[k] - ev(k)) < 1e-12);
      CHECK(l.E[k].imag() <= 0);
    }
  }

  TEST_CASE("JC exact zero and critical coupling") {
    const auto z = jc_exact_zero(1, 0.1, 0.01);
    REQUIRE(z);
    for (const auto& q : *z) {
      JC p{q[0], q[1], 1, 1, 0, 0, 0.1, 0.01};
      CHECK(jc_g2(p) < 1e-10);
    }
    int found = 0;
    for (double da : {-1.5, -0.5, 0.5, 1.5})
      for (double ds : {-1.2, 0.3, 1.1}) {
        const auto gp = jc_critical_coupling(0.4, 0.3, da, ds);
        if (!gp) continue;
        ++found;
        CHECK(jc_g2(JC{da, ds, *gp, 1, 0, 0, 0.4, 0.3}) == doctest::Approx(1).epsilon(1e-9));
      }
    CHECK(found > 0);
  }

  TEST_CASE("JC features at gamma_a = 0.1 g, gamma_s = 0.01 g") {
    JC p{0, 0, 1, 1, 0, 0, 0.1, 0.01};
    const FeatureWindow w{-2, 2, -2, 2, 0, 201};
    const auto f = jc_feature_conditions(p, w);
    bool ub = false, ca = false;
    for (const auto& fc : f) {
      if (fc.kind == FeatureKind::UB)
        for (const auto& line : fc.curve)
          for (const auto& pt : line) {
            ub = true;
            CHECK(std::abs(pt[1]) < 1e-9);
          }
      if (fc.kind == FeatureKind::CA)
        for (const auto& line : fc.curve)
          for (const auto& pt : line) {
            ca = true;
            const auto l = jc_dressed_energies(1, pt[0], 0, 1, 0.1, 0.01);
            const double d = std::min(std::abs(pt[1] - l.E[0].real()), std::abs(pt[1] - l.E[1].real()));
            CHECK(d < 1e-9);
          }
    }
    CHECK(ub);
    CHECK(ca);
  }

  TEST_CASE("POL g2 against the recursion, both modes") {
    POL p{0.1, 0.2, 0.7, 0.5, 1.0, 0, 0, 0.2, 0.1};
    CHECK(pol_g2(p, Mode::cavity) == doctest::Approx(gN_limit(p, Role::cavity, 2)).epsilon(1e-10));
    CHECK(pol_g2(p, Mode::exciton) == doctest::Approx(gN_limit(p, Role::matter, 2)).epsilon(1e-10));
    CHECK(pol_g2_cavity_long_form(p) == doctest::Approx(pol_g2(p, Mode::cavity)).epsilon(1e-10));
    CHECK(pol_g2_cavity_driven(p) == doctest::Approx(pol_g2(p, Mode::cavity)).epsilon(1e-10));
    CHECK(pol_g2_decomposition(p).total() == doctest::Approx(pol_g2(p, Mode::cavity)).epsilon(1e-12));
    p.chi = 0.4;
    p.phi = 1.0;
    CHECK(pol_g2(p, Mode::cavity) == doctest::Approx(gN_limit(p, Role::cavity, 2)).epsilon(1e-10));
  }

  TEST_CASE("POL second rung: first-order levels approach the exact ones at small U") {
    const auto approx = pol_dressed_energies(0.3, 0.0, 1.0, 1e-3);
    const auto exact = pol_second_rung_exact(0.3, 0.0, 1.0, 1e-3, 1e-12, 1e-12);
    REQUIRE(approx.E.size() == exact.E.size());
    for (size_t k = 0; k < approx.E.size(); ++k) CHECK(std::abs(approx.E[k].real() - exact.E[k].real()) < 1e-5);
  }

  TEST_CASE("POL with a huge U behaves like JC") {
    POL p{0.3, -0.4, 1, 1e3, 1, 0, 0, 0.1, 0.01};
    JC q{0.3, -0.4, 1, 1, 0, 0, 0.1, 0.01};
    CHECK(pol_g2(p, Mode::cavity) == doctest::Approx(jc_g2(q)).epsilon(1e-2));
  }
}
