#include "blockade/errors.hpp"
#include "blockade/fockspace.hpp"
#include "blockade/mixer.hpp"

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

using namespace blockade;

namespace {

constexpr int kLevels = 80;

// |alpha, xi> built by brute force: D(alpha) S(xi) |0> with dense matrix exponentials.
Vec fock_dst(cplx alpha, cplx xi) {
  const Mat a = build_mode(Boson{kLevels}).matrix();
  const Mat ad = a.adjoint();
  const Mat S = ((std::conj(xi) * a * a - xi * ad * ad) / 2.0).exp();
  const Mat D = (alpha * ad - std::conj(alpha) * a).exp();
  Vec v = Vec::Zero(kLevels);
  v(0) = 1;
  return D * (S * v);
}

cplx fock_moment(const Vec& psi, int p, int q) {
  const Mat a = build_mode(Boson{kLevels}).matrix();
  Mat op = Mat::Identity(kLevels, kLevels);
  for (int k = 0; k < q; ++k) op = a * op;
  for (int k = 0; k < p; ++k) op = a.adjoint() * op;
  return psi.dot(op * psi);
}

}  // namespace

TEST_SUITE("mixer") {
  TEST_CASE("gaussian moments match a brute-force Fock state") {
    for (auto [alpha, r, theta] : {std::tuple{cplx(0.3, 0), 0.078, 0.0}, std::tuple{cplx(0.5, -0.4), 0.4, 1.3},
                                   std::tuple{cplx(0, 0), 0.6, 2.0}}) {
      const Vec psi = fock_dst(alpha, std::polar(r, theta));
      const CorrelatorTable t = gaussian_moments(displaced_squeezed(alpha, r, theta), 3);
      for (int p = 0; p <= 3; ++p)
        for (int q = 0; q <= 3; ++q)
          if (p + q) CHECK(std::abs(t.at(p, q) - fock_moment(psi, p, q)) < 1e-10);
    }
  }

  TEST_CASE("squeezed vacuum is superbunched") {
    for (double r : {0.05, 0.3, 1.0}) {
      const double s = std::sinh(r);
      CHECK(dst_observables(displaced_squeezed(0, r, 0)).g2 == doctest::Approx(3 + 1 / (s * s)).epsilon(1e-12));
    }
  }

  TEST_CASE("coherent light is Poissonian at every order") {
    const DstObservables o = dst_observables(displaced_squeezed(cplx(0.7, 0.2), 0, 0));
    CHECK(o.g2 == doctest::Approx(1).epsilon(1e-14));
    CHECK(o.g3 == doctest::Approx(1).epsilon(1e-14));
  }

  TEST_CASE("closed-form DST g2 agrees with the moments") {
    for (double r : {0.02, 0.078, 0.3})
      for (double a : {0.1, 0.3, 1.2})
        for (double t : {0.0, 1.0, kPi})
          CHECK(dst_g2_closed(a, r, t) == doctest::Approx(dst_observables(displaced_squeezed(a, r, t)).g2).epsilon(1e-12));
  }

  TEST_CASE("optimal amplitude is a stationary point") {
    for (double r : {0.05, 0.1, 0.2}) {
      const double a = optimal_coherent_amplitude(r), h = 1e-4;
      const double f0 = dst_g2_closed(a, r, 0), fl = dst_g2_closed(a - h, r, 0), fr = dst_g2_closed(a + h, r, 0);
      CHECK(f0 < fl);
      CHECK(f0 < fr);
      CHECK(f0 == doctest::Approx(dst_g2_min(r)).epsilon(1e-12));
    }
  }

  TEST_CASE("mixing equals displacing the Fock state") {
    const Vec psi = fock_dst(0, std::polar(0.3, 0.7));
    const CorrelatorTable d = gaussian_moments(displaced_squeezed(0, 0.3, 0.7), 3);
    const cplx beta(0.4, -0.9);
    const Vec shifted = fock_dst(beta, std::polar(0.3, 0.7));
    for (int p = 0; p <= 3; ++p)
      for (int q = 0; q <= 3; ++q)
        if (p + q) CHECK(std::abs(mixed_correlator(p, q, beta, d) - fock_moment(shifted, p, q)) < 1e-10);
  }

  TEST_CASE("decomposition terms sum to g2 and g3") {
    const CorrelatorTable s = gaussian_moments(displaced_squeezed(cplx(0.2, 0.1), 0.3, 0.5, 0.05), 3);
    const cplx mean = s.at(0, 1);
    CHECK(decompose_g2(mean, s).total() == doctest::Approx(coherence(s, 2)).epsilon(1e-12));
    CHECK(decompose_g3(mean, s).total() == doctest::Approx(coherence(s, 3)).epsilon(1e-12));
    // A pure coherent state puts everything in the 1.
    const DecompositionG2 c = decompose_g2(cplx(0.5), gaussian_moments(displaced_squeezed(0.5, 0, 0), 2));
    CHECK(std::abs(c.I0) + std::abs(c.I1) + std::abs(c.I2) < 1e-14);
  }

  TEST_CASE("antibunching from I2 < 0 comes with antisqueezing in the other quadrature") {
    const double r = 0.1;
    const CorrelatorTable s = gaussian_moments(displaced_squeezed(optimal_coherent_amplitude(r), r, 0), 2);
    const DecompositionG2 d = decompose_g2(s.at(0, 1), s);
    REQUIRE(d.I2 < 0);
    const QuadratureStats q = quadrature_stats(s);
    CHECK(q.var_min < 0);
    CHECK(q.var_max >= q.var_min);
    CHECK(0.5 + q.var_max > 0.5);
    CHECK(q.r_eff == doctest::Approx(r).epsilon(1e-12));
  }

  TEST_CASE("beam splitter keeps T^2 + R^2 = 1") {
    for (double T : {0.0, 0.3, 0.7071, 1.0}) {
      const MixRatio m = MixRatio::from_T(T);
      CHECK(m.T * m.T + m.R * m.R == doctest::Approx(1).epsilon(1e-15));
    }
    CHECK_THROWS_AS(MixRatio::from_T(1.2), InvalidParameter);
  }

  TEST_CASE("n-norm reduces to the single coherence") {
    CHECK(n_norm({0.4}, 1).value == doctest::Approx(0.4));
    CHECK(n_norm({3, 4}, 2).value == doctest::Approx(5));
    CHECK(n_norm({1, 1}, 2, false).finite_drive);
    CHECK_THROWS_AS(n_norm({1, -1}, 2), DomainError);
  }
}
