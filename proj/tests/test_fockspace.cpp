#include "blockade/errors.hpp"
#include "blockade/fockspace.hpp"

#include <doctest.h>

using namespace blockade;

TEST_SUITE("fockspace") {
  TEST_CASE("boson lowering has sqrt(n) above the diagonal") {
    const Operator a = build_mode(Boson{6});
    for (int n = 1; n < 6; ++n) CHECK(a(n - 1, n).real() == doctest::Approx(std::sqrt(double(n))).epsilon(1e-15));
    CHECK((a.adjoint() * a).matrix().diagonal().real().sum() == doctest::Approx(15));
  }

  TEST_CASE("two-level lowering squares to zero") {
    const Operator s = build_mode(TwoLevel{});
    CHECK((s * s).matrix().norm() == 0);
    CHECK(s(0, 1) == cplx(1));
  }

  TEST_CASE("adjoint is an involution, bit for bit") {
    Mat m = Mat::Random(5, 5) + kI * Mat::Random(5, 5);
    const Operator op(m);
    CHECK((op.adjoint().adjoint().matrix() - m).norm() == 0);
  }

  TEST_CASE("too few levels is rejected") {
    CHECK_THROWS_AS(build_mode(Boson{1}), InvalidTruncation);
    CHECK_THROWS_AS(build_system(JC{0, 0, 1, 0.1, 0, 0, 1, 1}, Truncation{0}), InvalidTruncation);
  }

  TEST_CASE("parameter invariants") {
    CHECK_THROWS_AS(validate(RF{0, 0.1, 0}), InvalidParameter);
    CHECK_THROWS_AS(validate(AO{0, -1, 0.1, 1}), InvalidParameter);
    JC jc;
    jc.phi = 2 * kPi;
    CHECK_THROWS_AS(validate(jc), InvalidParameter);
    POL pol;
    pol.chi = -0.1;
    CHECK_THROWS_AS(validate(pol), InvalidParameter);
    CHECK_NOTHROW(validate(JC{}));
  }

  TEST_CASE("resonant undriven emitter has no Hamiltonian") {
    CHECK(build_hamiltonian(RF{0, 0, 1}).matrix().norm() == 0);
  }

  TEST_CASE("AO at U=0 keeps the ladder Delta n") {
    AO ao;
    ao.delta = 0.7;
    const Operator H = build_hamiltonian(ao, Truncation{6});
    CHECK((H.matrix() - H.matrix().diagonal().asDiagonal().toDenseMatrix()).norm() == 0);
    for (int n = 0; n <= 6; ++n) CHECK(H(n, n).real() == doctest::Approx(0.7 * n));
  }

  TEST_CASE("truncation counts photons, not levels") {
    const System s = build_system(JC{0, 0, 1, 0.1, 0, 0, 1, 1}, Truncation{4});
    CHECK(s.levels == std::vector<int>{5, 2});
    CHECK(s.dim == 10);
    CHECK(s.top_level(Role::cavity) == 4);
  }

  TEST_CASE("every Liouvillian preserves the trace") {
    JC jc{0.3, -0.2, 1, 0.2, 0.5, 1.0, 0.4, 0.05};
    POL pol{0.1, 0.2, 0.7, 0.5, 0.3, 0.2, 1.5, 0.2, 0.1};
    for (const SystemParams& p : std::vector<SystemParams>{RF{0.2, 0.4, 1}, AO{0.1, 0.5, 0.4, 1}, jc, pol})
      CHECK(build_liouvillian(p, Truncation{5}).trace_residual() < 1e-12);
  }

  TEST_CASE("vectorisation stacks columns") {
    Mat m(2, 2);
    m << 1, 2, 3, 4;
    const Vec v = vectorize(Operator(m));
    CHECK(v(1) == cplx(3));
    CHECK(v(2) == cplx(2));
    CHECK((unvectorize(v, 2).matrix() - m).norm() == 0);
  }
}
