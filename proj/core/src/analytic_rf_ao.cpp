#include "blockade/analytic.hpp"
#include "blockade/errors.hpp"
#include "roots.hpp"

#include <algorithm>
#include <cmath>

namespace blockade {

RfSteady rf_steady(double omega, double gamma, double delta) {
  if (!(gamma > 0)) throw InvalidParameter("gamma must be positive");
  if (omega < 0) throw InvalidParameter("drive must be non-negative");
  const double G2 = Gamma2(gamma, delta);
  const double D = G2 + 8 * omega * omega;
  RfSteady s;
  s.n_sigma = 4 * omega * omega / D;
  // Laser-frame sign: <sigma> = -2 i Omega (gamma - 2 i Delta) / D.
  s.alpha = cplx(0, -2) * omega * cplx(gamma, -2 * delta) / D;
  s.n_eps = s.n_sigma - std::norm(s.alpha);
  s.p = 2 * omega / std::sqrt(G2);
  return s;
}

double rf_gN_fluct(int N, double omega, double gamma, double delta) {
  if (N < 2) throw InvalidParameter("fluctuation g^(N) needs N >= 2");
  const RfSteady s = rf_steady(omega, gamma, delta);
  if (!(s.n_eps > 0)) throw UndefinedCorrelation("fluctuations of an undriven emitter", s.n_eps);
  const double a2 = std::norm(s.alpha);
  return std::pow(a2, N - 1) * (N * N * s.n_sigma + (1 - 2 * N) * a2) / std::pow(s.n_eps, N);
}

double rf_gN_fluct_physical(int N, double omega, double gamma, double delta) {
  if (N < 2) throw InvalidParameter("fluctuation g^(N) needs N >= 2");
  if (!(omega > 0)) throw UndefinedCorrelation("fluctuations of an undriven emitter", 0.0);
  const double G2 = Gamma2(gamma, delta);
  return std::pow(G2, N - 1) * ((N - 1.0) * (N - 1.0) * G2 + 8.0 * N * N * omega * omega) /
         (std::pow(8.0, N) * std::pow(omega, 2 * N));
}

namespace {

double rf_G(int N, double F, double phi, double omega, double gamma, double delta, double T) {
  const double G2 = Gamma2(gamma, delta);
  const double bracket = F * F * G2 + 4.0 * N * F * gamma * (gamma * std::cos(phi) - 2 * delta * std::sin(phi)) +
                         4.0 * N * N * gamma * gamma;
  return std::pow(T, 2 * N) * std::pow(F, 2 * (N - 1)) * std::pow(omega / gamma, 2 * N) * bracket / G2;
}

}  // namespace

HomodyneResult rf_homodyne_gN(int N, double F, double phi, double omega, double gamma, double delta, double T) {
  if (N < 1) throw InvalidParameter("N must be at least 1");
  if (F < 0) throw InvalidParameter("laser fraction must be non-negative");
  if (!(gamma > 0)) throw InvalidParameter("gamma must be positive");
  HomodyneResult r;
  r.n_s = rf_G(1, F, phi, omega, gamma, delta, T);
  if (!(r.n_s > 0)) throw UndefinedCorrelation("mixed field is empty", r.n_s);
  r.gN = N == 1 ? 1.0 : rf_G(N, F, phi, omega, gamma, delta, T) / std::pow(r.n_s, N);
  return r;
}

std::pair<double, double> rf_interference_conditions(int N, double gamma, double delta) {
  if (N < 1) throw InvalidParameter("N must be at least 1");
  // cos(phi) < 0 keeps F = -2 N cos(phi) positive; (phi + pi, -F) is the same laser.
  double phi = std::atan2(2 * delta, -gamma);
  if (phi < 0) phi += 2 * kPi;
  return {phi, 2.0 * N * gamma / std::sqrt(Gamma2(gamma, delta))};
}

AoObservables ao_observables(int N, double U, double omega, double gamma, double delta) {
  if (N < 1) throw InvalidParameter("N must be at least 1");
  if (!(gamma > 0)) throw InvalidParameter("gamma must be positive");
  AoObservables o;
  o.n = 4 * omega * omega / Gamma2(gamma, delta);
  o.gN = 1;
  for (int k = 1; k < N; ++k) {
    const double x = 2 * delta + k * U;
    o.gN *= Gamma2(gamma, delta) / (gamma * gamma + x * x);
  }
  return o;
}

double ao_level(int N, double omega_b, double U) { return N * omega_b + 0.5 * N * (N - 1) * U; }

AoExtrema ao_extrema(double U, double gamma) {
  if (!(U > 0)) throw InvalidParameter("extrema need U > 0");
  const double s = std::sqrt(U * U + 4 * gamma * gamma);
  AoExtrema e;
  e.delta_minus = -(U - s) / 4;
  e.delta_plus = -(U + s) / 4;
  e.g2_minus = ao_observables(2, U, 0, gamma, e.delta_minus).gN;
  e.g2_plus = ao_observables(2, U, 0, gamma, e.delta_plus).gN;
  return e;
}

DecompositionG2 ao_decompose(double U, double gamma, double delta) {
  const double x = U + 2 * delta;
  const double D = gamma * gamma + x * x;
  return DecompositionG2{U * U / D, 0.0, -2 * U * x / D};
}

namespace {

// <b> and <b^2> per unit drive at leading order.
std::pair<cplx, cplx> ao_moments(double U, double gamma, double delta) {
  const cplx b1 = cplx(0, -2) / cplx(gamma, 2 * delta);
  const cplx b2 = cplx(0, -2) * b1 / cplx(gamma, 2 * delta + U);
  return {b1, b2};
}

}  // namespace

HomodyneResult ao_homodyne(double U, double omega, double gamma, double delta, double F, double phi, double T) {
  if (F < 0) throw InvalidParameter("laser fraction must be non-negative");
  if (!(gamma > 0)) throw InvalidParameter("gamma must be positive");
  const auto [b1, b2] = ao_moments(U, gamma, delta);
  const cplx beta = homodyne_amplitude(Homodyne{F, phi, T}, 1.0, gamma);
  const cplx one = b1 + beta;
  HomodyneResult r;
  r.n_s = T * T * omega * omega * std::norm(one);
  if (!(r.n_s > 0)) throw UndefinedCorrelation("mixed field is empty", r.n_s);
  r.gN = std::norm(b2 + 2.0 * beta * b1 + beta * beta) / std::pow(std::norm(one), 2);
  return r;
}

std::vector<std::pair<double, double>> ao_g2_zeros(double U, double gamma, double delta) {
  if (!(U > 0)) throw InvalidParameter("interference zeros need U > 0");
  const auto [b1, b2] = ao_moments(U, gamma, delta);
  const cplx root = std::sqrt(1.0 - b2 / (b1 * b1));
  std::vector<std::pair<double, double>> out;
  for (const cplx beta : {-b1 * (1.0 + root), -b1 * (1.0 - root)}) {
    // F e^{i phi} = i gamma beta / Omega; look for phases that make F real.
    const cplx z = kI * gamma * beta;
    auto F = [z](double phi) { return z * std::polar(1.0, -phi); };
    for (double phi : detail::scan_roots([&](double x) { return F(x).imag(); }, 0.0, 2 * kPi, 1e-3)) {
      const double f = F(phi).real();
      if (!(f > 0) || phi >= 2 * kPi) continue;
      bool dup = false;
      for (const auto& [g, p] : out) dup = dup || (std::abs(g - f) < 1e-8 && std::abs(p - phi) < 1e-8);
      if (!dup) out.emplace_back(f, phi);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace blockade
