#include "blockade/mixer.hpp"

#include "blockade/errors.hpp"

#include <cmath>

namespace blockade {

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double double_factorial(int k) {
  double r = 1;
  for (int i = k; i > 1; i -= 2) r *= i;
  return r;
}

double population(const CorrelatorTable& s) {
  const double n = s.at(1, 1).real();
  if (!(n > 0)) throw UndefinedCorrelation("decomposition of an empty signal", n);
  return n;
}

}  // namespace

cplx mixed_correlator(int n, int m, cplx alpha, const CorrelatorTable& d) {
  cplx sum = 0;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= m; ++q) {
      const cplx w = binom(n, p) * binom(m, q) * std::pow(std::conj(alpha), p) * std::pow(alpha, q);
      if (w == 0.0) continue;
      sum += w * d.at(n - p, m - q);
    }
  return sum;
}

CorrelatorTable mix(cplx alpha, const CorrelatorTable& d, int max_exponent) {
  CorrelatorTable out;
  for (int n = 0; n <= max_exponent; ++n)
    for (int m = 0; m <= max_exponent; ++m)
      if (n + m > 0) out.set({n, m, 0, 0}, mixed_correlator(n, m, alpha, d), n + m);
  return out;
}

DecompositionG2 decompose_g2(cplx a, const CorrelatorTable& s) {
  const double n = population(s);
  const CorrelatorTable d = mix(-a, s, 2);
  const cplx ac = std::conj(a);
  const double a2 = std::norm(a);
  const double nd = d.at(1, 1).real();
  const cplx md = d.at(0, 1);
  const double re = (ac * md).real();
  DecompositionG2 out;
  out.I0 = (d.at(2, 2).real() - nd * nd) / (n * n);
  out.I1 = 4 * (ac * (d.at(1, 2) - nd * md)).real() / (n * n);
  out.I2 = 2 * ((ac * ac * d.at(0, 2)).real() - 2 * re * re + a2 * nd) / (n * n);
  return out;
}

DecompositionG3 decompose_g3(cplx a, const CorrelatorTable& s) {
  const double n = population(s);
  const double n3 = n * n * n;
  const CorrelatorTable d = mix(-a, s, 3);
  const cplx ac = std::conj(a);
  const double a2 = std::norm(a);
  const double nd = d.at(1, 1).real();
  const cplx md = d.at(0, 1);
  const double re = (ac * md).real();
  DecompositionG3 out;
  out.J[0] = (d.at(3, 3).real() - nd * nd * nd) / n3;
  out.J[1] = 6 * (ac * (d.at(2, 3) - nd * nd * md)).real() / n3;
  out.J[2] = (6 * (ac * ac * d.at(1, 3)).real() + 9 * a2 * d.at(2, 2).real() - 3 * a2 * nd * nd -
              12 * nd * re * re) / n3;
  out.J[3] = (2 * (ac * ac * ac * d.at(0, 3)).real() + 18 * a2 * (ac * d.at(1, 2)).real() - 12 * a2 * nd * re -
              8 * re * re * re) / n3;
  out.J[4] = 6 * a2 * ((ac * ac * d.at(0, 2)).real() + a2 * nd - 2 * re * re) / n3;
  return out;
}

double coherence(const CorrelatorTable& s, int N) { return gN_of_table(s, N); }

CorrelatorTable gaussian_moments(const GaussianState& g, int max_exponent) {
  if (g.n_th < 0) throw InvalidParameter("thermal population must be non-negative");
  const double r = g.r();
  const double N = (g.n_th + 0.5) * std::cosh(2 * r) - 0.5;
  const cplx M = -std::polar(1.0, g.theta()) * (g.n_th + 0.5) * std::sinh(2 * r);
  // Zero-mean Gaussian: k cross pairs, the rest paired within d^dag's and within d's.
  CorrelatorTable d;
  for (int p = 0; p <= max_exponent; ++p)
    for (int q = 0; q <= max_exponent; ++q) {
      if (p + q == 0) continue;
      cplx v = 0;
      for (int k = 0; k <= std::min(p, q); ++k) {
        if ((p - k) % 2 || (q - k) % 2) continue;
        const double count = binom(p, k) * binom(q, k) * std::tgamma(k + 1.0) * double_factorial(p - k - 1) *
                             double_factorial(q - k - 1);
        v += count * std::pow(N, k) * std::pow(std::conj(M), (p - k) / 2) * std::pow(M, (q - k) / 2);
      }
      d.set({p, q, 0, 0}, v, p + q);
    }
  return mix(g.alpha, d, max_exponent);
}

DstObservables dst_observables(const GaussianState& g) {
  const CorrelatorTable s = gaussian_moments(g, 3);
  DstObservables o;
  o.n = s.at(1, 1).real();
  if (!(o.n > 0)) throw UndefinedCorrelation("empty displaced squeezed state", o.n);
  o.abs_s2 = std::abs(s.at(0, 2));
  o.g2 = s.at(2, 2).real() / (o.n * o.n);
  o.g3 = s.at(3, 3).real() / (o.n * o.n * o.n);
  return o;
}

double dst_g2_closed(double abs_alpha, double r, double dphi) {
  const double sh2 = std::sinh(r) * std::sinh(r);
  const double a2 = abs_alpha * abs_alpha;
  const double n = a2 + sh2;
  if (!(n > 0)) throw UndefinedCorrelation("empty displaced squeezed state", n);
  // sinh^2 r coth r written as sinh r cosh r so that r = 0 stays finite.
  return 1 + (sh2 * std::cosh(2 * r) + 2 * a2 * (sh2 - std::cos(dphi) * std::sinh(r) * std::cosh(r))) / (n * n);
}

MixRatio MixRatio::from_T(double T, double F, double phi) {
  if (T < 0 || T > 1) throw InvalidParameter("transmittance must lie in [0, 1]");
  if (F < 0) throw InvalidParameter("laser fraction must be non-negative");
  return MixRatio{T, std::sqrt(1 - T * T), F, phi};
}

BeamSplitterOutput beam_splitter_dst(double r, double theta, cplx alpha, const MixRatio& mr) {
  if (r < 0) throw InvalidParameter("squeezing must be non-negative");
  BeamSplitterOutput out;
  out.state.alpha = mr.T * alpha;
  out.state.xi = std::polar(mr.R * mr.R * r, theta + kPi);
  const double s = std::sinh(mr.R * mr.T * r);
  out.state.n_th = s * s;
  out.approximate = std::abs(mr.T - mr.R) > 0.05 && r > 0.2;
  return out;
}

GaussianState displaced_squeezed(cplx alpha, double r, double theta, double n_th) {
  if (r < 0) throw InvalidParameter("squeezing must be non-negative");
  return GaussianState{alpha, std::polar(r, theta), n_th};
}

double optimal_coherent_amplitude(double r) {
  if (r < 0) throw InvalidParameter("squeezing must be non-negative");
  return std::exp(r) * std::sqrt(std::cosh(r) * std::sinh(r));
}

double dst_g2_min(double r) { return 1 - std::exp(-2 * r) / (1 + std::sinh(2 * r)); }

NNorm n_norm(const std::vector<double>& g, int n, bool vanishing_drive) {
  if (n < 1 || static_cast<int>(g.size()) != n) throw InvalidParameter("n-norm needs exactly n coherences");
  double sum = 0;
  for (double x : g) {
    if (x < 0) throw DomainError("coherence functions are non-negative");
    sum += std::pow(x, n);
  }
  return NNorm{std::pow(sum, 1.0 / n), !vanishing_drive};
}

QuadratureStats quadrature_stats(const CorrelatorTable& s) {
  const cplx m = s.at(0, 1);
  const double N = s.at(1, 1).real() - std::norm(m);
  const cplx M = s.at(0, 2) - m * m;
  QuadratureStats q;
  q.mean = std::abs(m);
  q.var_max = 0.5 * (N + std::abs(M));
  q.var_min = 0.5 * (N - std::abs(M));
  q.theta_sq = std::arg(M);
  // Squeezed thermal state with the same second moments.
  const double x = (N + 0.5) * (N + 0.5) - std::norm(M);
  q.p_th_eff = std::max(0.0, std::sqrt(std::max(0.0, x)) - 0.5);
  q.r_eff = N > 0 ? 0.5 * std::atanh(std::min(1.0, std::abs(M) / (N + 0.5))) : 0.0;
  q.g2_eff = N > 0 ? 2 + std::norm(M) / (N * N) : 0.0;
  return q;
}

QuadratureStats rf_effective_squeezing(double omega, double gamma, double delta) {
  if (omega < 0) throw InvalidParameter("drive must be non-negative");
  const double G2 = Gamma2(gamma, delta);
  const double D = G2 + 8 * omega * omega;
  const double n = 4 * omega * omega / D;
  const cplx a = cplx(0, -2) * omega * cplx(gamma, -2 * delta) / D;
  QuadratureStats q;
  q.mean = std::abs(a);
  q.var_max = 0.5 * n;
  q.var_min = 0.5 * (n - 2 * std::norm(a));
  q.theta_sq = std::arg(-a * a);
  q.r_eff = 4 * omega * omega / G2;
  q.p_th_eff = q.r_eff * q.r_eff;
  q.g2_eff = omega > 0 ? G2 * G2 / (64 * std::pow(omega, 4)) : 0.0;
  return q;
}

GaussianState driven_cavity_state_map(const std::variant<CoherentDrive, SqueezedDrive>& kind) {
  if (const auto* c = std::get_if<CoherentDrive>(&kind)) {
    if (!(c->gamma > 0)) throw InvalidParameter("decay rate must be positive");
    return GaussianState{cplx(0, -2) * c->omega / cplx(c->gamma, 2 * c->delta), 0, 0};
  }
  const auto& s = std::get<SqueezedDrive>(kind);
  if (!(s.gamma > 0)) throw InvalidParameter("decay rate must be positive");
  const double G = std::sqrt(Gamma2(s.gamma, s.delta));
  if (4 * s.lambda >= G) throw Instability("two-photon drive above the parametric threshold");
  const double r = 0.5 * std::atanh(4 * s.lambda / G);
  const double sh = std::sinh(r);
  return GaussianState{0, std::polar(r, std::arg(cplx(2 * s.delta, s.gamma))), sh * sh};
}

cplx homodyne_amplitude(const Homodyne& h, double omega, double gamma) {
  return cplx(0, -1) * (omega / gamma) * h.F * std::polar(1.0, h.phi);
}

CorrelatorTable homodyne_moments(const Homodyne& h, double omega, double gamma, const CorrelatorTable& c,
                                 int max_exponent) {
  const CorrelatorTable m = mix(homodyne_amplitude(h, omega, gamma), c, max_exponent);
  CorrelatorTable out;
  for (const auto& [k, v] : m.entries())
    if (k[0] + k[1] > 0) out.set(k, v * std::pow(h.T, k[0] + k[1]), m.drive_order(k));
  return out;
}

}  // namespace blockade
