#pragma once

#include "blockade/steady.hpp"

#include <variant>

namespace blockade {

// <s^dag^n s^m> for s = alpha + d, from a single-mode table of d keyed (p, q, 0, 0).
cplx mixed_correlator(int n, int m, cplx alpha, const CorrelatorTable& d);

// Every moment with n, m <= max_exponent of the mixed field.
CorrelatorTable mix(cplx alpha, const CorrelatorTable& d, int max_exponent);

struct DecompositionG2 {
  double I0 = 0, I1 = 0, I2 = 0;
  double total() const { return 1 + I0 + I1 + I2; }
};

struct DecompositionG3 {
  std::array<double, 5> J{};
  double total() const { return 1 + J[0] + J[1] + J[2] + J[3] + J[4]; }
};

// Split s into mean_field + d and sort g^(2), g^(3) by powers of the mean field.
DecompositionG2 decompose_g2(cplx mean_field, const CorrelatorTable& s);
DecompositionG3 decompose_g3(cplx mean_field, const CorrelatorTable& s);

// g^(N) of a single-mode table.
double coherence(const CorrelatorTable& s, int N);

struct GaussianState {
  cplx alpha = 0;
  cplx xi = 0;  // r e^{i theta}
  double n_th = 0;

  double r() const { return std::abs(xi); }
  double theta() const { return std::arg(xi); }
};

// Normal-ordered moments of a displaced squeezed thermal state up to max_exponent per operator.
CorrelatorTable gaussian_moments(const GaussianState& g, int max_exponent);

struct DstObservables {
  double n = 0, abs_s2 = 0, g2 = 0, g3 = 0;
};

DstObservables dst_observables(const GaussianState& g);

// Closed g^(2) of a displaced pure squeezed state, with |alpha| and the alignment angle theta - 2 phi.
double dst_g2_closed(double abs_alpha, double r, double theta_minus_2phi);

struct MixRatio {
  double T = 1, R = 0;
  double F = 0, phi = 0;

  static MixRatio from_T(double T, double F = 0, double phi = 0);
};

struct BeamSplitterOutput {
  GaussianState state;
  bool approximate = false;  // the single-arm factorisation only holds for T close to R
};

// One output arm of a beam splitter fed with a squeezed vacuum (r, theta) and a coherent alpha.
BeamSplitterOutput beam_splitter_dst(double r, double theta, cplx alpha, const MixRatio& mr);

// s = alpha + d with no splitter bookkeeping: the plain sum used throughout the mixing calculus.
GaussianState displaced_squeezed(cplx alpha, double r, double theta, double n_th = 0);

double optimal_coherent_amplitude(double r);
double dst_g2_min(double r);

struct NNorm {
  double value = 0;
  bool finite_drive = false;  // flagged when inputs were not vanishing-drive values
};

NNorm n_norm(const std::vector<double>& g, int n, bool vanishing_drive = true);

struct QuadratureStats {
  double mean = 0;  // |<s>|
  double var_min = 0, var_max = 0;
  double theta_sq = 0;
  double r_eff = 0, p_th_eff = 0;
  double g2_eff = 0;
};

// Normal-ordered quadrature variances of the fluctuations of a single-mode table.
QuadratureStats quadrature_stats(const CorrelatorTable& s);
QuadratureStats rf_effective_squeezing(double omega, double gamma, double delta);

struct CoherentDrive {
  double omega, delta, gamma;
};
struct SqueezedDrive {
  double lambda, delta, gamma;
};

GaussianState driven_cavity_state_map(const std::variant<CoherentDrive, SqueezedDrive>& kind);

// Admixed laser: fraction F of the emitter's coherent scale, phase phi, transmittance T.
struct Homodyne {
  double F = 0, phi = 0, T = 1;
};

cplx homodyne_amplitude(const Homodyne& h, double omega, double gamma);

// Moments of T (c + beta) from moments of c.
CorrelatorTable homodyne_moments(const Homodyne& h, double omega, double gamma, const CorrelatorTable& c,
                                 int max_exponent);

}  // namespace blockade
