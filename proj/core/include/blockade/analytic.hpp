#pragma once

#include "blockade/fockspace.hpp"
#include "blockade/mixer.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace blockade {

// ---- resonance fluorescence (two-level emitter) ----

struct RfSteady {
  double n_sigma = 0;
  cplx alpha = 0;  // <sigma>
  double n_eps = 0;
  double p = 0;    // effective normalised drive 2 Omega / sqrt(gamma^2 + 4 Delta^2)
};

RfSteady rf_steady(double omega, double gamma, double delta);

// g^(N) of the fluctuations sigma - <sigma>, from the exact populations.
double rf_gN_fluct(int N, double omega, double gamma, double delta);
// The same quantity written directly in the drive.
double rf_gN_fluct_physical(int N, double omega, double gamma, double delta);

struct HomodyneResult {
  double n_s = 0;
  double gN = 0;
};

// Leading-order emitter plus admixed laser.
HomodyneResult rf_homodyne_gN(int N, double F, double phi, double omega, double gamma, double delta, double T = 1);

// Laser (phi_N, F_N) that cancels g^(N) of the mixed field, with F_N > 0.
std::pair<double, double> rf_interference_conditions(int N, double gamma, double delta);

// ---- anharmonic oscillator ----

struct AoObservables {
  double n = 0;
  double gN = 0;
};

AoObservables ao_observables(int N, double U, double omega, double gamma, double delta);
double ao_level(int N, double omega_b, double U);

struct AoExtrema {
  double delta_minus = 0, delta_plus = 0;
  double g2_minus = 0, g2_plus = 0;
};

AoExtrema ao_extrema(double U, double gamma);
DecompositionG2 ao_decompose(double U, double gamma, double delta);

// Oscillator output mixed with a laser; g2 is exact at leading order in the drive.
HomodyneResult ao_homodyne(double U, double omega, double gamma, double delta, double F, double phi,
                           double T = 1);

// Real laser settings (F, phi) that cancel g2 of the mixed oscillator output.
std::vector<std::pair<double, double>> ao_g2_zeros(double U, double gamma, double delta);

// ---- Jaynes-Cummings and polaritons ----

struct Populations {
  double n_a = 0, n_matter = 0;
};

Populations jc_populations(const JC& p);
double jc_g2(const JC& p);
// Transcribed long forms, kept for cross-checks; only valid where noted in the tests.
double jc_g2_long_form(const JC& p);
double jc_g2_cavity_driven(const JC& p);  // chi = 0 short form

struct DressedLevels {
  std::vector<cplx> E;
  double R = 0;
};

// E^(N)_{-,+} in absolute frequencies.
DressedLevels jc_dressed_energies(int N, double omega_a, double omega_s, double g, double gamma_a,
                                  double gamma_s);
inline double laser_resonance(cplx E, int N) { return E.real() / N; }

enum class FeatureKind { CA, CB, UA, UB };
const char* feature_name(FeatureKind k);

using Point2 = std::array<double, 2>;

struct FeatureCondition {
  FeatureKind kind;
  std::string label;
  std::vector<std::vector<Point2>> curve;  // polylines in (omega_a, omega_L)
  std::optional<Point2> point;             // (Delta_a, Delta_matter) for exact zeros
  std::optional<Point2> auxiliary;         // (F, phi) when a laser correction applies
  bool exact = false;
};

struct FeatureWindow {
  double wa_min = -2, wa_max = 2;
  double wl_min = -2, wl_max = 2;
  double omega_matter = 0;
  int samples = 801;
};

std::vector<FeatureCondition> jc_feature_conditions(const JC& p, const FeatureWindow& w = {});
DecompositionG2 jc_g2_decomposition(const JC& p);
std::optional<double> jc_critical_coupling(double gamma_a, double gamma_s, double delta_a, double delta_s);

// Perfect-antibunching detunings with chi = 0, or nullopt when the radicand is negative.
std::optional<std::array<Point2, 2>> jc_exact_zero(double g, double gamma_a, double gamma_s);

// Complex Delta_a that zeroes the two-photon amplitude, as a function of the matter detuning.
cplx jc_ua_complex(const JC& p, double delta_s);
cplx pol_ua_complex(const POL& p, double delta_b);

enum class Mode { cavity, exciton };

Populations pol_populations(const POL& p);
double pol_g2(const POL& p, Mode which);
double pol_g2_cavity_long_form(const POL& p);  // chi = 0 transcription
double pol_g2_cavity_driven(const POL& p);     // chi = 0 short form

DressedLevels pol_dressed_energies(double omega_a, double omega_b, double g, double U);
// Exact second rung of the dissipative polariton, sorted by real part.
DressedLevels pol_second_rung_exact(double omega_a, double omega_b, double g, double U, double gamma_a,
                                    double gamma_b);

std::vector<FeatureCondition> pol_feature_conditions(const POL& p, const FeatureWindow& w = {});
DecompositionG2 pol_g2_decomposition(const POL& p);

// Matter detunings where Im of the complex UA detuning vanishes (any chi).
std::vector<double> jc_exact_zero_scan(const JC& p, double span);
std::vector<double> pol_exact_zero_scan(const POL& p, double span);

// Leading-order amplitudes (C10, C01, C20, C11, C02) with unit drive.
struct TwoExcitation {
  cplx C10, C01, C20, C11, C02;
};
TwoExcitation jc_amplitudes(const JC& p);
TwoExcitation pol_amplitudes(const POL& p);

}  // namespace blockade
