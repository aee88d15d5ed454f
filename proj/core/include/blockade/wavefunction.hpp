#pragma once

#include "blockade/fockspace.hpp"

#include <map>
#include <utility>
#include <variant>

namespace blockade {

// A two-level emitter read out through a broadband sensor cavity that also receives
// an admixed laser of fraction F and phase phi (same map as the homodyne calculus).
struct RfSensor {
  RF rf;
  double F = 0;
  double phi = 0;
  double sensor_ratio = 1e5;    // sensor linewidth over the emitter scales
  double coupling_ratio = 1e-3;  // sensor coupling over gamma
};

using WavefunctionInput = std::variant<RfSensor, AO, JC, POL>;

struct WavefunctionCoeffs {
  // Amplitudes labelled (cavity photons, matter excitations); AO uses (0, m).
  std::map<std::pair<int, int>, cplx> C;
  double vacuum_weight = 1;
  double n_a = 0, n_matter = 0;
  double g2_a = 0, g2_b = 0;  // NaN where the mode is empty or two-level

  cplx at(int n, int m) const;
};

// Steady amplitudes of the non-Hermitian evolution, solved one excitation manifold at a time.
WavefunctionCoeffs wavefunction_coefficients(const WavefunctionInput& in);

// The sensor model used for RfSensor, exposed for tests.
Model sensor_model(const RfSensor& s);

}  // namespace blockade
