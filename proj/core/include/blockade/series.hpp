#pragma once

#include "blockade/mixer.hpp"
#include "blockade/steady.hpp"

#include <vector>

namespace blockade {

enum class Observable { n, g2, g3 };

// Which field an observable is read from.
struct Signal {
  enum class Kind { bare, fluctuations, homodyne };
  Kind kind = Kind::bare;
  Role role = Role::cavity;
  Homodyne laser{};  // used when kind == homodyne
};

// The mode a signal reads by default: the emitter for RF and AO, the cavity otherwise.
Role default_role(const SystemParams& p);

// Single-mode moments of the chosen signal. The laser amplitude scales with `omega`.
CorrelatorTable signal_moments(const System& s, const DensityMatrix& rho, const Signal& sig, double omega,
                               int max_exponent);

// Full-Liouvillian value of an observable at the drive stored in p.
double observable_at(const SystemParams& p, Observable obs, const Signal& sig, const Truncation& t = {});

struct DriveWindow {
  double lo = 1e-2, hi = 1e-1;  // drive amplitudes, log spaced
  int count = 6;
};

struct SeriesFit {
  std::vector<int> powers;
  std::vector<double> coefficients;
  std::vector<double> drives, values;
  double max_rel_residual = 0;
  double condition = 0;

  double coefficient(int power) const;
};

// Least-squares fit of an observable to sum_k c_k Omega^{powers[k]} over the window.
SeriesFit series_expand(const SystemParams& p, Observable obs, const Signal& sig, const std::vector<int>& powers,
                        const DriveWindow& w = {}, const Truncation& t = {});

// Fit a + b x^2 + c x^4 through three drives and return a: the zero-drive limit.
double extrapolate_zero_drive(const std::array<double, 3>& drives, const std::array<double, 3>& values);

}  // namespace blockade
