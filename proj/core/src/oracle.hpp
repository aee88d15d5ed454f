#pragma once

#include <array>
#include <random>
#include <string>

namespace blockade::detail {

// One random parameter draw for RF (homodyne), AO, JC or POL, with g2 from the
// analytic, recursive, liouvillian and wavefunction engines in that order.
std::array<double, 4> oracle_draw(const std::string& system, std::mt19937& rng, double drive);

// Largest pairwise relative spread of the four values, and the tolerance that applies to it.
double oracle_spread(const std::array<double, 4>& v);
double oracle_tolerance(const std::array<double, 4>& v);

}  // namespace blockade::detail
