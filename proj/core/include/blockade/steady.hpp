#pragma once

#include "blockade/fockspace.hpp"

#include <map>
#include <string>
#include <vector>

namespace blockade {

// Exponents (m, n, mu, nu) of <s^dag^m s^n a^dag^mu a^nu>: matter first, cavity second.
using Key = std::array<int, 4>;

// Normal-ordered steady-state moments. Two-level exponents above one read as zero.
class CorrelatorTable {
 public:
  CorrelatorTable(bool matter_two_level = false, bool cavity_two_level = false);

  void set(const Key& k, cplx v, int drive_order);
  bool contains(const Key& k) const;
  cplx at(const Key& k) const;  // throws IncompleteTable
  cplx at(int m, int n, int mu = 0, int nu = 0) const { return at(Key{m, n, mu, nu}); }
  int drive_order(const Key& k) const;

  // Single-mode view keyed as (p, q, 0, 0).
  CorrelatorTable single_mode(Role r) const;

  double conjugation_defect() const;
  void enforce_conjugation();

  const std::map<Key, cplx>& entries() const { return entries_; }
  bool matter_two_level() const { return tl_[0]; }

 private:
  bool vanishes(const Key& k) const;

  std::map<Key, cplx> entries_;
  std::map<Key, int> order_;
  std::array<bool, 2> tl_;
};

// Steady state of L, normalised with a trace row. Throws AmbiguousSteadyState on a degenerate kernel.
DensityMatrix steady_state(const Superoperator& L);

struct SteadyResult {
  System system;
  DensityMatrix rho;
  double residual = 0;         // ||L vec(rho)||
  double top_population = 0;   // largest population of a boson's highest level
  std::vector<std::string> warnings;
};

SteadyResult solve_steady(const SystemParams& p, const Truncation& t = {});

// <c^dag^N c^N> / <c^dag c>^N. N = 1 returns 1.
double gN(const DensityMatrix& rho, const Operator& c, int N);

// All moments with total order up to max_order, read off a density matrix.
CorrelatorTable moments_from_density(const System& s, const DensityMatrix& rho, int max_order);

// g^(N) from a single-mode table.
double gN_of_table(const CorrelatorTable& single, int N);

// Vanishing-drive recursion over the regression hierarchy.
struct RegressionMatrix {
  std::vector<std::vector<Key>> blocks;  // blocks[K-1] holds total order K
  std::map<std::pair<Key, Key>, cplx> coefficients;  // d<O>/dt = sum_O' c(O,O') <O'>
  std::map<std::pair<Key, Key>, int> drive_tag;      // 1 where the coefficient carries a drive
};

RegressionMatrix regression_matrix(const Model& m, int max_total_order);
CorrelatorTable low_drive_correlators(const Model& m, int max_total_order);
CorrelatorTable low_drive_correlators(const SystemParams& p, int max_total_order);
double gN_limit(const SystemParams& p, Role r, int N);

}  // namespace blockade
