#include "blockade/series.hpp"

#include "blockade/errors.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace blockade {

Role default_role(const SystemParams& p) {
  return std::holds_alternative<RF>(p) || std::holds_alternative<AO>(p) ? Role::matter : Role::cavity;
}

CorrelatorTable signal_moments(const System& s, const DensityMatrix& rho, const Signal& sig, double omega,
                               int max_exponent) {
  const int i = s.model.mode_index(sig.role);
  if (i < 0) throw InvalidParameter("system has no such mode");
  const ModeSpec& mode = s.model.modes[i];
  const Operator& c = s.lowering[i];
  const Operator cd = c.adjoint();
  // Two-level moments vanish beyond first order, but the mixed field still needs the full square.
  const int top = mode.boson ? max_exponent : 1;
  CorrelatorTable bare(!mode.boson, false);
  std::vector<Operator> up{Operator::identity(s.dim)}, down{Operator::identity(s.dim)};
  for (int k = 1; k <= top; ++k) {
    up.push_back(up.back() * cd);
    down.push_back(down.back() * c);
  }
  for (int p = 0; p <= top; ++p)
    for (int q = 0; q <= top; ++q)
      if (p + q > 0) bare.set({p, q, 0, 0}, (up[p] * down[q]).expect(rho), p + q);
  bare.enforce_conjugation();

  switch (sig.kind) {
    case Signal::Kind::bare:
      if (mode.boson) return bare;
      return mix(0.0, bare, max_exponent);
    case Signal::Kind::fluctuations:
      return mix(-bare.at(0, 1), bare, max_exponent);
    case Signal::Kind::homodyne:
      return homodyne_moments(sig.laser, omega, mode.gamma, bare, max_exponent);
  }
  return bare;
}

double observable_at(const SystemParams& p, Observable obs, const Signal& sig, const Truncation& t) {
  const SteadyResult r = solve_steady(p, t);
  const int N = obs == Observable::n ? 1 : (obs == Observable::g2 ? 2 : 3);
  const CorrelatorTable m = signal_moments(r.system, r.rho, sig, drive_of(p), N);
  if (obs == Observable::n) return m.at(1, 1).real();
  return gN_of_table(m, N);
}

double SeriesFit::coefficient(int power) const {
  for (size_t k = 0; k < powers.size(); ++k)
    if (powers[k] == power) return coefficients[k];
  throw InvalidParameter("power not part of the fit");
}

SeriesFit series_expand(const SystemParams& p, Observable obs, const Signal& sig, const std::vector<int>& powers,
                        const DriveWindow& w, const Truncation& t) {
  if (w.count < 4) throw InvalidParameter("series fits need at least 4 drive samples");
  if (powers.empty() || static_cast<int>(powers.size()) > w.count)
    throw InvalidParameter("more fit powers than drive samples");
  if (!(w.lo > 0) || !(w.hi > w.lo)) throw InvalidParameter("drive window must satisfy 0 < lo < hi");

  SeriesFit fit;
  fit.powers = powers;
  for (int k = 0; k < w.count; ++k) {
    const double x = w.lo * std::pow(w.hi / w.lo, double(k) / (w.count - 1));
    fit.drives.push_back(x);
    fit.values.push_back(observable_at(with_drive(p, x), obs, sig, t));
  }

  // Each column scaled to unit norm so the condition number reflects the window, not the units.
  const int rows = w.count, cols = static_cast<int>(powers.size());
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd b(rows), scale(cols);
  for (int i = 0; i < rows; ++i) {
    b(i) = fit.values[i];
    for (int j = 0; j < cols; ++j) A(i, j) = std::pow(fit.drives[i], powers[j]);
  }
  for (int j = 0; j < cols; ++j) {
    scale(j) = A.col(j).norm();
    A.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  fit.condition = sv(cols - 1) > 0 ? sv(0) / sv(cols - 1) : INFINITY;
  if (fit.condition > 1e10) throw WindowTooWide(fit.condition);
  const Eigen::VectorXd c = svd.solve(b);
  for (int j = 0; j < cols; ++j) fit.coefficients.push_back(c(j) / scale(j));

  const Eigen::VectorXd model = A * c;
  for (int i = 0; i < rows; ++i) {
    const double denom = std::max(std::abs(b(i)), 1e-300);
    fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(model(i) - b(i)) / denom);
  }
  return fit;
}

double extrapolate_zero_drive(const std::array<double, 3>& x, const std::array<double, 3>& y) {
  Eigen::Matrix3d A;
  for (int i = 0; i < 3; ++i) A.row(i) << 1.0, x[i] * x[i], std::pow(x[i], 4);
  const Eigen::Vector3d c = A.colPivHouseholderQr().solve(Eigen::Vector3d(y[0], y[1], y[2]));
  return c(0);
}

}  // namespace blockade
