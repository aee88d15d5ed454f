#include "blockade/wavefunction.hpp"

#include "blockade/errors.hpp"
#include "blockade/mixer.hpp"

#include <cmath>
#include <limits>

namespace blockade {

cplx WavefunctionCoeffs::at(int n, int m) const {
  auto it = C.find({n, m});
  return it == C.end() ? cplx(0) : it->second;
}

Model sensor_model(const RfSensor& s) {
  const RF& p = s.rf;
  validate(p);
  const double Gs = s.sensor_ratio * std::max({p.gamma, std::abs(p.delta), p.omega});
  const double gs = s.coupling_ratio * p.gamma;
  // The sensor sees sigma + beta, so it is driven at gs * beta.
  const cplx D = gs * homodyne_amplitude(Homodyne{s.F, s.phi, 1.0}, p.omega, p.gamma);
  Model m;
  m.modes = {{"sensor", Role::cavity, true, Gs}, {"sigma", Role::matter, false, p.gamma}};
  m.terms = {{p.delta, Powers{{0, 0}, {1, 1}}, 0},
             {gs, Powers{{1, 0}, {0, 1}}, 0},
             {gs, Powers{{0, 1}, {1, 0}}, 0},
             {p.omega, Powers{{0, 0}, {1, 0}}, 1},
             {p.omega, Powers{{0, 0}, {0, 1}}, 1},
             {D, Powers{{1, 0}, {0, 0}}, 1},
             {std::conj(D), Powers{{0, 1}, {0, 0}}, 1}};
  m.drive_scale = p.omega;
  return m;
}

namespace {

double weak_drive(const SystemParams& p) {
  const Model m = model_of(p);
  return m.drive_scale / m.min_gamma();
}

}  // namespace

WavefunctionCoeffs wavefunction_coefficients(const WavefunctionInput& in) {
  Model m;
  double ratio = 0;
  if (const auto* s = std::get_if<RfSensor>(&in)) {
    m = sensor_model(*s);
    ratio = s->rf.omega / s->rf.gamma;
  } else {
    const SystemParams p = std::visit([](const auto& v) -> SystemParams {
      if constexpr (std::is_same_v<std::decay_t<decltype(v)>, RfSensor>) {
        return RF{};
      } else {
        return v;
      }
    }, in);
    m = model_of(p);
    ratio = weak_drive(p);
  }
  if (ratio > 1e-2 * (1 + 1e-12)) throw InvalidParameter("wavefunction approximation needs drive <= 1e-2 min gamma");

  std::vector<int> levels;
  for (const auto& md : m.modes) levels.push_back(md.boson ? 3 : 2);
  const System s = build_system(m, levels);

  Mat Heff = s.H.matrix();
  for (size_t i = 0; i < m.modes.size(); ++i)
    Heff -= cplx(0, 0.5 * m.modes[i].gamma) * (s.lowering[i].adjoint() * s.lowering[i]).matrix();

  std::vector<std::vector<int>> manifold(3);
  for (int k = 0; k < s.dim; ++k)
    if (s.grade[k] <= 2) manifold[s.grade[k]].push_back(k);

  Vec c = Vec::Zero(s.dim);
  c(manifold[0][0]) = 1.0;
  for (int e = 1; e <= 2; ++e) {
    const auto& here = manifold[e];
    const auto& below = manifold[e - 1];
    Mat A(here.size(), here.size());
    Vec rhs = Vec::Zero(here.size());
    for (size_t i = 0; i < here.size(); ++i) {
      for (size_t j = 0; j < here.size(); ++j) A(i, j) = Heff(here[i], here[j]);
      for (size_t j = 0; j < below.size(); ++j) rhs(i) -= Heff(here[i], below[j]) * c(below[j]);
    }
    const Vec x = A.partialPivLu().solve(rhs);
    for (size_t i = 0; i < here.size(); ++i) c(here[i]) = x(i);
  }

  WavefunctionCoeffs out;
  const int ic = m.mode_index(Role::cavity);
  const int im = m.mode_index(Role::matter);
  double norm = 0;
  for (int k = 0; k < s.dim; ++k) {
    if (s.grade[k] > 2) continue;
    int rest = k;
    int occ[2] = {0, 0};
    for (int i = static_cast<int>(levels.size()) - 1; i >= 0; --i) {
      occ[i] = rest % levels[i];
      rest /= levels[i];
    }
    const int n = ic >= 0 ? occ[ic] : 0;
    const int mm = im >= 0 ? occ[im] : 0;
    out.C[{n, mm}] = c(k);
    norm += std::norm(c(k));
  }
  out.vacuum_weight = 1.0 / norm;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.n_a = std::norm(out.at(1, 0));
  out.n_matter = std::norm(out.at(0, 1));
  out.g2_a = (ic >= 0 && out.n_a > 0) ? 2 * std::norm(out.at(2, 0)) / (out.n_a * out.n_a) : nan;
  const bool boson_matter = im >= 0 && m.modes[im].boson;
  out.g2_b = (boson_matter && out.n_matter > 0) ? 2 * std::norm(out.at(0, 2)) / (out.n_matter * out.n_matter) : nan;
  return out;
}

}  // namespace blockade
