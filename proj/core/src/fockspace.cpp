#include "blockade/fockspace.hpp"

#include "blockade/errors.hpp"
#include "overload.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace blockade {

Operator::Operator(Mat m) : m_(std::move(m)) {}

Operator Operator::adjoint() const { return Operator(m_.adjoint()); }

Operator Operator::pow(int k) const {
  Mat r = Mat::Identity(m_.rows(), m_.cols());
  for (int i = 0; i < k; ++i) r = r * m_;
  return Operator(std::move(r));
}

Operator Operator::kron(const Operator& rhs) const {
  return Operator(Eigen::kroneckerProduct(m_, rhs.m_).eval());
}

cplx Operator::expect(const Operator& rho) const { return (rho.m_ * m_).trace(); }

Operator Operator::identity(int dim) { return Operator(Mat::Identity(dim, dim)); }

Operator operator*(const Operator& a, const Operator& b) { return Operator(a.m_ * b.m_); }
Operator operator+(const Operator& a, const Operator& b) { return Operator(a.m_ + b.m_); }
Operator operator-(const Operator& a, const Operator& b) { return Operator(a.m_ - b.m_); }
Operator operator*(cplx s, const Operator& a) { return Operator(s * a.m_); }

Operator build_mode(const ModeKind& kind) {
  if (std::holds_alternative<TwoLevel>(kind)) {
    Mat s = Mat::Zero(2, 2);
    s(0, 1) = 1.0;
    return Operator(std::move(s));
  }
  const int n = std::get<Boson>(kind).levels;
  if (n < 2) throw InvalidTruncation(n);
  Mat a = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return Operator(std::move(a));
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidParameter(msg);
}

void check_phase(double phi) { require(phi >= 0 && phi < 2 * kPi, "phase must lie in [0, 2pi)"); }

struct Validator {
  void operator()(const RF& p) const {
    require(p.gamma > 0, "gamma must be positive");
    require(p.omega >= 0, "drive must be non-negative");
  }
  void operator()(const AO& p) const {
    require(p.gamma > 0, "gamma must be positive");
    require(p.omega >= 0 && p.U >= 0, "drive and U must be non-negative");
  }
  void operator()(const JC& p) const {
    require(p.gamma_a > 0 && p.gamma_s > 0, "decay rates must be positive");
    require(p.omega_a >= 0 && p.g >= 0 && p.chi >= 0, "drive, coupling and chi must be non-negative");
    check_phase(p.phi);
  }
  void operator()(const POL& p) const {
    require(p.gamma_a > 0 && p.gamma_b > 0, "decay rates must be positive");
    require(p.omega_a >= 0 && p.g >= 0 && p.chi >= 0 && p.U >= 0,
            "drive, coupling, U and chi must be non-negative");
    check_phase(p.phi);
  }
};

using detail::overload;

Powers one(int nmodes, int mode, int p, int q) {
  Powers w(nmodes, {0, 0});
  w[mode] = {p, q};
  return w;
}

// Shared body of JC and POL: cavity is mode 0, matter mode 1.
void coupled_terms(Model& m, double da, double dm, double g, double om, double chi, double phi) {
  const cplx e = std::polar(1.0, phi);
  m.terms.push_back({da, one(2, 0, 1, 1), 0});
  m.terms.push_back({dm, one(2, 1, 1, 1), 0});
  m.terms.push_back({g, Powers{{1, 0}, {0, 1}}, 0});
  m.terms.push_back({g, Powers{{0, 1}, {1, 0}}, 0});
  m.terms.push_back({om * e, one(2, 0, 1, 0), 1});
  m.terms.push_back({om * std::conj(e), one(2, 0, 0, 1), 1});
  m.terms.push_back({chi * om, one(2, 1, 1, 0), 1});
  m.terms.push_back({chi * om, one(2, 1, 0, 1), 1});
  m.drive_scale = std::max(om, chi * om);
}

}  // namespace

void validate(const SystemParams& p) { std::visit(Validator{}, p); }

std::string system_name(const SystemParams& p) {
  static const char* names[] = {"RF", "AO", "JC", "POL"};
  return names[p.index()];
}

double drive_of(const SystemParams& p) {
  return std::visit(overload{[](const RF& s) { return s.omega; }, [](const AO& s) { return s.omega; },
                             [](const JC& s) { return s.omega_a; }, [](const POL& s) { return s.omega_a; }},
                    p);
}

SystemParams with_drive(const SystemParams& p, double omega) {
  return std::visit(
      overload{[&](RF s) -> SystemParams { s.omega = omega; return s; },
               [&](AO s) -> SystemParams { s.omega = omega; return s; },
               [&](JC s) -> SystemParams { s.omega_a = omega; return s; },
               [&](POL s) -> SystemParams { s.omega_a = omega; return s; }},
      p);
}

double chi_tilde(double chi) { return chi * chi - 1.0; }

int Model::mode_index(Role r) const {
  for (size_t i = 0; i < modes.size(); ++i)
    if (modes[i].role == r) return static_cast<int>(i);
  return -1;
}

double Model::min_gamma() const {
  double g = modes.empty() ? 1.0 : modes[0].gamma;
  for (const auto& m : modes) g = std::min(g, m.gamma);
  return g;
}

Model model_of(const SystemParams& p) {
  validate(p);
  Model m;
  std::visit(overload{
                 [&](const RF& s) {
                   m.modes = {{"sigma", Role::matter, false, s.gamma}};
                   m.terms = {{s.delta, one(1, 0, 1, 1), 0},
                              {s.omega, one(1, 0, 1, 0), 1},
                              {s.omega, one(1, 0, 0, 1), 1}};
                   m.drive_scale = s.omega;
                 },
                 [&](const AO& s) {
                   m.modes = {{"b", Role::matter, true, s.gamma}};
                   m.terms = {{s.delta, one(1, 0, 1, 1), 0},
                              {s.U / 2, one(1, 0, 2, 2), 0},
                              {s.omega, one(1, 0, 1, 0), 1},
                              {s.omega, one(1, 0, 0, 1), 1}};
                   m.drive_scale = s.omega;
                 },
                 [&](const JC& s) {
                   m.modes = {{"a", Role::cavity, true, s.gamma_a}, {"sigma", Role::matter, false, s.gamma_s}};
                   coupled_terms(m, s.delta_a, s.delta_s, s.g, s.omega_a, s.chi, s.phi);
                 },
                 [&](const POL& s) {
                   m.modes = {{"a", Role::cavity, true, s.gamma_a}, {"b", Role::matter, true, s.gamma_b}};
                   coupled_terms(m, s.delta_a, s.delta_b, s.g, s.omega_a, s.chi, s.phi);
                   m.terms.push_back({s.U / 2, one(2, 1, 2, 2), 0});
                 }},
             p);
  // Zero couplings add nothing but noise to the recursion bookkeeping.
  m.terms.erase(std::remove_if(m.terms.begin(), m.terms.end(), [](const HTerm& t) { return t.coeff == 0.0; }),
                m.terms.end());
  return m;
}

const Operator& System::op(Role r) const {
  const int i = model.mode_index(r);
  if (i < 0) throw InvalidParameter("system has no such mode");
  return lowering[i];
}

int System::top_level(Role r) const {
  const int i = model.mode_index(r);
  if (i < 0) throw InvalidParameter("system has no such mode");
  return levels[i] - 1;
}

System build_system(const Model& m, const std::vector<int>& levels) {
  if (levels.size() != m.modes.size()) throw InvalidParameter("one level count per mode required");
  System s;
  s.model = m;
  s.levels = levels;
  s.dim = 1;
  for (size_t i = 0; i < levels.size(); ++i) {
    if (m.modes[i].boson && levels[i] < 2) throw InvalidTruncation(levels[i]);
    if (!m.modes[i].boson && levels[i] != 2) throw InvalidParameter("two-level mode must have 2 levels");
    s.dim *= levels[i];
  }
  for (size_t i = 0; i < levels.size(); ++i) {
    Operator local = m.modes[i].boson ? build_mode(Boson{levels[i]}) : build_mode(TwoLevel{});
    Operator full = Operator::identity(1);
    for (size_t j = 0; j < levels.size(); ++j) full = full.kron(j == i ? local : Operator::identity(levels[j]));
    s.lowering.push_back(std::move(full));
  }
  s.grade.assign(s.dim, 0);
  for (int k = 0; k < s.dim; ++k) {
    int rest = k;
    for (int i = static_cast<int>(levels.size()) - 1; i >= 0; --i) {
      s.grade[k] += rest % levels[i];
      rest /= levels[i];
    }
  }
  Mat H = Mat::Zero(s.dim, s.dim);
  for (const auto& t : m.terms) {
    Operator mono = Operator::identity(s.dim);
    for (size_t i = 0; i < t.powers.size(); ++i) {
      const auto& c = s.lowering[i];
      mono = mono * c.adjoint().pow(t.powers[i][0]) * c.pow(t.powers[i][1]);
    }
    H += t.coeff * mono.matrix();
  }
  // Drive terms are added in conjugate pairs, so this only removes rounding.
  s.H = Operator(0.5 * (H + H.adjoint()));
  return s;
}

static std::vector<int> levels_for(const Model& m, const Truncation& t) {
  std::vector<int> lv;
  for (const auto& md : m.modes) lv.push_back(md.boson ? t.photons + 1 : 2);
  return lv;
}

System build_system(const SystemParams& p, const Truncation& t) {
  Model m = model_of(p);
  return build_system(m, levels_for(m, t));
}

Operator build_hamiltonian(const SystemParams& p, const Truncation& t) { return build_system(p, t).H; }

Operator build_hamiltonian(const Model& m, const std::vector<int>& levels) { return build_system(m, levels).H; }

Superoperator::Superoperator(SpMat L, int dim, std::vector<int> grade, double scale)
    : L_(std::move(L)), dim_(dim), grade_(std::move(grade)), scale_(scale) {
  if (grade_.empty()) grade_.assign(dim_, 0);
}

double Superoperator::trace_residual() const {
  Vec one = Vec::Zero(static_cast<Eigen::Index>(dim_) * dim_);
  for (int i = 0; i < dim_; ++i) one(i + i * dim_) = 1.0;
  return (L_.adjoint() * one).norm();
}

Superoperator build_liouvillian(const Operator& H, const std::vector<Channel>& channels, std::vector<int> grade,
                                double scale) {
  const int d = H.dim();
  const SpMat I = Mat::Identity(d, d).sparseView();
  const SpMat h = H.matrix().sparseView();
  SpMat L = cplx(0, -1) * (SpMat(Eigen::kroneckerProduct(I, h)) - SpMat(Eigen::kroneckerProduct(SpMat(h.transpose()), I)));
  for (const auto& ch : channels) {
    const SpMat c = ch.c.matrix().sparseView();
    const SpMat cdc = (ch.c.adjoint() * ch.c).matrix().sparseView();
    const SpMat cc = c.conjugate();
    SpMat D = SpMat(Eigen::kroneckerProduct(cc, c)) - 0.5 * SpMat(Eigen::kroneckerProduct(I, cdc)) -
              0.5 * SpMat(Eigen::kroneckerProduct(SpMat(cdc.transpose()), I));
    L += cplx(ch.gamma) * D;
  }
  L.prune(cplx(0.0));
  L.makeCompressed();
  return Superoperator(std::move(L), d, std::move(grade), scale);
}

Superoperator build_liouvillian(const System& s) {
  std::vector<Channel> ch;
  for (size_t i = 0; i < s.model.modes.size(); ++i) ch.push_back({s.model.modes[i].gamma, s.lowering[i]});
  const double scale = std::clamp(s.model.drive_scale / s.model.min_gamma(), 1e-8, 1.0);
  return build_liouvillian(s.H, ch, s.grade, scale);
}

Superoperator build_liouvillian(const SystemParams& p, const Truncation& t) {
  return build_liouvillian(build_system(p, t));
}

Vec vectorize(const Operator& rho) {
  const Mat& m = rho.matrix();
  return Eigen::Map<const Vec>(m.data(), m.size());
}

Operator unvectorize(const Vec& v, int dim) { return Operator(Eigen::Map<const Mat>(v.data(), dim, dim)); }

}  // namespace blockade
