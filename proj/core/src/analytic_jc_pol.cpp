#include "blockade/analytic.hpp"
#include "blockade/errors.hpp"
#include "roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace blockade {

namespace {

const double kSqrt2 = std::sqrt(2.0);

void check(const JC& p) { validate(SystemParams{p}); }
void check(const POL& p) { validate(SystemParams{p}); }

double g2_from(const TwoExcitation& c) {
  const double n = std::norm(c.C10);
  if (!(n > 0)) throw UndefinedCorrelation("cavity population vanishes", n);
  return 2 * std::norm(c.C20) / (n * n);
}

// Two-photon interference ratio r with g2 = |r|^2, I2 = 2 Re r - 2.
cplx ratio(const TwoExcitation& c) {
  if (c.C10 == 0.0) throw UndefinedCorrelation("cavity population vanishes", 0.0);
  return kSqrt2 * c.C20 / (c.C10 * c.C10);
}

std::pair<cplx, cplx> first_rung(cplx Ea, cplx Em, double g, cplx da, double Ob) {
  const cplx det = Ea * Em - g * g;
  return {(-da * Em + g * Ob) / det, (-Ob * Ea + g * da) / det};
}

Populations coupled_populations(double g, double chi, double phi, double Om, double ga, double gm, double Da, double Dm) {
  const double Ga2 = Gamma2(ga, Da), Gm2 = Gamma2(gm, Dm);
  const double den = 16 * std::pow(g, 4) + 8 * g * g * (ga * gm - 4 * Da * Dm) + Ga2 * Gm2;
  const double c = std::cos(phi), s = std::sin(phi);
  Populations out;
  out.n_a = 4 * Om * Om * (4 * g * g * chi * chi + Gm2 - 4 * g * chi * (2 * Dm * c + gm * s)) / den;
  out.n_matter = 4 * Om * Om * (4 * g * g + Ga2 * chi * chi - 4 * g * chi * (2 * Da * c - ga * s)) / den;
  return out;
}

// Sample a parametric curve and cut it into polylines that stay inside the window.
std::vector<std::vector<Point2>> clip(const std::vector<Point2>& pts, const FeatureWindow& w,
                                      const std::function<bool(const Point2&)>& keep = nullptr) {
  std::vector<std::vector<Point2>> out;
  std::vector<Point2> cur;
  for (const auto& q : pts) {
    const bool in = std::isfinite(q[0]) && std::isfinite(q[1]) && q[0] >= w.wa_min && q[0] <= w.wa_max &&
                    q[1] >= w.wl_min && q[1] <= w.wl_max && (!keep || keep(q));
    if (in) {
      cur.push_back(q);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * i / (n - 1);
  return x;
}

FeatureCondition line(FeatureKind k, std::string label, std::vector<std::vector<Point2>> c) {
  FeatureCondition f{k, std::move(label), std::move(c), std::nullopt, std::nullopt, false};
  return f;
}

std::vector<FeatureCondition> ca_cb(double g, double ga, double gm, const FeatureWindow& w) {
  std::vector<FeatureCondition> out;
  const auto wa = grid(w.wa_min, w.wa_max, w.samples);
  for (int N : {1, 2}) {
    for (int branch : {0, 1}) {
      std::vector<Point2> pts;
      for (double x : wa) pts.push_back({x, laser_resonance(jc_dressed_energies(N, x, w.omega_matter, g, ga, gm).E[branch], N)});
      out.push_back(line(N == 1 ? FeatureKind::CA : FeatureKind::CB,
                         std::string(N == 1 ? "CA" : "CB") + (branch ? "+" : "-"), clip(pts, w)));
    }
  }
  return out;
}

FeatureCondition ub_line(double wl, const FeatureWindow& w) {
  return line(FeatureKind::UB, "UB", clip({{w.wa_min, wl}, {w.wa_max, wl}}, w));
}

FeatureCondition exact_point(double Da, double Dm, const FeatureWindow& w, bool exact, std::string label) {
  FeatureCondition f{FeatureKind::UA, std::move(label), {}, Point2{Da, Dm}, std::nullopt, exact};
  const double wl = w.omega_matter - Dm;
  f.curve.push_back({{Da + wl, wl}});
  return f;
}

}  // namespace

TwoExcitation jc_amplitudes(const JC& p) {
  check(p);
  const cplx Ea(p.delta_a, -p.gamma_a / 2), Es(p.delta_s, -p.gamma_s / 2);
  const cplx da = std::polar(1.0, p.phi);
  const double Ob = p.chi;
  TwoExcitation c{};
  std::tie(c.C10, c.C01) = first_rung(Ea, Es, p.g, da, Ob);
  const cplx r1 = -kSqrt2 * da * c.C10;
  const cplx r2 = -(Ob * c.C10 + da * c.C01);
  const cplx det = 2.0 * Ea * (Ea + Es) - 2 * p.g * p.g;
  c.C20 = (r1 * (Ea + Es) - kSqrt2 * p.g * r2) / det;
  c.C11 = (2.0 * Ea * r2 - kSqrt2 * p.g * r1) / det;
  c.C02 = 0;
  return c;
}

TwoExcitation pol_amplitudes(const POL& p) {
  check(p);
  const cplx Ea(p.delta_a, -p.gamma_a / 2), Eb(p.delta_b, -p.gamma_b / 2);
  const cplx da = std::polar(1.0, p.phi);
  const double Ob = p.chi;
  TwoExcitation c{};
  std::tie(c.C10, c.C01) = first_rung(Ea, Eb, p.g, da, Ob);
  Eigen::Matrix3cd M;
  M << 2.0 * Ea, kSqrt2 * p.g, 0.0, kSqrt2 * p.g, Ea + Eb, kSqrt2 * p.g, 0.0, kSqrt2 * p.g, 2.0 * Eb + p.U;
  const Eigen::Vector3cd rhs(-kSqrt2 * da * c.C10, -(Ob * c.C10 + da * c.C01), -kSqrt2 * Ob * c.C01);
  // Cramer's rule on the fixed 3x3 system.
  const cplx det = M.determinant();
  cplx x[3];
  for (int k = 0; k < 3; ++k) {
    Eigen::Matrix3cd Mk = M;
    Mk.col(k) = rhs;
    x[k] = Mk.determinant() / det;
  }
  c.C20 = x[0];
  c.C11 = x[1];
  c.C02 = x[2];
  return c;
}

Populations jc_populations(const JC& p) {
  check(p);
  return coupled_populations(p.g, p.chi, p.phi, p.omega_a, p.gamma_a, p.gamma_s, p.delta_a, p.delta_s);
}

double jc_g2(const JC& p) { return g2_from(jc_amplitudes(p)); }

double jc_g2_long_form(const JC& p) {
  check(p);
  const double ga = p.gamma_a, gs = p.gamma_s, Da = p.delta_a, Ds = p.delta_s, g = p.g, chi = p.chi;
  const double Ga2 = Gamma2(ga, Da), Gs2 = Gamma2(gs, Ds);
  const double g11 = ga + gs, D11 = Da + Ds, D12 = Da + 2 * Ds, G11 = g11 * g11 + 4 * D11 * D11;
  const double c = std::cos(p.phi), s = std::sin(p.phi), c2 = std::cos(2 * p.phi), s2 = std::sin(2 * p.phi);
  const double g2 = g * g, g4 = g2 * g2, x2 = chi * chi;
  const double A = 16 * g4 + 8 * g2 * (ga * gs - 4 * Da * Ds) + Ga2 * Gs2;
  const double B = 16 * g4 * (1 + x2) + 8 * g2 * (2 * x2 * G11 + 4 * Ds * D11 - gs * g11) + Gs2 * G11 -
                   16 * g * chi * (Ds * G11 + 4 * g2 * D11 * (1 + x2)) * c +
                   8 * g2 * x2 * (4 * g2 - gs * g11 + 4 * Ds * D11) * c2 -
                   8 * g * chi * (gs * G11 + 4 * g2 * g11 * (x2 - 1)) * s + 16 * g2 * x2 * (ga * Ds + gs * D12) * s2;
  const double q = 4 * g2 * x2 + Gs2 - 4 * g * chi * (2 * Ds * c + gs * s);
  const double den = (16 * g4 + 8 * g2 * (ga * g11 - 4 * Da * D11) + Ga2 * G11) * q * q;
  if (den == 0) throw UndefinedCorrelation("cavity population vanishes", 0.0);
  return A * B / den;
}

double jc_g2_cavity_driven(const JC& p) {
  check(p);
  const double ga = p.gamma_a, gs = p.gamma_s, Da = p.delta_a, Ds = p.delta_s, g = p.g;
  const double Ga2 = Gamma2(ga, Da), Gs2 = Gamma2(gs, Ds);
  const double gp = ga + gs, Dp = Da + Ds, Gp2 = gp * gp + 4 * Dp * Dp;
  const double g4 = std::pow(g, 4), g2 = g * g;
  const double num = (16 * g4 + 8 * g2 * (gs * ga - 4 * Da * Ds) + Ga2 * Gs2) *
                     (16 * g4 - 8 * g2 * (gs * gp - 4 * Ds * Dp) + Gs2 * Gp2);
  const double den = Gs2 * Gs2 * (16 * g4 + 8 * g2 * (ga * gp - 4 * Da * Dp) + Ga2 * Gp2);
  if (den == 0) throw UndefinedCorrelation("cavity population vanishes", 0.0);
  return num / den;
}

DressedLevels jc_dressed_energies(int N, double wa, double ws, double g, double ga, double gs) {
  if (N < 1) throw InvalidParameter("rung index must be at least 1");
  const cplx centre = N * wa + (ws - wa) / 2 - kI * ((2 * N - 1) * ga + gs) / 4.0;
  const cplx d = (wa - ws) / 2 - kI * (ga - gs) / 4.0;
  const cplx root = std::sqrt(N * g * g + d * d);
  return DressedLevels{{centre - root, centre + root}, std::abs(root.real())};
}

const char* feature_name(FeatureKind k) {
  switch (k) {
    case FeatureKind::CA: return "CA";
    case FeatureKind::CB: return "CB";
    case FeatureKind::UA: return "UA";
    case FeatureKind::UB: return "UB";
  }
  return "?";
}

cplx jc_ua_complex(const JC& p, double Ds) {
  const double gs = p.gamma_s, g11 = p.gamma_a + p.gamma_s, g = p.g, chi = p.chi;
  const cplx e = std::polar(1.0, -p.phi);
  const cplx a(gs, 2 * Ds), b(g11, 2 * Ds);
  const cplx num = kI * a * b + 4.0 * e * g * chi * b - 4.0 * kI * g * g * (1.0 + e * e * chi * chi);
  const cplx den = 2.0 * a - 8.0 * kI * e * g * chi;
  return num / den;
}

cplx pol_ua_complex(const POL& p, double Db) {
  const double gb = p.gamma_b, g11 = p.gamma_a + p.gamma_b, g = p.g, chi = p.chi, U = p.U;
  const cplx ep = std::polar(1.0, p.phi);
  const cplx u(U + 2 * Db, -gb);
  const cplx num = ep * (4 * g * g * U - cplx(gb, 2 * Db) * cplx(g11, 2 * Db) * u) +
                   4.0 * kI * g * chi * u * cplx(g11, 2 * Db) + 4.0 / ep * g * g * chi * chi * cplx(U + 2 * Db, -g11);
  const cplx N = 2.0 * (ep * cplx(gb, 2 * Db) * cplx(gb, U + 2 * Db) + 4 * g * chi * u - 4 * g * g * chi * chi / ep);
  return num / N;
}

namespace {

std::vector<double> imaginary_zeros(const std::function<cplx(double)>& D, double span, double step) {
  std::vector<double> out;
  for (double x : detail::scan_roots([&](double d) { return D(d).imag(); }, -span, span, step, 1e-12)) {
    // Sign flips through a pole are not zeros.
    const cplx v = D(x);
    if (std::isfinite(v.real()) && std::abs(v.imag()) < 1e-8 * (1 + std::abs(v.real()))) out.push_back(x);
  }
  return out;
}

}  // namespace

std::vector<double> jc_exact_zero_scan(const JC& p, double span) {
  const double step = std::min(p.gamma_a, p.gamma_s) / 20;
  return imaginary_zeros([&](double d) { return jc_ua_complex(p, d); }, span, step);
}

std::vector<double> pol_exact_zero_scan(const POL& p, double span) {
  const double step = std::min(p.gamma_a, p.gamma_b) / 20;
  return imaginary_zeros([&](double d) { return pol_ua_complex(p, d); }, span, step);
}

std::optional<std::array<Point2, 2>> jc_exact_zero(double g, double ga, double gs) {
  const double rad = 4 * g * g / (gs * (gs + ga)) - 1;
  if (rad < 0) return std::nullopt;
  const double Ds = 0.5 * gs * std::sqrt(rad);
  const double k = 2 + ga / gs;
  return std::array<Point2, 2>{Point2{-k * Ds, Ds}, Point2{k * Ds, -Ds}};
}

std::vector<FeatureCondition> jc_feature_conditions(const JC& p, const FeatureWindow& w) {
  check(p);
  std::vector<FeatureCondition> out = ca_cb(p.g, p.gamma_a, p.gamma_s, w);
  out.push_back(ub_line(w.omega_matter - p.chi * p.g * std::cos(p.phi), w));

  std::vector<Point2> pts;
  for (double wl : grid(w.wl_min, w.wl_max, w.samples)) {
    const double Ds = w.omega_matter - wl;
    const double Da = p.chi == 0 ? -Ds * (1 + 4 * p.g * p.g / Gamma2(p.gamma_s, Ds)) : jc_ua_complex(p, Ds).real();
    pts.push_back({wl + Da, wl});
  }
  auto antibunched = [&](const Point2& q) {
    JC c = p;
    c.delta_a = q[0] - q[1];
    c.delta_s = w.omega_matter - q[1];
    try {
      return jc_g2(c) < 1;
    } catch (const Error&) {
      return false;
    }
  };
  out.push_back(line(FeatureKind::UA, "UA", clip(pts, w, antibunched)));

  if (p.chi == 0) {
    if (auto z = jc_exact_zero(p.g, p.gamma_a, p.gamma_s)) {
      for (const auto& q : *z) out.push_back(exact_point(q[0], q[1], w, true, "UA exact"));
    } else {
      out.push_back(FeatureCondition{FeatureKind::UA, "UA exact (radicand negative)", {}, std::nullopt,
                                     std::nullopt, false});
    }
  } else {
    const double span = 4 * (p.g * (1 + p.chi) + p.gamma_a + p.gamma_s);
    for (double Ds : jc_exact_zero_scan(p, span))
      out.push_back(exact_point(jc_ua_complex(p, Ds).real(), Ds, w, true, "UA exact"));
  }
  return out;
}

DecompositionG2 jc_g2_decomposition(const JC& p) {
  check(p);
  if (p.chi != 0) throw InvalidParameter("closed decomposition is for cavity driving only");
  const double ga = p.gamma_a, gs = p.gamma_s, Da = p.delta_a, Ds = p.delta_s, g = p.g;
  const double f1 = std::pow(Gamma2(gs, Ds), 2) *
                    (16 * std::pow(g, 4) + 8 * g * g * (ga * (ga + gs) - 4 * Da * (Da + Ds)) +
                     Gamma2(ga, Da) * ((ga + gs) * (ga + gs) + 4 * (Da + Ds) * (Da + Ds)));
  const cplx r = ratio(jc_amplitudes(p));
  return DecompositionG2{256 * std::pow(g, 8) / f1, 0.0, 2 * r.real() - 2};
}

std::optional<double> jc_critical_coupling(double ga, double gs, double Da, double Ds) {
  const double rad = 16 * std::pow(Ds, 4) + 32 * Da * std::pow(Ds, 3) -
                     8 * (ga * ga + 3 * ga * gs + gs * gs - 4 * Da * Da) * Ds * Ds -
                     8 * gs * (4 * ga + 3 * gs) * Da * Ds + gs * gs * (2 * ga * ga + 2 * ga * gs + gs * gs - 8 * Da * Da);
  if (rad < 0) return std::nullopt;
  const double v = std::sqrt(rad) + gs * gs - 4 * Ds * Ds;
  if (v < 0) return std::nullopt;
  return 0.5 * std::sqrt(v);
}

Populations pol_populations(const POL& p) {
  check(p);
  return coupled_populations(p.g, p.chi, p.phi, p.omega_a, p.gamma_a, p.gamma_b, p.delta_a, p.delta_b);
}

namespace {

struct PolShort {
  double ga, gb, Da, Db, g, U, Ga2, Gb2, g11, g12, D11, D12, D13, D1m1, G11, U12;
};

PolShort shorthand(const POL& p) {
  PolShort s{};
  s.ga = p.gamma_a;
  s.gb = p.gamma_b;
  s.Da = p.delta_a;
  s.Db = p.delta_b;
  s.g = p.g;
  s.U = p.U;
  s.Ga2 = Gamma2(s.ga, s.Da);
  s.Gb2 = Gamma2(s.gb, s.Db);
  s.g11 = s.ga + s.gb;
  s.g12 = s.ga + 2 * s.gb;
  s.D11 = s.Da + s.Db;
  s.D12 = s.Da + 2 * s.Db;
  s.D13 = s.Da + 3 * s.Db;
  s.D1m1 = s.Da - s.Db;
  s.G11 = s.g11 * s.g11 + 4 * s.D11 * s.D11;
  s.U12 = s.U + 2 * s.Db;
  return s;
}

// Shared denominator of the two-photon forms.
double pol_den(const PolShort& s) {
  const double g2 = s.g * s.g;
  return s.Ga2 * s.G11 * (s.gb * s.gb + s.U12 * s.U12) +
         16 * g2 * g2 * (s.g11 * s.g11 + std::pow(s.U + 2 * s.D11, 2)) +
         8 * g2 * (s.U * s.U * (s.ga * s.g11 - 4 * s.Da * s.D11) + s.G11 * (s.ga * s.gb - 4 * s.Da * s.Db) -
                   2 * s.U * (s.ga * s.ga * s.D1m1 - 2 * s.ga * s.gb * s.Db + 4 * s.Da * s.D11 * s.D12));
}

double pol_A(const PolShort& s) {
  const double g2 = s.g * s.g;
  return 16 * g2 * g2 + 8 * g2 * (s.ga * s.gb - 4 * s.Da * s.Db) + s.Ga2 * s.Gb2;
}

}  // namespace

double pol_g2(const POL& p, Mode which) {
  check(p);
  if (which == Mode::cavity) return g2_from(pol_amplitudes(p));
  const PolShort s = shorthand(p);
  const double den = pol_den(s);
  if (den == 0) throw UndefinedCorrelation("exciton population vanishes", 0.0);
  return s.G11 * pol_A(s) / den;
}

double pol_g2_cavity_long_form(const POL& p) {
  check(p);
  const PolShort s = shorthand(p);
  const double ga = s.ga, gb = s.gb, Da = s.Da, Db = s.Db, g = s.g, U = s.U, chi = p.chi;
  const double g11 = s.g11, g12 = s.g12, D11 = s.D11, D12 = s.D12, D13 = s.D13, G11 = s.G11, U12 = s.U12;
  const double Gb2 = s.Gb2;
  const double c = std::cos(p.phi), sn = std::sin(p.phi), c2 = std::cos(2 * p.phi), s2 = std::sin(2 * p.phi);
  const double g2 = g * g, g4 = g2 * g2, x2 = chi * chi;
  const double B =
      Gb2 * G11 * (gb * gb + U12 * U12) +
      8 * g2 * (U * U * (4 * Db * D11 - gb * g11) + 2 * G11 * (gb * gb + U12 * U12) * x2 + 8 * U * Db * Db * D11 -
                2 * U * gb * gb * D13 - 4 * U * ga * gb * Db) +
      16 * g4 * (U * U + (g11 * g11 + std::pow(U + 2 * D11, 2)) * x2 * x2) -
      16 * g * chi * c *
          (Db * G11 * (gb * gb + 4 * U12 * U12) +
           2 * g2 * (U * (2 * D11 * U12 - gb * g11) + (2 * U * U * D11 + 2 * Db * G11 + U * (ga * g11 + 4 * D11 * D12)) * x2)) +
      8 * g2 * x2 * c2 *
          (4 * g2 * U * (U + 2 * D11) - U * U * (gb * g11 - 4 * Db * D11) - (gb * gb - 4 * Db * Db) * G11 +
           2 * U * (ga * ga * Db + D12 * (4 * Db * D11 - gb * gb))) -
      8 * g * chi * sn * (gb * G11 * (gb * gb + U12 * U12) + 4 * g2 * (gb * G11 * x2 + U * (x2 - 1) * (U * g11 + 2 * gb * Da + 2 * g12 * Db))) +
      8 * g2 * x2 * s2 * (-4 * g2 * U * g11 + 4 * gb * Db * G11 + 2 * U * U * (ga * Db + gb * D12) + U * (ga * ga * gb + 4 * gb * D12 * D12 + ga * Gb2));
  const double q = 4 * g2 * x2 + Gb2 - 4 * g * chi * (2 * Db * c + gb * sn);
  const double den = pol_den(s) * q * q;
  if (den == 0) throw UndefinedCorrelation("cavity population vanishes", 0.0);
  return pol_A(s) * B / den;
}

double pol_g2_cavity_driven(const POL& p) {
  check(p);
  const PolShort s = shorthand(p);
  const double ga = s.ga, gb = s.gb, Db = s.Db, g = s.g, U = s.U;
  const double gp = ga + gb, Dp = s.Da + Db, Gp2 = gp * gp + 4 * Dp * Dp;
  const double g2 = g * g;
  const double num =
      pol_A(s) * (16 * g2 * g2 * U * U + s.Gb2 * Gp2 * (gb * gb + s.U12 * s.U12) -
                  8 * g2 * U * (4 * ga * gb * Db - 8 * Db * Db * Dp + 2 * gb * gb * (Dp + 2 * Db) + U * (gb * gp - 4 * Db * Dp)));
  const double den = s.Gb2 * s.Gb2 * pol_den(s);
  if (den == 0) throw UndefinedCorrelation("cavity population vanishes", 0.0);
  return num / den;
}

DressedLevels pol_dressed_energies(double wa, double wb, double g, double U) {
  const double d = wa - wb;
  const double R = std::sqrt(g * g + d * d / 4);
  const double R2 = R * R;
  DressedLevels out;
  out.R = R;
  out.E = {wa + wb - 2 * R + (2 * g * g + d * (d + 2 * R)) * U / (8 * R2), wa + wb + g * g * U / (2 * R2),
           wa + wb + 2 * R + (2 * g * g + d * (d - 2 * R)) * U / (8 * R2)};
  return out;
}

DressedLevels pol_second_rung_exact(double wa, double wb, double g, double U, double ga, double gb) {
  Eigen::Matrix3cd H;
  const double s = kSqrt2 * g;
  H << cplx(2 * wa, -ga), s, 0.0, s, cplx(wa + wb, -(ga + gb) / 2), s, 0.0, s, cplx(2 * wb + U, -gb);
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(H, false);
  DressedLevels out;
  for (int i = 0; i < 3; ++i) out.E.push_back(es.eigenvalues()(i));
  std::sort(out.E.begin(), out.E.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  out.R = std::sqrt(g * g + (wa - wb) * (wa - wb) / 4);
  return out;
}

std::vector<FeatureCondition> pol_feature_conditions(const POL& p, const FeatureWindow& w) {
  check(p);
  std::vector<FeatureCondition> out;
  const auto wa = grid(w.wa_min, w.wa_max, w.samples);
  for (int branch : {0, 1}) {
    std::vector<Point2> pts;
    for (double x : wa) pts.push_back({x, jc_dressed_energies(1, x, w.omega_matter, p.g, p.gamma_a, p.gamma_b).E[branch].real()});
    out.push_back(line(FeatureKind::CA, branch ? "CA+" : "CA-", clip(pts, w)));
  }
  const char* cb_names[] = {"CB-", "CB0", "CB+"};
  for (int k = 0; k < 3; ++k) {
    std::vector<Point2> pts;
    for (double x : wa) pts.push_back({x, pol_dressed_energies(x, w.omega_matter, p.g, p.U).E[k].real() / 2});
    out.push_back(line(FeatureKind::CB, cb_names[k], clip(pts, w)));
  }
  out.push_back(ub_line(w.omega_matter - p.chi * p.g * std::cos(p.phi), w));

  auto ua_delta = [&](double Db) {
    if (p.chi != 0) return pol_ua_complex(p, Db).real();
    const double g2 = p.g * p.g;
    return -Db - 4 * g2 * Db / Gamma2(p.gamma_b, Db) +
           2 * g2 * (p.U + 2 * Db) / (p.gamma_b * p.gamma_b + std::pow(p.U + 2 * Db, 2));
  };
  std::vector<Point2> pts;
  for (double wl : grid(w.wl_min, w.wl_max, w.samples)) pts.push_back({wl + ua_delta(w.omega_matter - wl), wl});
  auto antibunched = [&](const Point2& q) {
    POL c = p;
    c.delta_a = q[0] - q[1];
    c.delta_b = w.omega_matter - q[1];
    try {
      return pol_g2(c, Mode::cavity) < 1;
    } catch (const Error&) {
      return false;
    }
  };
  out.push_back(line(FeatureKind::UA, "UA", clip(pts, w, antibunched)));

  const double span = 4 * (p.g * (1 + p.chi) + p.gamma_a + p.gamma_b) + p.U;
  std::vector<double> zeros;
  if (p.chi == 0) {
    const double g2 = p.g * p.g, gb = p.gamma_b;
    auto pinned_zero = [&](double Db) {
      return p.gamma_a + gb + 4 * g2 * gb * (-1 / Gamma2(gb, Db) + 1 / (gb * gb + std::pow(p.U + 2 * Db, 2)));
    };
    zeros = detail::scan_roots(pinned_zero, -span, span, std::min(p.gamma_a, gb) / 20, 1e-12);
  } else {
    zeros = pol_exact_zero_scan(p, span);
  }
  for (double Db : zeros) out.push_back(exact_point(ua_delta(Db), Db, w, true, "UA exact"));
  if (zeros.empty())
    out.push_back(FeatureCondition{FeatureKind::UA, "UA exact (no real root)", {}, std::nullopt, std::nullopt, false});
  return out;
}

DecompositionG2 pol_g2_decomposition(const POL& p) {
  check(p);
  if (p.chi != 0) throw InvalidParameter("closed decomposition is for cavity driving only");
  const double ga = p.gamma_a, gb = p.gamma_b, Da = p.delta_a, Db = p.delta_b, g = p.g, U = p.U;
  const double Sp = (ga + gb) * (ga + gb) + 4 * (Da + Db) * (Da + Db);
  const double f2 =
      std::pow(Gamma2(gb, Db), 2) *
      (Gamma2(ga, Da) * Sp * (gb * gb + std::pow(U + 2 * Db, 2)) +
       16 * std::pow(g, 4) * ((ga + gb) * (ga + gb) + std::pow(U + 2 * (Da + Db), 2)) +
       8 * g * g *
           (U * U * (ga * (ga + gb) - 4 * Da * (Da + Db)) + (ga * gb - 4 * Da * Db) * Sp -
            2 * U * (ga * ga * (Da - Db) - 2 * ga * gb * Db + 4 * Da * (Da + Db) * (Da + 2 * Db))));
  const cplx r = ratio(pol_amplitudes(p));
  return DecompositionG2{256 * U * U * std::pow(g, 8) / f2, 0.0, 2 * r.real() - 2};
}

}  // namespace blockade
