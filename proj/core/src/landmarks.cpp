#include "blockade/landmarks.hpp"

#include "blockade/analytic.hpp"
#include "blockade/errors.hpp"
#include "blockade/series.hpp"
#include "blockade/wavefunction.hpp"
#include "oracle.hpp"
#include "roots.hpp"

#include <boost/math/tools/minima.hpp>

#include <chrono>
#include <cstdarg>
#include <cstdio>

namespace blockade {

namespace detail {

std::array<double, 4> oracle_draw(const std::string& sys, std::mt19937& rng, double drive) {
  std::uniform_real_distribution<double> u(0, 1);
  auto in = [&](double a, double b) { return a + (b - a) * u(rng); };
  std::array<double, 4> v{};
  if (sys == "RF") {
    const RF rf{in(-2, 2), drive, 1.0};
    const Homodyne h{in(0.5, 5), in(0, 2 * kPi), 1.0};
    v[0] = rf_homodyne_gN(2, h.F, h.phi, drive, rf.gamma, rf.delta).gN;
    const RF unit{rf.delta, 1.0, rf.gamma};
    const auto table = low_drive_correlators(SystemParams{unit}, 4).single_mode(Role::matter);
    v[1] = gN_of_table(homodyne_moments(h, 1.0, rf.gamma, table, 2), 2);
    v[2] = observable_at(rf, Observable::g2, Signal{Signal::Kind::homodyne, Role::matter, h});
    v[3] = wavefunction_coefficients(RfSensor{rf, h.F, h.phi}).g2_a;
  } else if (sys == "AO") {
    AO ao;
    ao.gamma = 1;
    ao.U = in(0.1, 3);
    ao.delta = in(-2, 2);
    ao.omega = drive;
    v[0] = ao_observables(2, ao.U, drive, ao.gamma, ao.delta).gN;
    v[1] = gN_limit(ao, Role::matter, 2);
    v[2] = observable_at(ao, Observable::g2, Signal{Signal::Kind::bare, Role::matter, {}});
    v[3] = wavefunction_coefficients(ao).g2_b;
  } else if (sys == "JC") {
    JC p;
    p.gamma_a = in(0.1, 2);
    p.gamma_s = in(0.1, 2);
    p.delta_a = in(-2, 2);
    p.delta_s = in(-2, 2);
    p.g = in(0.1, 2);
    p.chi = in(0, 2);
    p.phi = in(0, 2 * kPi);
    p.omega_a = drive;
    v[0] = jc_g2(p);
    v[1] = gN_limit(p, Role::cavity, 2);
    v[2] = observable_at(p, Observable::g2, Signal{});
    v[3] = wavefunction_coefficients(p).g2_a;
  } else if (sys == "POL") {
    POL p;
    p.gamma_a = in(0.1, 2);
    p.gamma_b = in(0.1, 2);
    p.delta_a = in(-2, 2);
    p.delta_b = in(-2, 2);
    p.g = in(0.1, 2);
    p.U = in(0.1, 3);
    p.chi = in(0, 2);
    p.phi = in(0, 2 * kPi);
    p.omega_a = drive;
    v[0] = pol_g2(p, Mode::cavity);
    v[1] = gN_limit(p, Role::cavity, 2);
    v[2] = observable_at(p, Observable::g2, Signal{});
    v[3] = wavefunction_coefficients(p).g2_a;
  } else {
    throw InvalidParameter("unknown system '" + sys + "'");
  }
  return v;
}

double oracle_spread(const std::array<double, 4>& v) {
  double dev = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) dev = std::max(dev, std::abs(v[i] - v[j]) / std::abs(v[0]));
  return std::isfinite(dev) ? dev : HUGE_VAL;
}

double oracle_tolerance(const std::array<double, 4>& v) { return v[0] < 1e-3 ? 1e-2 : 1e-3; }

}  // namespace detail

namespace {

std::string say(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Records err against tol and returns whether it is within.
bool judge(LandmarkResult& out, double err, double tol) {
  const double q = std::isfinite(err) ? err / tol : HUGE_VAL;
  out.ratio = std::max(out.ratio, q);
  return q <= 1;
}

const char* verdict(bool ok) { return ok ? "ok" : "FAIL"; }

struct Min1 {
  double x, f;
};

Min1 brent(const std::function<double(double)>& f, double lo, double hi) {
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::brent_find_minima(f, lo, hi, 40, iters);
  return {r.first, r.second};
}

// ---- 1: displaced squeezed state, g2 minimum over r at fixed |alpha| ----
void dst_minimum(LandmarkResult& out) {
  const double a = 0.3;
  auto g2 = [a](double r) { return dst_observables(displaced_squeezed(a, r, 0.0)).g2; };
  const Min1 m = brent(g2, 1e-4, 0.5);
  const double closed = dst_g2_closed(a, m.x, 0.0);
  const bool ok_g = judge(out, std::abs(m.f - 0.26), 0.01);
  const bool ok_r = judge(out, std::abs(m.x - 0.078), 0.005);
  out.pass = ok_g && ok_r;
  out.lines.push_back(say("|alpha|=0.3, theta=2phi: min g2 = %.4f (vs 0.26 +-0.01) %s", m.f, verdict(ok_g)));
  out.lines.push_back(say("  at r = %.4f (vs 0.078 +-0.005) %s; closed form there %.4f", m.x, verdict(ok_r), closed));
  // Where the quoted pair does sit: the optimal-amplitude curve.
  out.lines.push_back(say("  diagnostic: optimal-amplitude curve at r=0.078 gives g2 = %.4f with |alpha|_opt = %.4f",
                          dst_g2_min(0.078), optimal_coherent_amplitude(0.078)));
}

// ---- 2: optimal coherent amplitude for a given squeezing ----
void dst_optimality(LandmarkResult& out) {
  out.pass = true;
  for (double r : {0.05, 0.1, 0.2}) {
    const double step = 1e-4;
    double best_a = 0, best = 1e300;
    for (int k = 1; k <= 15000; ++k) {
      const double a = k * step;
      const double g = dst_observables(displaced_squeezed(a, r, 0.0)).g2;
      if (g < best) {
        best = g;
        best_a = a;
      }
    }
    const double a_opt = std::exp(r) * std::sqrt(std::cosh(r) * std::sinh(r));
    const double g_opt = 1 - std::exp(-2 * r) / (1 + std::sinh(2 * r));
    const bool ok_a = judge(out, std::abs(best_a - a_opt), 1e-3);
    const bool ok_g = judge(out, std::abs(best - g_opt), 1e-6);
    out.pass = out.pass && ok_a && ok_g;
    out.lines.push_back(say("r=%.2f: grid argmin %.4f vs %.4f, min %.8f vs %.8f %s", r, best_a, a_opt, best, g_opt,
                            verdict(ok_a && ok_g)));
  }
}

// ---- 3: RF homodyne zeros ----
void rf_zeros(LandmarkResult& out) {
  out.pass = true;
  const double omega = 1e-3;
  const RF rf{0.0, omega, 1.0};
  const SteadyResult s = solve_steady(rf);
  for (int N = 2; N <= 4; ++N) {
    const Homodyne h{2.0 * N, kPi, 1.0};
    const double closed = rf_homodyne_gN(N, h.F, h.phi, omega, 1.0, 0.0).gN;
    const CorrelatorTable t =
        signal_moments(s.system, s.rho, Signal{Signal::Kind::homodyne, Role::matter, h}, omega, N);
    const double numeric = gN_of_table(t, N);
    const bool ok_c = judge(out, closed, 1e-10), ok_n = judge(out, numeric, 1e-5);
    out.pass = out.pass && ok_c && ok_n;
    out.lines.push_back(say("N=%d (F=%d, phi=pi): closed form %.3e (< 1e-10), liouvillian+mixing at Omega=1e-3 %.3e (< 1e-5) %s",
                            N, 2 * N, closed, numeric, verdict(ok_c && ok_n)));
  }
}

// ---- 4: low-drive series coefficients ----
void series(LandmarkResult& out) {
  const DriveWindow w{1e-2, 1e-1, 6};
  const RF rf{0.0, 0.0, 1.0};
  const auto fl =
      series_expand(rf, Observable::g2, Signal{Signal::Kind::fluctuations, Role::matter, {}}, {-4, -2, 0, 2}, w);
  const double c_rf = fl.coefficient(-4);

  AO ao;
  ao.gamma = 1;
  ao.U = 1;
  ao.delta = ao_extrema(1, 1).delta_minus;
  const Signal bare{Signal::Kind::bare, Role::matter, {}};
  const double n2 = series_expand(ao, Observable::n, bare, {2, 4, 6, 8}, w).coefficient(2);
  const double g2 = series_expand(ao, Observable::g2, bare, {0, 2, 4}, w).coefficient(0);
  const double g3 = series_expand(ao, Observable::g3, bare, {0, 2, 4}, w).coefficient(0);
  const bool ok_rf = judge(out, std::abs(c_rf * 64 - 1), 0.05);
  const bool ok_n = judge(out, std::abs(n2 / 2.89 - 1), 0.02);
  const bool ok_g2 = judge(out, std::abs(g2 - 0.38), 0.01);
  const bool ok_g3 = judge(out, std::abs(g3 - 0.06), 0.01);
  out.pass = ok_rf && ok_n && ok_g2 && ok_g3;
  out.lines.push_back(say("RF fluctuation g2: Omega^-4 coefficient %.6f vs 1/64 = %.6f (5%%) %s", c_rf, 1.0 / 64,
                          verdict(ok_rf)));
  out.lines.push_back(say("AO n: Omega^2 coefficient %.4f vs 2.89 (2%%) %s", n2, verdict(ok_n)));
  out.lines.push_back(say("AO g2 constant %.4f vs 0.38 (+-0.01) %s", g2, verdict(ok_g2)));
  out.lines.push_back(say("AO g3 constant %.4f vs 0.06 (+-0.01) %s", g3, verdict(ok_g3)));
}

// ---- 5: AO interference roots ----
void ao_roots(LandmarkResult& out) {
  const double U = 1, gamma = 1, delta = ao_extrema(U, gamma).delta_minus;
  const auto zeros = ao_g2_zeros(U, gamma, delta);
  const std::array<std::pair<double, double>, 2> expected{{{0.615, 0.659}, {2.907, 0.860}}};
  AO ao;
  ao.U = U;
  ao.gamma = gamma;
  ao.delta = delta;
  ao.omega = 1;
  const CorrelatorTable single = low_drive_correlators(SystemParams{ao}, 4).single_mode(Role::matter);
  out.pass = zeros.size() == 2;
  if (!out.pass) {
    out.ratio = HUGE_VAL;
    out.lines.push_back(say("expected two zeros, found %zu", zeros.size()));
  }
  for (size_t k = 0; k < std::min<size_t>(2, zeros.size()); ++k) {
    const auto [F, phi] = zeros[k];
    const auto [Fe, pe] = expected[k];
    const double g2 = gN_of_table(homodyne_moments(Homodyne{F, phi, 1}, 1.0, gamma, single, 2), 2);
    const bool ok_F = judge(out, std::abs(F - Fe), 1e-2);
    const bool ok_phi = judge(out, std::abs(phi / kPi - pe), 1e-2);
    const bool ok_g = judge(out, g2, 1e-6);
    out.pass = out.pass && ok_F && ok_phi && ok_g;
    out.lines.push_back(say("zero %zu: F=%.5f (vs %.3f) %s, phi=%.5f pi (vs %.3f pi) %s, recursive g2_s=%.2e %s", k + 1,
                            F, Fe, verdict(ok_F), phi / kPi, pe, verdict(ok_phi), g2, verdict(ok_g)));
  }
}

// ---- 6: JC perfect UA and its cooperativity ----
void jc_perfect(LandmarkResult& out) {
  out.pass = true;
  const double g = 1, ga = 0.1, gs = 0.01;
  const auto z = jc_exact_zero(g, ga, gs);
  if (!z) {
    out.pass = false;
    out.ratio = HUGE_VAL;
    out.lines.push_back("no real solution for the exact zero");
    return;
  }
  for (const auto& q : *z) {
    JC p;
    p.g = g;
    p.gamma_a = ga;
    p.gamma_s = gs;
    p.delta_a = q[0];
    p.delta_s = q[1];
    p.omega_a = 1e-6;
    const double closed = jc_g2(p);
    const double wf = wavefunction_coefficients(p).g2_a;
    const bool ok_c = judge(out, closed, 1e-10), ok_w = judge(out, wf, 1e-6);
    out.pass = out.pass && ok_c && ok_w;
    out.lines.push_back(say("(Delta_s, Delta_a) = (%.5f, %.5f): closed g2 %.2e (< 1e-10), wavefunction g2 %.2e (< 1e-6) %s",
                            q[1], q[0], closed, wf, verdict(ok_c && ok_w)));
  }
  // Delta_s = 0, gamma_a = 100 gamma_s: find g where Im Delta_a vanishes, independently of the root above.
  JC p;
  p.gamma_s = 1;
  p.gamma_a = 100;
  auto im = [&](double gg) {
    p.g = gg;
    return jc_ua_complex(p, 0.0).imag();
  };
  const double gz = detail::polish(im, 1e-3, 100.0, 1e-14);
  const double C = 4 * gz * gz / (p.gamma_a * p.gamma_s);
  const bool ok_c = judge(out, std::abs(C - 1), 0.01 + 1e-12);
  out.pass = out.pass && ok_c;
  out.lines.push_back(say("Delta_s=0, gamma_a=100 gamma_s: zero at cooperativity C = %.6f (|C-1| <= 1%%) %s", C,
                          verdict(ok_c)));
}

// ---- 7: four engines agree on g2 ----
void triple_oracle(LandmarkResult& out, unsigned seed) {
  std::mt19937 rng(seed);
  const int draws = 50;
  out.pass = true;
  for (const char* sys : {"RF", "AO", "JC", "POL"}) {
    double worst = 0;
    int bad = 0;
    for (int k = 0; k < draws; ++k) {
      const auto v = detail::oracle_draw(sys, rng, 1e-4);
      const double q = detail::oracle_spread(v) / detail::oracle_tolerance(v);
      if (!(q <= 1)) ++bad;
      worst = std::max(worst, q);
    }
    out.ratio = std::max(out.ratio, worst);
    out.pass = out.pass && bad == 0;
    out.lines.push_back(
        say("%s: %d draws, worst deviation %.2e of tolerance, %d over %s", sys, draws, worst, bad, verdict(bad == 0)));
  }
}

// ---- 8: polariton with huge U matches JC ----
void pol_to_jc(LandmarkResult& out) {
  const double g = 1, ga = 0.1, gb = 0.01, U = 1e4 * ga;
  double worst = 0;
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j) {
      const double wa = -2 * g + 4 * g * i / 20, wl = -2 * g + 4 * g * j / 20;
      POL p;
      p.g = g;
      p.gamma_a = ga;
      p.gamma_b = gb;
      p.U = U;
      p.delta_a = wa - wl;
      p.delta_b = -wl;
      p.omega_a = 1;
      JC q;
      q.g = g;
      q.gamma_a = ga;
      q.gamma_s = gb;
      q.delta_a = p.delta_a;
      q.delta_s = p.delta_b;
      q.omega_a = 1;
      const double a = pol_g2(p, Mode::cavity), b = jc_g2(q);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
  out.pass = judge(out, worst, 1e-2);
  out.lines.push_back(say("U = 1e4 gamma_a, 21x21 window +-2g: max relative |g2_pol - g2_JC| = %.3e (<= 1e-2) %s", worst,
                          verdict(out.pass)));
}

// ---- 9: critical coupling g_P ----
void critical_coupling(LandmarkResult& out, unsigned seed) {
  std::mt19937 rng(seed + 9);
  std::uniform_real_distribution<double> u(0, 1);
  auto in = [&](double a, double b) { return a + (b - a) * u(rng); };
  int found = 0, no_straddle = 0;
  double worst = 0;
  while (found < 20) {
    JC p;
    p.gamma_a = in(0.1, 2);
    p.gamma_s = in(0.1, 2);
    p.delta_a = in(-2, 2);
    p.delta_s = in(-2, 2);
    p.omega_a = 1;
    const auto gp = jc_critical_coupling(p.gamma_a, p.gamma_s, p.delta_a, p.delta_s);
    if (!gp || !(*gp > 0)) continue;
    ++found;
    auto g2 = [&](double g) {
      p.g = g;
      return jc_g2(p);
    };
    const double lo = g2(*gp * (1 - 1e-3)) - 1, hi = g2(*gp * (1 + 1e-3)) - 1;
    worst = std::max(worst, std::abs(g2(*gp) - 1));
    if ((lo < 0) == (hi < 0)) ++no_straddle;
  }
  const bool ok_at = judge(out, worst, 1e-6);
  if (no_straddle) out.ratio = HUGE_VAL;
  out.pass = ok_at && no_straddle == 0;
  out.lines.push_back(say("20 draws with real g_P: max |g2(g_P) - 1| = %.2e (< 1e-6) %s", worst, verdict(ok_at)));
  out.lines.push_back(say("  %d draws fail to straddle 1 across g_P(1 +- 1e-3) %s", no_straddle, verdict(!no_straddle)));
}

// ---- 10: finite-drive washout along the exact-zero cut ----
void washout(LandmarkResult& out) {
  const double g = 1, ga = 0.1, gs = 0.01, ws = 0;
  const auto z = jc_exact_zero(g, ga, gs);
  if (!z) throw Error("no exact zero to cut through");
  const double wl_ua = ws - (*z)[1][1], wa = wl_ua + (*z)[1][0];
  auto at = [&](double wl, double drive) {
    JC p;
    p.g = g;
    p.gamma_a = ga;
    p.gamma_s = gs;
    p.delta_a = wa - wl;
    p.delta_s = ws - wl;
    if (drive == 0) {
      p.omega_a = 1;
      return jc_g2(p);
    }
    p.omega_a = drive;
    return observable_at(p, Observable::g2, Signal{});
  };
  const auto levels = jc_dressed_energies(1, wa, ws, g, ga, gs);
  const double strong = 0.25 * ga;

  const Min1 ua0 = brent([&](double x) { return at(x, 0); }, wl_ua - 0.05, wl_ua + 0.05);
  const Min1 ua1 = brent([&](double x) { return at(x, strong); }, wl_ua - 0.05, wl_ua + 0.05);
  // Depth as the suppression factor 1/g2_min below Poissonian statistics.
  const double drop = (1 / std::max(ua0.f, 1e-300)) / (1 / ua1.f);
  const bool ok_ua = drop > 10;
  out.ratio = std::max(out.ratio, 10 / drop);
  out.lines.push_back(say("cut omega_a = %.4f g: UA dip g2_min %.2e -> %.2e at Omega_a = 0.25 gamma_a", wa, ua0.f, ua1.f));
  out.lines.push_back(say("  depth 1/g2 drops %.1fx (need > 10x) %s", drop, verdict(ok_ua)));
  bool ok_ca = true;
  for (int k = 0; k < 2; ++k) {
    const double e = levels.E[k].real();
    const Min1 c0 = brent([&](double x) { return at(x, 0); }, e - 0.1, e + 0.1);
    const Min1 c1 = brent([&](double x) { return at(x, strong); }, e - 0.1, e + 0.1);
    const bool ok = judge(out, std::abs(c1.x - c0.x), ga);
    ok_ca = ok_ca && ok;
    out.lines.push_back(say("CA dip near omega_L = %.3f: %.4f -> %.4f (shift %.2e < gamma_a) %s", e, c0.x, c1.x,
                            std::abs(c1.x - c0.x), verdict(ok)));
  }
  out.pass = ok_ua && ok_ca;
}

struct Entry {
  const char* title;
  double budget;
};

const Entry kEntries[kLandmarkCount] = {
    {"DST minimum over r at |alpha|=0.3", 1},
    {"optimal coherent amplitude", 1},
    {"RF homodyne zeros", 10},
    {"series coefficients", 30},
    {"AO interference roots", 5},
    {"JC perfect unconventional antibunching", 5},
    {"triple-oracle equivalence", 120},
    {"polariton to JC limit", 30},
    {"critical coupling g_P", 10},
    {"finite-drive washout", 60},
};

}  // namespace

LandmarkResult run_landmark(int id, unsigned seed) {
  if (id < 1 || id > kLandmarkCount) throw InvalidParameter("landmark id out of range");
  LandmarkResult r;
  r.id = id;
  r.title = kEntries[id - 1].title;
  r.budget = kEntries[id - 1].budget;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: dst_minimum(r); break;
      case 2: dst_optimality(r); break;
      case 3: rf_zeros(r); break;
      case 4: series(r); break;
      case 5: ao_roots(r); break;
      case 6: jc_perfect(r); break;
      case 7: triple_oracle(r, seed); break;
      case 8: pol_to_jc(r); break;
      case 9: critical_coupling(r, seed); break;
      case 10: washout(r); break;
    }
  } catch (const std::exception& e) {
    r.pass = false;
    r.ratio = HUGE_VAL;
    r.lines.push_back(std::string("error: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > r.budget) {
    r.pass = false;
    r.lines.push_back(say("runtime %.2f s over the %.0f s budget", r.seconds, r.budget));
  }
  return r;
}

std::vector<LandmarkResult> run_landmarks(unsigned seed) {
  std::vector<LandmarkResult> out;
  for (int id = 1; id <= kLandmarkCount; ++id) out.push_back(run_landmark(id, seed));
  return out;
}

}  // namespace blockade
