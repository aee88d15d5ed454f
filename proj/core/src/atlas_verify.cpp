#include "blockade/atlas.hpp"
#include "blockade/errors.hpp"
#include "blockade/landmarks.hpp"
#include "oracle.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace blockade {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) {
  const double d = std::abs(a - b) / std::max(std::abs(b), 1e-300);
  return std::isfinite(d) ? d : HUGE_VAL;
}

Check finish(std::string name, std::string engines, double dev, double tol, Clock::time_point t0,
             std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.engines = std::move(engines);
  c.deviation = dev;
  c.tolerance = tol;
  c.pass = dev <= tol;
  c.seconds = since(t0);
  c.detail = std::move(detail);
  return c;
}

// Random AO, JC or POL point at unit drive.
SystemParams draw(int which, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  auto in = [&](double a, double b) { return a + (b - a) * u(rng); };
  switch (which % 3) {
    case 0: {
      AO p;
      p.U = in(0.1, 3);
      p.delta = in(-2, 2);
      p.omega = 1;
      return p;
    }
    case 1: {
      JC p;
      p.gamma_a = in(0.1, 2);
      p.gamma_s = in(0.1, 2);
      p.delta_a = in(-2, 2);
      p.delta_s = in(-2, 2);
      p.g = in(0.1, 2);
      p.chi = in(0, 2);
      p.phi = in(0, 2 * kPi);
      p.omega_a = 1;
      return p;
    }
    default: {
      POL p;
      p.gamma_a = in(0.1, 2);
      p.gamma_b = in(0.1, 2);
      p.delta_a = in(-2, 2);
      p.delta_b = in(-2, 2);
      p.g = in(0.1, 2);
      p.U = in(0.1, 3);
      p.chi = in(0, 2);
      p.phi = in(0, 2 * kPi);
      p.omega_a = 1;
      return p;
    }
  }
}

std::vector<Check> identities(const VerifyOptions& o) {
  std::vector<Check> out;
  std::mt19937 rng(o.seed);
  std::uniform_real_distribution<double> u(0, 1);
  auto tol = [&](double d) { return o.tolerance.value_or(d); };

  // Decomposition identities on the leading-order tables, mixed with a random coherent field.
  {
    const auto t0 = Clock::now();
    double dev2 = 0, dev3 = 0, conj = 0;
    for (int k = 0; k < o.draws; ++k) {
      const SystemParams p = draw(k, rng);
      const CorrelatorTable full = low_drive_correlators(p, 6);
      conj = std::max(conj, full.conjugation_defect());
      const CorrelatorTable d = full.single_mode(default_role(p));
      const cplx beta = std::polar(std::sqrt(std::abs(d.at(1, 1).real())) * 3 * u(rng), 2 * kPi * u(rng));
      const CorrelatorTable s = mix(beta, d, 3);
      const cplx mean = s.at(0, 1);
      // Residual against 1 + sum |terms|: the terms can cancel down to a g^(N) near zero.
      const auto d2 = decompose_g2(mean, s);
      const auto d3 = decompose_g3(mean, s);
      double scale3 = 1;
      for (double j : d3.J) scale3 += std::abs(j);
      dev2 = std::max(dev2, std::abs(d2.total() - gN_of_table(s, 2)) /
                                (1 + std::abs(d2.I0) + std::abs(d2.I1) + std::abs(d2.I2)));
      dev3 = std::max(dev3, std::abs(d3.total() - gN_of_table(s, 3)) / scale3);
    }
    out.push_back(finish("g2 = 1 + I0 + I1 + I2", "mixer", dev2, tol(1e-12), t0));
    out.push_back(finish("g3 = 1 + J0 + ... + J4", "mixer", dev3, tol(1e-12), t0));
    out.push_back(finish("correlator conjugation symmetry", "recursive", conj, tol(1e-12), t0));
  }

  // Trace preservation and physical steady states at finite drive.
  {
    const auto t0 = Clock::now();
    double trace = 0, herm = 0, unit = 0, neg = 0;
    for (int k = 0; k < 8; ++k) {
      SystemParams p = k == 0 ? SystemParams{RF{u(rng) * 2 - 1, 0.5, 1.0}} : draw(k, rng);
      p = with_drive(p, 0.05 + 0.3 * u(rng));
      trace = std::max(trace, build_liouvillian(p).trace_residual());
      const SteadyResult s = solve_steady(p);
      const Mat& r = s.rho.matrix();
      herm = std::max(herm, (r - r.adjoint()).norm());
      unit = std::max(unit, std::abs(r.trace() - 1.0));
      const Mat h = (r + r.adjoint()) / 2.0;
      const double lo = Eigen::SelfAdjointEigenSolver<Mat>(h).eigenvalues().minCoeff();
      neg = std::max(neg, -lo);
    }
    out.push_back(finish("trace preservation ||L^dagger vec(1)||", "liouvillian", trace, tol(1e-12), t0));
    out.push_back(finish("steady state hermitian", "liouvillian", herm, tol(1e-10), t0));
    out.push_back(finish("steady state unit trace", "liouvillian", unit, tol(1e-10), t0));
    out.push_back(finish("steady state positive (-min eigenvalue)", "liouvillian", neg, tol(1e-8), t0));
  }

  // RF: fluctuation g^(N) in two algebraic forms, and mixing against the closed form.
  {
    const auto t0 = Clock::now();
    double fl = 0, mx = 0;
    for (int k = 0; k < o.draws; ++k) {
      // The population form subtracts |<s>|^2 from n, losing about eps / Omega^2; keep Omega moderate.
      const double omega = std::pow(10.0, -1.5 + 2 * u(rng)), delta = 4 * u(rng) - 2;
      const double F = 5 * u(rng), phi = 2 * kPi * u(rng);
      const RF unit{delta, 1.0, 1.0};
      const auto table = low_drive_correlators(SystemParams{unit}, 8).single_mode(Role::matter);
      for (int N = 2; N <= 4; ++N) {
        fl = std::max(fl, rel(rf_gN_fluct_physical(N, omega, 1.0, delta), rf_gN_fluct(N, omega, 1.0, delta)));
        const double closed = rf_homodyne_gN(N, F, phi, 1e-6, 1.0, delta).gN;
        const double mixed = gN_of_table(homodyne_moments(Homodyne{F, phi, 1}, 1.0, 1.0, table, N), N);
        mx = std::max(mx, rel(mixed, closed));
      }
    }
    out.push_back(finish("RF fluctuation g^(N): population form vs drive form", "analytic", fl, tol(1e-10), t0));
    out.push_back(finish("RF homodyne g^(N): mixing vs closed form, N <= 4", "recursive/analytic", mx, tol(1e-9), t0));
  }
  return out;
}

std::vector<Check> oracles(const VerifyOptions& o) {
  std::vector<Check> out;
  std::mt19937 rng(o.seed);
  std::uniform_real_distribution<double> u(0, 1);
  for (const char* sys : {"RF", "AO", "JC", "POL"}) {
    const auto t0 = Clock::now();
    double plain = 0, near = 0;
    int n_near = 0;
    for (int k = 0; k < o.draws; ++k) {
      const double drive = std::pow(10.0, -5 + 2 * u(rng));
      const auto v = detail::oracle_draw(sys, rng, drive);
      const double d = detail::oracle_spread(v);
      if (detail::oracle_tolerance(v) > 1e-3) {
        near = std::max(near, d);
        ++n_near;
      } else {
        plain = std::max(plain, d);
      }
    }
    const std::string engines = "analytic/recursive/liouvillian/wavefunction";
    out.push_back(finish(std::string(sys) + " g2, four engines", engines, plain, o.tolerance.value_or(1e-3), t0,
                         std::to_string(o.draws - n_near) + " draws"));
    if (n_near)
      out.push_back(finish(std::string(sys) + " g2 < 1e-3, four engines", engines, near, o.tolerance.value_or(1e-2),
                           t0, std::to_string(n_near) + " draws"));
  }
  return out;
}

std::vector<Check> landmarks(const VerifyOptions& o) {
  std::vector<Check> out;
  for (int id = 1; id <= kLandmarkCount; ++id) {
    const LandmarkResult r = run_landmark(id, o.seed);
    Check c;
    c.name = "criterion " + std::to_string(id) + ": " + r.title;
    c.engines = "reference values";
    c.deviation = r.ratio;  // in units of each sub-check's own tolerance
    c.tolerance = 1;
    c.pass = r.pass;
    c.seconds = r.seconds;
    for (const auto& l : r.lines) c.detail += (c.detail.empty() ? "" : "\n") + l;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

bool VerifyReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string VerifyReport::json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["pass"] = pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e;
    e["name"] = c.name;
    e["engines"] = c.engines;
    if (std::isfinite(c.deviation)) e["deviation"] = c.deviation;
    else e["deviation"] = "inf";
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    e["seconds"] = c.seconds;
    e["detail"] = c.detail;
    j["checks"].push_back(e);
  }
  return j.dump(2) + "\n";
}

std::string VerifyReport::text() const {
  std::ostringstream s;
  int failed = 0;
  for (const auto& c : checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e / %.1e", c.deviation, c.tolerance);
    s << (c.pass ? "PASS " : "FAIL ") << c.name << "  [" << buf << ", " << c.engines << ", ";
    std::snprintf(buf, sizeof buf, "%.2f s", c.seconds);
    s << buf << "]\n";
    std::istringstream d(c.detail);
    for (std::string line; std::getline(d, line);) s << "     " << line << "\n";
    failed += !c.pass;
  }
  s << suite << ": " << checks.size() - failed << "/" << checks.size() << " passed\n";
  return s.str();
}

VerifyReport verify(const std::string& suite, const VerifyOptions& o) {
  VerifyReport r;
  r.suite = suite;
  if (suite == "identities") r.checks = identities(o);
  else if (suite == "oracles") r.checks = oracles(o);
  else if (suite == "landmarks") r.checks = landmarks(o);
  else throw ConfigError("unknown suite '" + suite + "' (expected identities, oracles or landmarks)");
  return r;
}

}  // namespace blockade
