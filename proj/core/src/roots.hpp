#pragma once

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace blockade::detail {

// Bracketed root of f on [a, b] polished to an absolute width of tol.
inline double polish(const std::function<double(double)>& f, double a, double b, double tol = 1e-10) {
  std::uintmax_t iters = 200;
  auto stop = [tol](double x, double y) { return std::abs(x - y) <= tol; };
  const auto r = boost::math::tools::toms748_solve(f, a, b, f(a), f(b), stop, iters);
  return 0.5 * (r.first + r.second);
}

// Sign changes of f over a uniform grid, each polished.
inline std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi, double step,
                                      double tol = 1e-10) {
  std::vector<double> roots;
  const int n = static_cast<int>(std::ceil((hi - lo) / step));
  double x0 = lo, f0 = f(lo);
  for (int i = 1; i <= n; ++i) {
    const double x1 = std::min(hi, lo + i * step);
    const double f1 = f(x1);
    if (f0 == 0) {
      roots.push_back(x0);
    } else if (std::isfinite(f0) && std::isfinite(f1) && (f0 < 0) != (f1 < 0) && f1 != 0) {
      roots.push_back(polish(f, x0, x1, tol));
    }
    x0 = x1;
    f0 = f1;
  }
  if (f0 == 0) roots.push_back(x0);
  return roots;
}

}  // namespace blockade::detail
