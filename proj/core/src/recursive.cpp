#include "blockade/errors.hpp"
#include "blockade/steady.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace blockade {

namespace {

using Poly = std::map<Powers, cplx>;

double binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int k) {
  double r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// (p1,q1)(p2,q2) for one mode, back in normal order.
std::vector<std::pair<std::array<int, 2>, double>> mode_product(bool boson, std::array<int, 2> x,
                                                                std::array<int, 2> y) {
  std::vector<std::pair<std::array<int, 2>, double>> out;
  if (boson) {
    for (int k = 0; k <= std::min(x[1], y[0]); ++k)
      out.push_back({{x[0] + y[0] - k, x[1] + y[1] - k}, factorial(k) * binom(x[1], k) * binom(y[0], k)});
    return out;
  }
  // sigma^dag^p sigma^q as 2x2 matrices in the (ground, excited) basis.
  auto mat = [](std::array<int, 2> e) {
    Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d s;
    s << 0, 1, 0, 0;
    for (int i = 0; i < e[0]; ++i) m = m * s.transpose();
    for (int i = 0; i < e[1]; ++i) m = m * s;
    return m;
  };
  const Eigen::Matrix2d m = mat(x) * mat(y);
  const double c[4] = {m(0, 0), m(0, 1), m(1, 0), m(1, 1) - m(0, 0)};
  const std::array<int, 2> basis[4] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (int i = 0; i < 4; ++i)
    if (c[i] != 0) out.push_back({basis[i], c[i]});
  return out;
}

Poly product(const Model& m, const Powers& a, const Powers& b) {
  Poly acc{{Powers(), 1.0}};
  for (size_t i = 0; i < m.modes.size(); ++i) {
    Poly next;
    for (const auto& [w, c] : acc)
      for (const auto& [e, f] : mode_product(m.modes[i].boson, a[i], b[i])) {
        Powers v = w;
        v.push_back(e);
        next[v] += c * f;
      }
    acc.swap(next);
  }
  return acc;
}

Key to_key(const Model& m, const Powers& w) {
  Key k{0, 0, 0, 0};
  for (size_t i = 0; i < m.modes.size(); ++i) {
    const int off = m.modes[i].role == Role::matter ? 0 : 2;
    k[off] = w[i][0];
    k[off + 1] = w[i][1];
  }
  return k;
}

Powers to_powers(const Model& m, const Key& k) {
  Powers w;
  for (const auto& md : m.modes) {
    const int off = md.role == Role::matter ? 0 : 2;
    w.push_back({k[off], k[off + 1]});
  }
  return w;
}

int order(const Key& k) { return k[0] + k[1] + k[2] + k[3]; }

struct Term {
  Key target;
  cplx coeff;
  int tag;
};

// Heisenberg-picture generator applied to one monomial, split by drive tag.
std::vector<Term> adjoint_action(const Model& m, const Key& key) {
  const Powers o = to_powers(m, key);
  std::map<std::pair<Key, int>, cplx> acc;
  for (const auto& t : m.terms) {
    for (const auto& [w, c] : product(m, t.powers, o)) acc[{to_key(m, w), t.drive_order}] += kI * t.coeff * c;
    for (const auto& [w, c] : product(m, o, t.powers)) acc[{to_key(m, w), t.drive_order}] -= kI * t.coeff * c;
  }
  const size_t nm = m.modes.size();
  for (size_t i = 0; i < nm; ++i) {
    Powers cd(nm, {0, 0}), c(nm, {0, 0}), n(nm, {0, 0});
    cd[i] = {1, 0};
    c[i] = {0, 1};
    n[i] = {1, 1};
    const double g = m.modes[i].gamma / 2;
    for (const auto& [w1, c1] : product(m, cd, o))
      for (const auto& [w2, c2] : product(m, w1, c)) acc[{to_key(m, w2), 0}] += 2 * g * c1 * c2;
    for (const auto& [w, cc] : product(m, n, o)) acc[{to_key(m, w), 0}] -= g * cc;
    for (const auto& [w, cc] : product(m, o, n)) acc[{to_key(m, w), 0}] -= g * cc;
  }
  std::vector<Term> out;
  for (const auto& [kt, c] : acc)
    if (c != 0.0) out.push_back({kt.first, c, kt.second});
  return out;
}

std::vector<Key> block(const Model& m, int K) {
  const int im = m.mode_index(Role::matter);
  const int ic = m.mode_index(Role::cavity);
  const int mmax = im < 0 ? 0 : (m.modes[im].boson ? K : 1);
  const int cmax = ic < 0 ? 0 : (m.modes[ic].boson ? K : 1);
  std::vector<Key> keys;
  for (int a = 0; a <= mmax; ++a)
    for (int b = 0; b <= mmax; ++b)
      for (int c = 0; c <= cmax; ++c)
        for (int d = 0; d <= cmax; ++d)
          if (a + b + c + d == K) keys.push_back({a, b, c, d});
  std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
    const std::array<int, 2> px{x[0] + x[1], x[2] + x[3]}, py{y[0] + y[1], y[2] + y[3]};
    if (px != py) return px < py;
    return x < y;
  });
  return keys;
}

}  // namespace

RegressionMatrix regression_matrix(const Model& m, int max_total_order) {
  RegressionMatrix rm;
  for (int K = 1; K <= max_total_order; ++K) {
    rm.blocks.push_back(block(m, K));
    for (const Key& o : rm.blocks.back())
      for (const Term& t : adjoint_action(m, o)) {
        rm.coefficients[{o, t.target}] += t.coeff;
        rm.drive_tag[{o, t.target}] = t.tag;
      }
  }
  return rm;
}

CorrelatorTable low_drive_correlators(const Model& m, int max_total_order) {
  if (max_total_order < 1) throw InvalidParameter("recursion needs a positive order");
  const int im = m.mode_index(Role::matter);
  const int ic = m.mode_index(Role::cavity);
  CorrelatorTable table(im >= 0 && !m.modes[im].boson, ic >= 0 && !m.modes[ic].boson);

  for (int K = 1; K <= max_total_order; ++K) {
    const std::vector<Key> keys = block(m, K);
    std::map<Key, int> index;
    for (size_t i = 0; i < keys.size(); ++i) index[keys[i]] = static_cast<int>(i);
    const int n = static_cast<int>(keys.size());
    Mat M = Mat::Zero(n, n);
    Vec src = Vec::Zero(n);
    for (int r = 0; r < n; ++r) {
      for (const Term& t : adjoint_action(m, keys[r])) {
        const int lead = t.tag + order(t.target);
        if (lead > K) continue;  // higher order in the drive
        if (lead < K) throw std::logic_error("regression term below the block order");
        if (t.tag == 0) {
          M(r, index.at(t.target)) += t.coeff;
        } else {
          src(r) += t.coeff * table.at(t.target);
        }
      }
    }
    Eigen::PartialPivLU<Mat> lu(M);
    if (!(lu.rcond() > 1e-13)) throw DegenerateSpectrum(K);
    const Vec v = lu.solve(-src);
    for (int r = 0; r < n; ++r) table.set(keys[r], v(r), K);
  }
  table.enforce_conjugation();
  return table;
}

CorrelatorTable low_drive_correlators(const SystemParams& p, int max_total_order) {
  return low_drive_correlators(model_of(p), max_total_order);
}

double gN_limit(const SystemParams& p, Role r, int N) {
  if (N < 2) throw InvalidParameter("gN_limit needs N >= 2");
  return gN_of_table(low_drive_correlators(p, 2 * N).single_mode(r), N);
}

}  // namespace blockade
