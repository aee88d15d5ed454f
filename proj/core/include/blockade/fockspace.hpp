#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace blockade {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Dense operator on a truncated Hilbert space. Immutable once built.
class Operator {
 public:
  Operator() = default;
  explicit Operator(Mat m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

  Operator adjoint() const;
  Operator pow(int k) const;
  Operator kron(const Operator& rhs) const;
  cplx expect(const Operator& rho) const;  // Tr(rho * this)

  static Operator identity(int dim);

  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(cplx s, const Operator& a);

 private:
  Mat m_;
};

using DensityMatrix = Operator;

struct Boson {
  int levels;
};
struct TwoLevel {};
using ModeKind = std::variant<Boson, TwoLevel>;

// Annihilation operator of a single mode.
Operator build_mode(const ModeKind& kind);

// Physical models in the laser frame. Rates and frequencies share one unit.
struct RF {
  double delta = 0, omega = 0, gamma = 1;
};
struct AO {
  double delta = 0, U = 0, omega = 0, gamma = 1;
};
struct JC {
  double delta_a = 0, delta_s = 0, g = 0, omega_a = 0, chi = 0, phi = 0, gamma_a = 1, gamma_s = 1;
};
struct POL {
  double delta_a = 0, delta_b = 0, g = 0, U = 0, omega_a = 0, chi = 0, phi = 0, gamma_a = 1, gamma_b = 1;
};
using SystemParams = std::variant<RF, AO, JC, POL>;

void validate(const SystemParams& p);
std::string system_name(const SystemParams& p);

// Main drive amplitude (Omega for RF/AO, Omega_a for JC/POL) and a copy with it replaced.
double drive_of(const SystemParams& p);
SystemParams with_drive(const SystemParams& p, double omega);

// Shorthands used across the closed forms.
inline double Gamma2(double gamma, double delta) { return gamma * gamma + 4 * delta * delta; }
double chi_tilde(double chi);

struct Truncation {
  int photons = 10;              // per bosonic mode, so levels = photons + 1
  double top_threshold = 1e-10;  // warn when the top Fock level holds more than this
};

enum class Role { cavity, matter };

// Normal-ordered monomial: per mode the pair (creation power, annihilation power).
using Powers = std::vector<std::array<int, 2>>;

struct ModeSpec {
  std::string name;
  Role role;
  bool boson;
  double gamma;
};

struct HTerm {
  cplx coeff;
  Powers powers;
  int drive_order;  // 1 for laser terms, 0 otherwise
};

// Operator-level description of a driven-dissipative system.
struct Model {
  std::vector<ModeSpec> modes;
  std::vector<HTerm> terms;
  double drive_scale = 0;  // largest laser amplitude, used to balance solves

  int mode_index(Role r) const;  // -1 when absent
  bool has(Role r) const { return mode_index(r) >= 0; }
  double min_gamma() const;
};

Model model_of(const SystemParams& p);

// Model realised on a truncated tensor-product space. Mode 0 is the slowest index.
struct System {
  Model model;
  std::vector<int> levels;
  std::vector<Operator> lowering;  // embedded annihilation operators, one per mode
  std::vector<int> grade;          // total excitation number of each basis state
  Operator H;
  int dim = 0;

  const Operator& op(Role r) const;
  int top_level(Role r) const;  // highest Fock index for that mode
};

System build_system(const Model& m, const std::vector<int>& levels);
System build_system(const SystemParams& p, const Truncation& t = {});
Operator build_hamiltonian(const SystemParams& p, const Truncation& t = {});
Operator build_hamiltonian(const Model& m, const std::vector<int>& levels);

// Column-stacked generator: d/dt vec(rho) = L vec(rho), with vec index i + j*dim.
class Superoperator {
 public:
  Superoperator(SpMat L, int dim, std::vector<int> grade, double scale);

  int dim() const { return dim_; }
  const SpMat& matrix() const { return L_; }
  const std::vector<int>& grade() const { return grade_; }
  double scale() const { return scale_; }
  double trace_residual() const;  // ||L^dagger vec(1)||

 private:
  SpMat L_;
  int dim_;
  std::vector<int> grade_;
  double scale_;
};

struct Channel {
  double gamma;
  Operator c;
};

Superoperator build_liouvillian(const Operator& H, const std::vector<Channel>& channels,
                                std::vector<int> grade = {}, double scale = 1.0);
Superoperator build_liouvillian(const System& s);
Superoperator build_liouvillian(const SystemParams& p, const Truncation& t = {});

Vec vectorize(const Operator& rho);
Operator unvectorize(const Vec& v, int dim);

}  // namespace blockade
