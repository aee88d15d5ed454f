#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace blockade {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidTruncation : Error {
  explicit InvalidTruncation(int levels);
  int levels;
};

struct InvalidParameter : Error {
  using Error::Error;
};

// Steady manifold is not one-dimensional.
struct AmbiguousSteadyState : Error {
  explicit AmbiguousSteadyState(int nullity);
  int nullity;
};

// g^(N) or a decomposition normalised by a vanishing population.
struct UndefinedCorrelation : Error {
  UndefinedCorrelation(const std::string& what, std::complex<double> raw_moment);
  std::complex<double> raw_moment;
};

// Singular regression block in the vanishing-drive recursion.
struct DegenerateSpectrum : Error {
  explicit DegenerateSpectrum(int block);
  int block;
};

struct IncompleteTable : Error {
  explicit IncompleteTable(std::array<int, 4> key);
  std::array<int, 4> key;
};

struct DomainError : Error {
  using Error::Error;
};

struct WindowTooWide : Error {
  explicit WindowTooWide(double condition);
  double condition;
};

struct Instability : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace blockade
