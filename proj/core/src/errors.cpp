#include "blockade/errors.hpp"

#include <sstream>

namespace blockade {

InvalidTruncation::InvalidTruncation(int l)
    : Error("boson truncation needs at least 2 levels, got " + std::to_string(l)), levels(l) {}

AmbiguousSteadyState::AmbiguousSteadyState(int n)
    : Error("steady state is not unique: null space dimension " + std::to_string(n)), nullity(n) {}

static std::string describe(const std::string& what, std::complex<double> z) {
  std::ostringstream os;
  os << what << " (raw moment " << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
  return os.str();
}

UndefinedCorrelation::UndefinedCorrelation(const std::string& what, std::complex<double> raw)
    : Error(describe(what, raw)), raw_moment(raw) {}

DegenerateSpectrum::DegenerateSpectrum(int b)
    : Error("regression block of total order " + std::to_string(b) + " is singular"), block(b) {}

static std::string tuple_text(const std::array<int, 4>& k) {
  std::ostringstream os;
  os << "correlator (" << k[0] << "," << k[1] << "," << k[2] << "," << k[3] << ") missing from table";
  return os.str();
}

IncompleteTable::IncompleteTable(std::array<int, 4> k) : Error(tuple_text(k)), key(k) {}

WindowTooWide::WindowTooWide(double c)
    : Error("series fit ill-conditioned (condition " + std::to_string(c) + "); narrow the drive window"),
      condition(c) {}

}  // namespace blockade
