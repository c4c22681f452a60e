#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dafrfdm {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

inline void require(bool cond, const char* what) {
  if (!cond) throw InvalidArgument(what);
}

inline double energy(const cvec& v) {
  double e = 0.0;
  for (const auto& z : v) e += std::norm(z);
  return e;
}

}  // namespace dafrfdm
