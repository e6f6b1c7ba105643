#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace stlfem {

using cdouble = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double p_ref = 2e-5;  // reference sound pressure, Pa

// Base class for all recoverable simulator errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class ConformityError : public Error {
 public:
  using Error::Error;
};

class InterfaceError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

// Round half away from zero to a fixed number of decimals.
inline double round_to(double x, int decimals) {
  double p = std::pow(10.0, decimals);
  return std::round(x * p) / p;
}

}  // namespace stlfem
