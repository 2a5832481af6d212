#pragma once

#include <stdexcept>
#include <string>

namespace nsp {

// Base for all failures raised by the library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run configuration or CLI input.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Density left the admissible range 1 + rho >= vacuum_guard.
class VacuumError : public Error {
  public:
    explicit VacuumError(const std::string& what) : Error(what) {}
};

// Neutrality (zero-mean density perturbation) violated.
class NeutralityError : public Error {
  public:
    explicit NeutralityError(const std::string& what) : Error(what) {}
};

// An integral does not converge for the requested indices.
class DivergentIntegralError : public Error {
  public:
    explicit DivergentIntegralError(const std::string& what) : Error(what) {}
};

}  // namespace nsp
