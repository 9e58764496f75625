#pragma once

#include <stdexcept>
#include <string>

namespace cpt {

/// Malformed configuration document (bad key, wrong type). CLI exit code 2.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error("schema error at '" + path + "': " + what),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Physically inadmissible value (negative occupation, cutoff below the
/// resonant radius, parameter outside its domain). CLI exit code 3.
class DomainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operation called outside its regime of validity (e.g. asking for the
/// converging-family prediction of a non-converging bath). CLI exit code 4.
class RegimeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure: quadrature budget exhausted, eigensolver breakdown,
/// internal consistency check failed. CLI exit code 5.
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// API misuse (mismatched polarization indices, unstable integrator step).
class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cpt
