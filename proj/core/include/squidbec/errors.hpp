#pragma once

#include <stdexcept>
#include <string>

namespace squidbec {

// Invalid physical parameters or evaluation outside an operation's domain
// (e.g. field requested inside the wire volume, non-double-well circuit).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to meet its tolerance (root refinement,
// quadrature convergence, norm drift, step-size underflow, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration: unknown keys, missing/mismatched units, bad values.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem problems while emitting artifacts.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace squidbec
