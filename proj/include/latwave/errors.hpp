#pragma once

#include <stdexcept>
#include <string>

namespace latwave {

/// Bad user-supplied parameters or configuration (CLI exit class 65).
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure could not deliver its contract: resonance hit on a
/// quadrature grid, degenerate branch point, Newton non-convergence,
/// instability of a time integration (CLI exit class 66).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// File I/O failure, always carries the offending path (CLI exit class 74).
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace latwave
