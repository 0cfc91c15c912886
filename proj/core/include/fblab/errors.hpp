#pragma once

#include <stdexcept>
#include <string>

namespace fblab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Grid too small for the requested stencil, or mismatched field shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "dimension"; }
};

/// A ring, disc, window or support box leaves the region where data is valid.
class GeometryError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "geometry"; }
};

/// A radius is too small relative to the grid spacing.
class ResolutionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "resolution"; }
};

/// Out-of-range scalar parameter (epsilon, tolerance, counts).
class ParameterError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parameter"; }
};

/// Field values undefined where a quantity needs them.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

/// Linear algebra failure inside a nonlinear solve.
class SolverError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "solver"; }
};

/// Malformed configuration text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const noexcept { return line_; }
  const char* kind() const noexcept override { return "parse"; }

 private:
  int line_;
};

}  // namespace fblab
