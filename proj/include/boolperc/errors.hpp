#pragma once

#include <stdexcept>
#include <string>

namespace boolperc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument: non-unit direction, degenerate body, bad sample data.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Operation not available for this body kind or dimension.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A configured resource cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the domain of a formula.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Contradictory tail profile flags.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// GJK did not converge; carries the final duality gap (upper minus lower
/// distance bound) so callers may decide near-touching pairs themselves.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double gap, double lower, double upper)
      : Error(what), gap_(gap), lower_(lower), upper_(upper) {}

  double gap() const noexcept { return gap_; }
  double lower_bound() const noexcept { return lower_; }
  double upper_bound() const noexcept { return upper_; }

 private:
  double gap_;
  double lower_;
  double upper_;
};

}  // namespace boolperc
