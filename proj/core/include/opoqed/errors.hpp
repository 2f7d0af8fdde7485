#pragma once

#include <stdexcept>
#include <string>

namespace opoqed {

/// Base class of every error raised by the library. The CLI maps these to
/// exit code 3 (numerical failure) unless they are InvalidParameters.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameters : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonUniqueSteadyState : public Error {
 public:
  using Error::Error;
};

class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class InsufficientGrid : public Error {
 public:
  using Error::Error;
};

class ChannelUnavailable : public Error {
 public:
  using Error::Error;
};

class SingularResolvent : public Error {
 public:
  using Error::Error;
};

class DecayIncomplete : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class TruncationOverflow : public Error {
 public:
  using Error::Error;
};

}  // namespace opoqed
