#pragma once

#include <stdexcept>
#include <string>

namespace whittle {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Channel parameters that fail the numerical guards (exit code 3 in the CLI).
class InvalidChannel : public Error {
 public:
  using Error::Error;
};

class AbsorbingChain : public InvalidChannel {
 public:
  using InvalidChannel::InvalidChannel;
};

class BadBandwidth : public InvalidChannel {
 public:
  using InvalidChannel::InvalidChannel;
};

class InconsistentThreshold : public Error {
 public:
  using Error::Error;
};

class ObservationMismatch : public Error {
 public:
  using Error::Error;
};

class NotIdentical : public Error {
 public:
  using Error::Error;
};

// Exhaustive search requested beyond its enforced size limits.
class TooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace whittle
