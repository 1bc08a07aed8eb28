#pragma once

#include <stdexcept>
#include <string>

namespace qlocal {

// Base of every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: out-of-range targets, odd d, mismatched dimensions.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A configured size limit (qubit cap, randomness budget, factor size) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A node touched a qubit it does not own.
class LocalityViolation : public Error {
 public:
  using Error::Error;
};

// A node program broke the round protocol (message to a non-neighbor,
// disposal of an entangled register, reading past its random tape, ...).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// The network does not have the shape a protocol requires.
class TopologyError : public Error {
 public:
  using Error::Error;
};

// A classical-model execution attempted a quantum operation.
class ModelViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace qlocal
