#pragma once

#include <stdexcept>
#include <string>

namespace qdoeblin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch, non-Hermitian input and similar caller errors.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A Kraus list or Choi matrix that is not CPTP.
class InvalidChannel : public Error {
 public:
  using Error::Error;
};

/// A channel-family parameter outside its admissible interval.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

/// The SDP solver did not reach an optimal status.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// Unreadable or unwritable file.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdoeblin
