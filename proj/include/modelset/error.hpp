#pragma once

#include <stdexcept>
#include <string>

namespace modelset {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateLatticeError : public Error {
 public:
  using Error::Error;
};

class UnboundedRegionError : public Error {
 public:
  using Error::Error;
};

class InsufficientMarginError : public Error {
 public:
  using Error::Error;
};

class InvariantViolationError : public Error {
 public:
  using Error::Error;
};

class LabelNotInSpectrumError : public Error {
 public:
  using Error::Error;
};

class SupportExceedsCutoffError : public Error {
 public:
  using Error::Error;
};

class TrivialCharacterError : public Error {
 public:
  using Error::Error;
};

class TailBoundError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class AnsatzDegenerateError : public Error {
 public:
  using Error::Error;
};

class MonteCarloToleranceError : public Error {
 public:
  using Error::Error;
};

class ArithmeticOverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace modelset
