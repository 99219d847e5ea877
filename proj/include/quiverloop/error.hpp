#pragma once

#include <stdexcept>
#include <string>

namespace quiverloop {

// Base class for every domain error raised by the library. The CLI maps
// these to exit code 1; anything else is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuiverError : public Error {
 public:
  using Error::Error;
};

// Malformed or non-composable edge word. `position` is the index of the
// offending step (or token) when one can be named.
class WordError : public Error {
 public:
  WordError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  explicit WordError(const std::string& what) : Error(what) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_ = 0;
};

class NetworkError : public Error {
 public:
  enum class Kind {
    kMissingData,
    kNonPositive,
    kShapeMismatch,
    kSourceMultiplicity,  // r_{s(e)} != C_e r_{t(e)}
    kTargetBlockSizes,    // n_{t(e)} != C_e^T n_{s(e)}
    kNonConstantDimension,
    kDisconnected,
  };

  NetworkError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class ActionError : public Error {
 public:
  using Error::Error;
};

class LoopEquationError : public Error {
 public:
  using Error::Error;
};

class BootstrapError : public Error {
 public:
  using Error::Error;
};

class GwwError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

class JobError : public Error {
 public:
  using Error::Error;
};

}  // namespace quiverloop
