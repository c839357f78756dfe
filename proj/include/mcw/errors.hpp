#pragma once

#include <stdexcept>
#include <string>

namespace mcw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Invalid waveform, layout or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Out-of-domain numeric parameter (power fraction, width, tolerance).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class EqualizationError : public Error {
 public:
  EqualizationError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

}  // namespace mcw
