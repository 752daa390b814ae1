#pragma once

#include <stdexcept>
#include <string>

namespace teflow {

// Malformed or unusable input data (non-finite cells, missing columns,
// unparseable timestamps, too few samples).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid run configuration (window/lag constraints, non-positive fields).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientSamplesError : public DataError {
 public:
  using DataError::DataError;
};

// A series is constant over the span an estimate needs.
class DegenerateSeriesError : public DataError {
 public:
  DegenerateSeriesError(std::string series, const std::string& what)
      : DataError(what), series_(std::move(series)) {}

  // "source" or "target"
  const std::string& series() const noexcept { return series_; }

 private:
  std::string series_;
};

}  // namespace teflow
