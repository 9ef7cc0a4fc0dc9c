#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace boxlab {

enum class ErrorKind {
  InvalidArgument,
  SizeOverflow,
  OutOfVolume,
  IncompleteSample,
  SpectralProximity,
  InsufficientVolume,
  NumericalFailure,
  InvalidOrder,
  DegenerateInput,
  Magnitude,
  CombinatorialLimit,
  Embedding,
  ModulusCap,
  MatchingFailure,
  Config,
};

const char* to_string(ErrorKind kind);

class LabError : public std::runtime_error {
 public:
  LabError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SizeOverflowError : public LabError {
 public:
  SizeOverflowError(std::int64_t count, std::int64_t cap)
      : LabError(ErrorKind::SizeOverflow,
                 "site count " + std::to_string(count) + " exceeds cap " + std::to_string(cap)),
        count_(count) {}
  std::int64_t count() const noexcept { return count_; }

 private:
  std::int64_t count_;
};

/// Raised when a spectral parameter sits too close to the spectrum of the
/// operator being inverted.
class SpectralProximityError : public LabError {
 public:
  SpectralProximityError(double z, double distance, double residual)
      : LabError(ErrorKind::SpectralProximity,
                 "spectral parameter " + std::to_string(z) + " within " + std::to_string(distance) +
                     " of the spectrum (solver residual " + std::to_string(residual) + ")"),
        distance_(distance),
        residual_(residual) {}
  double distance() const noexcept { return distance_; }
  double residual() const noexcept { return residual_; }

 private:
  double distance_;
  double residual_;
};

class ConfigError : public LabError {
 public:
  ConfigError(const std::string& field, int line, const std::string& message)
      : LabError(ErrorKind::Config, format(field, line, message)), field_(field), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, int line, const std::string& message) {
    std::string out = "config";
    if (line > 0) out += " line " + std::to_string(line);
    if (!field.empty()) out += " field '" + field + "'";
    return out + ": " + message;
  }
  std::string field_;
  int line_;
};

}  // namespace boxlab
