#pragma once

#include <stdexcept>
#include <string>

namespace srif {

// Every failure the library raises carries a stable kind string and the
// process exit code the CLI maps it to (see README for the table).
class Error : public std::runtime_error {
 public:
  Error(const char* kind, const std::string& message, int exit_code)
      : std::runtime_error(std::string(kind) + ": " + message),
        kind_(kind),
        exit_code_(exit_code) {}

  const char* kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  const char* kind_;
  int exit_code_;
};

struct DecodeError : Error {
  explicit DecodeError(const std::string& m) : Error("DecodeError", m, 2) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error("ParseError", m, 3) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error("ConfigError", m, 3) {}
};

struct DimensionTooSmall : Error {
  explicit DimensionTooSmall(const std::string& m) : Error("DimensionTooSmall", m, 4) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& m) : Error("DimensionMismatch", m, 4) {}
};

struct EdgeMismatch : Error {
  explicit EdgeMismatch(const std::string& m) : Error("EdgeMismatch", m, 4) {}
};

struct DegenerateReference : Error {
  explicit DegenerateReference(const std::string& m) : Error("DegenerateReference", m, 5) {}
};

struct DegenerateScores : Error {
  explicit DegenerateScores(const std::string& m) : Error("DegenerateScores", m, 5) {}
};

struct InsufficientData : Error {
  explicit InsufficientData(const std::string& m) : Error("InsufficientData", m, 6) {}
};

struct WeightNormalization : Error {
  explicit WeightNormalization(const std::string& m) : Error("WeightNormalization", m, 6) {}
};

}  // namespace srif
