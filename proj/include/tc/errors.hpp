#pragma once

#include <stdexcept>
#include <string>

namespace tc {

// Exit codes for the command line tool. Library code throws; the CLI maps.
enum class ExitCode : int {
  ok = 0,
  usage = 1,
  data = 2,
  numerical = 3,
};

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual ExitCode exit_code() const { return ExitCode::numerical; }
};

// Caller asked for something the API cannot do: bad flag values, impossible
// parameter combinations, mismatched dimensions between arguments.
struct UsageError : Error {
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::usage; }
};

struct ParameterError : UsageError {
  using UsageError::UsageError;
};
struct DimensionError : UsageError {
  using UsageError::UsageError;
};
struct SpecError : UsageError {
  using UsageError::UsageError;
};

// The request was well formed but this particular input cannot be processed.
struct DataError : Error {
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::data; }
};

struct InvalidLengthError : DataError {
  using DataError::DataError;
};
struct DegenerateInputError : DataError {
  using DataError::DataError;
};
struct SingularDesignError : DataError {
  using DataError::DataError;
};
struct SampleSizeError : DataError {
  using DataError::DataError;
};
struct WindowError : DataError {
  using DataError::DataError;
};
struct FormatError : DataError {
  using DataError::DataError;
};

// Computation started but could not finish reliably (non-finite intermediate,
// failed eigensolve, ...).
struct NumericalError : Error {
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::numerical; }
};

}  // namespace tc
