#pragma once

#include <stdexcept>
#include <string>

namespace asyspill {

/// Broad failure categories. The CLI maps each onto a process exit code.
enum class ErrorKind {
  validation = 2,
  data = 3,
  numerical = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

/// Bad configuration or violated precondition detected before computing.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

/// Input content is wrong (non-positive price, unknown date, ...).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

/// A row could not be parsed. Carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Inputs do not share a common grid (dates, assets).
class AlignmentError : public DataError {
 public:
  explicit AlignmentError(const std::string& what) : DataError(what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// Least-squares regressors are (numerically) rank deficient.
class SingularFitError : public NumericalError {
 public:
  explicit SingularFitError(const std::string& what) : NumericalError(what) {}
};

/// Forecast-error variance denominator vanished.
class DegenerateCovarianceError : public NumericalError {
 public:
  explicit DegenerateCovarianceError(const std::string& what) : NumericalError(what) {}
};

}  // namespace asyspill
