#ifndef DYNBT_ERRORS_HPP
#define DYNBT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dynbt {

// Base for all library errors. `kind()` is a stable machine-readable tag
// used by the CLI when emitting structured JSON errors.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Malformed input that could not be tokenized/parsed. Carries the 1-based
// line number of the offending row (0 if not tied to a line).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, long line = 0)
      : Error("parse_error", message), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error("validation_error", message) {}
};

class UnknownTimeError : public Error {
 public:
  explicit UnknownTimeError(const std::string& message)
      : Error("unknown_time", message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error("domain_error", message) {}
};

class EmptyDataError : public Error {
 public:
  explicit EmptyDataError(const std::string& message)
      : Error("empty_data", message) {}
};

// The comparison digraph is not strongly connected, so the score vector is
// not estimable. `component()` is a witness: a nonempty proper subset of
// teams with no wins against its complement.
class NotStronglyConnectedError : public Error {
 public:
  NotStronglyConnectedError(const std::string& message,
                            std::vector<int> component)
      : Error("not_strongly_connected", message),
        component_(std::move(component)) {}
  const std::vector<int>& component() const { return component_; }

 private:
  std::vector<int> component_;
};

class AllFoldsFailedError : public Error {
 public:
  explicit AllFoldsFailedError(const std::string& message)
      : Error("all_folds_failed", message) {}
};

class FactorizationError : public Error {
 public:
  explicit FactorizationError(const std::string& message)
      : Error("factorization_error", message) {}
};

class ShapeMismatchError : public Error {
 public:
  explicit ShapeMismatchError(const std::string& message)
      : Error("shape_mismatch", message) {}
};

class IsolatedTeamError : public Error {
 public:
  IsolatedTeamError(const std::string& message, int team)
      : Error("isolated_team", message), team_(team) {}
  int team() const { return team_; }

 private:
  int team_;
};

}  // namespace dynbt

#endif  // DYNBT_ERRORS_HPP
