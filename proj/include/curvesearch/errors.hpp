#pragma once

#include <stdexcept>
#include <string>

namespace curvesearch {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the documented domain (e.g. curve parameter t > 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Objective evaluated to NaN/Inf where a finite value was required.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A precondition on feasibility (or similar) was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// An iterative projection did not reach its tolerance within its cap.
class ProjectionFailure : public Error {
 public:
  using Error::Error;
};

/// A backtracking loop exceeded its budget.
class SearchFailure : public Error {
 public:
  enum class Cause { infeasible, insufficient_decrease, not_descent };

  SearchFailure(const std::string& what, double last_t, Cause cause)
      : Error(what), last_t_(last_t), cause_(cause) {}

  [[nodiscard]] double last_t() const { return last_t_; }
  [[nodiscard]] Cause cause() const { return cause_; }

 private:
  double last_t_;
  Cause cause_;
};

/// Invalid benchmark plan (unknown names, empty solver list, bad values).
class PlanError : public Error {
 public:
  using Error::Error;
};

/// No instance in the record set had a successful run.
class ProfileError : public Error {
 public:
  using Error::Error;
};

}  // namespace curvesearch
