#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curvesearch/types.hpp"

namespace curvesearch {

/// A smooth objective f : R^n -> R with an analytic gradient.
///
/// Problems are immutable value objects; evaluation is pure and may be
/// called concurrently. The extended-precision evaluator exists so that
/// finite-difference checks on large sums are not swamped by rounding.
class SmoothProblem {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;
  using ExtendedValueFn = std::function<long double(const VectorLD&)>;

  SmoothProblem(std::string name, Vector start, ValueFn value, GradientFn gradient,
                ExtendedValueFn extended = {});

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] int dim() const { return static_cast<int>(start_.size()); }
  /// Classical starting point, before any projection onto a feasible set.
  [[nodiscard]] const Vector& start() const { return start_; }

  [[nodiscard]] double value(const Vector& x) const { return value_(x); }
  [[nodiscard]] Vector gradient(const Vector& x) const { return gradient_(x); }
  [[nodiscard]] long double value_extended(const VectorLD& x) const;

 private:
  std::string name_;
  Vector start_;
  ValueFn value_;
  GradientFn gradient_;
  ExtendedValueFn extended_;
};

// Individual suite members. Names follow the CUTEst problem they imitate.
SmoothProblem make_rosenbrock();                    // rosenbrock_2
SmoothProblem make_chainwoo(int n);                 // chainwoo_<n>, n even, n >= 4
SmoothProblem make_diagonal_quadratic(int n);       // diag_quad_<n>: sum i x_i^2
SmoothProblem make_shifted_quadratic(int n);        // shifted_quad_<n>
SmoothProblem make_tridia(int n);                   // tridia_<n>
SmoothProblem make_extended_powell(int n);          // powell_<n>, n % 4 == 0
SmoothProblem make_trigonometric(int n);            // trig_<n>
SmoothProblem make_arwhead(int n);                  // arwhead_<n>
SmoothProblem make_dqrtic(int n);                   // dqrtic_<n>
SmoothProblem make_engval1(int n);                  // engval1_<n>
SmoothProblem make_cosine(int n);                   // cosine_<n>

/// Centers of shifted_quad_<n>; exposed so tests can form the box minimizer.
Vector shifted_quadratic_center(int n);

/// The full desk-scale suite (16 problems, n from 2 to 1000).
std::vector<SmoothProblem> list_problems();

std::optional<SmoothProblem> find_problem(std::string_view name);

/// Max over coordinates of |analytic - central difference| / max(1, |analytic|).
/// Throws EvaluationError if f is not finite at some x +- h e_i.
double check_gradient(const SmoothProblem& p, const Vector& x, double h);

}  // namespace curvesearch
