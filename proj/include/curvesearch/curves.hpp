#pragma once

#include <array>

#include "curvesearch/feasible_sets.hpp"
#include "curvesearch/types.hpp"

namespace curvesearch {

/// gamma(t) = x + t d + t^2 (s - d), t in [0, 1].
///
/// Equivalently the quadratic Bezier curve with control points
/// P0 = x, P1 = x + d/2, P2 = x + s. The curve keeps (x, d, s) rather than
/// the control points so that s == d yields exactly the line x + t d.
class QuadraticCurve {
 public:
  QuadraticCurve(Vector x, Vector d, Vector s);

  [[nodiscard]] const Vector& base() const { return x_; }
  [[nodiscard]] const Vector& primary() const { return d_; }
  [[nodiscard]] const Vector& secondary() const { return s_; }

  [[nodiscard]] Vector eval(double t) const;
  [[nodiscard]] Vector velocity(double t) const;
  [[nodiscard]] std::array<Vector, 3> control_points() const;
  [[nodiscard]] bool is_line() const { return s_ == d_; }

 private:
  Vector x_;
  Vector d_;
  Vector s_;
};

/// Weights with gamma(t) = a0 P0 + a1 P1 + a2 gamma(t_hat) for 0 <= t <= t_hat.
struct HullCoefficients {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double t = 0.0;
  double t_hat = 0.0;
};

/// Requires 0 < t_hat <= 1 and 0 <= t <= t_hat; throws DomainError otherwise.
HullCoefficients hull_coefficients(double t, double t_hat);

/// Whether g_i(gamma(t_hat)) > 0, given P0 and P1 satisfy constraint i.
/// When it holds, g_i(P2) > 0 as well (P2 infeasible for i). Throws
/// ContractError if P0 or P1 violates constraint i beyond kFeasTol.
bool infeasibility_propagates(const QuadraticCurve& curve, const ConvexFeasibleSet& set,
                              double t_hat, int i);

enum class CurveDecision { curve_ok, fall_back };

/// Decides whether the curve may be searched as is. Computes the relaxed
/// active set at x + t_tilde d and falls back iff one of those constraints
/// is violated at x + s. Requires x and x + d feasible (ContractError).
CurveDecision feasibility_certificate(const QuadraticCurve& curve, const ConvexFeasibleSet& set,
                                      double t_tilde, double eps);

}  // namespace curvesearch
