#include "curvesearch/curves.hpp"

#include <utility>

#include "curvesearch/errors.hpp"

namespace curvesearch {

namespace {

void check_parameter(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("curve parameter outside [0, 1]");
}

}  // namespace

QuadraticCurve::QuadraticCurve(Vector x, Vector d, Vector s)
    : x_(std::move(x)), d_(std::move(d)), s_(std::move(s)) {
  if (d_.size() != x_.size() || s_.size() != x_.size()) {
    throw DomainError("QuadraticCurve: dimension mismatch");
  }
}

Vector QuadraticCurve::eval(double t) const {
  check_parameter(t);
  if (is_line()) return x_ + t * d_;
  return x_ + t * d_ + (t * t) * (s_ - d_);
}

Vector QuadraticCurve::velocity(double t) const {
  check_parameter(t);
  if (is_line()) return d_;
  return d_ + (2.0 * t) * (s_ - d_);
}

std::array<Vector, 3> QuadraticCurve::control_points() const {
  return {x_, x_ + 0.5 * d_, x_ + s_};
}

HullCoefficients hull_coefficients(double t, double t_hat) {
  if (!(t_hat > 0.0 && t_hat <= 1.0)) throw DomainError("hull_coefficients: t_hat not in (0, 1]");
  if (!(t >= 0.0 && t <= t_hat)) throw DomainError("hull_coefficients: t not in [0, t_hat]");
  const double ratio = t / t_hat;
  const double ratio_sq = ratio * ratio;
  const double tail = 1.0 - t_hat;
  HullCoefficients h;
  h.t = t;
  h.t_hat = t_hat;
  h.a2 = ratio_sq;
  h.a0 = (1.0 - t) * (1.0 - t) - ratio_sq * tail * tail;
  h.a1 = 2.0 * t * (1.0 - t) - 2.0 * ratio * t * tail;
  return h;
}

bool infeasibility_propagates(const QuadraticCurve& curve, const ConvexFeasibleSet& set,
                              double t_hat, int i) {
  if (!(t_hat > 0.0 && t_hat <= 1.0)) throw DomainError("infeasibility_propagates: bad t_hat");
  const auto points = curve.control_points();
  if (set.constraint(points[0], i) > kFeasTol || set.constraint(points[1], i) > kFeasTol) {
    throw ContractError("infeasibility_propagates: P0 and P1 must satisfy the constraint");
  }
  return set.constraint(curve.eval(t_hat), i) > 0.0;
}

CurveDecision feasibility_certificate(const QuadraticCurve& curve, const ConvexFeasibleSet& set,
                                      double t_tilde, double eps) {
  if (!(t_tilde > 0.0 && t_tilde < 1.0)) throw DomainError("feasibility_certificate: t_tilde not in (0, 1)");
  if (!(eps >= 0.0)) throw DomainError("feasibility_certificate: eps must be nonnegative");
  const Vector& x = curve.base();
  const Vector& d = curve.primary();
  if (!set.contains(x)) throw ContractError("feasibility_certificate: base point infeasible");
  if (!set.contains(x + d)) throw ContractError("feasibility_certificate: x + d infeasible");

  const ActiveSetQuery active = active_set(set, x + t_tilde * d, eps);
  if (active.indices.empty()) return CurveDecision::curve_ok;
  const Vector endpoint = x + curve.secondary();
  for (int i : active.indices) {
    if (set.constraint(endpoint, i) > kFeasTol) return CurveDecision::fall_back;
  }
  return CurveDecision::curve_ok;
}

}  // namespace curvesearch
