#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvesearch/types.hpp"

namespace curvesearch {

/// Omega = { x : g_i(x) <= 0, i = 0..m-1 } with every g_i convex and C^1,
/// together with the Euclidean projection onto Omega.
///
/// Implementations are immutable; all member functions are pure and safe to
/// call concurrently. Iterative projections keep their state on the stack.
class ConvexFeasibleSet {
 public:
  ConvexFeasibleSet(std::string name, int dim) : name_(std::move(name)), dim_(dim) {}
  virtual ~ConvexFeasibleSet() = default;

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] int dim() const { return dim_; }

  [[nodiscard]] virtual int num_constraints() const = 0;
  [[nodiscard]] virtual double constraint(const Vector& x, int i) const = 0;
  [[nodiscard]] virtual Vector constraint_gradient(const Vector& x, int i) const = 0;
  [[nodiscard]] virtual Vector project(const Vector& z) const = 0;

  /// All m constraint values. The default loops over constraint().
  [[nodiscard]] virtual Vector constraints(const Vector& x) const;

  [[nodiscard]] double max_violation(const Vector& x) const;
  [[nodiscard]] bool contains(const Vector& x, double tol = kFeasTol) const {
    return max_violation(x) <= tol;
  }

 protected:
  void check_index(int i) const;

 private:
  std::string name_;
  int dim_;
};

/// ||x - c||^2 - r^2 <= 0. Projection is radial.
class BallSet : public ConvexFeasibleSet {
 public:
  BallSet(Vector center, double radius, std::string name = "ball");

  [[nodiscard]] int num_constraints() const override { return 1; }
  [[nodiscard]] double constraint(const Vector& x, int i) const override;
  [[nodiscard]] Vector constraint_gradient(const Vector& x, int i) const override;
  [[nodiscard]] Vector project(const Vector& z) const override;

  [[nodiscard]] const Vector& center() const { return center_; }
  [[nodiscard]] double radius() const { return radius_; }

 private:
  Vector center_;
  double radius_;
};

/// w^T x - b <= 0.
class HalfspaceSet : public ConvexFeasibleSet {
 public:
  HalfspaceSet(Vector normal, double offset, std::string name = "halfspace");

  [[nodiscard]] int num_constraints() const override { return 1; }
  [[nodiscard]] double constraint(const Vector& x, int i) const override;
  [[nodiscard]] Vector constraint_gradient(const Vector& x, int i) const override;
  [[nodiscard]] Vector project(const Vector& z) const override;

 private:
  Vector normal_;
  double offset_;
};

/// lo <= x_j <= hi as 2n affine constraints: index 2j is lo - x_j, index
/// 2j + 1 is x_j - hi.
class BoxSet : public ConvexFeasibleSet {
 public:
  BoxSet(int dim, double lo, double hi, std::string name = "box");

  [[nodiscard]] int num_constraints() const override { return 2 * dim(); }
  [[nodiscard]] double constraint(const Vector& x, int i) const override;
  [[nodiscard]] Vector constraint_gradient(const Vector& x, int i) const override;
  [[nodiscard]] Vector project(const Vector& z) const override;
  [[nodiscard]] Vector constraints(const Vector& x) const override;

  [[nodiscard]] static int lower_index(int coord) { return 2 * coord; }
  [[nodiscard]] static int upper_index(int coord) { return 2 * coord + 1; }
  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// (x - c)^T P^{-1} (x - c) - r^2 <= 0 with P diagonal positive definite.
///
/// The projection solves the one-dimensional KKT equation for the
/// multiplier lambda >= 0,
///   x_i(lambda) = c_i + p_i (z_i - c_i) / (p_i + lambda),
/// with Newton steps on 1/sqrt(S(lambda)) - 1/r (exact for a single active
/// axis) guarded by bisection.
class EllipsoidSet : public ConvexFeasibleSet {
 public:
  EllipsoidSet(Vector center, Vector p_diag, double radius_sq = 25.0,
               std::string name = "ell");

  [[nodiscard]] int num_constraints() const override { return 1; }
  [[nodiscard]] double constraint(const Vector& x, int i) const override;
  [[nodiscard]] Vector constraint_gradient(const Vector& x, int i) const override;
  /// Throws ProjectionFailure after 200 root-finder iterations.
  [[nodiscard]] Vector project(const Vector& z) const override;

  [[nodiscard]] const Vector& center() const { return center_; }
  [[nodiscard]] const Vector& p_diag() const { return p_diag_; }

  static constexpr int kMaxRootIterations = 200;
  static constexpr double kRootTol = 1e-10;

 private:
  Vector center_;
  Vector p_diag_;
  double radius_sq_;
};

/// Shifted ball, halfspace and box, intersected:
///   ||x - 4*1||^2 - 100 <= 0,  (1/n) 1^T x - 5 <= 0,  -5 <= x_j <= 10.
/// Constraint 0 is the ball, 1 the halfspace, 2 + k the box constraint k
/// (same layout as BoxSet).
///
/// The projection works on the dual. For multipliers mu (ball) and nu
/// (halfspace) the box-constrained minimizer of the Lagrangian is the clamp
///   x(mu, nu) = clamp((z + mu c - nu w) / (1 + mu), lo, hi),
/// w^T x(mu, nu) is nonincreasing in nu and ||x(mu, nu*(mu)) - c|| is
/// nonincreasing in mu, so two nested bracketed root finds recover the
/// exact projection. The returned point is taken from the feasible side of
/// each bracket.
class CompositeSet : public ConvexFeasibleSet {
 public:
  explicit CompositeSet(int dim);

  [[nodiscard]] int num_constraints() const override { return 2 * dim() + 2; }
  [[nodiscard]] double constraint(const Vector& x, int i) const override;
  [[nodiscard]] Vector constraint_gradient(const Vector& x, int i) const override;
  [[nodiscard]] Vector constraints(const Vector& x) const override;
  /// Throws ProjectionFailure if a multiplier cannot be bracketed or a
  /// root find exceeds kMaxRootIterations.
  [[nodiscard]] Vector project(const Vector& z) const override;

  [[nodiscard]] const BallSet& ball() const { return ball_; }
  [[nodiscard]] const HalfspaceSet& halfspace() const { return halfspace_; }
  [[nodiscard]] const BoxSet& box() const { return box_; }

  static constexpr int kMaxRootIterations = 200;

 private:
  BallSet ball_;
  HalfspaceSet halfspace_;
  BoxSet box_;
};

/// Dykstra's alternating projections onto the intersection of `parts`.
/// Stops once a full sweep moves the iterate by at most change_tol and the
/// iterate violates no part by more than kFeasTol / 10; throws
/// ProjectionFailure after max_sweeps. Slow when the parts meet at shallow
/// angles, so the library uses it only as a reference.
Vector dykstra_project(std::span<const ConvexFeasibleSet* const> parts, const Vector& z,
                       double change_tol = 1e-10, int max_sweeps = 10000);

/// Omega_Sph: ||x||^2 - 100 <= 0.
BallSet make_sphere(int n);
/// Omega_Box with bounds [lo, hi] (the benchmark uses [-1, 1]).
BoxSet make_box(int n, double lo = -1.0, double hi = 1.0);
/// Omega_Ell with center all-ones, radius^2 = 25 and P drawn uniformly from
/// [0.5, 2.0]^n using `seed`.
EllipsoidSet make_ellipsoid(int n, std::uint64_t seed);
EllipsoidSet make_ellipsoid(const Vector& center, const Vector& p_diag, double radius_sq = 25.0);
/// Omega_Com.
CompositeSet make_composite(int n);

/// Registry names understood by make_set.
const std::vector<std::string>& set_names();
/// Builds "sph", "ell", "com" or "box"; throws DomainError on unknown names.
std::unique_ptr<ConvexFeasibleSet> make_set(std::string_view name, int n, std::uint64_t ell_seed);

struct ActiveSetQuery {
  Vector point;
  double tolerance = 0.0;
  std::vector<int> indices;  // { i : g_i(point) >= -tolerance }, ascending
};

ActiveSetQuery active_set(const ConvexFeasibleSet& set, const Vector& x, double eps);

}  // namespace curvesearch
