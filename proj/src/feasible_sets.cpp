#include "curvesearch/feasible_sets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>

#include <boost/math/tools/toms748_solve.hpp>

#include "curvesearch/errors.hpp"

namespace curvesearch {

Vector ConvexFeasibleSet::constraints(const Vector& x) const {
  Vector g(num_constraints());
  for (int i = 0; i < num_constraints(); ++i) g[i] = constraint(x, i);
  return g;
}

double ConvexFeasibleSet::max_violation(const Vector& x) const {
  return constraints(x).maxCoeff();
}

void ConvexFeasibleSet::check_index(int i) const {
  if (i < 0 || i >= num_constraints()) {
    throw DomainError(name() + ": constraint index out of range");
  }
}

// ---------------------------------------------------------------- ball

BallSet::BallSet(Vector center, double radius, std::string name)
    : ConvexFeasibleSet(std::move(name), static_cast<int>(center.size())),
      center_(std::move(center)),
      radius_(radius) {
  if (!(radius_ > 0.0)) throw DomainError("BallSet: radius must be positive");
}

double BallSet::constraint(const Vector& x, int i) const {
  check_index(i);
  return (x - center_).squaredNorm() - radius_ * radius_;
}

Vector BallSet::constraint_gradient(const Vector& x, int i) const {
  check_index(i);
  return 2.0 * (x - center_);
}

Vector BallSet::project(const Vector& z) const {
  const Vector u = z - center_;
  const double norm = u.norm();
  if (norm <= radius_) return z;
  return center_ + (radius_ / norm) * u;
}

// ---------------------------------------------------------------- halfspace

HalfspaceSet::HalfspaceSet(Vector normal, double offset, std::string name)
    : ConvexFeasibleSet(std::move(name), static_cast<int>(normal.size())),
      normal_(std::move(normal)),
      offset_(offset) {
  if (normal_.squaredNorm() == 0.0) throw DomainError("HalfspaceSet: zero normal");
}

double HalfspaceSet::constraint(const Vector& x, int i) const {
  check_index(i);
  return normal_.dot(x) - offset_;
}

Vector HalfspaceSet::constraint_gradient(const Vector& /*x*/, int i) const {
  check_index(i);
  return normal_;
}

Vector HalfspaceSet::project(const Vector& z) const {
  const double excess = normal_.dot(z) - offset_;
  if (excess <= 0.0) return z;
  return z - (excess / normal_.squaredNorm()) * normal_;
}

// ---------------------------------------------------------------- box

BoxSet::BoxSet(int dim, double lo, double hi, std::string name)
    : ConvexFeasibleSet(std::move(name), dim), lo_(lo), hi_(hi) {
  if (!(lo < hi)) throw DomainError("BoxSet: requires lo < hi");
}

double BoxSet::constraint(const Vector& x, int i) const {
  check_index(i);
  const int coord = i / 2;
  return (i % 2 == 0) ? lo_ - x[coord] : x[coord] - hi_;
}

Vector BoxSet::constraint_gradient(const Vector& /*x*/, int i) const {
  check_index(i);
  Vector g = Vector::Zero(dim());
  g[i / 2] = (i % 2 == 0) ? -1.0 : 1.0;
  return g;
}

Vector BoxSet::project(const Vector& z) const {
  return z.cwiseMax(lo_).cwiseMin(hi_);
}

Vector BoxSet::constraints(const Vector& x) const {
  Vector g(num_constraints());
  for (int j = 0; j < dim(); ++j) {
    g[2 * j] = lo_ - x[j];
    g[2 * j + 1] = x[j] - hi_;
  }
  return g;
}

// ---------------------------------------------------------------- ellipsoid

EllipsoidSet::EllipsoidSet(Vector center, Vector p_diag, double radius_sq, std::string name)
    : ConvexFeasibleSet(std::move(name), static_cast<int>(center.size())),
      center_(std::move(center)),
      p_diag_(std::move(p_diag)),
      radius_sq_(radius_sq) {
  if (p_diag_.size() != center_.size()) throw DomainError("EllipsoidSet: size mismatch");
  if (!(p_diag_.array() > 0.0).all()) throw DomainError("EllipsoidSet: P must be positive");
  if (!(radius_sq_ > 0.0)) throw DomainError("EllipsoidSet: radius must be positive");
}

double EllipsoidSet::constraint(const Vector& x, int i) const {
  check_index(i);
  return ((x - center_).array().square() / p_diag_.array()).sum() - radius_sq_;
}

Vector EllipsoidSet::constraint_gradient(const Vector& x, int i) const {
  check_index(i);
  return 2.0 * ((x - center_).array() / p_diag_.array()).matrix();
}

Vector EllipsoidSet::project(const Vector& z) const {
  const Eigen::ArrayXd u = (z - center_).array();
  const Eigen::ArrayXd& p = p_diag_.array();
  const Eigen::ArrayXd weighted = p * u.square();  // p_i u_i^2
  if ((u.square() / p).sum() <= radius_sq_) return z;

  const double radius = std::sqrt(radius_sq_);
  // S(lambda) = sum p u^2 / (p + lambda)^2 = (x - c)^T P^{-1} (x - c).
  auto scaled_norm = [&](double lambda) { return (weighted / (p + lambda).square()).sum(); };

  double lo = 0.0;
  double hi = std::sqrt(weighted.sum()) / radius;  // S(hi) <= r^2
  double lambda = 0.0;
  for (int it = 0; it < kMaxRootIterations; ++it) {
    const double s = scaled_norm(lambda);
    const double residual = s - radius_sq_;
    if (std::abs(residual) <= kRootTol) {
      const Eigen::ArrayXd x = center_.array() + p * u / (p + lambda);
      return x.matrix();
    }
    if (residual > 0.0) {
      lo = lambda;
    } else {
      hi = lambda;
    }
    // Newton on h(lambda) = 1/sqrt(S) - 1/r, which is increasing in lambda.
    const double ds = -2.0 * (weighted / (p + lambda).cube()).sum();
    const double h = 1.0 / std::sqrt(s) - 1.0 / radius;
    const double dh = -0.5 * ds / (s * std::sqrt(s));
    double next = lambda - h / dh;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == lambda) next = 0.5 * (lo + hi);
    lambda = next;
  }
  throw ProjectionFailure("EllipsoidSet: multiplier root finder did not converge");
}

// ---------------------------------------------------------------- composite

CompositeSet::CompositeSet(int dim)
    : ConvexFeasibleSet("com", dim),
      ball_(Vector::Constant(dim, 4.0), 10.0, "com_ball"),
      halfspace_(Vector::Constant(dim, 1.0 / dim), 5.0, "com_halfspace"),
      box_(dim, -5.0, 10.0, "com_box") {}

double CompositeSet::constraint(const Vector& x, int i) const {
  check_index(i);
  if (i == 0) return ball_.constraint(x, 0);
  if (i == 1) return halfspace_.constraint(x, 0);
  return box_.constraint(x, i - 2);
}

Vector CompositeSet::constraint_gradient(const Vector& x, int i) const {
  check_index(i);
  if (i == 0) return ball_.constraint_gradient(x, 0);
  if (i == 1) return halfspace_.constraint_gradient(x, 0);
  return box_.constraint_gradient(x, i - 2);
}

Vector CompositeSet::constraints(const Vector& x) const {
  Vector g(num_constraints());
  g[0] = ball_.constraint(x, 0);
  g[1] = halfspace_.constraint(x, 0);
  g.tail(2 * dim()) = box_.constraints(x);
  return g;
}

Vector CompositeSet::project(const Vector& z) const {
  if (max_violation(z) <= 0.0) return z;

  const Vector& c = ball_.center();
  const double radius_sq = ball_.radius() * ball_.radius();
  const Vector w = halfspace_.constraint_gradient(z, 0);
  const double offset = -halfspace_.constraint(Vector::Zero(dim()), 0);

  auto primal = [&](double mu, double nu) -> Vector {
    return ((z + mu * c - nu * w) / (1.0 + mu)).cwiseMax(box_.lo()).cwiseMin(box_.hi());
  };

  // Finds the smallest root-side value v >= 0 with residual(v) <= 0 for a
  // nonincreasing residual.
  auto feasible_root = [&](auto&& residual, const char* what) -> double {
    if (residual(0.0) <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    int doublings = 0;
    while (residual(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++doublings > 2000) throw ProjectionFailure(std::string("CompositeSet: cannot bracket ") + what);
    }
    std::uintmax_t iterations = kMaxRootIterations;
    const auto bracket = boost::math::tools::toms748_solve(
        residual, lo, hi, boost::math::tools::eps_tolerance<double>(50), iterations);
    if (iterations >= static_cast<std::uintmax_t>(kMaxRootIterations)) {
      throw ProjectionFailure(std::string("CompositeSet: root finder did not converge for ") + what);
    }
    // Prefer the feasible end of the final bracket.
    return residual(bracket.first) <= 0.0 ? bracket.first : bracket.second;
  };

  auto halfspace_multiplier = [&](double mu) {
    return feasible_root([&](double nu) { return w.dot(primal(mu, nu)) - offset; }, "halfspace multiplier");
  };
  auto ball_residual = [&](double mu) {
    return (primal(mu, halfspace_multiplier(mu)) - c).squaredNorm() - radius_sq;
  };

  const double mu = feasible_root(ball_residual, "ball multiplier");
  return primal(mu, halfspace_multiplier(mu));
}

Vector dykstra_project(std::span<const ConvexFeasibleSet* const> parts, const Vector& z,
                       double change_tol, int max_sweeps) {
  if (parts.empty()) return z;
  std::vector<Vector> increments(parts.size(), Vector::Zero(z.size()));
  auto worst_violation = [&](const Vector& x) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto* part : parts) worst = std::max(worst, part->max_violation(x));
    return worst;
  };

  Vector x = z;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const Vector start = x;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      const Vector shifted = x + increments[j];
      x = parts[j]->project(shifted);
      increments[j] = shifted - x;
    }
    if ((x - start).norm() <= change_tol && worst_violation(x) <= 0.1 * kFeasTol) return x;
  }
  throw ProjectionFailure("dykstra_project: sweep cap reached");
}

// ---------------------------------------------------------------- factories

BallSet make_sphere(int n) {
  if (n < 1) throw DomainError("make_sphere: n must be positive");
  return BallSet(Vector::Zero(n), 10.0, "sph");
}

BoxSet make_box(int n, double lo, double hi) {
  if (n < 1) throw DomainError("make_box: n must be positive");
  return BoxSet(n, lo, hi, "box");
}

EllipsoidSet make_ellipsoid(int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("make_ellipsoid: n must be positive");
  // Raw engine output only: std distributions are not portable across
  // standard libraries, and run records must be reproducible.
  std::mt19937_64 engine(seed);
  Vector p(n);
  for (int i = 0; i < n; ++i) {
    const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    p[i] = 0.5 + 1.5 * unit;
  }
  return EllipsoidSet(Vector::Ones(n), p, 25.0, "ell");
}

EllipsoidSet make_ellipsoid(const Vector& center, const Vector& p_diag, double radius_sq) {
  return EllipsoidSet(center, p_diag, radius_sq, "ell");
}

CompositeSet make_composite(int n) {
  if (n < 1) throw DomainError("make_composite: n must be positive");
  return CompositeSet(n);
}

const std::vector<std::string>& set_names() {
  static const std::vector<std::string> names{"sph", "ell", "com", "box"};
  return names;
}

std::unique_ptr<ConvexFeasibleSet> make_set(std::string_view name, int n, std::uint64_t ell_seed) {
  if (name == "sph") return std::make_unique<BallSet>(make_sphere(n));
  if (name == "ell") return std::make_unique<EllipsoidSet>(make_ellipsoid(n, ell_seed));
  if (name == "com") return std::make_unique<CompositeSet>(make_composite(n));
  if (name == "box") return std::make_unique<BoxSet>(make_box(n));
  throw DomainError("unknown feasible set '" + std::string(name) + "'");
}

ActiveSetQuery active_set(const ConvexFeasibleSet& set, const Vector& x, double eps) {
  if (!(eps >= 0.0)) throw DomainError("active_set: eps must be nonnegative");
  ActiveSetQuery q{x, eps, {}};
  const Vector g = set.constraints(x);
  for (int i = 0; i < g.size(); ++i) {
    if (g[i] >= -eps) q.indices.push_back(i);
  }
  return q;
}

}  // namespace curvesearch
