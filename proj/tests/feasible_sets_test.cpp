#include <array>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "curvesearch/errors.hpp"
#include "curvesearch/feasible_sets.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace curvesearch;

namespace {

Vector interior_point(const ConvexFeasibleSet& set) {
  const int n = set.dim();
  if (set.name() == "ell") return Vector::Ones(n);
  if (set.name() == "com") return Vector::Constant(n, 4.0);
  return Vector::Zero(n);
}

// Feasible point on the segment from an interior point towards `target`,
// pushed to the boundary by bisection when target is outside.
Vector feasible_towards(const ConvexFeasibleSet& set, const Vector& target) {
  const Vector base = interior_point(set);
  if (set.contains(target, 0.0)) return target;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (set.contains(base + mid * (target - base), 0.0) ? lo : hi) = mid;
  }
  return base + lo * (target - base);
}

std::vector<std::unique_ptr<ConvexFeasibleSet>> all_sets(int n) {
  std::vector<std::unique_ptr<ConvexFeasibleSet>> out;
  for (const auto& name : set_names()) out.push_back(make_set(name, n, 99));
  return out;
}

}  // namespace

TEST_CASE("sphere closed form") {
  const auto s = make_sphere(2);
  CHECK(s.num_constraints() == 1);
  CHECK(s.project(Vector{{20.0, 0.0}}) == Vector{{10.0, 0.0}});
  CHECK(s.project(Vector{{3.0, 4.0}}) == Vector{{3.0, 4.0}});
  CHECK(s.project(Vector{{6.0, 8.0}}) == Vector{{6.0, 8.0}});
  CHECK(s.constraint(Vector{{6.0, 8.0}}, 0) == 0.0);
  const Vector z{{-30.0, 40.0}};
  CHECK((s.project(z) - 10.0 * z / z.norm()).norm() <= 1e-15);
}

TEST_CASE("box closed form and layout") {
  const auto b = make_box(3);
  CHECK(b.num_constraints() == 6);
  CHECK(b.project(Vector{{2.0, 0.5, -7.0}}) == Vector{{1.0, 0.5, -1.0}});
  CHECK(b.project(Vector{{0.1, -0.2, 0.3}}) == Vector{{0.1, -0.2, 0.3}});
  const auto q = active_set(b, Vector{{1.0, 0.0, 0.0}}, 0.0);
  REQUIRE(q.indices.size() == 1);
  CHECK(q.indices[0] == BoxSet::upper_index(0));
  CHECK(b.constraint(Vector{{0.0, -1.5, 0.0}}, BoxSet::lower_index(1)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(BoxSet(2, 1.0, 1.0), DomainError);
}

TEST_CASE("ellipsoid examples") {
  const Vector c = Vector::Ones(2);
  const auto round = make_ellipsoid(c, Vector::Ones(2));
  CHECK(round.project(c) == c);
  CHECK((round.project(Vector{{11.0, 1.0}}) - Vector{{6.0, 1.0}}).norm() <= 1e-9);

  const auto stretched = make_ellipsoid(c, Vector{{4.0, 1.0}});
  const Vector z{{100.0, 1.0}};
  const Vector p = stretched.project(z);
  CHECK((p - Vector{{11.0, 1.0}}).norm() <= 1e-9);

  // Brute force over the boundary c + (10 cos th, 5 sin th).
  double best = std::numeric_limits<double>::infinity();
  Vector best_y;
  const int samples = 200000;
  for (int k = 0; k < samples; ++k) {
    const double th = 2.0 * M_PI * k / samples;
    const Vector y = c + Vector{{10.0 * std::cos(th), 5.0 * std::sin(th)}};
    const double dist = (z - y).norm();
    if (dist < best) best = dist, best_y = y;
  }
  CHECK((p - best_y).norm() <= 1e-3);
  CHECK((z - p).norm() <= best + 1e-12);
}

TEST_CASE("ellipsoid brute force on random inputs") {
  std::mt19937_64 rng(5);
  const Vector c{{1.0, -2.0}};
  const Vector pd{{0.7, 1.9}};
  const auto e = make_ellipsoid(c, pd);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector z = testutil::uniform_vector(rng, 2, -30, 30);
    const Vector p = e.project(z);
    double best = std::numeric_limits<double>::infinity();
    const int samples = 100000;
    for (int k = 0; k < samples; ++k) {
      const double th = 2.0 * M_PI * k / samples;
      const Vector y = c + 5.0 * Vector{{std::sqrt(pd[0]) * std::cos(th), std::sqrt(pd[1]) * std::sin(th)}};
      best = std::min(best, (z - y).norm());
    }
    if (e.contains(z, 0.0)) {
      CHECK(p == z);
    } else {
      CHECK((z - p).norm() <= best + 1e-12);
      CHECK((z - p).norm() >= best - 1e-3);
    }
  }
}

TEST_CASE("seeded ellipsoid is reproducible") {
  const auto a = make_ellipsoid(10, 42);
  const auto b = make_ellipsoid(10, 42);
  const auto c = make_ellipsoid(10, 43);
  CHECK(a.p_diag() == b.p_diag());
  CHECK(a.p_diag() != c.p_diag());
  CHECK(a.p_diag().minCoeff() >= 0.5);
  CHECK(a.p_diag().maxCoeff() <= 2.0);
  CHECK(a.center() == Vector::Ones(10));
  CHECK_THROWS_AS(EllipsoidSet(Vector::Ones(2), Vector{{1.0, 0.0}}), DomainError);
}

TEST_CASE("composite examples") {
  const auto com = make_composite(2);
  CHECK(com.num_constraints() == 6);
  CHECK(com.project(Vector{{4.0, 4.0}}) == Vector{{4.0, 4.0}});
  const Vector inside{{1.0, 2.0}};
  CHECK((com.project(inside) - inside).norm() <= 1e-10);

  const Vector z{{30.0, 4.0}};
  const Vector p = com.project(z);
  CHECK(com.max_violation(p) <= 1e-8);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    const Vector y = feasible_towards(com, testutil::uniform_vector(rng, 2, -20, 30));
    REQUIRE(com.contains(y, 0.0));
    CHECK((z - p).dot(y - p) <= 1e-6 * (1.0 + z.norm()));
  }
}

TEST_CASE("composite agrees with Dykstra") {
  std::mt19937_64 rng(17);
  for (int n : {2, 5, 20}) {
    const auto com = make_composite(n);
    const std::array<const ConvexFeasibleSet*, 3> parts{&com.ball(), &com.halfspace(), &com.box()};
    for (int trial = 0; trial < 25; ++trial) {
      const Vector z = testutil::uniform_vector(rng, n, -15, 25);
      const Vector exact = com.project(z);
      const Vector reference = dykstra_project(parts, z, 1e-12, 200000);
      INFO("n=", n, " trial=", trial);
      CHECK((exact - reference).norm() <= 1e-6 * (1.0 + z.norm()));
    }
  }
}

TEST_CASE("composite handles far-away inputs") {
  const auto com = make_composite(100);
  Vector z = Vector::LinSpaced(100, -2e4, 3e4);
  const Vector p = com.project(z);
  CHECK(com.max_violation(p) <= 1e-8);
  CHECK((com.project(p) - p).norm() <= 1e-8);
}

TEST_CASE("active set queries") {
  const auto s = make_sphere(2);
  CHECK(active_set(s, Vector{{10.0, 0.0}}, 0.0).indices == std::vector<int>{0});
  CHECK(active_set(s, Vector{{0.0, 0.0}}, 0.1).indices.empty());

  const auto b = make_box(2);
  const auto q = active_set(b, Vector{{0.999, 0.0}}, 0.01);
  CHECK(q.indices == std::vector<int>{BoxSet::upper_index(0)});
  CHECK(q.tolerance == 0.01);
  CHECK_THROWS_AS((void)active_set(b, Vector::Zero(2), -1.0), DomainError);

  std::mt19937_64 rng(2);
  const auto com = make_composite(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector x = testutil::uniform_vector(rng, 4, -6, 11);
    const double eps = testutil::uniform(rng, 0.0, 5.0);
    const auto r = active_set(com, x, eps);
    std::vector<int> expected;
    for (int i = 0; i < com.num_constraints(); ++i) {
      if (com.constraint(x, i) >= -eps) expected.push_back(i);
    }
    CHECK(r.indices == expected);
  }
}

TEST_CASE("registry") {
  CHECK(set_names() == std::vector<std::string>{"sph", "ell", "com", "box"});
  for (const auto& name : set_names()) CHECK(make_set(name, 3, 1)->name() == name);
  CHECK_THROWS_AS((void)make_set("cube", 3, 1), DomainError);
  CHECK_THROWS_AS((void)make_sphere(2).constraint(Vector::Zero(2), 1), DomainError);
}

TEST_CASE("projection properties") {
  std::mt19937_64 rng(123);
  for (int n : {2, 7, 30}) {
    for (const auto& set : all_sets(n)) {
      INFO(set->name(), " n=", n);
      for (int trial = 0; trial < 100; ++trial) {
        const double scale = trial % 2 == 0 ? 15.0 : 200.0;
        const Vector z = testutil::uniform_vector(rng, n, -scale, scale);
        const Vector p = set->project(z);
        CHECK(set->max_violation(p) <= 1e-8);
        CHECK((set->project(p) - p).norm() <= 1e-8);

        const Vector z2 = z + testutil::uniform_vector(rng, n, -5, 5);
        CHECK((set->project(z2) - p).norm() <= (z2 - z).norm() + 1e-8);

        for (int k = 0; k < 20; ++k) {
          const Vector y = feasible_towards(*set, testutil::uniform_vector(rng, n, -scale, scale));
          REQUIRE(set->contains(y, 0.0));
          CHECK((z - p).dot(y - p) <= 1e-6 * (1.0 + z.norm()));
        }
      }
    }
  }
}

TEST_CASE("constraints are convex") {
  std::mt19937_64 rng(321);
  for (const auto& set : all_sets(5)) {
    for (int trial = 0; trial < 200; ++trial) {
      const Vector x = feasible_towards(*set, testutil::uniform_vector(rng, 5, -20, 20));
      const Vector y = feasible_towards(*set, testutil::uniform_vector(rng, 5, -20, 20));
      const double t = testutil::uniform(rng, 0.0, 1.0);
      for (int i = 0; i < set->num_constraints(); ++i) {
        CHECK(set->constraint(t * x + (1 - t) * y, i) <=
              t * set->constraint(x, i) + (1 - t) * set->constraint(y, i) + 1e-10);
      }
    }
  }
}

TEST_CASE("constraint gradients match finite differences") {
  std::mt19937_64 rng(8);
  for (const auto& set : all_sets(4)) {
    const Vector x = testutil::uniform_vector(rng, 4, -3, 3);
    for (int i = 0; i < set->num_constraints(); ++i) {
      const Vector g = set->constraint_gradient(x, i);
      for (int j = 0; j < 4; ++j) {
        Vector up = x, down = x;
        up[j] += 1e-6;
        down[j] -= 1e-6;
        const double fd = (set->constraint(up, i) - set->constraint(down, i)) / 2e-6;
        CHECK(std::abs(fd - g[j]) <= 1e-6 * std::max(1.0, std::abs(g[j])));
      }
    }
  }
}
