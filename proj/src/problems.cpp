#include "curvesearch/problems.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "curvesearch/errors.hpp"

namespace curvesearch {

SmoothProblem::SmoothProblem(std::string name, Vector start, ValueFn value,
                             GradientFn gradient, ExtendedValueFn extended)
    : name_(std::move(name)),
      start_(std::move(start)),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      extended_(std::move(extended)) {}

long double SmoothProblem::value_extended(const VectorLD& x) const {
  if (extended_) return extended_(x);
  return value_(x.cast<double>());
}

namespace {

template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// Each objective provides value<T> for T in {double, long double} and an
// analytic gradient in double.
template <typename Objective>
SmoothProblem wrap(std::string name, Vector start, Objective obj) {
  return SmoothProblem(
      std::move(name), std::move(start),
      [obj](const Vector& x) { return obj.template value<double>(x); },
      [obj](const Vector& x) { return obj.gradient(x); },
      [obj](const VectorLD& x) { return obj.template value<long double>(x); });
}

struct Rosenbrock {
  template <typename T>
  T value(const Vec<T>& x) const {
    const T a = x[1] - x[0] * x[0];
    const T b = 1 - x[0];
    return 100 * a * a + b * b;
  }
  Vector gradient(const Vector& x) const {
    Vector g(2);
    const double a = x[1] - x[0] * x[0];
    g[0] = -400.0 * x[0] * a - 2.0 * (1.0 - x[0]);
    g[1] = 200.0 * a;
    return g;
  }
};

// CUTEst CHAINWOO: overlapping Wood blocks on (x_j, .., x_{j+3}), j even.
struct ChainWood {
  template <typename T>
  T value(const Vec<T>& x) const {
    const auto n = x.size();
    T f = 1;
    for (Eigen::Index j = 0; j + 3 < n; j += 2) {
      const T a = x[j], b = x[j + 1], c = x[j + 2], d = x[j + 3];
      const T r1 = b - a * a, r2 = d - c * c, r3 = b + d - 2, r4 = b - d;
      f += 100 * r1 * r1 + (1 - a) * (1 - a) + 90 * r2 * r2 + (1 - c) * (1 - c) +
           10 * r3 * r3 + T(0.1) * r4 * r4;
    }
    return f;
  }
  Vector gradient(const Vector& x) const {
    const auto n = x.size();
    Vector g = Vector::Zero(n);
    for (Eigen::Index j = 0; j + 3 < n; j += 2) {
      const double a = x[j], b = x[j + 1], c = x[j + 2], d = x[j + 3];
      const double r1 = b - a * a, r2 = d - c * c, r3 = b + d - 2, r4 = b - d;
      g[j] += -400.0 * a * r1 - 2.0 * (1.0 - a);
      g[j + 1] += 200.0 * r1 + 20.0 * r3 + 0.2 * r4;
      g[j + 2] += -360.0 * c * r2 - 2.0 * (1.0 - c);
      g[j + 3] += 180.0 * r2 + 20.0 * r3 - 0.2 * r4;
    }
    return g;
  }
};

// sum_i w_i (x_i - c_i)^2
struct WeightedQuadratic {
  Vector weights;
  Vector center;

  template <typename T>
  T value(const Vec<T>& x) const {
    T f = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const T r = x[i] - T(center[i]);
      f += T(weights[i]) * r * r;
    }
    return f;
  }
  Vector gradient(const Vector& x) const {
    return 2.0 * weights.cwiseProduct(x - center);
  }
};

// CUTEst TRIDIA with alpha = 2, beta = gamma = delta = 1.
struct Tridia {
  template <typename T>
  T value(const Vec<T>& x) const {
    T f = (x[0] - 1) * (x[0] - 1);
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      const T r = 2 * x[i] - x[i - 1];
      f += T(i + 1) * r * r;
    }
    return f;
  }
  Vector gradient(const Vector& x) const {
    Vector g = Vector::Zero(x.size());
    g[0] = 2.0 * (x[0] - 1.0);
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      const double r = 2.0 * x[i] - x[i - 1];
      const double w = static_cast<double>(i + 1);
      g[i] += 4.0 * w * r;
      g[i - 1] -= 2.0 * w * r;
    }
    return g;
  }
};

struct ExtendedPowell {
  template <typename T>
  T value(const Vec<T>& x) const {
    T f = 0;
    for (Eigen::Index j = 0; j + 3 < x.size(); j += 4) {
      const T a = x[j] + 10 * x[j + 1];
      const T b = x[j + 2] - x[j + 3];
      const T c = x[j + 1] - 2 * x[j + 2];
      const T d = x[j] - x[j + 3];
      f += a * a + 5 * b * b + c * c * c * c + 10 * d * d * d * d;
    }
    return f;
  }
  Vector gradient(const Vector& x) const {
    Vector g = Vector::Zero(x.size());
    for (Eigen::Index j = 0; j + 3 < x.size(); j += 4) {
      const double a = x[j] + 10.0 * x[j + 1];
      const double b = x[j + 2] - x[j + 3];
      const double c = x[j + 1] - 2.0 * x[j + 2];
      const double d = x[j] - x[j + 3];
      const double c3 = c * c * c, d3 = d * d * d;
      g[j] = 2.0 * a + 40.0 * d3;
      g[j + 1] = 20.0 * a + 4.0 * c3;
      g[j + 2] = 10.0 * b - 8.0 * c3;
      g[j + 3] = -10.0 * b - 40.0 * d3;
    }
    return g;
  }
};

// Moré–Garbow–Hillstrom trigonometric function.
struct Trigonometric {
  template <typename T>
  Vec<T> residuals(const Vec<T>& x) const {
    using std::cos;
    using std::sin;
    const auto n = x.size();
    T cos_sum = 0;
    for (Eigen::Index j = 0; j < n; ++j) cos_sum += cos(x[j]);
    Vec<T> r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      r[i] = T(n) - cos_sum + T(i + 1) * (1 - cos(x[i])) - sin(x[i]);
    }
    return r;
  }
  template <typename T>
  T value(const Vec<T>& x) const {
    return residuals<T>(x).squaredNorm();
  }
  Vector gradient(const Vector& x) const {
    const Vector r = residuals<double>(x);
    const double total = r.sum();
    Vector g(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double own = static_cast<double>(j + 1) * std::sin(x[j]) - std::cos(x[j]);
      g[j] = 2.0 * std::sin(x[j]) * total + 2.0 * r[j] * own;
    }
    return g;
  }
};

struct Arwhead {
  template <typename T>
  T value(const Vec<T>& x) const {
    const auto n = x.size();
    const T last = x[n - 1] * x[n - 1];
    T f = 0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const T q = x[i] * x[i] + last;
      f += -4 * x[i] + 3 + q * q;
    }
    return f;
  }
  Vector gradient(const Vector& x) const {
    const auto n = x.size();
    const double last = x[n - 1] * x[n - 1];
    Vector g = Vector::Zero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const double q = x[i] * x[i] + last;
      g[i] = -4.0 + 4.0 * x[i] * q;
      g[n - 1] += 4.0 * x[n - 1] * q;
    }
    return g;
  }
};

struct Dqrtic {
  template <typename T>
  T value(const Vec<T>& x) const {
    T f = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const T r = x[i] - T(i + 1);
      f += r * r * r * r;
    }
    return f;
  }
  Vector gradient(const Vector& x) const {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double r = x[i] - static_cast<double>(i + 1);
      g[i] = 4.0 * r * r * r;
    }
    return g;
  }
};

struct Engval1 {
  template <typename T>
  T value(const Vec<T>& x) const {
    T f = 0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const T q = x[i] * x[i] + x[i + 1] * x[i + 1];
      f += q * q - 4 * x[i] + 3;
    }
    return f;
  }
  Vector gradient(const Vector& x) const {
    Vector g = Vector::Zero(x.size());
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const double q = x[i] * x[i] + x[i + 1] * x[i + 1];
      g[i] += 4.0 * x[i] * q - 4.0;
      g[i + 1] += 4.0 * x[i + 1] * q;
    }
    return g;
  }
};

// CUTEst COSINE: sum cos(x_i^2 - x_{i+1}/2).
struct Cosine {
  template <typename T>
  T value(const Vec<T>& x) const {
    using std::cos;
    T f = 0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      f += cos(x[i] * x[i] - x[i + 1] / 2);
    }
    return f;
  }
  Vector gradient(const Vector& x) const {
    Vector g = Vector::Zero(x.size());
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const double s = std::sin(x[i] * x[i] - 0.5 * x[i + 1]);
      g[i] -= 2.0 * x[i] * s;
      g[i + 1] += 0.5 * s;
    }
    return g;
  }
};

std::string suffixed(const char* base, int n) {
  return std::string(base) + "_" + std::to_string(n);
}

void require_dim(bool ok, const char* what) {
  if (!ok) throw DomainError(std::string("invalid dimension for ") + what);
}

}  // namespace

SmoothProblem make_rosenbrock() {
  Vector start(2);
  start << -1.2, 1.0;
  return wrap("rosenbrock_2", start, Rosenbrock{});
}

SmoothProblem make_chainwoo(int n) {
  require_dim(n >= 4 && n % 2 == 0, "chainwoo");
  Vector start = Vector::Constant(n, -2.0);
  start.head(4) << -3.0, -1.0, -3.0, -1.0;
  return wrap(suffixed("chainwoo", n), start, ChainWood{});
}

SmoothProblem make_diagonal_quadratic(int n) {
  require_dim(n >= 1, "diag_quad");
  const Vector weights = Vector::LinSpaced(n, 1.0, static_cast<double>(n));
  return wrap(suffixed("diag_quad", n), Vector::Ones(n),
              WeightedQuadratic{weights, Vector::Zero(n)});
}

Vector shifted_quadratic_center(int n) {
  Vector c(n);
  for (int i = 0; i < n; ++i) {
    const int k = i + 1;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    c[i] = (k % 3 == 0) ? 0.5 * sign : 2.0 * sign;
  }
  return c;
}

SmoothProblem make_shifted_quadratic(int n) {
  require_dim(n >= 1, "shifted_quad");
  const Vector weights = Vector::LinSpaced(n, 1.0, static_cast<double>(n));
  return wrap(suffixed("shifted_quad", n), Vector::Zero(n),
              WeightedQuadratic{weights, shifted_quadratic_center(n)});
}

SmoothProblem make_tridia(int n) {
  require_dim(n >= 2, "tridia");
  return wrap(suffixed("tridia", n), Vector::Ones(n), Tridia{});
}

SmoothProblem make_extended_powell(int n) {
  require_dim(n >= 4 && n % 4 == 0, "powell");
  Vector start(n);
  for (int j = 0; j < n; j += 4) start.segment(j, 4) << 3.0, -1.0, 0.0, 1.0;
  return wrap(suffixed("powell", n), start, ExtendedPowell{});
}

SmoothProblem make_trigonometric(int n) {
  require_dim(n >= 1, "trig");
  return wrap(suffixed("trig", n), Vector::Constant(n, 1.0 / n), Trigonometric{});
}

SmoothProblem make_arwhead(int n) {
  require_dim(n >= 2, "arwhead");
  return wrap(suffixed("arwhead", n), Vector::Ones(n), Arwhead{});
}

SmoothProblem make_dqrtic(int n) {
  require_dim(n >= 1, "dqrtic");
  return wrap(suffixed("dqrtic", n), Vector::Constant(n, 2.0), Dqrtic{});
}

SmoothProblem make_engval1(int n) {
  require_dim(n >= 2, "engval1");
  return wrap(suffixed("engval1", n), Vector::Constant(n, 2.0), Engval1{});
}

SmoothProblem make_cosine(int n) {
  require_dim(n >= 2, "cosine");
  return wrap(suffixed("cosine", n), Vector::Ones(n), Cosine{});
}

std::vector<SmoothProblem> list_problems() {
  std::vector<SmoothProblem> out;
  out.push_back(make_rosenbrock());
  out.push_back(make_chainwoo(4));
  out.push_back(make_chainwoo(100));
  out.push_back(make_diagonal_quadratic(50));
  out.push_back(make_diagonal_quadratic(500));
  out.push_back(make_shifted_quadratic(50));
  out.push_back(make_tridia(50));
  out.push_back(make_extended_powell(4));
  out.push_back(make_extended_powell(100));
  out.push_back(make_trigonometric(10));
  out.push_back(make_trigonometric(100));
  out.push_back(make_arwhead(100));
  out.push_back(make_dqrtic(20));
  out.push_back(make_engval1(100));
  out.push_back(make_cosine(100));
  out.push_back(make_cosine(1000));
  return out;
}

std::optional<SmoothProblem> find_problem(std::string_view name) {
  for (auto& p : list_problems()) {
    if (p.name() == name) return std::move(p);
  }
  return std::nullopt;
}

double check_gradient(const SmoothProblem& p, const Vector& x, double h) {
  if (!(h > 0.0)) throw DomainError("check_gradient: step must be positive");
  if (!x.allFinite()) throw DomainError("check_gradient: point is not finite");

  const Vector analytic = p.gradient(x);
  VectorLD probe = x.cast<long double>();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const long double xi = probe[i];
    probe[i] = xi + h;
    const long double up = p.value_extended(probe);
    probe[i] = xi - h;
    const long double down = p.value_extended(probe);
    probe[i] = xi;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw EvaluationError("check_gradient: objective not finite near point");
    }
    const double fd = static_cast<double>((up - down) / (2.0L * h));
    const double err = std::abs(analytic[i] - fd) / std::max(1.0, std::abs(analytic[i]));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace curvesearch
