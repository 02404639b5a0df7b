#include "curvesearch/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

#include "curvesearch/errors.hpp"

namespace curvesearch {

void SolverConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("SolverConfig: ") + what);
  };
  require(delta > 0.0 && delta < 1.0, "delta must be in (0, 1)");
  require(sigma > 0.0 && sigma < 1.0, "sigma must be in (0, 1)");
  require(alpha > 0.0 && alpha < 1.0, "alpha must be in (0, 1)");
  require(beta0 > 0.0, "beta0 must be positive");
  require(t_tilde > 0.0 && t_tilde < 1.0, "t_tilde must be in (0, 1)");
  require(eps0 > 0.0, "eps0 must be positive");
  require(eps_decay > 0.0 && eps_decay < 1.0, "eps_decay must be in (0, 1)");
  require(memory >= 0, "memory must be nonnegative");
  require(eta_min > 0.0 && eta_min < eta_max, "need 0 < eta_min < eta_max");
  require(!eta0 || *eta0 > 0.0, "eta0 must be positive");
  require(stat_tol > 0.0, "stat_tol must be positive");
  require(max_iters >= 0, "max_iters must be nonnegative");
  require(time_limit.count() > 0.0, "time_limit must be positive");
  require(max_backtracks >= 0, "max_backtracks must be nonnegative");
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::stationary: return "stationary";
    case RunStatus::iter_limit: return "iter_limit";
    case RunStatus::time_limit: return "time_limit";
    case RunStatus::search_failure: return "search_failure";
    case RunStatus::projection_failure: return "projection_failure";
  }
  return "unknown";
}

RunStatus parse_status(std::string_view text) {
  for (auto s : {RunStatus::stationary, RunStatus::iter_limit, RunStatus::time_limit,
                 RunStatus::search_failure, RunStatus::projection_failure}) {
    if (to_string(s) == text) return s;
  }
  throw DomainError("unknown run status '" + std::string(text) + "'");
}

ProjectedStep projected_gradient_step(const ConvexFeasibleSet& set, const Vector& x,
                                      const Vector& grad, double eta) {
  const Vector trial = x - eta * grad;
  const Vector projected = set.project(trial);
  ProjectedStep step;
  step.projected = (trial - projected).norm() > 1e-12;
  step.d = projected - x;
  return step;
}

Vector spg_direction(const SmoothProblem& p, const ConvexFeasibleSet& set, const Vector& x,
                     double eta) {
  if (!(eta > 0.0)) throw DomainError("spg_direction: eta must be positive");
  if (!set.contains(x)) throw ContractError("spg_direction: x is infeasible");
  return projected_gradient_step(set, x, p.gradient(x), eta).d;
}

double spectral_eta(const Vector& r, const Vector& y, double eta_min, double eta_max) {
  const double ry = r.dot(y);
  if (!(ry > 0.0)) return eta_max;
  return std::clamp(r.squaredNorm() / ry, eta_min, eta_max);
}

Vector build_secondary_direction(const Vector& d, const Vector& x, const Vector& x_prev,
                                 double alpha, double beta, double eta) {
  return alpha * d + (beta * eta) * (x - x_prev);
}

MomentumReduction adaptive_momentum(const Vector& d, const Vector& x, const Vector& x_prev,
                                    const ConvexFeasibleSet& set, double alpha, double beta,
                                    double eta, double delta, int max_backtracks) {
  double weight = beta;
  for (int h = 0; h <= max_backtracks; ++h) {
    Vector s = build_secondary_direction(d, x, x_prev, alpha, weight, eta);
    if (set.contains(x + s)) return {std::move(s), weight, h};
    weight *= delta;
  }
  throw SearchFailure("adaptive_momentum: no feasible momentum weight within budget", weight,
                      SearchFailure::Cause::infeasible);
}

CurveStep curve_search(const SmoothProblem& p, const ConvexFeasibleSet& set,
                       const QuadraticCurve& curve, double f_ref, double grad_dot_d,
                       const SolverConfig& cfg) {
  if (!(grad_dot_d < 0.0)) {
    throw SearchFailure("curve_search: not a descent direction", 0.0,
                        SearchFailure::Cause::not_descent);
  }
  double t = 1.0;
  auto cause = SearchFailure::Cause::infeasible;
  for (int h = 0; h <= cfg.max_backtracks; ++h) {
    Vector y = curve.eval(t);
    if (set.max_violation(y) <= kFeasTol) {
      const double fy = p.value(y);
      if (fy <= f_ref + cfg.sigma * t * grad_dot_d) return {t, std::move(y), fy, h};
      cause = SearchFailure::Cause::insufficient_decrease;
    } else {
      cause = SearchFailure::Cause::infeasible;
    }
    t *= cfg.delta;
  }
  const char* why = cause == SearchFailure::Cause::infeasible ? "infeasible" : "insufficient decrease";
  throw SearchFailure(std::string("curve_search: backtracking budget exhausted (last trial ") + why + ")",
                      t / cfg.delta, cause);
}

double stationarity_measure(const ConvexFeasibleSet& set, const Vector& x, const Vector& grad) {
  return (set.project(x - grad) - x).lpNorm<Eigen::Infinity>();
}

double stationarity_measure(const SmoothProblem& p, const ConvexFeasibleSet& set, const Vector& x) {
  if (!set.contains(x)) throw ContractError("stationarity_measure: x is infeasible");
  return stationarity_measure(set, x, p.gradient(x));
}

namespace {

using Clock = std::chrono::steady_clock;

RunRecord start_record(const char* solver, const SmoothProblem& p, const ConvexFeasibleSet& set,
                       const SolverConfig& cfg) {
  RunRecord rec;
  rec.solver = solver;
  rec.memory = cfg.memory;
  rec.problem = p.name();
  rec.set = set.name();
  rec.n = p.dim();
  return rec;
}

double initial_eta(const ConvexFeasibleSet& set, const Vector& x, const Vector& g,
                   const SolverConfig& cfg) {
  if (cfg.eta0) return *cfg.eta0;
  const double norm = (set.project(x - g) - x).lpNorm<Eigen::Infinity>();
  if (!(norm > 0.0)) return cfg.eta_max;
  return std::clamp(1.0 / norm, cfg.eta_min, cfg.eta_max);
}

// Objective values f(x_{k-j}), j = 0..m(k), for the non-monotone reference.
class ObjectiveMemory {
 public:
  ObjectiveMemory(int memory, double f0) : capacity_(static_cast<std::size_t>(memory) + 1) {
    values_.push_back(f0);
  }
  void push(double f) {
    values_.push_back(f);
    while (values_.size() > capacity_) values_.pop_front();
  }
  [[nodiscard]] double reference() const { return *std::max_element(values_.begin(), values_.end()); }

 private:
  std::size_t capacity_;
  std::deque<double> values_;
};

// Shared driver state and bookkeeping for both solvers.
struct Run {
  const SmoothProblem& problem;
  const ConvexFeasibleSet& set;
  const SolverConfig& cfg;
  RunRecord record;
  Clock::time_point started = Clock::now();

  Vector x;
  Vector g;
  double fx = 0.0;

  Run(const char* solver, const SmoothProblem& p, const ConvexFeasibleSet& s, const SolverConfig& c)
      : problem(p), set(s), cfg(c), record(start_record(solver, p, s, c)) {}

  void init() {
    x = set.project(problem.start());
    if (!set.contains(x)) throw ContractError("projected start point is infeasible");
    fx = problem.value(x);
    g = problem.gradient(x);
  }

  // True when the loop must stop before iteration k.
  bool should_stop(int k) {
    record.iterations = k;
    record.stationarity = stationarity_measure(set, x, g);
    if (record.stationarity <= cfg.stat_tol) {
      record.status = RunStatus::stationary;
      return true;
    }
    if (k >= cfg.max_iters) {
      record.status = RunStatus::iter_limit;
      return true;
    }
    if (Clock::now() - started >= cfg.time_limit) {
      record.status = RunStatus::time_limit;
      return true;
    }
    return false;
  }

  RunRecord finish() {
    record.f_star = fx;
    if (x.size() == set.dim()) {
      record.max_g_final = set.max_violation(x);
      record.x_final = x;
    }
    record.elapsed_s = std::chrono::duration<double>(Clock::now() - started).count();
    return std::move(record);
  }

  template <typename Body>
  RunRecord execute(Body&& body) {
    try {
      init();
      body();
    } catch (const ProjectionFailure& e) {
      record.status = RunStatus::projection_failure;
      record.message = e.what();
    } catch (const Error& e) {
      record.status = RunStatus::search_failure;
      record.message = e.what();
    }
    return finish();
  }
};

}  // namespace

RunRecord scs_solve(const SmoothProblem& p, const ConvexFeasibleSet& set, const SolverConfig& cfg) {
  cfg.validate();
  Run run("scs", p, set, cfg);
  return run.execute([&] {
    const bool tracing = cfg.trace != TraceLevel::none;
    const bool full = cfg.trace == TraceLevel::full;
    Vector& x = run.x;
    Vector& g = run.g;
    Vector x_prev = x;
    double eta = initial_eta(set, x, g, cfg);
    double beta = cfg.beta0;
    double eps = cfg.eps0;
    ObjectiveMemory memory(cfg.memory, run.fx);

    for (int k = 0; !run.should_stop(k); ++k) {
      const ProjectedStep step = projected_gradient_step(set, x, g, eta);
      const Vector& d = step.d;
      const double grad_dot_d = g.dot(d);
      Vector s = build_secondary_direction(d, x, x_prev, cfg.alpha, beta, eta);

      IterationTrace tr;
      if (full) tr.s_candidate = s;

      bool fell_back = (k == 0);
      if (!fell_back) {
        const QuadraticCurve candidate(x, d, s);
        fell_back = feasibility_certificate(candidate, set, cfg.t_tilde, eps) == CurveDecision::fall_back;
      }

      double beta_used = beta;
      bool adaptive = false;
      int reductions = 0;
      if (fell_back) {
        s = d;
        ++run.record.fallbacks;
      } else if (cfg.adaptive_momentum && step.projected) {
        MomentumReduction red = adaptive_momentum(d, x, x_prev, set, cfg.alpha, beta, eta,
                                                  cfg.delta, cfg.max_backtracks);
        s = std::move(red.s);
        beta_used = red.beta_k;
        reductions = red.reductions;
        adaptive = true;
        if (reductions > 0) ++run.record.adaptive_reductions;
      }
      if (cfg.dynamic_beta) beta = adaptive ? beta_used : std::min(cfg.beta0, beta / cfg.delta);

      const double f_ref = memory.reference();
      const QuadraticCurve curve(x, d, s);
      CurveStep cs = curve_search(p, set, curve, f_ref, grad_dot_d, cfg);
      Vector g_next = p.gradient(cs.x_next);
      const double eta_next = spectral_eta(cs.x_next - x, g_next - g, cfg.eta_min, cfg.eta_max);

      if (tracing) {
        tr.k = k;
        tr.f = run.fx;
        tr.f_ref = f_ref;
        tr.f_next = cs.f_next;
        tr.t = cs.t;
        tr.grad_dot_d = grad_dot_d;
        tr.eta = eta;
        tr.eps = eps;
        tr.beta = fell_back ? 0.0 : beta_used;
        tr.projected = step.projected;
        tr.fell_back = fell_back;
        tr.adaptive = adaptive;
        tr.beta_reductions = reductions;
        tr.backtracks = cs.backtracks;
        tr.max_violation_next = set.max_violation(cs.x_next);
        if (full) {
          tr.x = x;
          tr.x_prev = x_prev;
          tr.d = d;
          tr.s = s;
          tr.x_next = cs.x_next;
        }
        run.record.trace.push_back(std::move(tr));
      }

      memory.push(cs.f_next);
      eps *= cfg.eps_decay;
      eta = eta_next;
      x_prev = std::move(x);
      x = std::move(cs.x_next);
      g = std::move(g_next);
      run.fx = cs.f_next;
    }
  });
}

RunRecord spg_solve(const SmoothProblem& p, const ConvexFeasibleSet& set, const SolverConfig& cfg) {
  cfg.validate();
  Run run("spg", p, set, cfg);
  return run.execute([&] {
    const bool tracing = cfg.trace != TraceLevel::none;
    const bool full = cfg.trace == TraceLevel::full;
    Vector& x = run.x;
    Vector& g = run.g;
    double eta = initial_eta(set, x, g, cfg);
    ObjectiveMemory memory(cfg.memory, run.fx);

    for (int k = 0; !run.should_stop(k); ++k) {
      const ProjectedStep step = projected_gradient_step(set, x, g, eta);
      const Vector& d = step.d;
      const double grad_dot_d = g.dot(d);
      if (!(grad_dot_d < 0.0)) {
        throw SearchFailure("spg: not a descent direction", 0.0, SearchFailure::Cause::not_descent);
      }
      const double f_ref = memory.reference();

      // Non-monotone Armijo with safeguarded quadratic interpolation.
      double lambda = 1.0;
      int backtracks = 0;
      Vector x_next = x + d;
      double f_next = p.value(x_next);
      while (!(f_next <= f_ref + cfg.sigma * lambda * grad_dot_d)) {
        if (++backtracks > cfg.max_backtracks) {
          throw SearchFailure("spg: backtracking budget exhausted", lambda,
                              SearchFailure::Cause::insufficient_decrease);
        }
        const double curvature = f_next - run.fx - lambda * grad_dot_d;
        double trial = -0.5 * lambda * lambda * grad_dot_d / curvature;
        if (!std::isfinite(trial)) trial = 0.5 * lambda;
        lambda = std::clamp(trial, 0.1 * lambda, 0.9 * lambda);
        x_next = x + lambda * d;
        f_next = p.value(x_next);
      }

      Vector g_next = p.gradient(x_next);
      const double eta_next = spectral_eta(x_next - x, g_next - g, cfg.eta_min, cfg.eta_max);

      if (tracing) {
        IterationTrace tr;
        tr.k = k;
        tr.f = run.fx;
        tr.f_ref = f_ref;
        tr.f_next = f_next;
        tr.t = lambda;
        tr.grad_dot_d = grad_dot_d;
        tr.eta = eta;
        tr.projected = step.projected;
        tr.fell_back = true;  // always a straight line
        tr.backtracks = backtracks;
        tr.max_violation_next = set.max_violation(x_next);
        if (full) {
          tr.x = x;
          tr.d = d;
          tr.s = d;
          tr.x_next = x_next;
        }
        run.record.trace.push_back(std::move(tr));
      }

      memory.push(f_next);
      eta = eta_next;
      x = std::move(x_next);
      g = std::move(g_next);
      run.fx = f_next;
    }
  });
}

}  // namespace curvesearch
