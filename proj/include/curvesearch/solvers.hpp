#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curvesearch/curves.hpp"
#include "curvesearch/feasible_sets.hpp"
#include "curvesearch/problems.hpp"
#include "curvesearch/types.hpp"

namespace curvesearch {

enum class TraceLevel {
  none,     // no per-iteration data
  scalars,  // objective, steps, flags
  full,     // scalars plus x, x_prev, d, s candidates and x_next
};

/// Parameters shared by the curve search (SCS) and SPG solvers. Defaults
/// are the benchmark settings.
struct SolverConfig {
  double delta = 0.5;       // backtracking factor for t and for beta
  double sigma = 1e-7;      // sufficient decrease
  double alpha = 0.999;     // weight of d in s
  double beta0 = 0.9;       // initial momentum weight; also the cap of the dynamic rule
  double t_tilde = 0.5;     // probe point x + t_tilde d for the active set
  double eps0 = 0.1;        // active-set relaxation, eps_{k+1} = eps_decay * eps_k
  double eps_decay = 0.95;
  int memory = 0;           // M: non-monotone memory, 0 = monotone
  std::optional<double> eta0;  // unset: 1 / ||P(x0 - g0) - x0||_inf, clamped
  double eta_min = 1e-3;
  double eta_max = 1e3;
  double stat_tol = 1e-3;
  int max_iters = 5000;
  std::chrono::duration<double> time_limit{120.0};
  int max_backtracks = 60;
  bool adaptive_momentum = true;
  bool dynamic_beta = true;
  TraceLevel trace = TraceLevel::none;

  /// Throws DomainError when a parameter is outside its admissible range.
  void validate() const;
};

enum class RunStatus { stationary, iter_limit, time_limit, search_failure, projection_failure };

std::string_view to_string(RunStatus status);
/// Inverse of to_string; throws DomainError on unknown text.
RunStatus parse_status(std::string_view text);

struct IterationTrace {
  int k = 0;
  double f = 0.0;          // f(x_k)
  double f_ref = 0.0;      // reference value of the sufficient-decrease test
  double f_next = 0.0;     // f(x_{k+1})
  double t = 0.0;          // accepted step
  double grad_dot_d = 0.0;
  double eta = 0.0;        // eta_k used to build d_k
  double eps = 0.0;        // eps_k
  double beta = 0.0;       // momentum weight used in s_k (beta_k after reduction)
  bool projected = false;  // projection was needed to form d_k
  bool fell_back = false;  // s_k replaced by d_k
  bool adaptive = false;   // beta reduction executed
  int beta_reductions = 0;
  int backtracks = 0;
  double max_violation_next = 0.0;  // max_i g_i(x_{k+1})

  // Populated only at TraceLevel::full.
  Vector x;
  Vector x_prev;
  Vector d;
  Vector s_candidate;  // alpha d + beta eta (x - x_prev) before any fallback/reduction
  Vector s;            // secondary direction actually used
  Vector x_next;
};

/// Outcome of one (solver, problem, set) run.
struct RunRecord {
  std::string solver;
  int memory = 0;
  std::string problem;
  std::string set;
  int n = 0;
  RunStatus status = RunStatus::iter_limit;
  double f_star = 0.0;
  double stationarity = 0.0;
  int iterations = 0;
  int fallbacks = 0;
  int adaptive_reductions = 0;
  double elapsed_s = 0.0;
  double max_g_final = 0.0;
  Vector x_final;
  std::string message;  // diagnostics for failure statuses
  std::vector<IterationTrace> trace;

  [[nodiscard]] bool success() const { return status == RunStatus::stationary; }
};

struct ProjectedStep {
  Vector d;
  bool projected = false;  // ||(x - eta g) - P(x - eta g)|| > 1e-12
};

/// d = P(x - eta * grad) - x for a precomputed gradient.
ProjectedStep projected_gradient_step(const ConvexFeasibleSet& set, const Vector& x,
                                      const Vector& grad, double eta);

/// The SPG direction P(x - eta grad f(x)) - x. Requires x feasible.
Vector spg_direction(const SmoothProblem& p, const ConvexFeasibleSet& set, const Vector& x,
                     double eta);

/// Safeguarded r'r / r'y; eta_max when r'y <= 0.
double spectral_eta(const Vector& r, const Vector& y, double eta_min, double eta_max);

/// alpha d + beta eta (x - x_prev).
Vector build_secondary_direction(const Vector& d, const Vector& x, const Vector& x_prev,
                                 double alpha, double beta, double eta);

struct MomentumReduction {
  Vector s;
  double beta_k = 0.0;
  int reductions = 0;  // h with beta_k = delta^h beta
};

/// Largest delta^h beta keeping x + alpha d + delta^h beta eta (x - x_prev)
/// inside the set. Throws SearchFailure past max_backtracks reductions.
MomentumReduction adaptive_momentum(const Vector& d, const Vector& x, const Vector& x_prev,
                                    const ConvexFeasibleSet& set, double alpha, double beta,
                                    double eta, double delta, int max_backtracks);

struct CurveStep {
  double t = 0.0;
  Vector x_next;
  double f_next = 0.0;
  int backtracks = 0;
};

/// Backtracks t = 1, delta, delta^2, ... until gamma(t) is feasible and
///   f(gamma(t)) <= f_ref + sigma t grad_dot_d.
/// Throws SearchFailure if grad_dot_d >= 0 or the budget runs out.
CurveStep curve_search(const SmoothProblem& p, const ConvexFeasibleSet& set,
                       const QuadraticCurve& curve, double f_ref, double grad_dot_d,
                       const SolverConfig& cfg);

/// ||P(x - grad f(x)) - x||_inf.
double stationarity_measure(const SmoothProblem& p, const ConvexFeasibleSet& set, const Vector& x);
double stationarity_measure(const ConvexFeasibleSet& set, const Vector& x, const Vector& grad);

/// Curve search with heavy-ball secondary direction, spectral steplength,
/// non-monotone acceptance and adaptive momentum.
RunRecord scs_solve(const SmoothProblem& p, const ConvexFeasibleSet& set, const SolverConfig& cfg);

/// Non-monotone spectral projected gradient baseline.
RunRecord spg_solve(const SmoothProblem& p, const ConvexFeasibleSet& set, const SolverConfig& cfg);

}  // namespace curvesearch
