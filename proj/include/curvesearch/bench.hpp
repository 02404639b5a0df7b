#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curvesearch/solvers.hpp"

namespace curvesearch {

struct SolverSpec {
  std::string solver;  // "scs" or "spg"
  int memory = 0;      // M

  [[nodiscard]] std::string label() const { return solver + "_M" + std::to_string(memory); }
  friend bool operator==(const SolverSpec&, const SolverSpec&) = default;
};

/// A benchmark sweep: every solver on every (problem, set) instance.
///
/// Plan files are plain `key = value` lines; `#` starts a comment.
///
///   problems = rosenbrock_2, chainwoo_4     # or "all"
///   sets     = sph, ell, com, box           # or "all"
///   solvers  = scs:0, scs:10, spg:0, spg:10
///   seed     = 1
///   ell_seed = 7                            # optional, defaults to seed
///   max_iters = 5000                        # any SolverConfig field
///
/// Recognized overrides: delta sigma alpha beta0 t_tilde eps0 eps_decay
/// eta0 eta_min eta_max stat_tol max_iters time_limit max_backtracks
/// adaptive_momentum dynamic_beta.
struct BenchPlan {
  std::vector<std::string> problems;
  std::vector<std::string> sets;
  std::vector<SolverSpec> solvers;
  SolverConfig config;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> ell_seed;

  /// Throws PlanError if a name does not resolve or a list is empty.
  void validate() const;
};

BenchPlan parse_plan(std::string_view text);
BenchPlan load_plan(const std::filesystem::path& path);

/// Seed of the ellipsoid P used for `problem`: one P per (problem, dimension).
std::uint64_t ellipsoid_seed(const BenchPlan& plan, std::string_view problem);

using RunInspector = std::function<void(const RunRecord&)>;

/// Runs every (solver, problem, set) combination, `jobs` at a time, and
/// returns the records sorted by (problem, set, solver, M). When `inspect`
/// is given it sees each record (including its trace) on the worker thread
/// that produced it; traces are dropped from the returned records.
std::vector<RunRecord> run_plan(const BenchPlan& plan, int jobs = 1,
                                TraceLevel trace = TraceLevel::none,
                                const RunInspector& inspect = {});

std::string instance_id(const RunRecord& r);

// Records CSV (versioned): first line "# curvesearch-records v1", then the
// column header.
inline constexpr std::string_view kRecordsSchema = "# curvesearch-records v1";
inline constexpr std::string_view kRecordsHeader =
    "solver,M,problem,set,n,status,f_star,stationarity,iterations,fallbacks,"
    "adaptive_reductions,elapsed_s,max_g_final";

void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(std::istream& is);

enum class ProfileMetric { f_star, time, iterations };

ProfileMetric parse_metric(std::string_view text);  // "fstar" | "time" | "iters"
std::string_view to_string(ProfileMetric metric);

/// Dolan–Moré performance profile: rho[s][j] is the fraction of included
/// instances on which solver s is within a factor tau_grid[j] of the best.
struct ProfileTable {
  ProfileMetric metric = ProfileMetric::time;
  std::vector<double> tau_grid;
  std::vector<std::string> solvers;
  std::vector<std::vector<double>> rho;
  std::vector<std::string> included_instances;
};

/// An empty tau_grid selects every distinct finite ratio (plus 1), i.e.
/// all breakpoints of the step functions. Throws ProfileError when no
/// instance has a successful run.
ProfileTable performance_profile(const std::vector<RunRecord>& records, ProfileMetric metric,
                                 std::vector<double> tau_grid = {});

void write_profile_csv(std::ostream& os, const ProfileTable& table);

/// Instances whose best successful run (lowest f*) ended with
/// max_i g_i >= -tol, i.e. on the boundary of the feasible set.
std::vector<std::string> boundary_subset(const std::vector<RunRecord>& records, double tol = 1e-5);

}  // namespace curvesearch
