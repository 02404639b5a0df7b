#include "curvesearch/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "curvesearch/errors.hpp"
#include "curvesearch/feasible_sets.hpp"
#include "curvesearch/problems.hpp"

namespace curvesearch {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  while (true) {
    const auto pos = s.find(sep);
    const auto item = trim(s.substr(0, pos));
    if (!item.empty()) out.emplace_back(item);
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

double to_double(std::string_view s, std::string_view key) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw PlanError("expected a number for '" + std::string(key) + "', got '" + std::string(s) + "'");
  }
  return v;
}

template <typename Int>
Int to_int(std::string_view s, std::string_view key) {
  Int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw PlanError("expected an integer for '" + std::string(key) + "', got '" + std::string(s) + "'");
  }
  return v;
}

bool to_bool(std::string_view s, std::string_view key) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw PlanError("expected a boolean for '" + std::string(key) + "'");
}

std::vector<std::string> all_problem_names() {
  std::vector<std::string> names;
  for (const auto& p : list_problems()) names.push_back(p.name());
  return names;
}

// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void BenchPlan::validate() const {
  if (problems.empty()) throw PlanError("plan lists no problems");
  if (sets.empty()) throw PlanError("plan lists no feasible sets");
  if (solvers.empty()) throw PlanError("plan lists no solvers");
  const auto known = all_problem_names();
  for (const auto& p : problems) {
    if (std::find(known.begin(), known.end(), p) == known.end()) {
      throw PlanError("unknown problem '" + p + "'");
    }
  }
  for (const auto& s : sets) {
    const auto& names = set_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      throw PlanError("unknown feasible set '" + s + "'");
    }
  }
  for (const auto& s : solvers) {
    if (s.solver != "scs" && s.solver != "spg") throw PlanError("unknown solver '" + s.solver + "'");
    if (s.memory < 0) throw PlanError("solver memory must be nonnegative");
  }
  try {
    config.validate();
  } catch (const DomainError& e) {
    throw PlanError(e.what());
  }
}

BenchPlan parse_plan(std::string_view text) {
  BenchPlan plan;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw PlanError("plan line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    SolverConfig& c = plan.config;

    if (key == "problems") {
      plan.problems = value == "all" ? all_problem_names() : split_list(value, ',');
    } else if (key == "sets") {
      plan.sets = value == "all" ? set_names() : split_list(value, ',');
    } else if (key == "solvers") {
      plan.solvers.clear();
      for (const auto& item : split_list(value, ',')) {
        const auto colon = item.find(':');
        SolverSpec spec;
        spec.solver = std::string(trim(std::string_view(item).substr(0, colon)));
        if (colon != std::string::npos) {
          spec.memory = to_int<int>(trim(std::string_view(item).substr(colon + 1)), key);
        }
        plan.solvers.push_back(spec);
      }
    } else if (key == "seed") {
      plan.seed = to_int<std::uint64_t>(value, key);
    } else if (key == "ell_seed") {
      plan.ell_seed = to_int<std::uint64_t>(value, key);
    } else if (key == "delta") {
      c.delta = to_double(value, key);
    } else if (key == "sigma") {
      c.sigma = to_double(value, key);
    } else if (key == "alpha") {
      c.alpha = to_double(value, key);
    } else if (key == "beta0") {
      c.beta0 = to_double(value, key);
    } else if (key == "t_tilde") {
      c.t_tilde = to_double(value, key);
    } else if (key == "eps0") {
      c.eps0 = to_double(value, key);
    } else if (key == "eps_decay") {
      c.eps_decay = to_double(value, key);
    } else if (key == "eta0") {
      c.eta0 = to_double(value, key);
    } else if (key == "eta_min") {
      c.eta_min = to_double(value, key);
    } else if (key == "eta_max") {
      c.eta_max = to_double(value, key);
    } else if (key == "stat_tol") {
      c.stat_tol = to_double(value, key);
    } else if (key == "max_iters") {
      c.max_iters = to_int<int>(value, key);
    } else if (key == "time_limit") {
      c.time_limit = std::chrono::duration<double>(to_double(value, key));
    } else if (key == "max_backtracks") {
      c.max_backtracks = to_int<int>(value, key);
    } else if (key == "adaptive_momentum") {
      c.adaptive_momentum = to_bool(value, key);
    } else if (key == "dynamic_beta") {
      c.dynamic_beta = to_bool(value, key);
    } else {
      throw PlanError("plan line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  plan.validate();
  return plan;
}

BenchPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PlanError("cannot open plan file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str());
}

std::uint64_t ellipsoid_seed(const BenchPlan& plan, std::string_view problem) {
  return splitmix64(plan.ell_seed.value_or(plan.seed) ^ fnv1a(problem));
}

std::string instance_id(const RunRecord& r) { return r.problem + "/" + r.set; }

std::vector<RunRecord> run_plan(const BenchPlan& plan, int jobs, TraceLevel trace,
                                const RunInspector& inspect) {
  plan.validate();

  struct Task {
    std::size_t problem;
    std::string set;
    SolverSpec solver;
  };
  std::vector<SmoothProblem> problems;
  for (const auto& name : plan.problems) problems.push_back(*find_problem(name));
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < problems.size(); ++p) {
    for (const auto& s : plan.sets) {
      for (const auto& solver : plan.solvers) tasks.push_back({p, s, solver});
    }
  }

  std::vector<RunRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      const SmoothProblem& problem = problems[task.problem];
      const auto set = make_set(task.set, problem.dim(), ellipsoid_seed(plan, problem.name()));
      SolverConfig cfg = plan.config;
      cfg.memory = task.solver.memory;
      cfg.trace = trace;
      RunRecord rec = task.solver.solver == "scs" ? scs_solve(problem, *set, cfg)
                                                  : spg_solve(problem, *set, cfg);
      if (inspect) inspect(rec);
      rec.trace.clear();
      rec.trace.shrink_to_fit();
      records[i] = std::move(rec);
    }
  };

  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.problem, a.set, a.solver, a.memory) < std::tie(b.problem, b.set, b.solver, b.memory);
  });
  return records;
}

void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << kRecordsSchema << '\n' << kRecordsHeader << '\n';
  for (const auto& r : records) {
    os << r.solver << ',' << r.memory << ',' << r.problem << ',' << r.set << ',' << r.n << ','
       << to_string(r.status) << ',' << format_double(r.f_star) << ','
       << format_double(r.stationarity) << ',' << r.iterations << ',' << r.fallbacks << ','
       << r.adaptive_reductions << ',' << format_double(r.elapsed_s) << ','
       << format_double(r.max_g_final) << '\n';
  }
}

std::vector<RunRecord> read_records_csv(std::istream& is) {
  std::vector<RunRecord> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (!header_seen) {
      if (view != kRecordsHeader) throw Error("records CSV: unexpected header");
      header_seen = true;
      continue;
    }
    const auto cols = split_list(view, ',');
    if (cols.size() != 13) throw Error("records CSV: expected 13 columns, got " + std::to_string(cols.size()));
    RunRecord r;
    r.solver = cols[0];
    r.memory = to_int<int>(cols[1], "M");
    r.problem = cols[2];
    r.set = cols[3];
    r.n = to_int<int>(cols[4], "n");
    r.status = parse_status(cols[5]);
    r.f_star = to_double(cols[6], "f_star");
    r.stationarity = to_double(cols[7], "stationarity");
    r.iterations = to_int<int>(cols[8], "iterations");
    r.fallbacks = to_int<int>(cols[9], "fallbacks");
    r.adaptive_reductions = to_int<int>(cols[10], "adaptive_reductions");
    r.elapsed_s = to_double(cols[11], "elapsed_s");
    r.max_g_final = to_double(cols[12], "max_g_final");
    out.push_back(std::move(r));
  }
  if (!header_seen) throw Error("records CSV: missing header");
  return out;
}

ProfileMetric parse_metric(std::string_view text) {
  if (text == "fstar") return ProfileMetric::f_star;
  if (text == "time") return ProfileMetric::time;
  if (text == "iters") return ProfileMetric::iterations;
  throw DomainError("unknown metric '" + std::string(text) + "' (expected fstar|time|iters)");
}

std::string_view to_string(ProfileMetric metric) {
  switch (metric) {
    case ProfileMetric::f_star: return "fstar";
    case ProfileMetric::time: return "time";
    case ProfileMetric::iterations: return "iters";
  }
  return "unknown";
}

ProfileTable performance_profile(const std::vector<RunRecord>& records, ProfileMetric metric,
                                 std::vector<double> tau_grid) {
  std::set<std::string> solver_set;
  std::map<std::string, std::map<std::string, const RunRecord*>> by_instance;
  for (const auto& r : records) {
    const std::string label = SolverSpec{r.solver, r.memory}.label();
    solver_set.insert(label);
    by_instance[instance_id(r)][label] = &r;
  }

  ProfileTable table;
  table.metric = metric;
  table.solvers.assign(solver_set.begin(), solver_set.end());
  constexpr double inf = std::numeric_limits<double>::infinity();

  // ratios[s][instance]
  std::vector<std::vector<double>> ratios(table.solvers.size());
  for (const auto& [id, runs] : by_instance) {
    std::vector<double> values(table.solvers.size(), inf);
    double best_f = inf;
    for (const auto& [label, r] : runs) {
      if (r->success()) best_f = std::min(best_f, r->f_star);
    }
    if (best_f == inf) continue;  // every solver failed on this instance
    const double shift = best_f <= 0.0 ? 1.0 - best_f + 1e-12 : 0.0;

    for (std::size_t s = 0; s < table.solvers.size(); ++s) {
      const auto it = runs.find(table.solvers[s]);
      if (it == runs.end() || !it->second->success()) continue;
      const RunRecord& r = *it->second;
      switch (metric) {
        case ProfileMetric::f_star: values[s] = r.f_star + shift; break;
        case ProfileMetric::time: values[s] = std::max(r.elapsed_s, 1e-6); break;
        case ProfileMetric::iterations: values[s] = std::max(r.iterations, 1); break;
      }
    }
    const double best = *std::min_element(values.begin(), values.end());
    for (std::size_t s = 0; s < values.size(); ++s) {
      ratios[s].push_back(values[s] == inf ? inf : values[s] / best);
    }
    table.included_instances.push_back(id);
  }
  if (table.included_instances.empty()) {
    throw ProfileError("performance profile: no instance has a successful run");
  }

  if (tau_grid.empty()) {
    tau_grid.push_back(1.0);
    for (const auto& per_solver : ratios) {
      for (double r : per_solver) {
        if (r != inf) tau_grid.push_back(r);
      }
    }
  }
  std::sort(tau_grid.begin(), tau_grid.end());
  tau_grid.erase(std::unique(tau_grid.begin(), tau_grid.end()), tau_grid.end());
  if (tau_grid.front() < 1.0) throw DomainError("performance profile: tau values must be >= 1");
  table.tau_grid = tau_grid;

  const double count = static_cast<double>(table.included_instances.size());
  for (const auto& per_solver : ratios) {
    std::vector<double> rho;
    rho.reserve(tau_grid.size());
    for (double tau : tau_grid) {
      const auto within = std::count_if(per_solver.begin(), per_solver.end(),
                                        [tau](double r) { return r <= tau; });
      rho.push_back(static_cast<double>(within) / count);
    }
    table.rho.push_back(std::move(rho));
  }
  return table;
}

void write_profile_csv(std::ostream& os, const ProfileTable& table) {
  os << "# metric: " << to_string(table.metric)
     << ", instances: " << table.included_instances.size() << '\n';
  os << "tau";
  for (const auto& s : table.solvers) os << ',' << s;
  os << '\n';
  for (std::size_t j = 0; j < table.tau_grid.size(); ++j) {
    os << format_double(table.tau_grid[j]);
    for (const auto& rho : table.rho) os << ',' << format_double(rho[j]);
    os << '\n';
  }
}

std::vector<std::string> boundary_subset(const std::vector<RunRecord>& records, double tol) {
  std::map<std::string, const RunRecord*> best;
  for (const auto& r : records) {
    if (!r.success()) continue;
    auto& slot = best[instance_id(r)];
    if (slot == nullptr || r.f_star < slot->f_star) slot = &r;
  }
  std::vector<std::string> out;
  for (const auto& [id, r] : best) {
    if (r->max_g_final >= -tol) out.push_back(id);
  }
  return out;
}

}  // namespace curvesearch
