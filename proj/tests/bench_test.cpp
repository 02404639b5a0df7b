#include <algorithm>
#include <sstream>

#include "curvesearch/bench.hpp"
#include "curvesearch/errors.hpp"
#include "doctest.h"

using namespace curvesearch;

namespace {

RunRecord record(const std::string& solver, const std::string& problem, double elapsed, bool ok,
                 double f_star = 1.0, double max_g = -1.0) {
  RunRecord r;
  r.solver = solver;
  r.memory = 0;
  r.problem = problem;
  r.set = "box";
  r.n = 2;
  r.status = ok ? RunStatus::stationary : RunStatus::time_limit;
  r.stationarity = ok ? 1e-4 : 0.5;
  r.elapsed_s = elapsed;
  r.iterations = static_cast<int>(elapsed * 10);
  r.f_star = f_star;
  r.max_g_final = max_g;
  return r;
}

std::vector<double> rho_at(const ProfileTable& t, const std::string& solver, std::vector<double> taus) {
  const auto s = std::find(t.solvers.begin(), t.solvers.end(), solver) - t.solvers.begin();
  std::vector<double> out;
  for (double tau : taus) {
    const auto j = std::find(t.tau_grid.begin(), t.tau_grid.end(), tau) - t.tau_grid.begin();
    REQUIRE(j < static_cast<long>(t.tau_grid.size()));
    out.push_back(t.rho[s][j]);
  }
  return out;
}

std::string csv_without_elapsed(std::vector<RunRecord> records) {
  for (auto& r : records) r.elapsed_s = 0.0;
  std::ostringstream os;
  write_records_csv(os, records);
  return os.str();
}

}  // namespace

TEST_CASE("plan parsing") {
  const auto plan = parse_plan(R"(
    # desk plan
    problems = rosenbrock_2, chainwoo_4
    sets = sph, box
    solvers = scs:0, scs:10, spg:0, spg:10
    seed = 9
    max_iters = 200   # override
    adaptive_momentum = false
  )");
  CHECK(plan.problems == std::vector<std::string>{"rosenbrock_2", "chainwoo_4"});
  CHECK(plan.sets == std::vector<std::string>{"sph", "box"});
  REQUIRE(plan.solvers.size() == 4);
  CHECK(plan.solvers[1] == SolverSpec{"scs", 10});
  CHECK(plan.solvers[1].label() == "scs_M10");
  CHECK(plan.seed == 9);
  CHECK_FALSE(plan.ell_seed.has_value());
  CHECK(plan.config.max_iters == 200);
  CHECK_FALSE(plan.config.adaptive_momentum);

  const auto all = parse_plan("problems = all\nsets = all\nsolvers = spg\n");
  CHECK(all.problems.size() == list_problems().size());
  CHECK(all.sets == set_names());
  CHECK(all.solvers[0].memory == 0);
}

TEST_CASE("plan errors") {
  CHECK_THROWS_AS(parse_plan("problems = rosenbrock_2\nsets = sph\nsolvers =\n"), PlanError);
  CHECK_THROWS_AS(parse_plan("problems = nope\nsets = sph\nsolvers = scs:0\n"), PlanError);
  CHECK_THROWS_AS(parse_plan("problems = rosenbrock_2\nsets = cube\nsolvers = scs:0\n"), PlanError);
  CHECK_THROWS_AS(parse_plan("problems = rosenbrock_2\nsets = sph\nsolvers = lbfgs:0\n"), PlanError);
  CHECK_THROWS_AS(parse_plan("problems = rosenbrock_2\nsets = sph\nsolvers = scs:0\ncolor = red\n"), PlanError);
  CHECK_THROWS_AS(parse_plan("problems = rosenbrock_2\nsets = sph\nsolvers = scs:0\nsigma = abc\n"), PlanError);
  CHECK_THROWS_AS(parse_plan("problems = rosenbrock_2\nsets = sph\nsolvers = scs:0\ndelta = 2\n"), PlanError);
  CHECK_THROWS_AS(parse_plan("problems rosenbrock_2\n"), PlanError);
  CHECK_THROWS_AS(load_plan("/nonexistent/plan.txt"), PlanError);
}

TEST_CASE("run_plan cardinality, order and determinism") {
  auto plan = parse_plan("problems = rosenbrock_2, powell_4\nsets = ell, box\n"
                         "solvers = spg:10, scs:0, scs:10, spg:0\nmax_iters = 300\n");
  int inspected = 0;
  const auto records = run_plan(plan, 1, TraceLevel::scalars, [&](const RunRecord& r) {
    ++inspected;
    CHECK(static_cast<int>(r.trace.size()) == r.iterations);
  });
  REQUIRE(records.size() == 16);
  CHECK(inspected == 16);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    CHECK(std::tie(a.problem, a.set, a.solver, a.memory) < std::tie(b.problem, b.set, b.solver, b.memory));
    CHECK(b.trace.empty());
  }
  CHECK(records.front().problem == "powell_4");
  CHECK(records.front().set == "box");

  const auto again = run_plan(plan, 2);
  CHECK(csv_without_elapsed(records) == csv_without_elapsed(again));

  plan.seed = 2;
  const auto reseeded = run_plan(plan, 1);
  CHECK(csv_without_elapsed(records) != csv_without_elapsed(reseeded));
  CHECK(ellipsoid_seed(plan, "a") != ellipsoid_seed(plan, "b"));
  plan.ell_seed = 5;
  CHECK(ellipsoid_seed(plan, "a") != ellipsoid_seed(plan, "b"));
}

TEST_CASE("records CSV round trip") {
  auto plan = parse_plan("problems = trig_10\nsets = sph, com\nsolvers = scs:0, spg:10\n");
  const auto records = run_plan(plan);
  std::ostringstream os;
  write_records_csv(os, records);
  const std::string text = os.str();
  CHECK(text.rfind(std::string(kRecordsSchema) + "\n" + std::string(kRecordsHeader) + "\n", 0) == 0);

  std::istringstream is(text);
  const auto back = read_records_csv(is);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].solver == records[i].solver);
    CHECK(back[i].memory == records[i].memory);
    CHECK(back[i].problem == records[i].problem);
    CHECK(back[i].set == records[i].set);
    CHECK(back[i].n == records[i].n);
    CHECK(back[i].status == records[i].status);
    CHECK(back[i].f_star == records[i].f_star);
    CHECK(back[i].stationarity == records[i].stationarity);
    CHECK(back[i].iterations == records[i].iterations);
    CHECK(back[i].fallbacks == records[i].fallbacks);
    CHECK(back[i].adaptive_reductions == records[i].adaptive_reductions);
    CHECK(back[i].elapsed_s == records[i].elapsed_s);
    CHECK(back[i].max_g_final == records[i].max_g_final);
  }

  std::istringstream bad("solver,M\nscs,0\n");
  CHECK_THROWS_AS(read_records_csv(bad), Error);
  std::istringstream short_row(std::string(kRecordsHeader) + "\nscs,0,p\n");
  CHECK_THROWS_AS(read_records_csv(short_row), Error);
}

TEST_CASE("three-instance profile fixture") {
  const std::vector<RunRecord> records{
      record("A", "p1", 1.0, true), record("B", "p1", 2.0, true),
      record("A", "p2", 3.0, true), record("B", "p2", 1.0, true),
      record("A", "p3", 2.0, true), record("B", "p3", 9.0, false),
      record("A", "p4", 1.0, false), record("B", "p4", 1.0, false),
  };
  const auto t = performance_profile(records, ProfileMetric::time);
  CHECK(t.included_instances == std::vector<std::string>{"p1/box", "p2/box", "p3/box"});
  CHECK(t.tau_grid == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(t.solvers == std::vector<std::string>{"A_M0", "B_M0"});
  CHECK(rho_at(t, "A_M0", {1, 2, 3}) == std::vector<double>{2.0 / 3, 2.0 / 3, 1.0});
  CHECK(rho_at(t, "B_M0", {1, 2, 3}) == std::vector<double>{1.0 / 3, 2.0 / 3, 2.0 / 3});

  const auto fine = performance_profile(records, ProfileMetric::time, {1.0, 1.5, 2.5, 10.0});
  CHECK(rho_at(fine, "A_M0", {1.5, 2.5, 10.0}) == std::vector<double>{2.0 / 3, 2.0 / 3, 1.0});
  CHECK(rho_at(fine, "B_M0", {1.5, 2.5, 10.0}) == std::vector<double>{1.0 / 3, 2.0 / 3, 2.0 / 3});
  CHECK_THROWS_AS(performance_profile(records, ProfileMetric::time, {0.5}), DomainError);

  std::ostringstream os;
  write_profile_csv(os, t);
  CHECK(os.str() == "# metric: time, instances: 3\ntau,A_M0,B_M0\n"
                    "1,0.66666666666666663,0.33333333333333331\n"
                    "2,0.66666666666666663,0.66666666666666663\n"
                    "3,1,0.66666666666666663\n");
}

TEST_CASE("profile edge cases") {
  const auto single = performance_profile({record("A", "p", 1.0, true), record("B", "p", 2.0, true)},
                                          ProfileMetric::time);
  CHECK(rho_at(single, "A_M0", {1}) == std::vector<double>{1.0});
  CHECK(rho_at(single, "B_M0", {1, 2}) == std::vector<double>{0.0, 1.0});

  const auto twins = performance_profile({record("A", "p", 1.5, true), record("B", "p", 1.5, true),
                                          record("A", "q", 0.5, true), record("B", "q", 0.5, true)},
                                         ProfileMetric::iterations);
  CHECK(twins.rho[0] == twins.rho[1]);

  const auto lone = performance_profile({record("A", "p", 1.0, true), record("B", "p", 1.0, false)},
                                        ProfileMetric::time, {1.0, 2.0, 100.0});
  CHECK(rho_at(lone, "B_M0", {1, 2, 100}) == std::vector<double>{0.0, 0.0, 0.0});

  CHECK_THROWS_AS(performance_profile({record("A", "p", 1.0, false)}, ProfileMetric::time), ProfileError);
  CHECK_THROWS_AS(performance_profile({}, ProfileMetric::f_star), ProfileError);

  // Nonpositive f*: shifted by 1 - min + 1e-12.
  const auto shifted = performance_profile({record("A", "p", 1.0, true, -1.0), record("B", "p", 1.0, true, 0.0)},
                                           ProfileMetric::f_star);
  const double expected = (0.0 + 2.0 + 1e-12) / (-1.0 + 2.0 + 1e-12);
  REQUIRE(shifted.tau_grid.size() == 2);
  CHECK(shifted.tau_grid[1] == expected);
  CHECK(rho_at(shifted, "A_M0", {1}) == std::vector<double>{1.0});

  CHECK(parse_metric("fstar") == ProfileMetric::f_star);
  CHECK(parse_metric("iters") == ProfileMetric::iterations);
  CHECK_THROWS_AS(parse_metric("speed"), DomainError);
}

TEST_CASE("profiles from a real sweep are monotone") {
  const auto plan = parse_plan("problems = rosenbrock_2, chainwoo_4, trig_10\nsets = all\n"
                               "solvers = scs:0, scs:10, spg:0, spg:10\nmax_iters = 400\n");
  const auto records = run_plan(plan);
  for (auto metric : {ProfileMetric::f_star, ProfileMetric::time, ProfileMetric::iterations}) {
    const auto t = performance_profile(records, metric);
    for (std::size_t s = 0; s < t.solvers.size(); ++s) {
      CHECK(std::is_sorted(t.rho[s].begin(), t.rho[s].end()));
      CHECK(t.rho[s].front() >= 0.0);
      CHECK(t.rho[s].back() <= 1.0);
      int successes = 0;
      for (const auto& r : records) {
        const bool included = std::find(t.included_instances.begin(), t.included_instances.end(),
                                        instance_id(r)) != t.included_instances.end();
        if (included && r.success() && SolverSpec{r.solver, r.memory}.label() == t.solvers[s]) ++successes;
      }
      CHECK(t.rho[s].back() == static_cast<double>(successes) / t.included_instances.size());
    }
  }
}

TEST_CASE("boundary subset") {
  const std::vector<RunRecord> records{
      record("A", "inside", 1.0, true, 1.0, -2.0),
      record("A", "face", 1.0, true, 1.0, 0.0),
      record("A", "mixed", 1.0, true, 5.0, -3.0),
      record("B", "mixed", 1.0, true, 2.0, -1e-7),
      record("A", "failed", 1.0, false, 0.0, 0.0),
  };
  CHECK(boundary_subset(records) == std::vector<std::string>{"face/box", "mixed/box"});
  CHECK(boundary_subset(records, 1e-9) == std::vector<std::string>{"face/box"});
}
