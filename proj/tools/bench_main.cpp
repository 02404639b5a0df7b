// bench: run benchmark plans and post-process their records.
//
//   bench run --plan plan.txt --out results/ [--jobs N] [--seed S] [--ell-seed E]
//             [--problems a,b] [--sets sph,box]
//   bench profile --records results/records.csv --metric time --out profile.csv
//   bench boundary --records results/records.csv [--tol 1e-5]
//   bench list

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "curvesearch/bench.hpp"
#include "curvesearch/errors.hpp"
#include "curvesearch/feasible_sets.hpp"
#include "curvesearch/problems.hpp"

namespace fs = std::filesystem;
using namespace curvesearch;

namespace {

std::vector<RunRecord> load_records(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open records file " + path.string());
  return read_records_csv(in);
}

struct RunOptions {
  fs::path plan_path;
  fs::path out_dir;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> ell_seed;
  std::vector<std::string> problems;
  std::vector<std::string> sets;
};

int run_command(const RunOptions& opt) {
  BenchPlan plan = load_plan(opt.plan_path);
  if (opt.seed) plan.seed = *opt.seed;
  if (opt.ell_seed) plan.ell_seed = *opt.ell_seed;
  if (!opt.problems.empty()) plan.problems = opt.problems;
  if (!opt.sets.empty()) plan.sets = opt.sets;
  plan.validate();
  const int jobs = opt.jobs;
  const fs::path& out_dir = opt.out_dir;

  const auto records = run_plan(plan, jobs);
  fs::create_directories(out_dir);
  const fs::path out = out_dir / "records.csv";
  std::ofstream os(out);
  if (!os) throw Error("cannot write " + out.string());
  write_records_csv(os, records);

  int failures = 0;
  for (const auto& r : records) failures += r.success() ? 0 : 1;
  std::cout << records.size() << " runs, " << failures << " without stationarity; wrote "
            << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curve search benchmark harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a benchmark plan and write records.csv");
  RunOptions opt;
  run->add_option("--plan", opt.plan_path, "Plan file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", opt.out_dir, "Output directory")->required();
  run->add_option("--jobs", opt.jobs, "Parallel runs")->check(CLI::PositiveNumber);
  run->add_option("--seed", opt.seed, "Override the plan seed");
  run->add_option("--ell-seed", opt.ell_seed, "Override the ellipsoid seed");
  run->add_option("--problems", opt.problems, "Override the plan's problem list")->delimiter(',');
  run->add_option("--sets", opt.sets, "Override the plan's feasible sets")->delimiter(',');

  auto* profile = app.add_subcommand("profile", "Compute performance-profile data");
  fs::path records_path, profile_out;
  std::string metric = "time";
  std::vector<double> taus;
  profile->add_option("--records", records_path, "Records CSV")->required()->check(CLI::ExistingFile);
  profile->add_option("--metric", metric, "fstar | time | iters")
      ->check(CLI::IsMember({"fstar", "time", "iters"}));
  profile->add_option("--out", profile_out, "Profile CSV (stdout if omitted)");
  profile->add_option("--tau", taus, "Explicit tau grid (default: all breakpoints)");

  auto* boundary = app.add_subcommand("boundary", "List instances solved on the boundary");
  double tol = 1e-5;
  boundary->add_option("--records", records_path, "Records CSV")->required()->check(CLI::ExistingFile);
  boundary->add_option("--tol", tol, "Activity tolerance");

  auto* list = app.add_subcommand("list", "List problems and feasible sets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(opt);

    if (profile->parsed()) {
      const auto table = performance_profile(load_records(records_path), parse_metric(metric), taus);
      if (profile_out.empty()) {
        write_profile_csv(std::cout, table);
      } else {
        std::ofstream os(profile_out);
        if (!os) throw Error("cannot write " + profile_out.string());
        write_profile_csv(os, table);
      }
      return 0;
    }

    if (boundary->parsed()) {
      for (const auto& id : boundary_subset(load_records(records_path), tol)) std::cout << id << "\n";
      return 0;
    }

    if (list->parsed()) {
      std::cout << "problems:\n";
      for (const auto& p : list_problems()) std::cout << "  " << p.name() << " (n=" << p.dim() << ")\n";
      std::cout << "sets:\n";
      for (const auto& s : set_names()) std::cout << "  " << s << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
