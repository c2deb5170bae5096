// Command line front end: solve, adapt, study.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "abem/assembly.hpp"
#include "abem/error.hpp"
#include "abem/harness.hpp"
#include "abem/mesh.hpp"

namespace {

constexpr int kInputError = 2;
constexpr int kSolverError = 3;

struct Common {
  std::string geometry;
  std::string problem = "weaksing";
  int p = 0;
  std::optional<double> exact_energy;
  std::optional<double> scale;
};

struct RunFlags {
  std::string estimator = "hh2-mu-tilde";
  double theta = 0.25;
  std::size_t max_dofs = 1000;
  int q = 0;
  std::optional<unsigned> seed;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--geometry", c.geometry, "geometry file")->required()->check(CLI::ExistingFile);
  app->add_option("--problem", c.problem, "weaksing or hypsing")
      ->check(CLI::IsMember({"weaksing", "hypsing"}));
  app->add_option("--p", c.p, "polynomial degree (weaksing only)")->check(CLI::Range(0, 1));
  app->add_option("--exact-energy", c.exact_energy, "energy norm squared of the exact solution");
  app->add_option("--scale", c.scale, "divide all coordinates by this factor")
      ->check(CLI::PositiveNumber);
}

void add_run(CLI::App* app, RunFlags& r) {
  app->add_option("--estimator", r.estimator, "error estimator")
      ->check(CLI::IsMember({"hh2-mu-tilde", "hh2-mu", "hh2-eta", "hh2-eta-tilde", "twolevel", "zz", "wres"}));
  app->add_option("--theta", r.theta, "marking parameter in (0, 1]")
      ->check(CLI::Validator(
          [](std::string& v) -> std::string {
            double x = 0.0;
            try {
              x = std::stod(v);
            } catch (const std::exception&) {
              return "value " + v + " is not a number";
            }
            return x > 0.0 && x <= 1.0 ? std::string() : "value " + v + " not in (0, 1]";
          },
          "in (0, 1]"));
  app->add_option("--max-dofs", r.max_dofs, "stop once the number of dofs exceeds this")
      ->check(CLI::PositiveNumber);
  app->add_option("--q", r.q, "weighted residual quadrature order")->check(CLI::Range(1, 16));
  app->add_option("--seed", r.seed, "random seed (no effect on deterministic runs)");
}

abem::Mesh load(const Common& c) {
  abem::Mesh m = abem::load_geometry(c.geometry);
  if (c.scale) m = abem::scale_down(m, *c.scale);
  return m;
}

abem::Problem problem_of(const Common& c) {
  return c.problem == "hypsing" ? abem::Problem::Hypersingular : abem::Problem::WeaklySingular;
}

// f(x) = x_1 for the weakly singular problem, phi = 1 for the hypersingular one.
abem::ScalarField data_of(abem::Problem problem) {
  if (problem == abem::Problem::Hypersingular) return [](const abem::Point&) { return 1.0; };
  return [](const abem::Point& x) { return x.x(); };
}

abem::AdaptiveOptions options(const Common& c, const RunFlags& r) {
  abem::AdaptiveOptions o;
  o.problem = problem_of(c);
  o.p = o.problem == abem::Problem::Hypersingular ? 1 : c.p;
  o.estimator = abem::parse_estimator(r.estimator, o.problem);
  o.estimator.q = r.q;
  o.theta = r.theta;
  o.max_dofs = r.max_dofs;
  o.data = data_of(o.problem);
  o.exact_energy = c.exact_energy;
  abem::validate(o);
  return o;
}

void write_run(const std::string& path, const abem::RunRecord& run) {
  std::ofstream out(path);
  if (!out) abem::fail(abem::ErrorKind::InvalidArgument, "cannot write " + path);
  abem::write_csv(out, run.steps);
}

void print_rates(const std::string& label, const abem::RunRecord& run) {
  try {
    const abem::RateReport r = abem::estimate_rate(run);
    std::printf("%s: estimator slope %.3f", label.c_str(), r.estimator.slope);
    if (r.error) std::printf(", error slope %.3f", r.error->slope);
    std::printf("\n");
  } catch (const abem::Error& e) {
    std::printf("%s: no rate (%s)\n", label.c_str(), e.what());
  }
}

int run_solve(const Common& c) {
  const abem::Mesh mesh = load(c);
  const abem::Problem problem = problem_of(c);
  const int p = problem == abem::Problem::Hypersingular ? 1 : c.p;
  const abem::GalerkinSystem sys = abem::assemble(mesh, problem, p, data_of(problem));
  const abem::DensityFunction u = abem::solve(sys);
  const abem::EnergyReport e = abem::energy(sys, u, c.exact_energy);
  std::printf("panels %zu dofs %zu energy %.17g", mesh.num_panels(), static_cast<std::size_t>(u.coeffs.size()),
              e.energy_of_solution);
  if (e.energy_error) std::printf(" error %.17g", *e.energy_error);
  std::printf(" residual %.3g\n", abem::relative_residual(sys, u));
  return 0;
}

int run_adapt(const Common& c, const RunFlags& r, const std::string& output, bool uniform) {
  abem::AdaptiveOptions o = options(c, r);
  o.uniform = uniform;
  const abem::RunRecord run = abem::adaptive_loop(load(c), o);
  if (!output.empty()) write_run(output, run);
  else abem::write_csv(std::cout, run.steps);
  print_rates(uniform ? "uniform" : "adaptive", run);
  if (run.diagnostic) {
    std::fprintf(stderr, "solver failure: %s\n", run.diagnostic->c_str());
    return kSolverError;
  }
  return 0;
}

int run_study(const Common& c, const RunFlags& r, const std::string& prefix, const std::string& compare) {
  const abem::Mesh mesh = load(c);
  bool failed = false;
  std::size_t begin = 0;
  while (begin <= compare.size()) {
    const std::size_t end = std::min(compare.find(',', begin), compare.size());
    const std::string mode = compare.substr(begin, end - begin);
    begin = end + 1;
    if (mode != "uniform" && mode != "adaptive")
      abem::fail(abem::ErrorKind::InvalidArgument, "--compare: unknown mode '" + mode + "'");
    abem::AdaptiveOptions o = options(c, r);
    o.uniform = mode == "uniform";
    const abem::RunRecord run = abem::adaptive_loop(mesh, o);
    write_run(prefix + "_" + mode + ".csv", run);
    print_rates(mode, run);
    if (run.diagnostic) {
      std::fprintf(stderr, "solver failure (%s): %s\n", mode.c_str(), run.diagnostic->c_str());
      failed = true;
    }
  }
  return failed ? kSolverError : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive Galerkin BEM for the 2D Laplace weakly singular and hypersingular equations"};
  app.require_subcommand(1);

  Common solve_c, adapt_c, study_c;
  RunFlags adapt_r, study_r;
  std::string adapt_out, study_out = "study", compare = "uniform,adaptive";
  bool adapt_uniform = false;

  CLI::App* solve = app.add_subcommand("solve", "solve on the given mesh and print the energy");
  add_common(solve, solve_c);

  CLI::App* adapt = app.add_subcommand("adapt", "adaptive run, CSV per step");
  add_common(adapt, adapt_c);
  add_run(adapt, adapt_r);
  adapt->add_option("--output", adapt_out, "CSV file (default: stdout)");
  adapt->add_flag("--uniform", adapt_uniform, "refine every panel instead of marking");

  CLI::App* study = app.add_subcommand("study", "uniform versus adaptive comparison");
  add_common(study, study_c);
  add_run(study, study_r);
  study->add_option("--output", study_out, "prefix of the CSV files");
  study->add_option("--compare", compare, "comma separated list of uniform, adaptive");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kInputError;
  }

  try {
    if (*solve) return run_solve(solve_c);
    if (*adapt) return run_adapt(adapt_c, adapt_r, adapt_out, adapt_uniform);
    return run_study(study_c, study_r, study_out, compare);
  } catch (const abem::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (e.kind() == abem::ErrorKind::NotPositiveDefinite) return kSolverError;
    return kInputError;
  }
}
