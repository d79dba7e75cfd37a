// stcut: single solves, convergence studies and property checks from a JSON config.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "config.hpp"
#include "single.hpp"
#include "stcut/errors.hpp"
#include "study.hpp"

namespace fs = std::filesystem;
using namespace stcut;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Options {
  std::string config;
  std::string output_dir;
  std::uint64_t seed = 1;
  std::size_t samples = 50;
  std::size_t workers = 0;
  bool quiet = false;
  bool omit_timing = false;
};

fs::path output_dir(const app::RunConfig& cfg, const Options& o) {
  fs::path dir = o.output_dir.empty() ? cfg.output.dir : fs::path(o.output_dir);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

int cmd_solve(const Options& o) {
  const app::RunConfig cfg = app::load_config(o.config);
  const SpaceTimeSolution sol = app::run_single(cfg);
  const fs::path dir = output_dir(cfg, o);
  auto sf = open_out(dir / (cfg.name + "_solution.csv"));
  app::write_solution_csv(sf, sol, cfg.output.samples_x, cfg.output.samples_t);
  auto gf = open_out(dir / (cfg.name + "_geometry.csv"));
  app::write_geometry_csv(gf, sol);
  if (!o.quiet)
    std::printf("%s: %zu slabs solved, output in %s\n", cfg.name.c_str(),
                sol.discretization->n_slabs(), dir.string().c_str());
  return 0;
}

int cmd_converge(const Options& o) {
  const app::RunConfig cfg = app::load_config(o.config);
  if (!cfg.study) throw app::ConfigError("study: missing section");
  const std::size_t workers = o.workers ? o.workers : cfg.workers;
  auto progress = [&](const app::StudyRow& r) {
    if (o.quiet) return;
    if (r.ok())
      std::printf("  resolution %-12.6g error_x %.6e  (%.2fs)\n", r.resolution, r.error_x(), r.runtime_s);
    else
      std::printf("  resolution %-12.6g FAILED: %s\n", r.resolution, r.error.c_str());
    std::fflush(stdout);
  };
  const app::StudyReport rep = app::run_convergence(cfg, workers, progress);
  const fs::path dir = output_dir(cfg, o);
  auto cf = open_out(dir / (cfg.name + ".csv"));
  app::write_study_csv(cf, rep, o.omit_timing);
  auto vf = open_out(dir / (cfg.name + ".svg"));
  vf << app::study_svg(cfg, rep);
  if (!o.quiet) {
    if (rep.slope)
      std::printf("%s: slope %.4f over points %zu-%zu\n", cfg.name.c_str(), *rep.slope,
                  rep.fit_first, rep.fit_last);
    else
      std::printf("%s: no slope (failed runs in the fit window)\n", cfg.name.c_str());
  }
  return rep.all_ok() ? 0 : kNumericalError;
}

int cmd_check(const Options& o) {
  const app::RunConfig cfg = app::load_config(o.config);
  const app::CheckReport r = app::run_checks(cfg, o.seed, o.samples);
  const bool ok = r.min_coercivity > 0.0 && r.galerkin_residual <= 1e-9 * r.residual_scale;
  if (!o.quiet) {
    std::printf("samples                    %zu (seed %llu)\n", r.samples,
                static_cast<unsigned long long>(o.seed));
    std::printf("min B(v,v) / |||v|||_B^2   %.6g\n", r.min_coercivity);
    std::printf("max |A - A^T|              %.3g\n", r.max_asymmetry);
    std::printf("Galerkin residual          %.3g (scale %.3g)\n", r.galerkin_residual, r.residual_scale);
    std::printf("%s\n", ok ? "ok" : "FAILED");
  }
  return ok ? 0 : kNumericalError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Space-time cut finite element solver for the heat equation with a moving overlapping mesh"};
  cli.require_subcommand(1);
  cli.fallthrough();
  Options o;
  cli.add_option("--output-dir", o.output_dir, "Directory for output files (overrides output.dir)");
  cli.add_flag("--quiet,-q", o.quiet, "Suppress progress output");

  CLI::App* solve = cli.add_subcommand("solve", "Solve once and write solution samples and the interface paths");
  solve->add_option("config", o.config, "JSON configuration")->required()->check(CLI::ExistingFile);

  CLI::App* conv = cli.add_subcommand("converge", "Run a convergence study and write CSV and SVG");
  conv->add_option("config", o.config, "JSON configuration")->required()->check(CLI::ExistingFile);
  conv->add_option("--workers,-j", o.workers, "Concurrent runs (default: config, then hardware threads)");
  conv->add_flag("--omit-timing", o.omit_timing, "Write runtime_s as 0 for reproducible files");

  CLI::App* check = cli.add_subcommand("check", "Random-vector coercivity, symmetry and residual checks");
  check->add_option("config", o.config, "JSON configuration")->required()->check(CLI::ExistingFile);
  check->add_option("--seed", o.seed, "Seed for the random test vectors");
  check->add_option("--samples", o.samples, "Number of random vectors");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*solve) return cmd_solve(o);
    if (*conv) return cmd_converge(o);
    return cmd_check(o);
  } catch (const app::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const GeometryError& e) {
    std::fprintf(stderr, "geometry error: %s\n", e.what());
    return kNumericalError;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumericalError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
