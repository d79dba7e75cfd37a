// Acceptance suite: one PASS/FAIL line per criterion, INFO lines for
// diagnostics that do not decide anything. Exit code 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "stcut/assembly.hpp"
#include "stcut/norms.hpp"
#include "stcut/quadrature.hpp"
#include "stcut/solver.hpp"
#include "study.hpp"

namespace fs = std::filesystem;
using namespace stcut;
using testing::make_setup;
using testing::random_function;

namespace {

int failures = 0;

void report(bool ok, const std::string& id, const std::string& detail) {
  std::printf("%s  %-34s %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void info(const std::string& id, const std::string& detail) {
  std::printf("INFO  %-34s %s\n", id.c_str(), detail.c_str());
  std::fflush(stdout);
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FormOptions exact_time() {
  FormOptions o;
  o.time_rule = TimeRule::Gauss3;
  return o;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// 1. Convergence orders.
void convergence() {
  struct Study {
    const char* config;
    double lo, hi, budget_s;
  };
  const std::vector<Study> studies{
      {"dg0_k_mu06", 0.4, 0.62, 120}, {"dg1_k_mu06", 1.35, 1.65, 180},
      {"dg0_h_mu06", 0.9, 1.1, 180},  {"dg1_h_mu06", 0.9, 1.1, 180},
      {"dg0_k_mu0", 0.4, 0.62, 120},  {"dg1_k_mu0", 1.35, 1.65, 180},
      {"dg0_h_mu0", 0.9, 1.1, 180},   {"dg1_h_mu0", 0.9, 1.1, 180},
      {"dg0_k_mu02", 0.4, 0.62, 120}, {"dg1_k_mu02", 1.35, 1.65, 180},
      {"dg0_h_mu02", 0.9, 1.1, 180},  {"dg1_h_mu02", 0.9, 1.1, 180},
  };
  for (const Study& s : studies) {
    const app::RunConfig cfg = app::load_config(fs::path(STCUT_CONFIG_DIR) / (std::string(s.config) + ".json"));
    const auto t0 = std::chrono::steady_clock::now();
    const app::StudyReport rep = app::run_convergence(cfg, 1);
    const double elapsed = seconds_since(t0);
    if (!rep.slope) {
      report(false, fmt("1 convergence %s", s.config), "a run in the fit window failed");
      continue;
    }
    const bool ok = *rep.slope >= s.lo && *rep.slope <= s.hi && elapsed < s.budget_s;
    report(ok, fmt("1 convergence %s", s.config),
           fmt("slope %.4f in [%.2f, %.2f], %.1fs < %.0fs, errors %.3e .. %.3e", *rep.slope, s.lo,
               s.hi, elapsed, s.budget_s, rep.rows.front().error_x(), rep.rows.back().error_x()));
  }
}

// Temporal order of dG(1) with a finer fixed h than the criterion prescribes.
void dg1_fine_h_diagnostic() {
  std::vector<std::pair<double, double>> pts;
  for (int e = 2; e <= 4; ++e) {
    const double k = std::ldexp(1.0, -e);
    const auto s = make_setup(manufactured_problem(), 2048, 512, static_cast<std::size_t>(1.0 / k), 1,
                              0.125, 0.25, 0.6);
    const SpaceTimeSolution u = march(s.problem, s.st, FormOptions::from(s.disc));
    pts.emplace_back(k, std::sqrt(xnorm_error(u, *s.problem.exact).x_sq()));
  }
  info("dG(1) k-sweep, h = 1/2048, mu = 0.6",
       fmt("errors %.4e %.4e %.4e, slope %.3f", pts[0].second, pts[1].second, pts[2].second,
           lls_slope(pts)));
}

// Errors with and without the jump term over the moving interface.
void interface_term_guard() {
  for (bool with : {true, false}) {
    std::vector<std::pair<double, double>> pts;
    for (int e = 3; e <= 6; ++e) {
      const double k = std::ldexp(1.0, -e);
      const auto s = make_setup(manufactured_problem(), 512, 128, static_cast<std::size_t>(1.0 / k), 0,
                                0.125, 0.25, 0.6);
      FormOptions opt = FormOptions::from(s.disc);
      opt.interface_time_jump = with;
      const SpaceTimeSolution u = march(s.problem, s.st, opt);
      pts.emplace_back(k, std::sqrt(xnorm_error(u, *s.problem.exact).x_sq()));
    }
    info(fmt("dG(0) k-sweep, jump term %s", with ? "on" : "off"),
         fmt("errors %.4e .. %.4e, slope %.3f", pts.front().second, pts.back().second, lls_slope(pts)));
  }
}

// 2. Tiny slab against the brute-force integrator.
void oracle_equivalence() {
  for (int q : {0, 1})
    for (double mu : {0.0, 0.6}) {
      const auto s = make_setup(zero_problem({0.0, 1.0}, 0.25), 3, 1, 1, q, 0.2, 0.25, mu);
      const SlabData& sd = s.st->slabs[0];
      const Eigen::MatrixXd ref = oracle::slab_terms(sd.space, sd.geometry, 10.0, 0.5).lhs();
      const Eigen::MatrixXd a(assemble_lhs(sd.space, sd.geometry, exact_time()));
      const double err = max_abs(a - ref) / std::max(1.0, max_abs(ref));
      report(err <= 1e-10, fmt("2 oracle q=%d mu=%.1f", q, mu), fmt("max rel diff %.2e <= 1e-10", err));
      const Eigen::MatrixXd lob(assemble_lhs(sd.space, sd.geometry, FormOptions{}));
      info(fmt("Lobatto-3 LHS q=%d mu=%.1f", q, mu), fmt("max rel diff %.2e", max_abs(lob - ref) / std::max(1.0, max_abs(ref))));
    }
}

// 3. B_h against its integrated-by-parts form.
void form_identity() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> mu(-0.6, 0.6), left(0.3, 0.4), len(0.15, 0.3);
  double worst = 0.0;
  std::size_t pairs = 0;
  for (int geo = 0; geo < 5; ++geo) {
    const int q = geo % 2;
    const auto s = make_setup(zero_problem({0.0, 1.0}, 0.4), 12 + 3 * static_cast<std::size_t>(geo), 3, 4, q,
                              left(rng), len(rng), mu(rng));
    const BilinearForm form(s.st, exact_time());
    for (int p = 0; p < 10; ++p, ++pairs) {
      const SpaceTimeSolution w = random_function(s.st, rng);
      const SpaceTimeSolution v = random_function(s.st, rng);
      const double b = form.apply(w, v);
      const double alt = oracle::alternative_form(w, v, 10.0, 0.5);
      worst = std::max(worst, std::abs(b - alt) / std::max(1.0, std::abs(b)));
    }
  }
  report(worst <= 1e-9, "3 form identity", fmt("%zu pairs, 5 geometries, max diff %.2e <= 1e-9", pairs, worst));
}

// 4. Coercivity on random functions.
void coercivity() {
  std::mt19937_64 rng(77);
  double worst = INFINITY;
  std::size_t count = 0;
  for (std::size_t n0 : {16u, 32u})
    for (std::size_t N : {4u, 8u})  // k = 1/8, 1/16 on T = 1/2
      for (double mu : {-0.6, -0.3, 0.0, 0.3, 0.6})
        for (int q : {0, 1}) {
          const auto s = make_setup(zero_problem({0.0, 1.0}, 0.5), n0, n0 / 4, N, q, 0.375, 0.25, mu);
          const BilinearForm form(s.st, FormOptions::from(s.disc));
          for (int i = 0; i < 200; ++i, ++count) {
            const SpaceTimeSolution v = random_function(s.st, rng);
            worst = std::min(worst, form.apply(v, v) / xnorm(v).b_sq());
          }
        }
  report(worst >= 0.01, "4 coercivity", fmt("%zu samples, min B(v,v)/|||v|||_B^2 = %.4f >= 0.01", count, worst));
}

// 5. Galerkin residual after each march.
void galerkin() {
  double worst = 0.0;
  int runs = 0;
  for (int q : {0, 1})
    for (double mu : {0.0, 0.2, 0.6})
      for (std::size_t n0 : {32u, 128u}) {
        const auto s = make_setup(manufactured_problem(), n0, n0 / 4, n0 / 2, q, 0.125, 0.25, mu);
        const FormOptions opt = FormOptions::from(s.disc);
        const ResidualReport r = galerkin_residual(s.problem, march(s.problem, s.st, opt), opt);
        worst = std::max(worst, r.max_abs / r.scale);
        ++runs;
      }
  const app::RunConfig sine = app::load_config(fs::path(STCUT_CONFIG_DIR) / "sine_motion.json");
  const ProblemSpec p = sine.problem();
  const auto st = build_discretization(make_layout(p, sine.overlap, sine.disc), sine.disc);
  const FormOptions opt = FormOptions::from(sine.disc);
  const ResidualReport r = galerkin_residual(p, march(p, st, opt), opt);
  worst = std::max(worst, r.max_abs / r.scale);
  ++runs;
  report(worst <= 1e-9, "5 Galerkin residual", fmt("%d marches, max residual/scale %.2e <= 1e-9", runs, worst));
}

// 6. Quadrature exactness.
void quadrature() {
  double worst = 0.0;
  auto check = [&](double got, double want) { worst = std::max(worst, std::abs(got - want) / std::abs(want)); };
  auto mono = [](const Rule1D& r, int p) {
    return integrate(r, 0.0, 1.0, [p](double x) { return std::pow(x, p); });
  };
  for (int p = 0; p <= 3; ++p) check(mono(lobatto3(), p), 1.0 / (p + 1));
  for (int p = 0; p <= 5; ++p) check(mono(gauss_legendre3(), p), 1.0 / (p + 1));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = u(rng), b = a + 0.1 + u(rng);
    std::vector<double> ev;
    const int n = trial % 5;
    for (int i = 0; i < n; ++i) ev.push_back(a + (b - a) * u(rng));
    std::sort(ev.begin(), ev.end());
    const double c[4] = {u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5, 1.0 + u(rng)};
    auto f = [&](double x) { return c[0] + x * (c[1] + x * (c[2] + x * c[3])); };
    auto F = [&](double x) { return x * (c[0] + x * (c[1] / 2 + x * (c[2] / 3 + x * c[3] / 4))); };
    for (const Rule1D& r : {lobatto3(), gauss_legendre3()}) {
      double s = 0.0;
      for (const QuadPoint& p : composite_rule(a, b, ev, r)) s += p.weight * f(p.x);
      check(s, F(b) - F(a));
    }
  }
  report(worst <= 1e-13, "6 quadrature exactness", fmt("max rel error %.2e <= 1e-13", worst));
}

// 7. Trivial limits.
void trivial_limits() {
  double largest = 0.0;
  for (int q : {0, 1})
    for (double mu : {0.0, 0.6}) {
      const auto s = make_setup(zero_problem(), 32, 8, 16, q, 0.125, 0.25, mu);
      for (const Eigen::VectorXd& c : march(s.problem, s.st, FormOptions::from(s.disc)).coefficients)
        largest = std::max(largest, c.cwiseAbs().maxCoeff());
    }
  report(largest == 0.0, "7 zero data", fmt("max |coefficient| = %.1e", largest));

  std::size_t events = 0;
  double diff = 0.0;
  for (int q : {0, 1}) {
    const auto s = make_setup(manufactured_problem(), 37, 7, 8, q, 0.1313, 0.25, 0.0);
    FormOptions off = FormOptions::from(s.disc);
    off.interface_time_jump = false;
    for (const SlabData& sd : s.st->slabs) {
      events += sd.geometry.events.size();
      const Eigen::MatrixXd a(assemble_lhs(sd.space, sd.geometry, FormOptions::from(s.disc)));
      const Eigen::MatrixXd b(assemble_lhs(sd.space, sd.geometry, off));
      diff = std::max(diff, max_abs(a - b));
    }
  }
  report(events == 0 && diff == 0.0, "7 stationary overlap",
         fmt("%zu events, max LHS change without the moving-interface term %.1e", events, diff));
}

// 8. Stability ratio under refinement.
void stability() {
  for (int q : {0, 1}) {
    std::vector<double> ratios;
    for (std::size_t level = 0; level < 4; ++level) {
      const std::size_t n0 = 16u << level, N = 8u << level;
      const auto s = make_setup(manufactured_problem(), n0, n0 / 4, N, q, 0.125, 0.25, 0.6);
      const SpaceTimeSolution u = march(s.problem, s.st, FormOptions::from(s.disc));
      const double data = l2_norm(s.problem.initial, s.problem.omega) +
                          l2l2_norm(s.problem.source, s.problem.omega, s.problem.final_time);
      ratios.push_back(std::sqrt(xnorm(u).x_sq()) / data);
    }
    bool ok = true;
    for (std::size_t i = 1; i < ratios.size(); ++i) ok = ok && ratios[i] <= 1.05 * ratios[i - 1];
    report(ok, fmt("8 stability q=%d", q),
           fmt("|||u_h|||_X / data = %.4f %.4f %.4f %.4f (each <= 1.05 x previous)", ratios[0], ratios[1],
               ratios[2], ratios[3]));
  }
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  quadrature();
  oracle_equivalence();
  form_identity();
  coercivity();
  galerkin();
  trivial_limits();
  stability();
  convergence();
  dg1_fine_h_diagnostic();
  interface_term_guard();
  std::printf("%d criteria failed, %.0fs\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
