#include "study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include "stcut/solver.hpp"
#include "svg.hpp"

namespace stcut::app {

namespace {

StudyRow run_entry(const RunConfig& cfg, const ProblemSpec& problem, double resolution) {
  StudyRow row;
  row.resolution = resolution;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Discretization d = discretization_for(cfg, resolution);
    const Interval omega = problem.omega;
    row.k = cfg.final_time / static_cast<double>(d.n_slabs);
    row.h0 = omega.length() / static_cast<double>(d.n_background);
    row.hG = cfg.overlap.length / static_cast<double>(d.n_overlap);
    const SpaceTimeSolution sol = march(problem, cfg.overlap, d);
    row.norms = xnorm_error(sol, *problem.exact);
    if (!std::isfinite(row.norms.x_sq())) row.error = "non-finite error norm";
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

bool StudyReport::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const StudyRow& r) { return r.ok(); });
}

StudyReport run_convergence(const RunConfig& cfg, std::size_t workers, const ProgressFn& progress) {
  if (!cfg.study) throw ConfigError("converge: the configuration has no study section");
  if (!cfg.manufactured) throw ConfigError("problem.manufactured: convergence studies need the exact solution");
  const StudyConfig& st = *cfg.study;
  const ProblemSpec problem = cfg.problem();

  StudyReport report;
  report.rows.resize(st.resolutions.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, st.resolutions.size());

  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < st.resolutions.size(); i = next++) {
      report.rows[i] = run_entry(cfg, problem, st.resolutions[i]);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(report.rows[i]);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  report.fit_first = st.fit_window.first;
  report.fit_last = st.fit_window.second;
  std::vector<std::pair<double, double>> pts;
  bool window_ok = true;
  for (std::size_t i = report.fit_first - 1; i < report.fit_last; ++i) {
    const StudyRow& r = report.rows[i];
    if (!r.ok() || !(r.error_x() > 0.0)) window_ok = false;
    pts.emplace_back(r.resolution, r.error_x());
  }
  if (window_ok) {
    const double slope = lls_slope(pts);
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
      mx += std::log(x);
      my += std::log(y);
    }
    const double n = static_cast<double>(pts.size());
    report.slope = slope;
    report.fit_intercept = my / n - slope * mx / n;
  }
  return report;
}

void write_study_csv(std::ostream& out, const StudyReport& report, bool omit_timing) {
  out << "resolution,k,h0,hG,error_x,error_b,dt_outer,dt_inner,grad_outer,grad_inner,"
         "interface_flux,interface_jump,overlap_grad,time_jumps,final_trace,initial_trace,"
         "interface_time_jumps,runtime_s,status\n";
  std::ostringstream line;
  line.precision(12);
  for (const StudyRow& r : report.rows) {
    line.str("");
    const NormBreakdown& b = r.norms;
    line << r.resolution << ',' << r.k << ',' << r.h0 << ',' << r.hG << ',';
    if (r.ok())
      line << r.error_x() << ',' << r.error_b();
    else
      line << "nan,nan";
    for (double v : {b.dt_outer, b.dt_inner, b.energy.grad_outer, b.energy.grad_inner,
                     b.energy.flux, b.energy.jump, b.energy.overlap_grad, b.time_jumps,
                     b.final_trace, b.initial_trace, b.interface_jumps})
      line << ',' << v;
    line << ',' << (omit_timing ? 0.0 : r.runtime_s) << ',' << (r.ok() ? "ok" : csv_field(r.error))
         << '\n';
    out << line.str();
  }
}

std::string study_svg(const RunConfig& cfg, const StudyReport& report) {
  const StudyConfig& st = *cfg.study;
  LogLogPlot plot;
  const char* sym = st.sweep == Sweep::K ? "k" : "h";
  const int q = cfg.disc.time_degree;
  std::ostringstream title;
  title << cfg.name << ": dG(" << q << "), error vs " << sym;
  plot.title = title.str();
  plot.x_label = sym;
  plot.y_label = "X-norm error";
  for (const StudyRow& r : report.rows)
    if (r.ok() && r.error_x() > 0.0) plot.points.emplace_back(r.resolution, r.error_x());
  if (report.slope) {
    const double x0 = st.resolutions[report.fit_first - 1];
    const double x1 = st.resolutions[report.fit_last - 1];
    auto fit = [&](double x) { return std::exp(report.fit_intercept) * std::pow(x, *report.slope); };
    std::ostringstream label;
    label.precision(4);
    label << "LLS slope " << *report.slope;
    plot.lines.push_back({{{x0, fit(x0)}, {x1, fit(x1)}}, label.str(), "#d62728", false});
  }
  if (st.reference_slope && !plot.points.empty()) {
    const auto [xa, ya] = plot.points.front();
    const double xb = plot.points.back().first;
    const double yb = ya * std::pow(xb / xa, *st.reference_slope) * 0.5;
    std::ostringstream label;
    label << "reference slope " << *st.reference_slope;
    plot.lines.push_back({{{xa, ya * 0.5}, {xb, yb}}, label.str(), "#7f7f7f", true});
  }
  return render_svg(plot);
}

}  // namespace stcut::app
