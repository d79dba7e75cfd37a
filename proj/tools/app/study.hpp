#pragma once

// Convergence studies: one march per resolution, X-norm error against the
// manufactured solution, least-squares slope over a window.

#include <cmath>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "stcut/norms.hpp"

namespace stcut::app {

struct StudyRow {
  double resolution = 0.0;
  double k = 0.0;
  double h0 = 0.0;
  double hG = 0.0;
  NormBreakdown norms;
  double runtime_s = 0.0;
  std::string error;  ///< empty on success

  bool ok() const noexcept { return error.empty(); }
  double error_x() const { return std::sqrt(norms.x_sq()); }
  double error_b() const { return std::sqrt(norms.b_sq()); }
};

struct StudyReport {
  std::vector<StudyRow> rows;  ///< in input order
  std::optional<double> slope;  ///< empty when a row of the fit window failed
  std::size_t fit_first = 1;
  std::size_t fit_last = 0;
  double fit_intercept = 0.0;  ///< log(error) = intercept + slope log(resolution)

  bool all_ok() const;
};

using ProgressFn = std::function<void(const StudyRow&)>;

/// Runs every sweep entry, at most `workers` at a time (0: hardware threads).
/// Failures are recorded in the row and do not stop the study.
StudyReport run_convergence(const RunConfig& cfg, std::size_t workers = 0,
                            const ProgressFn& progress = {});

/// Header plus one row per entry. With `omit_timing` runtime_s is written as 0
/// so that repeated runs produce identical files.
void write_study_csv(std::ostream& out, const StudyReport& report, bool omit_timing);

/// Log-log plot of the errors with the fitted line and the reference slope.
std::string study_svg(const RunConfig& cfg, const StudyReport& report);

}  // namespace stcut::app
