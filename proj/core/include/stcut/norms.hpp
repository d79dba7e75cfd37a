#pragma once

// Space-time energy norms of discrete functions and of the error against an
// exact solution, plus least-squares slope fitting for convergence studies.

#include <cstddef>
#include <span>
#include <utility>

#include <Eigen/Core>

#include "stcut/core.hpp"
#include "stcut/geometry.hpp"
#include "stcut/spaces.hpp"

namespace stcut {

/// The four squared parts of the spatial energy norm at one time.
struct AnormParts {
  double grad_outer = 0.0;    ///< ||grad w||^2 on Omega_1(t)
  double grad_inner = 0.0;    ///< ||grad w||^2 on Omega_2(t)
  double flux = 0.0;          ///< |mu_bar| sum h_K <d_n w>^2 at the interfaces
  double jump = 0.0;          ///< |mu_bar| sum h_K^{-1} [w]^2 at the interfaces
  double overlap_grad = 0.0;  ///< ||[grad w]||^2 on Omega_O(t)

  double total() const noexcept { return grad_outer + grad_inner + flux + jump + overlap_grad; }
};

/// Energy norm parts of w - u at time t in the slab, where w has coefficients
/// `c` and u is `exact` (treated as zero when null). h_K is the size of the
/// background cell on the uncovered side of each interface.
AnormParts anorm_parts(const SlabSpace& space, const SlabGeometry& geom, const Eigen::VectorXd& c,
                       double t, double omega1, const ExactSolution* exact = nullptr);

double anorm_sq(const SlabSpace& space, const SlabGeometry& geom, const Eigen::VectorXd& c,
                double t, double omega1, const ExactSolution* exact = nullptr);

struct NormBreakdown {
  double dt_outer = 0.0;  ///< sum_n k_n int ||D_t e||^2 over Omega_1
  double dt_inner = 0.0;  ///< same over Omega_2
  AnormParts energy;      ///< time integrals of the energy norm parts
  double time_jumps = 0.0;       ///< sum over interior t_n of ||[e]_n||^2
  double final_trace = 0.0;      ///< ||e_N^-||^2
  double initial_trace = 0.0;    ///< ||e_0^+||^2
  double interface_jumps = 0.0;  ///< sum_n int |mu| [e]^2 dt over both interfaces

  double b_sq() const noexcept {
    return energy.total() + time_jumps + final_trace + initial_trace + interface_jumps;
  }
  double x_sq() const noexcept { return dt_outer + dt_inner + b_sq(); }
};

/// X-norm breakdown of e = u - u_h. Time integrals use three-point
/// Gauss-Legendre on every panel of the slab, space integrals the same rule
/// on every segment of the spatial partition.
NormBreakdown xnorm_error(const SpaceTimeSolution& sol, const ExactSolution& exact);

/// X-norm breakdown of a discrete function.
NormBreakdown xnorm(const SpaceTimeSolution& sol);

/// Least-squares slope of log(error) against log(resolution) over the
/// 1-based inclusive index window [first, last].
double lls_slope(std::span<const std::pair<double, double>> points, std::size_t first,
                 std::size_t last);
double lls_slope(std::span<const std::pair<double, double>> points);

/// ||u0||_{L2(omega)} by three-point Gauss-Legendre on `cells` equal cells.
double l2_norm(const SpatialFunction& u0, Interval omega, std::size_t cells = 1024);

/// ||f||_{L2(0,T; L2(omega))} by tensor three-point Gauss-Legendre.
double l2l2_norm(const SpaceTimeFunction& f, Interval omega, double final_time,
                 std::size_t cells = 256, std::size_t steps = 256);

}  // namespace stcut
