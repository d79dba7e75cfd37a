#pragma once

// Problem, overlap and discretization descriptions shared by every module.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace stcut {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

using SpaceTimeFunction = std::function<double(double x, double t)>;
using SpatialFunction = std::function<double(double x)>;
using TimeFunction = std::function<double(double t)>;

struct ExactSolution {
  SpaceTimeFunction u;
  SpaceTimeFunction u_x;
  SpaceTimeFunction u_t;
};

/// Heat equation u_t - u_xx = f on omega x (0, T], u = 0 on the boundary.
struct ProblemSpec {
  Interval omega{0.0, 1.0};
  double final_time = 1.0;
  SpaceTimeFunction source;
  SpatialFunction initial;
  std::optional<ExactSolution> exact;

  /// Throws InvalidArgument on an empty domain, T <= 0, missing callables,
  /// or an exact solution that violates the homogeneous boundary condition.
  void validate() const;
};

enum class VelocitySampling {
  SlabEnd,      ///< mu(t_n) held on (t_{n-1}, t_n]
  SlabAverage,  ///< k_n^{-1} * integral of mu over the slab
};

/// The moving subdomain G = (a(t), a(t) + length), translated rigidly.
struct OverlapSpec {
  double length = 0.25;
  double initial_left = 0.125;
  std::variant<double, TimeFunction> velocity = 0.0;
  VelocitySampling sampling = VelocitySampling::SlabEnd;

  double initial_right() const noexcept { return initial_left + length; }
};

/// p = 1 in space is fixed; q selects dG(0) or dG(1) in time.
struct Discretization {
  std::size_t n_background = 16;
  std::size_t n_overlap = 4;
  std::size_t n_slabs = 8;
  int time_degree = 0;
  double gamma = 10.0;
  double omega1 = 0.5;

  double omega2() const noexcept { return 1.0 - omega1; }
  void validate() const;
};

/// Sorted node coordinates of a 1D simplicial mesh.
class Mesh1D {
 public:
  explicit Mesh1D(std::vector<double> nodes);

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  std::size_t n_nodes() const noexcept { return nodes_.size(); }
  std::size_t n_cells() const noexcept { return nodes_.size() - 1; }
  double node(std::size_t i) const { return nodes_[i]; }
  double cell_size(std::size_t c) const { return nodes_[c + 1] - nodes_[c]; }
  double lo() const noexcept { return nodes_.front(); }
  double hi() const noexcept { return nodes_.back(); }
  double max_cell_size() const;
  double min_cell_size() const;

  /// Cell c with node(c) <= x < node(c+1); clamped to the first/last cell.
  std::size_t locate(double x) const;

 private:
  std::vector<double> nodes_;
};

/// n_cells + 1 equally spaced nodes; throws InvalidArgument for n_cells == 0.
Mesh1D make_uniform_mesh(Interval interval, std::size_t n_cells);

/// Slab breakpoints t_0 = 0 < ... < t_N = T, with the slabwise constant
/// velocity of the overlapping mesh and its accumulated displacement.
struct TimePartition {
  std::vector<double> breakpoints;
  std::vector<double> velocities;
  std::vector<double> offsets;  ///< displacement at each breakpoint, offsets[0] = 0

  std::size_t n_slabs() const noexcept { return velocities.size(); }
  double start(std::size_t slab) const { return breakpoints[slab]; }
  double end(std::size_t slab) const { return breakpoints[slab + 1]; }
  double length(std::size_t slab) const { return end(slab) - start(slab); }
  double final_time() const { return breakpoints.back(); }

  /// Slab n with t in (t_n, t_{n+1}]; t = 0 maps to slab 0.
  std::size_t slab_containing(double t) const;
  /// Displacement of the overlapping mesh at time t (continuous, piecewise linear).
  double offset_at(double t) const;

  void validate() const;
};

/// Velocity of slab `slab` (zero-based) for the breakpoints given.
double slab_velocity(const OverlapSpec& spec, std::span<const double> breakpoints,
                     std::size_t slab);

/// Uniform partition of (0, T] into n_slabs slabs with velocities from `spec`.
TimePartition make_time_partition(const OverlapSpec& spec, double final_time,
                                  std::size_t n_slabs);

/// Everything geometric about a run: both meshes and the time partition.
struct Layout {
  Interval omega;
  Mesh1D background;
  Mesh1D overlap;  ///< node positions at t = 0
  TimePartition time;

  /// Length below which segments and cuts are treated as degenerate.
  double tolerance() const noexcept { return 1e-12 * omega.length(); }
  double left_interface(double t) const { return overlap.lo() + time.offset_at(t); }
  double right_interface(double t) const { return overlap.hi() + time.offset_at(t); }
};

/// Builds and validates a layout. Throws GeometryError when G does not stay
/// strictly inside omega (margin 1e-12) for all t in [0, T].
std::shared_ptr<const Layout> make_layout(const ProblemSpec& problem,
                                          const OverlapSpec& overlap,
                                          const Discretization& disc);

/// Same checks for a hand-built layout.
void validate_layout(const Layout& layout);

/// u = sin^2(pi x) e^{-t/2} on [0,1] x (0, 1] with the matching source.
ProblemSpec manufactured_problem();

/// f = 0, u0 = 0, exact solution identically zero.
ProblemSpec zero_problem(Interval omega = {0.0, 1.0}, double final_time = 1.0);

/// Ratios h^2 / k_min and k / h_min; reported, never enforced.
struct QuasiUniformity {
  double h_squared_over_kmin;
  double k_over_hmin;
};
QuasiUniformity quasi_uniformity(const Layout& layout);

}  // namespace stcut
