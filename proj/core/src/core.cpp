#include "stcut/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "stcut/errors.hpp"

namespace stcut {

void ProblemSpec::validate() const {
  if (!(omega.lo < omega.hi)) throw InvalidArgument("problem: empty spatial domain");
  if (!(final_time > 0.0)) throw InvalidArgument("problem: final time must be positive");
  if (!source || !initial) throw InvalidArgument("problem: source and initial data required");
  if (exact) {
    if (!exact->u || !exact->u_x || !exact->u_t)
      throw InvalidArgument("problem: exact solution needs u, u_x and u_t");
    constexpr int kSamples = 16;
    for (int i = 0; i <= kSamples; ++i) {
      const double t = final_time * i / kSamples;
      if (std::abs(exact->u(omega.lo, t)) > 1e-12 || std::abs(exact->u(omega.hi, t)) > 1e-12)
        throw InvalidArgument("problem: exact solution violates the Dirichlet condition");
    }
  }
}

void Discretization::validate() const {
  if (n_background == 0 || n_overlap == 0 || n_slabs == 0)
    throw InvalidArgument("discretization: cell and slab counts must be positive");
  if (time_degree != 0 && time_degree != 1)
    throw InvalidArgument("discretization: time degree must be 0 or 1");
  if (!(gamma >= 0.0)) throw InvalidArgument("discretization: gamma must be nonnegative");
  if (!(omega1 >= 0.0 && omega1 <= 1.0))
    throw InvalidArgument("discretization: omega1 must lie in [0, 1]");
}

Mesh1D::Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw InvalidArgument("mesh needs at least two nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1])) throw InvalidArgument("mesh nodes must be strictly increasing");
}

double Mesh1D::max_cell_size() const {
  double h = 0.0;
  for (std::size_t c = 0; c < n_cells(); ++c) h = std::max(h, cell_size(c));
  return h;
}

double Mesh1D::min_cell_size() const {
  double h = cell_size(0);
  for (std::size_t c = 1; c < n_cells(); ++c) h = std::min(h, cell_size(c));
  return h;
}

std::size_t Mesh1D::locate(double x) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  if (it == nodes_.begin()) return 0;
  const auto c = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(c, n_cells() - 1);
}

Mesh1D make_uniform_mesh(Interval interval, std::size_t n_cells) {
  if (n_cells == 0) throw InvalidArgument("make_uniform_mesh: n_cells must be >= 1");
  if (!(interval.lo < interval.hi)) throw InvalidArgument("make_uniform_mesh: empty interval");
  std::vector<double> nodes(n_cells + 1);
  const double h = interval.length() / static_cast<double>(n_cells);
  for (std::size_t i = 0; i <= n_cells; ++i) nodes[i] = interval.lo + h * static_cast<double>(i);
  nodes.back() = interval.hi;
  return Mesh1D(std::move(nodes));
}

std::size_t TimePartition::slab_containing(double t) const {
  auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - breakpoints.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, n_slabs() - 1);
}

double TimePartition::offset_at(double t) const {
  const std::size_t n = slab_containing(t);
  return offsets[n] + velocities[n] * (t - breakpoints[n]);
}

void TimePartition::validate() const {
  if (breakpoints.size() < 2 || velocities.size() + 1 != breakpoints.size() ||
      offsets.size() != breakpoints.size())
    throw InvalidArgument("time partition: inconsistent sizes");
  if (breakpoints.front() != 0.0) throw InvalidArgument("time partition must start at 0");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw InvalidArgument("time partition must be strictly increasing");
}

double slab_velocity(const OverlapSpec& spec, std::span<const double> breakpoints,
                     std::size_t slab) {
  if (slab + 1 >= breakpoints.size()) throw InvalidArgument("slab_velocity: slab out of range");
  if (const double* mu = std::get_if<double>(&spec.velocity)) return *mu;
  const auto& mu = std::get<TimeFunction>(spec.velocity);
  const double t0 = breakpoints[slab];
  const double t1 = breakpoints[slab + 1];
  switch (spec.sampling) {
    case VelocitySampling::SlabEnd:
      return mu(t1);
    case VelocitySampling::SlabAverage: {
      using boost::math::quadrature::gauss_kronrod;
      const double integral = gauss_kronrod<double, 15>::integrate(mu, t0, t1, 10, 1e-13);
      return integral / (t1 - t0);
    }
  }
  return 0.0;
}

TimePartition make_time_partition(const OverlapSpec& spec, double final_time,
                                  std::size_t n_slabs) {
  if (n_slabs == 0) throw InvalidArgument("make_time_partition: need at least one slab");
  if (!(final_time > 0.0)) throw InvalidArgument("make_time_partition: final time must be positive");
  TimePartition part;
  part.breakpoints.resize(n_slabs + 1);
  const double k = final_time / static_cast<double>(n_slabs);
  for (std::size_t n = 0; n <= n_slabs; ++n) part.breakpoints[n] = k * static_cast<double>(n);
  part.breakpoints.back() = final_time;
  part.velocities.resize(n_slabs);
  part.offsets.assign(n_slabs + 1, 0.0);
  for (std::size_t n = 0; n < n_slabs; ++n) {
    part.velocities[n] = slab_velocity(spec, part.breakpoints, n);
    part.offsets[n + 1] = part.offsets[n] + part.velocities[n] * part.length(n);
  }
  return part;
}

void validate_layout(const Layout& layout) {
  layout.time.validate();
  if (std::abs(layout.background.lo() - layout.omega.lo) > layout.tolerance() ||
      std::abs(layout.background.hi() - layout.omega.hi) > layout.tolerance())
    throw InvalidArgument("layout: background mesh must span the domain");
  constexpr double kMargin = 1e-12;
  // Piecewise-linear motion: checking the breakpoints covers all of [0, T].
  for (std::size_t n = 0; n < layout.time.breakpoints.size(); ++n) {
    const double t = layout.time.breakpoints[n];
    const double a = layout.overlap.lo() + layout.time.offsets[n];
    const double b = layout.overlap.hi() + layout.time.offsets[n];
    if (!(a > layout.omega.lo + kMargin) || !(b < layout.omega.hi - kMargin))
      throw GeometryError("overlapping mesh [" + std::to_string(a) + ", " + std::to_string(b) +
                          "] leaves the interior of the domain at t = " + std::to_string(t));
  }
}

std::shared_ptr<const Layout> make_layout(const ProblemSpec& problem, const OverlapSpec& overlap,
                                          const Discretization& disc) {
  problem.validate();
  disc.validate();
  if (!(overlap.length > 0.0)) throw InvalidArgument("overlap: length must be positive");
  auto layout = std::make_shared<Layout>(Layout{
      problem.omega,
      make_uniform_mesh(problem.omega, disc.n_background),
      make_uniform_mesh({overlap.initial_left, overlap.initial_right()}, disc.n_overlap),
      make_time_partition(overlap, problem.final_time, disc.n_slabs),
  });
  validate_layout(*layout);
  return layout;
}

ProblemSpec manufactured_problem() {
  using std::numbers::pi;
  ProblemSpec p;
  p.omega = {0.0, 1.0};
  p.final_time = 1.0;
  p.initial = [](double x) {
    const double s = std::sin(pi * x);
    return s * s;
  };
  p.source = [](double x, double t) {
    const double s = std::sin(pi * x);
    return std::exp(-0.5 * t) * (-0.5 * s * s - 2.0 * pi * pi * std::cos(2.0 * pi * x));
  };
  ExactSolution exact;
  exact.u = [](double x, double t) {
    const double s = std::sin(pi * x);
    return s * s * std::exp(-0.5 * t);
  };
  exact.u_x = [](double x, double t) { return pi * std::sin(2.0 * pi * x) * std::exp(-0.5 * t); };
  exact.u_t = [](double x, double t) {
    const double s = std::sin(pi * x);
    return -0.5 * s * s * std::exp(-0.5 * t);
  };
  p.exact = std::move(exact);
  return p;
}

ProblemSpec zero_problem(Interval omega, double final_time) {
  ProblemSpec p;
  p.omega = omega;
  p.final_time = final_time;
  p.initial = [](double) { return 0.0; };
  p.source = [](double, double) { return 0.0; };
  const SpaceTimeFunction zero = [](double, double) { return 0.0; };
  p.exact = ExactSolution{zero, zero, zero};
  return p;
}

QuasiUniformity quasi_uniformity(const Layout& layout) {
  const double h = std::max(layout.background.max_cell_size(), layout.overlap.max_cell_size());
  const double h_min = std::min(layout.background.min_cell_size(), layout.overlap.min_cell_size());
  double k = 0.0;
  double k_min = layout.time.length(0);
  for (std::size_t n = 0; n < layout.time.n_slabs(); ++n) {
    k = std::max(k, layout.time.length(n));
    k_min = std::min(k_min, layout.time.length(n));
  }
  return {h * h / k_min, k / h_min};
}

}  // namespace stcut
