#include "stcut/spaces.hpp"

#include <cmath>
#include <string>

#include "stcut/errors.hpp"

namespace stcut {

TemporalBasis::TemporalBasis(int degree, double t_start, double t_end)
    : degree_(degree), t_start_(t_start), t_end_(t_end) {
  if (degree != 0 && degree != 1) throw InvalidArgument("temporal degree must be 0 or 1");
}

double TemporalBasis::value(int mode, double t) const noexcept {
  if (degree_ == 0) return 1.0;
  const double s = (t - t_start_) / (t_end_ - t_start_);
  return mode == 0 ? 1.0 - s : s;
}

double TemporalBasis::derivative(int mode) const noexcept {
  if (degree_ == 0) return 0.0;
  const double inv_k = 1.0 / (t_end_ - t_start_);
  return mode == 0 ? -inv_k : inv_k;
}

LocalShape background_shape(const Mesh1D& mesh, std::size_t cell, double x) {
  const double x0 = mesh.node(cell);
  const double x1 = mesh.node(cell + 1);
  const double inv_h = 1.0 / (x1 - x0);
  return {{cell, cell + 1}, {(x1 - x) * inv_h, (x - x0) * inv_h}, {-inv_h, inv_h}};
}

SlabSpace::SlabSpace(const SlabGeometry& geom, int time_degree)
    : slab_(geom.slab),
      n_overlap_(geom.overlap().n_nodes()),
      time_(time_degree, geom.t_start, geom.t_end) {
  const Mesh1D& bg = geom.background();
  bg_index_.assign(bg.n_nodes(), -1);
  for (std::size_t j = 1; j + 1 < bg.n_nodes(); ++j) {
    const bool needed =
        geom.cells[j - 1] != CellState::Covered || geom.cells[j] != CellState::Covered;
    if (!needed) continue;
    bg_index_[j] = static_cast<std::ptrdiff_t>(bg_nodes_.size());
    bg_nodes_.push_back(j);
  }
}

std::optional<std::size_t> SlabSpace::background_dof(std::size_t node) const {
  if (node >= bg_index_.size() || bg_index_[node] < 0) return std::nullopt;
  return static_cast<std::size_t>(bg_index_[node]);
}

std::vector<double> SlabSpace::column_positions(const SlabGeometry& geom) const {
  std::vector<double> pos(n_columns());
  for (std::size_t dof = 0; dof < n_spatial(); ++dof) {
    const double x = is_background(dof) ? geom.background().node(node_of(dof))
                                        : geom.overlap_node(node_of(dof), geom.t_start);
    for (int m = 0; m < n_modes(); ++m) pos[column(dof, m)] = x;
  }
  return pos;
}

SlabSpace build_slab_space(const SlabGeometry& geom, const Discretization& disc) {
  return SlabSpace(geom, disc.time_degree);
}

namespace {

void check_slab_time(const SlabGeometry& geom, double t) {
  const double slack = 1e-12 * geom.duration();
  if (t < geom.t_start - slack || t > geom.t_end + slack)
    throw InvalidArgument("time " + std::to_string(t) + " outside slab [" +
                          std::to_string(geom.t_start) + ", " + std::to_string(geom.t_end) + "]");
}

// Value and slope of a global hat on `mesh` at x (zero outside its support).
std::pair<double, double> hat(const Mesh1D& mesh, std::size_t node, double x) {
  if (x < mesh.lo() || x > mesh.hi()) return {0.0, 0.0};
  const std::size_t cell = mesh.locate(x);
  const LocalShape s = background_shape(mesh, cell, x);
  for (int i = 0; i < 2; ++i)
    if (s.nodes[i] == node) return {s.value[i], s.deriv[i]};
  return {0.0, 0.0};
}

}  // namespace

BasisValue eval_basis(const SlabSpace& space, const SlabGeometry& geom, std::size_t dof, int mode,
                      double x, double t) {
  check_slab_time(geom, t);
  if (dof >= space.n_spatial() || mode < 0 || mode >= space.n_modes())
    throw InvalidArgument("eval_basis: dof or mode out of range");
  const TemporalBasis& tb = space.time_basis();
  const double lam = tb.value(mode, t);
  const double dlam = tb.derivative(mode);
  if (space.is_background(dof)) {
    const auto [phi, dphi] = hat(geom.background(), space.node_of(dof), x);
    return {phi * lam, dphi * lam, phi * dlam, phi * dlam};
  }
  const auto [phi, dphi] = hat(geom.overlap(), space.node_of(dof), x - geom.offset(t));
  const double dt = phi * dlam - geom.velocity * dphi * lam;
  return {phi * lam, dphi * lam, dt, dt + geom.velocity * dphi * lam};
}

std::shared_ptr<const SpaceTimeDiscretization> build_discretization(
    std::shared_ptr<const Layout> layout, const Discretization& disc) {
  disc.validate();
  auto out = std::make_shared<SpaceTimeDiscretization>();
  out->layout = layout;
  out->params = disc;
  out->slabs.reserve(layout->time.n_slabs());
  for (std::size_t n = 0; n < layout->time.n_slabs(); ++n) {
    SlabGeometry g = build_slab_geometry(layout, n);
    SlabSpace s = build_slab_space(g, disc);
    out->slabs.push_back({std::move(g), std::move(s)});
  }
  return out;
}

SpaceTimeSolution make_zero_function(std::shared_ptr<const SpaceTimeDiscretization> disc) {
  SpaceTimeSolution sol{std::move(disc), {}};
  for (const SlabData& s : sol.discretization->slabs)
    sol.coefficients.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.space.n_columns())));
  return sol;
}

PointValue eval_side(const SlabSpace& space, const SlabGeometry& geom, const Eigen::VectorXd& c,
                     Side side, std::size_t cell, double x, double t) {
  const TemporalBasis& tb = space.time_basis();
  const int modes = space.n_modes();
  PointValue out;
  out.side = side;
  if (side == Side::Outer) {
    const LocalShape s = background_shape(geom.background(), cell, x);
    for (int i = 0; i < 2; ++i) {
      const auto dof = space.background_dof(s.nodes[i]);
      if (!dof) continue;
      for (int m = 0; m < modes; ++m) {
        const double coef = c[static_cast<Eigen::Index>(space.column(*dof, m))];
        const double lam = tb.value(m, t);
        out.value += coef * s.value[i] * lam;
        out.dx += coef * s.deriv[i] * lam;
        out.dt += coef * s.value[i] * tb.derivative(m);
      }
    }
    out.Dt = out.dt;
    return out;
  }
  const double shift = geom.offset(t);
  const LocalShape s = background_shape(geom.overlap(), cell, x - shift);
  double transported = 0.0;
  for (int i = 0; i < 2; ++i) {
    const std::size_t dof = space.overlap_dof(s.nodes[i]);
    for (int m = 0; m < modes; ++m) {
      const double coef = c[static_cast<Eigen::Index>(space.column(dof, m))];
      const double lam = tb.value(m, t);
      out.value += coef * s.value[i] * lam;
      out.dx += coef * s.deriv[i] * lam;
      transported += coef * s.value[i] * tb.derivative(m);
    }
  }
  out.Dt = transported;
  out.dt = transported - geom.velocity * out.dx;
  return out;
}

PointValue eval_on_slab(const SpaceTimeSolution& sol, std::size_t slab, double x, double t,
                        SideSelect side) {
  const SpaceTimeDiscretization& disc = *sol.discretization;
  if (slab >= disc.n_slabs()) throw InvalidArgument("eval_on_slab: slab out of range");
  const SlabData& sd = disc.slabs[slab];
  const SlabGeometry& g = sd.geometry;
  check_slab_time(g, t);
  const Interval omega = disc.layout->omega;
  const double tol = disc.layout->tolerance();
  if (x < omega.lo - tol || x > omega.hi + tol)
    throw InvalidArgument("eval_on_slab: x outside the domain");

  Side s = Side::Outer;
  switch (side) {
    case SideSelect::Automatic:
      s = g.inside(x, t) ? Side::Inner : Side::Outer;
      break;
    case SideSelect::Outer:
      s = Side::Outer;
      break;
    case SideSelect::Inner:
      if (x < g.left.at(t) - tol || x > g.right.at(t) + tol)
        throw InvalidArgument("eval_on_slab: x is outside the overlapping mesh");
      s = Side::Inner;
      break;
  }
  const std::size_t cell = s == Side::Outer ? g.background().locate(x)
                                            : g.overlap().locate(x - g.offset(t));
  return eval_side(sd.space, g, sol.coefficients[slab], s, cell, x, t);
}

PointValue eval_solution(const SpaceTimeSolution& sol, double x, double t, SideSelect side) {
  const TimePartition& time = sol.discretization->layout->time;
  if (t < 0.0 || t > time.final_time()) throw InvalidArgument("eval_solution: t outside [0, T]");
  return eval_on_slab(sol, time.slab_containing(t), x, t, side);
}

PointValue eval_trace(const SpaceTimeSolution& sol, std::size_t time_index, double x, Trace trace,
                      SideSelect side) {
  const TimePartition& time = sol.discretization->layout->time;
  if (time_index > time.n_slabs()) throw InvalidArgument("eval_trace: index out of range");
  if (trace == Trace::Minus) {
    if (time_index == 0) throw InvalidArgument("eval_trace: no minus trace at t = 0");
    return eval_on_slab(sol, time_index - 1, x, time.breakpoints[time_index], side);
  }
  if (time_index == time.n_slabs()) throw InvalidArgument("eval_trace: no plus trace at t = T");
  return eval_on_slab(sol, time_index, x, time.breakpoints[time_index], side);
}

}  // namespace stcut
