#include "stcut/norms.hpp"

#include <cmath>
#include <string>

#include "stcut/errors.hpp"
#include "stcut/quadrature.hpp"

namespace stcut {

namespace {

struct ExactPoint {
  double u = 0.0, u_x = 0.0, u_t = 0.0;
};

ExactPoint exact_at(const ExactSolution* exact, double x, double t) {
  if (!exact) return {};
  return {exact->u(x, t), exact->u_x(x, t), exact->u_t(x, t)};
}

std::size_t segment_cell(const Segment& s) {
  return s.side == Side::Outer ? s.background_cell : *s.overlap_cell;
}

struct InterfaceTerms {
  double flux = 0.0;     ///< |mu_bar| sum h_K <d_n e>^2 with the space-time unit normal
  double jump = 0.0;     ///< |mu_bar| sum [e]^2 / h_K
  double jump_sq = 0.0;  ///< sum [e]^2
};

InterfaceTerms interface_terms(const SlabSpace& space, const SlabGeometry& geom,
                               const Eigen::VectorXd& c, double t, double omega1,
                               const ExactSolution* exact) {
  InterfaceTerms out;
  const double mu = geom.velocity;
  const double mubar = std::sqrt(mu * mu + 1.0);
  const std::size_t last_ov = geom.overlap().n_cells() - 1;
  for (Interface side : {Interface::Left, Interface::Right}) {
    const double x = geom.interface(side, t);
    const std::size_t bc = outer_cell(geom, side, t);
    const double h = geom.background().cell_size(bc);
    const PointValue w1 = eval_side(space, geom, c, Side::Outer, bc, x, t);
    const PointValue w2 =
        eval_side(space, geom, c, Side::Inner, side == Interface::Left ? 0 : last_ov, x, t);
    const ExactPoint u = exact_at(exact, x, t);
    // the normal sign drops out of the square; |mu_bar| |n_x|^2 = 1 / |mu_bar|
    const double avg = omega1 * (w1.dx - u.u_x) + (1.0 - omega1) * (w2.dx - u.u_x);
    const double jump = w1.value - w2.value;
    out.flux += h * avg * avg / mubar;
    out.jump += mubar * jump * jump / h;
    out.jump_sq += jump * jump;
  }
  return out;
}

// Energy norm parts at one time over the full spatial partition.
AnormParts energy_at(const SlabSpace& space, const SlabGeometry& geom, const Eigen::VectorXd& c,
                     double t, double omega1, const ExactSolution* exact) {
  AnormParts out;
  const Rule1D gl = gauss_legendre3();
  for (const Segment& seg : spatial_partition(geom, t).segments) {
    const std::size_t cell = segment_cell(seg);
    for (const QuadPoint& p : map_rule(gl, seg.a, seg.b)) {
      const double grad = eval_side(space, geom, c, seg.side, cell, p.x, t).dx -
                          exact_at(exact, p.x, t).u_x;
      (seg.side == Side::Outer ? out.grad_outer : out.grad_inner) += p.weight * grad * grad;
    }
  }
  const InterfaceTerms it = interface_terms(space, geom, c, t, omega1, exact);
  out.flux = it.flux;
  out.jump = it.jump;
  for (const Segment& seg : overlap_segments(geom, t)) {
    const PointValue w1 = eval_side(space, geom, c, Side::Outer, seg.background_cell, seg.midpoint(), t);
    const PointValue w2 = eval_side(space, geom, c, Side::Inner, *seg.overlap_cell, seg.midpoint(), t);
    const double d = w1.dx - w2.dx;
    out.overlap_grad += seg.length() * d * d;
  }
  return out;
}

// ||u_h(t) - u(t)||^2 on one slab at an end time.
double trace_error_sq(const SlabData& sd, const Eigen::VectorXd& c, double t,
                      const ExactSolution* exact) {
  const Rule1D gl = gauss_legendre3();
  double sum = 0.0;
  for (const Segment& seg : spatial_partition(sd.geometry, t).segments) {
    const std::size_t cell = segment_cell(seg);
    for (const QuadPoint& p : map_rule(gl, seg.a, seg.b)) {
      const double uh = eval_side(sd.space, sd.geometry, c, seg.side, cell, p.x, t).value;
      const double e = uh - (exact ? exact->u(p.x, t) : 0.0);
      sum += p.weight * e * e;
    }
  }
  return sum;
}

// ||u_h^+ - u_h^-||^2 at the start of slab `cur`.
double time_jump_sq(const SlabData& prev, const Eigen::VectorXd& cp, const SlabData& cur,
                    const Eigen::VectorXd& cc) {
  const SlabGeometry& gc = cur.geometry;
  const SlabGeometry& gp = prev.geometry;
  const double t = gc.t_start;
  const Rule1D gl = gauss_legendre3();
  double sum = 0.0;
  for (const Segment& seg : spatial_partition(gc, t).segments) {
    const double m = seg.midpoint();
    const Side side_p = gp.inside(m, t) ? Side::Inner : Side::Outer;
    const std::size_t cell_p =
        side_p == Side::Outer ? gp.background().locate(m) : gp.overlap().locate(m - gp.offset(t));
    for (const QuadPoint& p : map_rule(gl, seg.a, seg.b)) {
      const double plus = eval_side(cur.space, gc, cc, seg.side, segment_cell(seg), p.x, t).value;
      const double minus = eval_side(prev.space, gp, cp, side_p, cell_p, p.x, t).value;
      sum += p.weight * (plus - minus) * (plus - minus);
    }
  }
  return sum;
}

// Squared error of value, gradient and time derivative on [a, b] at time t.
struct VolumeTerms {
  double grad = 0.0;
  double dt = 0.0;
};

VolumeTerms volume_terms(const SlabSpace& space, const SlabGeometry& geom, const Eigen::VectorXd& c,
                         Side side, std::size_t cell, double a, double b, double t,
                         const ExactSolution* exact) {
  static const Rule1D gl = gauss_legendre3();
  const double mu = geom.velocity;
  VolumeTerms out;
  for (const QuadPoint& p : map_rule(gl, a, b)) {
    const PointValue uh = eval_side(space, geom, c, side, cell, p.x, t);
    const ExactPoint u = exact_at(exact, p.x, t);
    const double grad = uh.dx - u.u_x;
    const double d = side == Side::Outer ? uh.dt - u.u_t : uh.Dt - (u.u_t + mu * u.u_x);
    out.grad += p.weight * grad * grad;
    out.dt += p.weight * d * d;
  }
  return out;
}

// One slab: uncut background cells and the moving overlapping cells with a
// single time panel, cut cells with panels local to the cell, interface
// terms with panels between events.
void add_slab(NormBreakdown& nb, const SlabData& sd, const Eigen::VectorXd& c, double omega1,
              const ExactSolution* exact) {
  const SlabGeometry& g = sd.geometry;
  const SlabSpace& space = sd.space;
  const Mesh1D& bg = g.background();
  const Mesh1D& ov = g.overlap();
  const double k = g.duration();
  const Rule1D gl = gauss_legendre3();
  const std::vector<QuadPoint> slab_rule = map_rule(gl, g.t_start, g.t_end);

  for (std::size_t cell = 0; cell < bg.n_cells(); ++cell) {
    if (g.cells[cell] == CellState::Exterior) {
      for (const QuadPoint& tp : slab_rule) {
        const VolumeTerms v = volume_terms(space, g, c, Side::Outer, cell, bg.node(cell),
                                           bg.node(cell + 1), tp.x, exact);
        nb.energy.grad_outer += tp.weight * v.grad;
        nb.dt_outer += k * tp.weight * v.dt;
      }
      continue;
    }
    if (g.cells[cell] != CellState::Cut) continue;
    const std::vector<double> breaks = g.cell_breaks(cell, true);
    for (const QuadPoint& tp : composite_rule(g.t_start, g.t_end, breaks, gl)) {
      for (const Segment& seg : spatial_partition(g, tp.x, bg.node(cell), bg.node(cell + 1)).segments) {
        if (seg.side == Side::Outer) {
          const VolumeTerms v = volume_terms(space, g, c, Side::Outer, cell, seg.a, seg.b, tp.x, exact);
          nb.energy.grad_outer += tp.weight * v.grad;
          nb.dt_outer += k * tp.weight * v.dt;
        } else {
          const double m = seg.midpoint();
          const PointValue w1 = eval_side(space, g, c, Side::Outer, cell, m, tp.x);
          const PointValue w2 = eval_side(space, g, c, Side::Inner, *seg.overlap_cell, m, tp.x);
          const double d = w1.dx - w2.dx;
          nb.energy.overlap_grad += tp.weight * seg.length() * d * d;
        }
      }
    }
  }

  for (const QuadPoint& tp : slab_rule) {
    const double shift = g.offset(tp.x);
    for (std::size_t cell = 0; cell < ov.n_cells(); ++cell) {
      const VolumeTerms v = volume_terms(space, g, c, Side::Inner, cell, ov.node(cell) + shift,
                                         ov.node(cell + 1) + shift, tp.x, exact);
      nb.energy.grad_inner += tp.weight * v.grad;
      nb.dt_inner += k * tp.weight * v.dt;
    }
  }

  const double mu = g.velocity;
  for (const QuadPoint& tp : composite_rule(g.t_start, g.t_end, g.events, gl)) {
    const InterfaceTerms it = interface_terms(space, g, c, tp.x, omega1, exact);
    nb.energy.flux += tp.weight * it.flux;
    nb.energy.jump += tp.weight * it.jump;
    nb.interface_jumps += tp.weight * std::abs(mu) * it.jump_sq;
  }
}

NormBreakdown breakdown(const SpaceTimeSolution& sol, const ExactSolution* exact) {
  if (!sol.discretization) throw InvalidArgument("norm: solution without discretization");
  const SpaceTimeDiscretization& disc = *sol.discretization;
  if (sol.coefficients.size() != disc.n_slabs())
    throw InvalidArgument("norm: coefficient count does not match the slabs");
  NormBreakdown nb;
  for (std::size_t n = 0; n < disc.n_slabs(); ++n) {
    const SlabData& sd = disc.slabs[n];
    const Eigen::VectorXd& c = sol.coefficients[n];
    if (c.size() != static_cast<Eigen::Index>(sd.space.n_columns()))
      throw InvalidArgument("norm: coefficient vector of slab " + std::to_string(n) +
                            " has the wrong size");
    add_slab(nb, sd, c, disc.params.omega1, exact);
    if (n == 0) nb.initial_trace = trace_error_sq(sd, c, sd.geometry.t_start, exact);
    if (n + 1 == disc.n_slabs()) nb.final_trace = trace_error_sq(sd, c, sd.geometry.t_end, exact);
    if (n > 0) nb.time_jumps += time_jump_sq(disc.slabs[n - 1], sol.coefficients[n - 1], sd, c);
  }
  return nb;
}

}  // namespace

AnormParts anorm_parts(const SlabSpace& space, const SlabGeometry& geom, const Eigen::VectorXd& c,
                       double t, double omega1, const ExactSolution* exact) {
  if (c.size() != static_cast<Eigen::Index>(space.n_columns()))
    throw InvalidArgument("anorm_parts: coefficient vector has the wrong size");
  return energy_at(space, geom, c, t, omega1, exact);
}

double anorm_sq(const SlabSpace& space, const SlabGeometry& geom, const Eigen::VectorXd& c,
                double t, double omega1, const ExactSolution* exact) {
  return anorm_parts(space, geom, c, t, omega1, exact).total();
}

NormBreakdown xnorm_error(const SpaceTimeSolution& sol, const ExactSolution& exact) {
  if (!exact.u || !exact.u_x || !exact.u_t)
    throw InvalidArgument("xnorm_error: exact solution needs u, u_x and u_t");
  return breakdown(sol, &exact);
}

NormBreakdown xnorm(const SpaceTimeSolution& sol) { return breakdown(sol, nullptr); }

double lls_slope(std::span<const std::pair<double, double>> points, std::size_t first,
                 std::size_t last) {
  if (first < 1 || last > points.size() || last < first + 1)
    throw InvalidArgument("lls_slope: window must hold at least two points");
  const double count = static_cast<double>(last - first + 1);
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = first - 1; i < last; ++i) {
    const auto [r, e] = points[i];
    if (!(r > 0.0) || !(e > 0.0)) throw InvalidArgument("lls_slope: entries must be positive");
    sx += std::log(r);
    sy += std::log(e);
  }
  const double mx = sx / count, my = sy / count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = first - 1; i < last; ++i) {
    const double dx = std::log(points[i].first) - mx;
    sxy += dx * (std::log(points[i].second) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw InvalidArgument("lls_slope: resolutions must differ");
  return sxy / sxx;
}

double lls_slope(std::span<const std::pair<double, double>> points) {
  return lls_slope(points, 1, points.size());
}

double l2_norm(const SpatialFunction& u0, Interval omega, std::size_t cells) {
  if (cells == 0) throw InvalidArgument("l2_norm: need at least one cell");
  const Rule1D gl = gauss_legendre3();
  const double h = omega.length() / static_cast<double>(cells);
  double sum = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = omega.lo + h * static_cast<double>(i);
    sum += integrate(gl, a, a + h, [&](double x) { return u0(x) * u0(x); });
  }
  return std::sqrt(sum);
}

double l2l2_norm(const SpaceTimeFunction& f, Interval omega, double final_time, std::size_t cells,
                 std::size_t steps) {
  if (cells == 0 || steps == 0) throw InvalidArgument("l2l2_norm: need cells and steps");
  const Rule1D gl = gauss_legendre3();
  const double k = final_time / static_cast<double>(steps);
  double sum = 0.0;
  for (std::size_t n = 0; n < steps; ++n)
    for (const QuadPoint& tp : map_rule(gl, k * static_cast<double>(n), k * static_cast<double>(n + 1))) {
      const double s = l2_norm([&](double x) { return f(x, tp.x); }, omega, cells);
      sum += tp.weight * s * s;
    }
  return std::sqrt(sum);
}

}  // namespace stcut
