#include "stcut/assembly.hpp"

#include <array>
#include <cmath>
#include <string>

#include "stcut/errors.hpp"
#include "stcut/quadrature.hpp"

namespace stcut {

namespace {

using Triplet = Eigen::Triplet<double>;
// F[m][l]: temporal factor for trial mode m and test mode l.
using TimeMat = std::array<std::array<double, 2>, 2>;

// Local basis on one side of the interface: at most two spatial dofs.
struct SideShape {
  int n = 0;
  std::size_t dof[2]{};
  double value[2]{};
  double deriv[2]{};
};

SideShape side_shape(const SlabSpace& space, const SlabGeometry& geom, Side side, std::size_t cell,
                     double x, double t) {
  SideShape s;
  if (side == Side::Outer) {
    const LocalShape ls = background_shape(geom.background(), cell, x);
    for (int i = 0; i < 2; ++i) {
      const auto dof = space.background_dof(ls.nodes[i]);
      if (!dof) continue;
      s.dof[s.n] = *dof;
      s.value[s.n] = ls.value[i];
      s.deriv[s.n] = ls.deriv[i];
      ++s.n;
    }
    return s;
  }
  const LocalShape ls = background_shape(geom.overlap(), cell, x - geom.offset(t));
  for (int i = 0; i < 2; ++i) {
    s.dof[i] = space.overlap_dof(ls.nodes[i]);
    s.value[i] = ls.value[i];
    s.deriv[i] = ls.deriv[i];
  }
  s.n = 2;
  return s;
}

class Collector {
 public:
  explicit Collector(const SlabSpace& space) : space_(space), modes_(space.n_modes()) {}

  void add(std::size_t test, std::size_t trial, double value, const TimeMat& f) {
    if (value == 0.0) return;
    for (int m = 0; m < modes_; ++m)
      for (int l = 0; l < modes_; ++l) {
        const double v = value * f[m][l];
        if (v != 0.0)
          trips_.emplace_back(static_cast<int>(space_.column(test, l)),
                              static_cast<int>(space_.column(trial, m)), v);
      }
    if (trips_.size() >= kFlushSize) flush();
  }

  SparseMatrix sparse() {
    flush();
    return sum_;
  }

  Eigen::MatrixXd dense() { return Eigen::MatrixXd(sparse()); }

 private:
  // Many time points hit the same entries; compress before the list grows large.
  static constexpr std::size_t kFlushSize = std::size_t{1} << 21;

  void flush() {
    const auto n = static_cast<Eigen::Index>(space_.n_columns());
    SparseMatrix part(n, n);
    part.setFromTriplets(trips_.begin(), trips_.end());
    trips_.clear();
    if (sum_.size() == 0)
      sum_ = std::move(part);
    else
      sum_ += part;
  }

  const SlabSpace& space_;
  int modes_;
  std::vector<Triplet> trips_;
  SparseMatrix sum_;
};

TimeMat point_factor(const TemporalBasis& tb, double t, double w) {
  TimeMat f{};
  for (int m = 0; m < tb.n_modes(); ++m)
    for (int l = 0; l < tb.n_modes(); ++l) f[m][l] = w * tb.value(m, t) * tb.value(l, t);
  return f;
}

TimeMat derivative_factor(const TemporalBasis& tb, double t, double w) {
  TimeMat f{};
  for (int m = 0; m < tb.n_modes(); ++m)
    for (int l = 0; l < tb.n_modes(); ++l) f[m][l] = w * tb.derivative(m) * tb.value(l, t);
  return f;
}

// Slab integrals of the temporal products: T0 = int l_m l_l, T1 = int l_m' l_l.
void temporal_integrals(const TemporalBasis& tb, const SlabGeometry& geom, TimeMat& t0, TimeMat& t1) {
  t0 = {};
  t1 = {};
  for (const QuadPoint& p : map_rule(lobatto3(), geom.t_start, geom.t_end)) {
    const TimeMat a = point_factor(tb, p.x, p.weight);
    const TimeMat b = derivative_factor(tb, p.x, p.weight);
    for (int m = 0; m < 2; ++m)
      for (int l = 0; l < 2; ++l) {
        t0[m][l] += a[m][l];
        t1[m][l] += b[m][l];
      }
  }
}


struct StaticFactors {
  const TimeMat* stiffness = nullptr;
  const TimeMat* time_derivative = nullptr;  ///< (phi_j, phi_i) l_m' l_l
  const TimeMat* transport = nullptr;        ///< -mu (phi_j', phi_i) on the overlapping mesh
};

// Parts whose spatial integrals do not change within the slab: background
// cells never reached by G, and the whole overlapping mesh.
void add_static(Collector& col, const SlabSpace& space, const SlabGeometry& geom,
                const StaticFactors& f) {
  const Mesh1D& bg = geom.background();
  for (std::size_t c = 0; c < bg.n_cells(); ++c) {
    if (geom.cells[c] != CellState::Exterior) continue;
    const SideShape s = side_shape(space, geom, Side::Outer, c, bg.node(c), geom.t_start);
    const double h = bg.cell_size(c);
    for (int i = 0; i < s.n; ++i)
      for (int j = 0; j < s.n; ++j) {
        if (f.stiffness) col.add(s.dof[i], s.dof[j], s.deriv[i] * s.deriv[j] * h, *f.stiffness);
        if (f.time_derivative)
          col.add(s.dof[i], s.dof[j], h * (s.dof[i] == s.dof[j] ? 2.0 : 1.0) / 6.0,
                  *f.time_derivative);
      }
  }
  const Mesh1D& ov = geom.overlap();
  for (std::size_t c = 0; c < ov.n_cells(); ++c) {
    const double h = ov.cell_size(c);
    const std::size_t dof[2] = {space.overlap_dof(c), space.overlap_dof(c + 1)};
    const double d[2] = {-1.0 / h, 1.0 / h};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (f.stiffness) col.add(dof[i], dof[j], d[i] * d[j] * h, *f.stiffness);
        if (f.time_derivative)
          col.add(dof[i], dof[j], h * (i == j ? 2.0 : 1.0) / 6.0, *f.time_derivative);
        if (f.transport) col.add(dof[i], dof[j], -geom.velocity * d[j] * 0.5 * h, *f.transport);
      }
  }
}

// Integrals over one cut cell at time t: stiffness and time derivative on its
// uncovered part, gradient-jump stabilization on its covered part.
void add_cut_cell(Collector& col, const SlabSpace& space, const SlabGeometry& geom,
                  std::size_t cell, double t, const TimeMat& stiffness,
                  const TimeMat* time_derivative) {
  const Mesh1D& bg = geom.background();
  const Rule1D gl = gauss_legendre3();
  const SpatialPartition part = spatial_partition(geom, t, bg.node(cell), bg.node(cell + 1));
  for (const Segment& seg : part.segments) {
    const double len = seg.length();
    const SideShape b = side_shape(space, geom, Side::Outer, cell, seg.a, t);
    if (seg.side == Side::Outer) {
      for (int i = 0; i < b.n; ++i)
        for (int j = 0; j < b.n; ++j)
          col.add(b.dof[i], b.dof[j], b.deriv[i] * b.deriv[j] * len, stiffness);
      if (!time_derivative) continue;
      double mass[2][2] = {};
      for (const QuadPoint& p : map_rule(gl, seg.a, seg.b)) {
        const SideShape q = side_shape(space, geom, Side::Outer, cell, p.x, t);
        for (int i = 0; i < q.n; ++i)
          for (int j = 0; j < q.n; ++j) mass[i][j] += p.weight * q.value[i] * q.value[j];
      }
      for (int i = 0; i < b.n; ++i)
        for (int j = 0; j < b.n; ++j) col.add(b.dof[i], b.dof[j], mass[i][j], *time_derivative);
      continue;
    }
    // [w'] = w_1' - w_2' with w_1 the background extension into the covered part
    const SideShape o = side_shape(space, geom, Side::Inner, *seg.overlap_cell, seg.a, t);
    std::size_t dof[4];
    double g[4];
    int n = 0;
    for (int i = 0; i < b.n; ++i, ++n) {
      dof[n] = b.dof[i];
      g[n] = b.deriv[i];
    }
    for (int i = 0; i < o.n; ++i, ++n) {
      dof[n] = o.dof[i];
      g[n] = -o.deriv[i];
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) col.add(dof[i], dof[j], g[i] * g[j] * len, stiffness);
  }
}

// Nitsche coupling, penalty and (optionally) the space-time jump term at both
// interfaces at one time t.
// `t_cell` picks the background cell next to each interface; inside a time
// panel it may differ from t only at the panel ends.
void add_interfaces(Collector& col, const SlabSpace& space, const SlabGeometry& geom, double t,
                    double t_cell, const TimeMat& factor, const FormOptions& opt, bool time_jump) {
  const double mu = geom.velocity;
  const double mubar = std::sqrt(mu * mu + 1.0);
  const std::size_t last_ov_cell = geom.overlap().n_cells() - 1;
  for (Interface side : {Interface::Left, Interface::Right}) {
    const double p = geom.interface(side, t);
    const double n1 = outer_normal(side);
    const std::size_t bc = outer_cell(geom, side, t_cell);
    const SideShape b = side_shape(space, geom, Side::Outer, bc, p, t);
    const SideShape o =
        side_shape(space, geom, Side::Inner, side == Interface::Left ? 0 : last_ov_cell, p, t);
    const UpwindChoice up = sigma_side(side, mu);
    const bool with_jump = time_jump && up.weight != 0.0;

    std::size_t dof[4];
    double jump[4], flux[4], test[4];
    int n = 0;
    for (int i = 0; i < b.n; ++i, ++n) {
      dof[n] = b.dof[i];
      jump[n] = b.value[i];
      flux[n] = n1 * opt.omega1 * b.deriv[i];
      test[n] = up.sigma == Side::Outer ? b.value[i] : 0.0;
    }
    for (int i = 0; i < o.n; ++i, ++n) {
      dof[n] = o.dof[i];
      jump[n] = -o.value[i];
      flux[n] = n1 * (1.0 - opt.omega1) * o.deriv[i];
      test[n] = up.sigma == Side::Inner ? o.value[i] : 0.0;
    }
    const double penalty = mubar * opt.gamma / geom.background().cell_size(bc);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        double v = -flux[c] * jump[a] - flux[a] * jump[c] + penalty * jump[a] * jump[c];
        if (with_jump) v += up.weight * jump[c] * test[a];
        col.add(dof[a], dof[c], v, factor);
      }
  }
}

// (w^+, v^+) at the start of the slab.
void add_start_trace(Collector& col, const SlabSpace& space, const SlabGeometry& geom) {
  const double t = geom.t_start;
  const TimeMat f = point_factor(space.time_basis(), t, 1.0);
  const Rule1D gl = gauss_legendre3();
  for (const Segment& seg : spatial_partition(geom, t).segments) {
    const std::size_t cell = seg.side == Side::Outer ? seg.background_cell : *seg.overlap_cell;
    for (const QuadPoint& p : map_rule(gl, seg.a, seg.b)) {
      const SideShape s = side_shape(space, geom, seg.side, cell, p.x, t);
      for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) col.add(s.dof[i], s.dof[j], p.weight * s.value[i] * s.value[j], f);
    }
  }
}

void check_finite(const SparseMatrix& a, std::size_t slab) {
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      if (!std::isfinite(it.value()))
        throw AssemblyError(slab, "non-finite matrix entry at (" + std::to_string(it.row()) + ", " +
                                      std::to_string(it.col()) + ")");
}

}  // namespace

Eigen::MatrixXd assemble_Aht(const SlabSpace& space, const SlabGeometry& geom, double t,
                             const FormOptions& opt) {
  if (t < geom.t_start - 1e-12 * geom.duration() || t > geom.t_end + 1e-12 * geom.duration())
    throw InvalidArgument("assemble_Aht: t outside the slab");
  Collector col(space);
  const TimeMat f = point_factor(space.time_basis(), t, 1.0);
  StaticFactors sf;
  sf.stiffness = &f;
  add_static(col, space, geom, sf);
  for (std::size_t c : geom.cut_cells) add_cut_cell(col, space, geom, c, t, f, nullptr);
  add_interfaces(col, space, geom, t, t, f, opt, false);
  return col.dense();
}

SparseMatrix assemble_lhs(const SlabSpace& space, const SlabGeometry& geom, const FormOptions& opt) {
  const TemporalBasis& tb = space.time_basis();
  Collector col(space);
  TimeMat t0, t1;
  temporal_integrals(tb, geom, t0, t1);
  add_static(col, space, geom, {&t0, &t1, &t0});
  add_start_trace(col, space, geom);

  // Composite rule in time, panels local to each cut prism.
  const Rule1D rule = opt.time_rule == TimeRule::Gauss3 ? gauss_legendre3() : lobatto3();
  for (std::size_t c : geom.cut_cells) {
    const std::vector<double> breaks = geom.cell_breaks(c, true);
    for (const QuadPoint& p : composite_rule(geom.t_start, geom.t_end, breaks, rule)) {
      const TimeMat f = point_factor(tb, p.x, p.weight);
      const TimeMat g = derivative_factor(tb, p.x, p.weight);
      add_cut_cell(col, space, geom, c, p.x, f, &g);
    }
  }
  // Between two events each interface stays inside one background cell.
  std::vector<double> panels{geom.t_start};
  panels.insert(panels.end(), geom.events.begin(), geom.events.end());
  panels.push_back(geom.t_end);
  for (std::size_t i = 0; i + 1 < panels.size(); ++i) {
    const double mid = 0.5 * (panels[i] + panels[i + 1]);
    for (const QuadPoint& p : map_rule(rule, panels[i], panels[i + 1]))
      add_interfaces(col, space, geom, p.x, mid, point_factor(tb, p.x, p.weight), opt,
                     opt.interface_time_jump);
  }
  SparseMatrix a = col.sparse();
  check_finite(a, geom.slab);
  return a;
}

SparseMatrix assemble_trace_coupling(const SlabData& previous, const SlabData& current) {
  const SlabGeometry& gc = current.geometry;
  const SlabGeometry& gp = previous.geometry;
  if (gp.slab + 1 != gc.slab) throw InvalidArgument("assemble_trace_coupling: slabs not adjacent");
  const double t = gc.t_start;
  const TemporalBasis& tc = current.space.time_basis();
  const TemporalBasis& tp = previous.space.time_basis();
  const Rule1D gl = gauss_legendre3();
  std::vector<Triplet> trips;
  for (const Segment& seg : spatial_partition(gc, t).segments) {
    const double m = seg.midpoint();
    const Side side_p = gp.inside(m, t) ? Side::Inner : Side::Outer;
    const std::size_t cell_c = seg.side == Side::Outer ? seg.background_cell : *seg.overlap_cell;
    const std::size_t cell_p =
        side_p == Side::Outer ? gp.background().locate(m) : gp.overlap().locate(m - gp.offset(t));
    for (const QuadPoint& p : map_rule(gl, seg.a, seg.b)) {
      const SideShape sc = side_shape(current.space, gc, seg.side, cell_c, p.x, t);
      const SideShape sp = side_shape(previous.space, gp, side_p, cell_p, p.x, t);
      for (int i = 0; i < sc.n; ++i)
        for (int j = 0; j < sp.n; ++j)
          for (int l = 0; l < current.space.n_modes(); ++l)
            for (int mm = 0; mm < previous.space.n_modes(); ++mm) {
              const double v = p.weight * sc.value[i] * tc.value(l, t) * sp.value[j] * tp.value(mm, t);
              if (v != 0.0)
                trips.emplace_back(static_cast<int>(current.space.column(sc.dof[i], l)),
                                   static_cast<int>(previous.space.column(sp.dof[j], mm)), v);
            }
    }
  }
  SparseMatrix c(static_cast<Eigen::Index>(current.space.n_columns()),
                 static_cast<Eigen::Index>(previous.space.n_columns()));
  c.setFromTriplets(trips.begin(), trips.end());
  return c;
}

Eigen::VectorXd assemble_initial_term(const SlabSpace& space, const SlabGeometry& geom,
                                      const SpatialFunction& u0) {
  const double t = geom.t_start;
  const TemporalBasis& tb = space.time_basis();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.n_columns()));
  const Rule1D gl = gauss_legendre3();
  for (const Segment& seg : spatial_partition(geom, t).segments) {
    const std::size_t cell = seg.side == Side::Outer ? seg.background_cell : *seg.overlap_cell;
    for (const QuadPoint& p : map_rule(gl, seg.a, seg.b)) {
      const double u = u0(p.x);
      const SideShape s = side_shape(space, geom, seg.side, cell, p.x, t);
      for (int i = 0; i < s.n; ++i)
        for (int l = 0; l < space.n_modes(); ++l)
          r[static_cast<Eigen::Index>(space.column(s.dof[i], l))] +=
              p.weight * u * s.value[i] * tb.value(l, t);
    }
  }
  return r;
}

Eigen::VectorXd assemble_source(const SlabSpace& space, const SlabGeometry& geom,
                                const SpaceTimeFunction& f) {
  const TemporalBasis& tb = space.time_basis();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.n_columns()));
  const Rule1D rule = tb.degree() == 0 ? midpoint() : lobatto3();
  // trapezoid on [a, b] at time t with temporal weight w
  auto add_segment = [&](Side side, std::size_t cell, double a, double b, double t, double w) {
    const double half = 0.5 * (b - a) * w;
    for (double x : {a, b}) {
      const double fx = f(x, t);
      const SideShape s = side_shape(space, geom, side, cell, x, t);
      for (int i = 0; i < s.n; ++i)
        for (int l = 0; l < space.n_modes(); ++l)
          r[static_cast<Eigen::Index>(space.column(s.dof[i], l))] +=
              half * fx * s.value[i] * tb.value(l, t);
    }
  };
  const Mesh1D& bg = geom.background();
  const Mesh1D& ov = geom.overlap();
  const std::vector<QuadPoint> slab_rule = map_rule(rule, geom.t_start, geom.t_end);
  for (std::size_t c = 0; c < bg.n_cells(); ++c) {
    if (geom.cells[c] == CellState::Exterior) {
      for (const QuadPoint& tp : slab_rule) add_segment(Side::Outer, c, bg.node(c), bg.node(c + 1), tp.x, tp.weight);
    } else if (geom.cells[c] == CellState::Cut) {
      const std::vector<double> breaks = geom.cell_breaks(c, false);
      for (const QuadPoint& tp : composite_rule(geom.t_start, geom.t_end, breaks, rule))
        for (const Segment& seg : spatial_partition(geom, tp.x, bg.node(c), bg.node(c + 1)).segments)
          if (seg.side == Side::Outer) add_segment(Side::Outer, c, seg.a, seg.b, tp.x, tp.weight);
    }
  }
  // Omega_2 is the whole overlapping mesh, whose cells move rigidly.
  for (const QuadPoint& tp : slab_rule) {
    const double shift = geom.offset(tp.x);
    for (std::size_t k = 0; k < ov.n_cells(); ++k)
      add_segment(Side::Inner, k, ov.node(k) + shift, ov.node(k + 1) + shift, tp.x, tp.weight);
  }
  return r;
}

SlabSystem assemble_slab(const SpaceTimeDiscretization& disc, std::size_t slab,
                         const ProblemSpec& problem, const Eigen::VectorXd* previous,
                         const FormOptions& opt) {
  if (slab >= disc.n_slabs()) throw InvalidArgument("assemble_slab: slab out of range");
  const SlabData& sd = disc.slabs[slab];
  SlabSystem sys;
  sys.slab = slab;
  sys.matrix = assemble_lhs(sd.space, sd.geometry, opt);
  sys.rhs = assemble_source(sd.space, sd.geometry, problem.source);
  if (slab == 0) {
    if (previous) throw InvalidArgument("assemble_slab: first slab takes no previous coefficients");
    sys.rhs += assemble_initial_term(sd.space, sd.geometry, problem.initial);
  } else {
    const SlabData& prev = disc.slabs[slab - 1];
    if (!previous || previous->size() != static_cast<Eigen::Index>(prev.space.n_columns()))
      throw InvalidArgument("assemble_slab: previous coefficients missing or of wrong size");
    sys.rhs += assemble_trace_coupling(prev, sd) * (*previous);
  }
  if (!sys.rhs.allFinite()) throw AssemblyError(slab, "non-finite right-hand side");
  sys.column_positions = sd.space.column_positions(sd.geometry);
  return sys;
}

BilinearForm::BilinearForm(std::shared_ptr<const SpaceTimeDiscretization> disc,
                           const FormOptions& opt)
    : disc_(std::move(disc)) {
  if (!disc_) throw InvalidArgument("BilinearForm: null discretization");
  slab_matrices_.reserve(disc_->n_slabs());
  couplings_.resize(disc_->n_slabs());
  for (std::size_t n = 0; n < disc_->n_slabs(); ++n) {
    const SlabData& sd = disc_->slabs[n];
    slab_matrices_.push_back(assemble_lhs(sd.space, sd.geometry, opt));
    if (n > 0) couplings_[n] = assemble_trace_coupling(disc_->slabs[n - 1], sd);
  }
}

double BilinearForm::apply(const SpaceTimeSolution& w, const SpaceTimeSolution& v) const {
  if (w.discretization != disc_ || v.discretization != disc_)
    throw InvalidArgument("BilinearForm::apply: functions live on another discretization");
  if (w.coefficients.size() != disc_->n_slabs() || v.coefficients.size() != disc_->n_slabs())
    throw InvalidArgument("BilinearForm::apply: wrong number of slabs");
  double sum = 0.0;
  for (std::size_t n = 0; n < disc_->n_slabs(); ++n) {
    sum += v.coefficients[n].dot(slab_matrices_[n] * w.coefficients[n]);
    if (n > 0) sum -= v.coefficients[n].dot(couplings_[n] * w.coefficients[n - 1]);
  }
  return sum;
}

double apply_Bh(const SpaceTimeSolution& w, const SpaceTimeSolution& v, const FormOptions& opt) {
  if (!w.discretization || w.discretization != v.discretization)
    throw InvalidArgument("apply_Bh: w and v live on different discretizations");
  return BilinearForm(w.discretization, opt).apply(w, v);
}

}  // namespace stcut
