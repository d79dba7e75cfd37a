#include "stcut/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stcut/errors.hpp"

namespace stcut {

namespace {

// Sorted unique times, merged when closer than `tol`.
void sort_unique(std::vector<double>& times, double tol) {
  std::sort(times.begin(), times.end());
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times)
    if (out.empty() || t - out.back() > tol) out.push_back(t);
  times = std::move(out);
}

// Times in (t_s + tol, t_e - tol) at which a point moving with `velocity`
// from `x_start` at t_s meets one of the fixed nodes in [first, last).
template <class It>
void crossing_times(double x_start, double velocity, double t_s, double t_e, It first, It last,
                    double tol, std::vector<double>& out) {
  if (velocity == 0.0) return;
  const double x_end = x_start + velocity * (t_e - t_s);
  const double lo = std::min(x_start, x_end);
  const double hi = std::max(x_start, x_end);
  for (auto it = std::upper_bound(first, last, lo); it != last && *it < hi; ++it) {
    const double tau = t_s + (*it - x_start) / velocity;
    if (tau > t_s + tol && tau < t_e - tol) out.push_back(tau);
  }
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> SlabGeometry::cut_runs() const {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t c : cut_cells) {
    if (!runs.empty() && runs.back().second + 1 == c)
      runs.back().second = c;
    else
      runs.emplace_back(c, c);
  }
  return runs;
}

std::vector<double> SlabGeometry::cell_breaks(std::size_t cell, bool all_nodes) const {
  std::vector<double> out;
  if (velocity == 0.0) return out;
  const double time_tol = 1e-14 * duration();
  const Mesh1D& ov = overlap();
  std::vector<double> moving;
  if (all_nodes) {
    moving.resize(ov.n_nodes());
    for (std::size_t k = 0; k < moving.size(); ++k) moving[k] = overlap_node(k, t_start);
  } else {
    moving = {left.x0, right.x0};
  }
  // A fixed node seen from the frame of the overlapping mesh moves with -velocity.
  for (double x : {background().node(cell), background().node(cell + 1)})
    crossing_times(x, -velocity, t_start, t_end, moving.begin(), moving.end(), time_tol, out);
  sort_unique(out, time_tol);
  return out;
}

SlabGeometry build_slab_geometry(std::shared_ptr<const Layout> layout, std::size_t slab) {
  if (!layout) throw InvalidArgument("build_slab_geometry: null layout");
  const TimePartition& time = layout->time;
  if (slab >= time.n_slabs()) throw InvalidArgument("build_slab_geometry: slab out of range");

  SlabGeometry g;
  g.layout = layout;
  g.slab = slab;
  g.t_start = time.start(slab);
  g.t_end = time.end(slab);
  g.velocity = time.velocities[slab];
  g.offset_start = time.offsets[slab];
  g.left = {g.t_start, layout->overlap.lo() + g.offset_start, g.velocity};
  g.right = {g.t_start, layout->overlap.hi() + g.offset_start, g.velocity};

  const Mesh1D& bg = layout->background;
  const double tol = layout->tolerance();
  constexpr double kMargin = 1e-12;
  for (double t : {g.t_start, g.t_end}) {
    if (!(g.left.at(t) > layout->omega.lo + kMargin) ||
        !(g.right.at(t) < layout->omega.hi - kMargin))
      throw GeometryError("slab " + std::to_string(slab) +
                          ": overlapping mesh touches the domain boundary at t = " +
                          std::to_string(t));
  }

  const double time_tol = 1e-14 * g.duration();
  const auto& xs = bg.nodes();
  for (const Trajectory* tr : {&g.left, &g.right})
    crossing_times(tr->x0, g.velocity, g.t_start, g.t_end, xs.begin(), xs.end(), time_tol,
                   g.events);
  sort_unique(g.events, time_tol);

  // A cell is cut when the swept range of an interface meets its interior by
  // more than the tolerance; touching a node only leaves both neighbours uncut.
  g.cells.assign(bg.n_cells(), CellState::Exterior);
  for (const Trajectory* tr : {&g.left, &g.right}) {
    const double p0 = tr->at(g.t_start);
    const double p1 = tr->at(g.t_end);
    const double lo = std::min(p0, p1);
    const double hi = std::max(p0, p1);
    for (std::size_t c = bg.locate(lo - tol); c < bg.n_cells() && bg.node(c) <= hi + tol; ++c)
      if (hi > bg.node(c) + tol && lo < bg.node(c + 1) - tol) g.cells[c] = CellState::Cut;
  }
  const double t_mid = 0.5 * (g.t_start + g.t_end);
  for (std::size_t c = 0; c < bg.n_cells(); ++c) {
    if (g.cells[c] == CellState::Cut) {
      g.cut_cells.push_back(c);
      continue;
    }
    const double m = 0.5 * (bg.node(c) + bg.node(c + 1));
    if (g.inside(m, t_mid)) g.cells[c] = CellState::Covered;
  }

  return g;
}

SpatialPartition spatial_partition(const SlabGeometry& geom, double t) {
  return spatial_partition(geom, t, geom.layout->omega.lo, geom.layout->omega.hi);
}

SpatialPartition spatial_partition(const SlabGeometry& geom, double t, double x_from,
                                   double x_to) {
  const Mesh1D& bg = geom.background();
  const Mesh1D& ov = geom.overlap();
  const double tol = geom.layout->tolerance();

  struct Point {
    double x;
    bool fixed;
  };
  std::vector<Point> fixed;
  fixed.push_back({x_from, true});
  const auto& xs = bg.nodes();
  for (auto it = std::upper_bound(xs.begin(), xs.end(), x_from); it != xs.end() && *it < x_to; ++it)
    fixed.push_back({*it, true});
  fixed.push_back({x_to, true});

  std::vector<Point> moving;
  const double shift = geom.offset(t);
  const auto& ys = ov.nodes();
  for (auto it = std::upper_bound(ys.begin(), ys.end(), x_from - shift);
       it != ys.end() && *it + shift < x_to; ++it)
    moving.push_back({*it + shift, false});

  std::vector<Point> all(fixed.size() + moving.size());
  std::merge(fixed.begin(), fixed.end(), moving.begin(), moving.end(), all.begin(),
             [](const Point& p, const Point& q) { return p.x < q.x; });

  std::vector<Point> kept;
  kept.reserve(all.size());
  for (const Point& p : all) {
    if (!kept.empty() && p.x - kept.back().x <= tol) {
      if (p.fixed && !kept.back().fixed) kept.back() = p;
      continue;
    }
    kept.push_back(p);
  }
  // The right end is fixed; a moving point merged into it must not shift it.
  kept.back().x = x_to;

  SpatialPartition part{t, {}};
  part.segments.reserve(kept.size());
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
    Segment s{kept[i].x, kept[i + 1].x, Side::Outer, 0, std::nullopt};
    const double m = s.midpoint();
    s.background_cell = bg.locate(m);
    if (geom.inside(m, t)) {
      s.side = Side::Inner;
      s.overlap_cell = ov.locate(m - shift);
    }
    part.segments.push_back(s);
  }
  return part;
}

std::vector<Segment> overlap_segments(const SlabGeometry& geom, double t) {
  std::vector<Segment> out;
  const Mesh1D& bg = geom.background();
  for (const auto& [first, last] : geom.cut_runs()) {
    SpatialPartition part = spatial_partition(geom, t, bg.node(first), bg.node(last + 1));
    for (const Segment& s : part.segments)
      if (s.side == Side::Inner) out.push_back(s);
  }
  return out;
}

SpaceTimeNormal spacetime_normal(int spatial_normal, double mu) {
  const double n = static_cast<double>(spatial_normal);
  const double scale = 1.0 / std::sqrt(n * mu * n * mu + 1.0);
  return {n * scale, -n * mu * scale};
}

int outer_normal(Interface side) noexcept { return side == Interface::Left ? 1 : -1; }

UpwindChoice sigma_side(Interface side, double mu) noexcept {
  const double w = outer_normal(side) * mu;
  // n^t of the Omega_1 normal is -w / |mu_bar|; sigma = (3 + sgn(n^t)) / 2.
  const Side sigma = (-w > 0.0) ? Side::Inner : Side::Outer;
  return {sigma, w};
}

std::size_t outer_cell(const SlabGeometry& geom, Interface side, double t) {
  const double tol = geom.layout->tolerance();
  const double p = geom.interface(side, t);
  return geom.background().locate(side == Interface::Left ? p - tol : p + tol);
}

}  // namespace stcut
