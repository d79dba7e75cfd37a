#pragma once

// Cut geometry of one space-time slab: where the two interfaces of the
// overlapping mesh are, which background cells they cross, and how the
// spatial domain splits into the uncovered part (Outer, Omega_1) and the
// covered part (Inner, Omega_2) at a given time.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "stcut/core.hpp"

namespace stcut {

enum class Side : std::uint8_t { Outer = 1, Inner = 2 };
enum class Interface : std::uint8_t { Left, Right };

/// Classification of a background cell over a whole slab.
enum class CellState : std::uint8_t {
  Exterior,  ///< inside Omega_1 for every t in the slab
  Covered,   ///< inside the closure of Omega_2 for every t in the slab
  Cut,       ///< an interface enters its interior at some t in the slab
};

struct Trajectory {
  double t0;
  double x0;
  double velocity;

  double at(double t) const noexcept { return x0 + velocity * (t - t0); }
};

struct SlabGeometry {
  std::shared_ptr<const Layout> layout;
  std::size_t slab = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  double velocity = 0.0;
  double offset_start = 0.0;  ///< displacement of the overlapping mesh at t_start
  Trajectory left{};
  Trajectory right{};
  /// Times strictly inside the slab where an interface meets a background node.
  std::vector<double> events;
  std::vector<CellState> cells;
  std::vector<std::size_t> cut_cells;

  const Mesh1D& background() const { return layout->background; }
  const Mesh1D& overlap() const { return layout->overlap; }
  double duration() const noexcept { return t_end - t_start; }
  double offset(double t) const noexcept { return offset_start + velocity * (t - t_start); }
  double interface(Interface side, double t) const noexcept {
    return side == Interface::Left ? left.at(t) : right.at(t);
  }
  double overlap_node(std::size_t k, double t) const { return overlap().node(k) + offset(t); }
  bool is_cut(std::size_t cell) const { return cells[cell] == CellState::Cut; }
  /// Strictly between the two interfaces.
  bool inside(double x, double t) const noexcept { return left.at(t) < x && x < right.at(t); }
  /// Maximal runs [first, last] of consecutive cut cells.
  std::vector<std::pair<std::size_t, std::size_t>> cut_runs() const;
  /// Times strictly inside the slab where an interface passes a node of
  /// background cell `cell`; with `all_nodes`, any overlapping node. Between
  /// two breaks the cut configuration of the cell does not change, so the
  /// integrands over the cell are polynomial in time there.
  std::vector<double> cell_breaks(std::size_t cell, bool all_nodes) const;
};

struct Segment {
  double a;
  double b;
  Side side;
  std::size_t background_cell;
  std::optional<std::size_t> overlap_cell;  ///< set for Inner segments

  double length() const noexcept { return b - a; }
  double midpoint() const noexcept { return 0.5 * (a + b); }
};

struct SpatialPartition {
  double t;
  std::vector<Segment> segments;
};

/// Throws GeometryError if an interface reaches the domain boundary.
SlabGeometry build_slab_geometry(std::shared_ptr<const Layout> layout, std::size_t slab);

/// Tiling of the whole domain at time t; breakpoints are all background nodes,
/// all moved overlapping nodes and the interfaces. Breakpoints closer than
/// Layout::tolerance() are merged (background nodes win).
SpatialPartition spatial_partition(const SlabGeometry& geom, double t);

/// Same tiling restricted to [x_from, x_to].
SpatialPartition spatial_partition(const SlabGeometry& geom, double t, double x_from,
                                   double x_to);

/// Pieces of Omega_O(t): covered parts of cells that are cut somewhere in the slab.
std::vector<Segment> overlap_segments(const SlabGeometry& geom, double t);

struct SpaceTimeNormal {
  double x;
  double t;
};

/// Unit normal (n, -n mu) / sqrt((n mu)^2 + 1) of the moving interface, where
/// n = +-1 is the outward spatial normal of the side it is taken from.
SpaceTimeNormal spacetime_normal(int spatial_normal, double mu);

/// Outward normal of Omega_1 at an interface: +1 on the left end of G, -1 on the right.
int outer_normal(Interface side) noexcept;

struct UpwindChoice {
  Side sigma;     ///< side that occupies the interface point just after t
  double weight;  ///< n_1 * mu; the space-time jump term is weight * [w] * v_sigma dt
};

UpwindChoice sigma_side(Interface side, double mu) noexcept;

/// Background cell on the Omega_1 side of an interface at time t.
std::size_t outer_cell(const SlabGeometry& geom, Interface side, double t);

}  // namespace stcut
