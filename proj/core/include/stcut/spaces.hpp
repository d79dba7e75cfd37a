#pragma once

// Degrees of freedom and basis evaluation for the broken space on one slab.
//
// Background functions are P1 hats on the stationary mesh with the Dirichlet
// boundary nodes eliminated; overlapping functions are P1 hats carried along
// with the moving mesh, phi(x - delta(t)). Both are multiplied by a temporal
// basis of degree q (nodal Lagrange at the slab ends for q = 1).
//
// Column layout: active background nodes ascending, then overlapping nodes
// ascending; the temporal mode runs fastest.

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "stcut/core.hpp"
#include "stcut/geometry.hpp"

namespace stcut {

class TemporalBasis {
 public:
  TemporalBasis(int degree, double t_start, double t_end);

  int degree() const noexcept { return degree_; }
  int n_modes() const noexcept { return degree_ + 1; }
  double value(int mode, double t) const noexcept;
  double derivative(int mode) const noexcept;

 private:
  int degree_;
  double t_start_;
  double t_end_;
};

/// The two P1 shape functions living on one cell.
struct LocalShape {
  std::size_t nodes[2];
  double value[2];
  double deriv[2];
};

/// Shapes of background cell `cell` at x (affine extension outside the cell).
LocalShape background_shape(const Mesh1D& mesh, std::size_t cell, double x);

class SlabSpace {
 public:
  SlabSpace(const SlabGeometry& geom, int time_degree);

  std::size_t slab() const noexcept { return slab_; }
  std::size_t n_background() const noexcept { return bg_nodes_.size(); }
  std::size_t n_overlap() const noexcept { return n_overlap_; }
  std::size_t n_spatial() const noexcept { return n_background() + n_overlap(); }
  int n_modes() const noexcept { return time_.n_modes(); }
  std::size_t n_columns() const noexcept { return n_spatial() * static_cast<std::size_t>(n_modes()); }

  /// Spatial dof of a background node, empty for boundary or fully covered nodes.
  std::optional<std::size_t> background_dof(std::size_t node) const;
  std::size_t overlap_dof(std::size_t node) const noexcept { return n_background() + node; }
  std::size_t column(std::size_t dof, int mode) const noexcept {
    return dof * static_cast<std::size_t>(n_modes()) + static_cast<std::size_t>(mode);
  }
  bool is_background(std::size_t dof) const noexcept { return dof < n_background(); }
  /// Mesh node index of a spatial dof (background or overlapping mesh).
  std::size_t node_of(std::size_t dof) const noexcept {
    return is_background(dof) ? bg_nodes_[dof] : dof - n_background();
  }
  const std::vector<std::size_t>& active_background_nodes() const noexcept { return bg_nodes_; }
  const TemporalBasis& time_basis() const noexcept { return time_; }

  /// Node coordinate of every column at the start of the slab.
  std::vector<double> column_positions(const SlabGeometry& geom) const;

 private:
  std::size_t slab_;
  std::vector<std::size_t> bg_nodes_;
  std::vector<std::ptrdiff_t> bg_index_;
  std::size_t n_overlap_;
  TemporalBasis time_;
};

/// A background node carries a dof unless it lies on the boundary or both of
/// its cells stay covered and uncut for the whole slab.
SlabSpace build_slab_space(const SlabGeometry& geom, const Discretization& disc);

struct BasisValue {
  double value;
  double dx;
  double dt;  ///< partial time derivative at fixed x
  double Dt;  ///< derivative along the mesh trajectories
};

/// One basis function (spatial dof, temporal mode) at (x, t), t in the closed slab.
BasisValue eval_basis(const SlabSpace& space, const SlabGeometry& geom, std::size_t dof, int mode,
                      double x, double t);

struct SlabData {
  SlabGeometry geometry;
  SlabSpace space;
};

/// Geometry and spaces of every slab of a run.
struct SpaceTimeDiscretization {
  std::shared_ptr<const Layout> layout;
  Discretization params;
  std::vector<SlabData> slabs;

  std::size_t n_slabs() const noexcept { return slabs.size(); }
};

std::shared_ptr<const SpaceTimeDiscretization> build_discretization(
    std::shared_ptr<const Layout> layout, const Discretization& disc);

/// A function in V_h: one coefficient vector per slab.
struct SpaceTimeSolution {
  std::shared_ptr<const SpaceTimeDiscretization> discretization;
  std::vector<Eigen::VectorXd> coefficients;
};

SpaceTimeSolution make_zero_function(std::shared_ptr<const SpaceTimeDiscretization> disc);

enum class SideSelect { Automatic, Outer, Inner };

struct PointValue {
  double value = 0.0;
  double dx = 0.0;
  double dt = 0.0;
  double Dt = 0.0;
  Side side = Side::Outer;
};

/// Discrete function with coefficients `c` on a given side and cell of that
/// side's mesh (background cell for Outer, overlapping cell for Inner).
PointValue eval_side(const SlabSpace& space, const SlabGeometry& geom, const Eigen::VectorXd& c,
                     Side side, std::size_t cell, double x, double t);

/// Evaluation on slab `slab` with t anywhere in the closed slab interval. The
/// Outer representation may be requested anywhere in the domain (it is the
/// background function); Inner only on the closure of G.
PointValue eval_on_slab(const SpaceTimeSolution& sol, std::size_t slab, double x, double t,
                        SideSelect side = SideSelect::Automatic);

/// Evaluation at t in [0, T] using the slab with t in (t_{n-1}, t_n].
PointValue eval_solution(const SpaceTimeSolution& sol, double x, double t,
                         SideSelect side = SideSelect::Automatic);

enum class Trace { Minus, Plus };

/// v_n^- or v_n^+ at breakpoint index n (0..N).
PointValue eval_trace(const SpaceTimeSolution& sol, std::size_t time_index, double x, Trace trace,
                      SideSelect side = SideSelect::Automatic);

}  // namespace stcut
