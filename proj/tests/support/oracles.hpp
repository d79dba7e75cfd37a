#pragma once

// Reference computations for the tests. Everything here is written from the
// formulas directly: explicit hat functions, its own kink detection and a
// five-point Gauss rule, without the assembly, quadrature or norms modules.

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "stcut/core.hpp"
#include "stcut/geometry.hpp"
#include "stcut/spaces.hpp"

namespace stcut::oracle {

/// Slab integrals of every term of the space-time form, all exact for P1 in
/// space and q <= 1 in time. Rows are test columns, columns trial columns.
struct SlabTerms {
  Eigen::MatrixXd time_derivative;  ///< sum_i int (w_dot, v)_{Omega_i(t)} dt
  Eigen::MatrixXd energy;           ///< int A_{h,t}(w, v) dt
  Eigen::MatrixXd interface_jump;   ///< sum over interfaces of int n_1 mu [w] v_sigma dt
  Eigen::MatrixXd downwind;         ///< sum over interfaces of int n_1 mu w_zeta [v] dt
  Eigen::MatrixXd start_trace;      ///< (w^+, v^+) at the start of the slab
  Eigen::MatrixXd end_trace;        ///< (w^-, v^-) at the end of the slab

  Eigen::MatrixXd lhs() const { return time_derivative + energy + interface_jump + start_trace; }
};

SlabTerms slab_terms(const SlabSpace& space, const SlabGeometry& geom, double gamma,
                     double omega1);

/// (w^-_n, v^+_n) between slab `previous` (trial) and the next one (test).
Eigen::MatrixXd cross_trace(const SlabData& previous, const SlabData& next);

/// B_h(w, v) from the integrated-by-parts representation:
///   sum_n [-(w, v_dot) + A - n_1 mu w_zeta [v]] - sum_{n<N} (w^-_n, [v]_n) + (w^-_N, v^-_N).
double alternative_form(const SpaceTimeSolution& w, const SpaceTimeSolution& v, double gamma,
                        double omega1);

/// Plain Gaussian elimination with partial pivoting.
Eigen::VectorXd gaussian_elimination(Eigen::MatrixXd a, Eigen::VectorXd b);

/// X-norm squared of the exact solution itself (the error of u_h = 0),
/// integrated with `density` times more panels than the cells and slabs.
double exact_xnorm_sq(const Layout& layout, const ExactSolution& exact, double omega1,
                      std::size_t density);

/// Standard dG(q)-cG(1) on a single uniform mesh: nodal values (all nodes,
/// boundary included) of u_h(t_n^-) for n = 1..N. Same quadrature as the cut
/// solver: trapezoid in space and midpoint (q = 0) or Lobatto (q = 1) in time
/// for the source, three-point Gauss for u0.
std::vector<Eigen::VectorXd> single_mesh_dg(const ProblemSpec& problem, std::size_t n_cells,
                                            std::size_t n_slabs, int q);

}  // namespace stcut::oracle
