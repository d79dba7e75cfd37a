#pragma once

// Slab-by-slab assembly of the space-time cut formulation.
//
// Per slab the left-hand side collects, for trial w and test v,
//   sum_i int_{I_n} (w_t, v)_{Omega_i(t)} dt + int_{I_n} A_{h,t}(w, v) dt
//   + (w^+_{n-1}, v^+_{n-1})_{Omega_0} + sum_{interfaces} int_{I_n} n_1 mu [w] v_sigma dt,
// and A_{h,t} is the Nitsche form with the |mu_bar| weighted penalty and the
// gradient-jump stabilization on the covered part of cut cells. The previous
// slab enters only through the right-hand side trace (u^-_{n-1}, v^+_{n-1}).

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "stcut/core.hpp"
#include "stcut/geometry.hpp"
#include "stcut/spaces.hpp"

namespace stcut {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Temporal rule for the time-dependent left-hand side integrals (cut prisms
/// and interfaces). Gauss3 integrates them exactly for q <= 1.
enum class TimeRule { Lobatto3, Gauss3 };

struct FormOptions {
  double gamma = 10.0;
  double omega1 = 0.5;
  /// The space-time jump term over the moving interfaces. Only switched off to
  /// demonstrate that it is needed.
  bool interface_time_jump = true;
  TimeRule time_rule = TimeRule::Lobatto3;

  static FormOptions from(const Discretization& disc) noexcept {
    return {disc.gamma, disc.omega1, true, TimeRule::Lobatto3};
  }
};

struct SlabSystem {
  std::size_t slab = 0;
  SparseMatrix matrix;  ///< rows: test columns, cols: trial columns
  Eigen::VectorXd rhs;
  std::vector<double> column_positions;  ///< used to order unknowns for the band solver
};

/// A_{h,t}(phi_j, phi_i) over all slab columns at one time t (temporal basis
/// evaluated at t). Dense; meant for inspection and tests.
Eigen::MatrixXd assemble_Aht(const SlabSpace& space, const SlabGeometry& geom, double t,
                             const FormOptions& opt);

/// Left-hand side of one slab.
SparseMatrix assemble_lhs(const SlabSpace& space, const SlabGeometry& geom, const FormOptions& opt);

/// (w^-, v^+) at the start of `current`, with w from `previous`. Rows are the
/// columns of `current`, columns those of `previous`.
SparseMatrix assemble_trace_coupling(const SlabData& previous, const SlabData& current);

/// (u0, v^+_0) for the first slab.
Eigen::VectorXd assemble_initial_term(const SlabSpace& space, const SlabGeometry& geom,
                                      const SpatialFunction& u0);

/// int_{I_n} (f, v) dt prism by prism: midpoint (q = 0) or Lobatto (q = 1) in
/// time, then the trapezoidal rule in space. Cut cells split their time panel
/// where an interface passes one of their nodes.
Eigen::VectorXd assemble_source(const SlabSpace& space, const SlabGeometry& geom,
                                const SpaceTimeFunction& f);

/// Full system of slab `slab`. `previous` holds the coefficients of slab
/// `slab - 1` and must be null for the first slab.
SlabSystem assemble_slab(const SpaceTimeDiscretization& disc, std::size_t slab,
                         const ProblemSpec& problem, const Eigen::VectorXd* previous,
                         const FormOptions& opt);

/// B_h on a fixed discretization, with slab matrices and trace couplings
/// assembled once so that many evaluations are cheap.
class BilinearForm {
 public:
  BilinearForm(std::shared_ptr<const SpaceTimeDiscretization> disc, const FormOptions& opt);

  double apply(const SpaceTimeSolution& w, const SpaceTimeSolution& v) const;

  const SparseMatrix& slab_matrix(std::size_t slab) const { return slab_matrices_[slab]; }
  /// Coupling between slab - 1 and slab; slab >= 1.
  const SparseMatrix& coupling(std::size_t slab) const { return couplings_[slab]; }

 private:
  std::shared_ptr<const SpaceTimeDiscretization> disc_;
  std::vector<SparseMatrix> slab_matrices_;
  std::vector<SparseMatrix> couplings_;
};

/// B_h(w, v) summed over all slabs, including the time jumps between slabs.
/// Throws InvalidArgument when w and v live on different discretizations.
double apply_Bh(const SpaceTimeSolution& w, const SpaceTimeSolution& v, const FormOptions& opt);

}  // namespace stcut
