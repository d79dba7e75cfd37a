#pragma once

// Slab-sequential time marching. Each slab system is solved by banded LU with
// partial pivoting after ordering the unknowns by node position.

#include <Eigen/Core>

#include "stcut/assembly.hpp"
#include "stcut/core.hpp"
#include "stcut/spaces.hpp"

namespace stcut {

struct SolveReport {
  double rcond = 0.0;     ///< reciprocal condition estimate, infinity norm
  double residual = 0.0;  ///< ||Ax - b|| / (||A|| ||x|| + ||b||), infinity norms
  int lower_bandwidth = 0;
  int upper_bandwidth = 0;
};

/// Throws SingularSystemError when a pivot falls below 1e-14 ||A||_inf and
/// NumericalError when the relative residual exceeds 1e-10.
Eigen::VectorXd solve_slab(const SlabSystem& system, SolveReport* report = nullptr);

/// Solves slab after slab. Geometry errors propagate unchanged; assembly and
/// solver errors carry the slab index.
SpaceTimeSolution march(const ProblemSpec& problem, const OverlapSpec& overlap,
                        const Discretization& disc);

/// Same on a discretization that has already been built.
SpaceTimeSolution march(const ProblemSpec& problem,
                        std::shared_ptr<const SpaceTimeDiscretization> disc,
                        const FormOptions& opt);

struct ResidualReport {
  double max_abs = 0.0;  ///< max over slabs and test columns of |B_h(u_h, v) - L(v)|
  double scale = 0.0;    ///< max over slabs of ||A||_inf ||u_n||_inf + ||L||_inf
};

/// Galerkin residual of a computed solution, slab by slab.
ResidualReport galerkin_residual(const ProblemSpec& problem, const SpaceTimeSolution& sol,
                                 const FormOptions& opt);

}  // namespace stcut
