#pragma once

// Single solves with sampled output, and randomized property checks.

#include <cstddef>
#include <cstdint>
#include <iosfwd>

#include "config.hpp"
#include "stcut/spaces.hpp"

namespace stcut::app {

SpaceTimeSolution run_single(const RunConfig& cfg);

/// x, t, u_h on a uniform grid with samples_x points in space and samples_t
/// points in [0, T] (t = 0 is the start trace of the first slab).
void write_solution_csv(std::ostream& out, const SpaceTimeSolution& sol, std::size_t samples_x,
                        std::size_t samples_t);

/// One row per slab: time interval, velocity and interface positions at both ends.
void write_geometry_csv(std::ostream& out, const SpaceTimeSolution& sol);

struct CheckReport {
  std::size_t samples = 0;
  double min_coercivity = 0.0;  ///< min over random v of B_h(v, v) / |||v|||_B^2
  double max_asymmetry = 0.0;   ///< max |A - A^T| of the energy form at the sampled times
  double galerkin_residual = 0.0;
  double residual_scale = 0.0;
};

/// Random-vector checks on the configured discretization, reproducible from `seed`.
CheckReport run_checks(const RunConfig& cfg, std::uint64_t seed, std::size_t samples);

}  // namespace stcut::app
