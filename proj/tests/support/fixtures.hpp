#pragma once

#include <memory>
#include <random>
#include <variant>

#include <Eigen/Core>

#include "stcut/core.hpp"
#include "stcut/spaces.hpp"

namespace stcut::testing {

struct Setup {
  ProblemSpec problem;
  OverlapSpec overlap;
  Discretization disc;
  std::shared_ptr<const SpaceTimeDiscretization> st;
};

inline Setup make_setup(ProblemSpec problem, std::size_t n0, std::size_t nG, std::size_t N, int q,
                        double left, double length, std::variant<double, TimeFunction> mu) {
  Setup s;
  s.problem = std::move(problem);
  s.overlap.initial_left = left;
  s.overlap.length = length;
  s.overlap.velocity = std::move(mu);
  s.disc.n_background = n0;
  s.disc.n_overlap = nG;
  s.disc.n_slabs = N;
  s.disc.time_degree = q;
  s.st = build_discretization(make_layout(s.problem, s.overlap, s.disc), s.disc);
  return s;
}

inline SpaceTimeSolution random_function(std::shared_ptr<const SpaceTimeDiscretization> disc,
                                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpaceTimeSolution f = make_zero_function(disc);
  for (Eigen::VectorXd& c : f.coefficients)
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = u(rng);
  return f;
}

}  // namespace stcut::testing
