#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stcut/assembly.hpp"
#include "stcut/errors.hpp"

namespace stcut {
namespace {

using testing::make_setup;
using testing::random_function;

FormOptions exact_time(FormOptions opt = {}) {
  opt.time_rule = TimeRule::Gauss3;
  return opt;
}

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

TEST(AssembleLhs, TinyInstanceMatchesBruteForce) {
  for (int q : {0, 1})
    for (double mu : {0.0, 0.6}) {
      const auto s = make_setup(zero_problem({0.0, 1.0}, 0.25), 3, 1, 1, q, 0.2, 0.25, mu);
      const SlabData& sd = s.st->slabs[0];
      const Eigen::MatrixXd oracle = oracle::slab_terms(sd.space, sd.geometry, 10.0, 0.5).lhs();
      const Eigen::MatrixXd exact(assemble_lhs(sd.space, sd.geometry, exact_time()));
      EXPECT_LT(rel_diff(exact, oracle), 1e-10) << "q=" << q << " mu=" << mu;
      const Eigen::MatrixXd lobatto(assemble_lhs(sd.space, sd.geometry, FormOptions{}));
      if (q == 0 || mu == 0.0) {
        EXPECT_LT(rel_diff(lobatto, oracle), 1e-10) << "q=" << q << " mu=" << mu;
      }
    }
}

// Lobatto integrates the degree-4 cut-prism integrands of dG(1) only
// approximately. Without node crossings the swept distance is mu k and the
// error falls like k^3.
TEST(AssembleLhs, LobattoErrorForLinearInTimeShrinksWithStep) {
  double previous = 0.0;
  for (double T : {0.125, 0.0625, 0.03125}) {
    const auto s = make_setup(zero_problem({0.0, 1.0}, T), 3, 1, 1, 1, 0.36, 0.2, 0.6);
    ASSERT_TRUE(s.st->slabs[0].geometry.events.empty());
    const SlabData& sd = s.st->slabs[0];
    const Eigen::MatrixXd exact(assemble_lhs(sd.space, sd.geometry, exact_time()));
    const Eigen::MatrixXd lobatto(assemble_lhs(sd.space, sd.geometry, FormOptions{}));
    const double err = (lobatto - exact).cwiseAbs().maxCoeff();
    EXPECT_GT(err, 1e-12);
    if (previous > 0.0) {
      EXPECT_LT(err, previous / 6.0) << T;
    }
    previous = err;
  }
}

TEST(AssembleLhs, RandomGeometriesMatchBruteForce) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> mu(-0.6, 0.6), left(0.3, 0.4), len(0.15, 0.3);
  for (int trial = 0; trial < 4; ++trial) {
    const int q = trial % 2;
    const auto s = make_setup(zero_problem({0.0, 1.0}, 0.4), 9, 3, 2, q, left(rng), len(rng), mu(rng));
    for (const SlabData& sd : s.st->slabs) {
      const Eigen::MatrixXd oracle = oracle::slab_terms(sd.space, sd.geometry, 10.0, 0.5).lhs();
      const Eigen::MatrixXd a(assemble_lhs(sd.space, sd.geometry, exact_time()));
      EXPECT_LT(rel_diff(a, oracle), 1e-10) << trial;
    }
  }
}

TEST(AssembleLhs, WithoutInterfaceTermMatchesOracleParts) {
  const auto s = make_setup(zero_problem({0.0, 1.0}, 0.25), 5, 2, 1, 1, 0.2, 0.3, 0.5);
  const SlabData& sd = s.st->slabs[0];
  const oracle::SlabTerms t = oracle::slab_terms(sd.space, sd.geometry, 10.0, 0.5);
  FormOptions opt = exact_time();
  opt.interface_time_jump = false;
  const Eigen::MatrixXd a(assemble_lhs(sd.space, sd.geometry, opt));
  EXPECT_LT(rel_diff(a, t.lhs() - t.interface_jump), 1e-10);
  EXPECT_GT(t.interface_jump.cwiseAbs().maxCoeff(), 1e-3);
}

TEST(AssembleAht, SymmetricAndPositive) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto s = make_setup(zero_problem(), 13, 4, 3, 1, 0.31, 0.27, -0.2);
  for (const SlabData& sd : s.st->slabs)
    for (double f : {0.0, 0.37, 1.0}) {
      const double t = sd.geometry.t_start + f * sd.geometry.duration();
      const Eigen::MatrixXd a = assemble_Aht(sd.space, sd.geometry, t, FormOptions{});
      EXPECT_LE((a - a.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd v(a.rows());
        for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = u(rng);
        // the mode that vanishes at t carries no energy
        const int dead = f == 0.0 ? 1 : (f == 1.0 ? 0 : -1);
        if (dead >= 0)
          for (std::size_t d = 0; d < sd.space.n_spatial(); ++d) v[static_cast<Eigen::Index>(sd.space.column(d, dead))] = 0.0;
        EXPECT_GT(v.dot(a * v), 0.0);
      }
    }
}

TEST(AssembleAht, AffineFunctionEnergy) {
  const double alpha = 1.7, beta = -0.4;
  auto g = [&](double x) { return alpha * x + beta; };
  for (double mu : {0.0, 0.35}) {
    const auto s = make_setup(zero_problem(), 16, 5, 2, 0, 0.22, 0.31, mu);
    const SlabData& sd = s.st->slabs[1];
    const SlabGeometry& geo = sd.geometry;
    Eigen::VectorXd c(static_cast<Eigen::Index>(sd.space.n_columns()));
    for (std::size_t d = 0; d < sd.space.n_spatial(); ++d) {
      const double x = sd.space.is_background(d) ? geo.background().node(sd.space.node_of(d))
                                                 : geo.overlap_node(sd.space.node_of(d), geo.t_start);
      c[static_cast<Eigen::Index>(d)] = g(x);
    }
    const Eigen::MatrixXd a = assemble_Aht(sd.space, geo, geo.t_start, FormOptions{});
    // the boundary cells carry the Dirichlet-truncated interpolant
    const double h = 1.0 / 16;
    const double expect = alpha * alpha * (1.0 - 2 * h) + g(h) * g(h) / h + g(1 - h) * g(1 - h) / h;
    EXPECT_NEAR(c.dot(a * c), expect, 1e-10 * expect) << mu;
  }
}

TEST(AssembleSlab, ZeroDataGivesZeroRhs) {
  const auto s = make_setup(zero_problem(), 12, 3, 3, 1, 0.3, 0.25, 0.4);
  Eigen::VectorXd prev;
  for (std::size_t n = 0; n < 3; ++n) {
    const SlabSystem sys = assemble_slab(*s.st, n, s.problem, n == 0 ? nullptr : &prev, FormOptions{});
    EXPECT_EQ(sys.rhs.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(static_cast<std::size_t>(sys.matrix.rows()), s.st->slabs[n].space.n_columns());
    EXPECT_EQ(static_cast<std::size_t>(sys.matrix.cols()), s.st->slabs[n].space.n_columns());
    EXPECT_EQ(sys.column_positions.size(), s.st->slabs[n].space.n_columns());
    prev = Eigen::VectorXd::Zero(sys.matrix.rows());
  }
}

TEST(AssembleSlab, PreviousCoefficientsChecked) {
  const auto s = make_setup(zero_problem(), 12, 3, 3, 0, 0.3, 0.25, 0.4);
  Eigen::VectorXd wrong = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(assemble_slab(*s.st, 1, s.problem, nullptr, FormOptions{}), InvalidArgument);
  EXPECT_THROW(assemble_slab(*s.st, 1, s.problem, &wrong, FormOptions{}), InvalidArgument);
  EXPECT_THROW(assemble_slab(*s.st, 0, s.problem, &wrong, FormOptions{}), InvalidArgument);
  EXPECT_THROW(assemble_slab(*s.st, 3, s.problem, nullptr, FormOptions{}), InvalidArgument);
}

TEST(AssembleSource, ConstantSourceOnStationaryMeshes) {
  ProblemSpec p = zero_problem();
  p.source = [](double, double) { return 1.0; };
  p.initial = [](double) { return 1.0; };
  for (int q : {0, 1}) {
    const auto s = make_setup(p, 10, 4, 4, q, 0.42, 0.2, 0.0);
    const SlabData& sd = s.st->slabs[2];
    const Eigen::VectorXd f = assemble_source(sd.space, sd.geometry, p.source);
    const Eigen::VectorXd u0 = assemble_initial_term(sd.space, sd.geometry, p.initial);
    const double k = 0.25;
    for (std::size_t node : {1u, 2u, 8u}) {
      const auto d = *sd.space.background_dof(node);
      for (int m = 0; m < sd.space.n_modes(); ++m) {
        const auto c = static_cast<Eigen::Index>(sd.space.column(d, m));
        EXPECT_NEAR(f[c], 0.1 * k / sd.space.n_modes(), 1e-15);
        EXPECT_NEAR(u0[c], m == 0 ? 0.1 : 0.0, 1e-15);
      }
    }
    const auto c = static_cast<Eigen::Index>(sd.space.column(sd.space.overlap_dof(2), 0));
    EXPECT_NEAR(f[c], 0.05 * k / sd.space.n_modes(), 1e-15);
  }
}

TEST(TraceCoupling, MatchesOracle) {
  for (int q : {0, 1}) {
    const auto s = make_setup(zero_problem(), 11, 3, 3, q, 0.27, 0.3, 0.3);
    for (std::size_t n = 1; n < 3; ++n) {
      const Eigen::MatrixXd c(assemble_trace_coupling(s.st->slabs[n - 1], s.st->slabs[n]));
      EXPECT_LT(rel_diff(c, oracle::cross_trace(s.st->slabs[n - 1], s.st->slabs[n])), 1e-12);
    }
    EXPECT_THROW(assemble_trace_coupling(s.st->slabs[0], s.st->slabs[2]), InvalidArgument);
  }
}

TEST(BilinearForm, IntegrationByPartsIdentity) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> mu(-0.6, 0.6), left(0.25, 0.4), len(0.15, 0.3);
  for (int geo = 0; geo < 3; ++geo) {
    const int q = geo % 2;
    const auto s = make_setup(zero_problem({0.0, 1.0}, 0.5), 10, 3, 3, q, left(rng), len(rng), mu(rng));
    const BilinearForm form(s.st, exact_time());
    for (int pair = 0; pair < 4; ++pair) {
      const SpaceTimeSolution w = random_function(s.st, rng);
      const SpaceTimeSolution v = random_function(s.st, rng);
      const double b = form.apply(w, v);
      const double alt = oracle::alternative_form(w, v, 10.0, 0.5);
      EXPECT_NEAR(b, alt, 1e-9 * std::max(1.0, std::abs(b))) << geo << " " << pair;
    }
  }
}

TEST(BilinearForm, PositiveOnRandomFunctions) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> mu(-0.25, 0.25);
  for (int i = 0; i < 5; ++i) {
    const auto s = make_setup(zero_problem(), 16, 4, 4, i % 2, 0.3, 0.25, mu(rng));
    const BilinearForm form(s.st, FormOptions{});
    for (int j = 0; j < 10; ++j) {
      const SpaceTimeSolution v = random_function(s.st, rng);
      EXPECT_GT(form.apply(v, v), 0.0);
    }
  }
}

TEST(BilinearForm, MismatchedDiscretizationsRejected) {
  const auto a = make_setup(zero_problem(), 8, 2, 2, 0, 0.3, 0.25, 0.1);
  const auto b = make_setup(zero_problem(), 8, 2, 2, 0, 0.3, 0.25, 0.1);
  const SpaceTimeSolution w = make_zero_function(a.st);
  const SpaceTimeSolution v = make_zero_function(b.st);
  EXPECT_THROW(apply_Bh(w, v, FormOptions{}), InvalidArgument);
  EXPECT_NO_THROW(apply_Bh(w, w, FormOptions{}));
}

TEST(BilinearForm, StationaryInterfaceTermVanishes) {
  const auto s = make_setup(zero_problem(), 12, 3, 2, 1, 0.3, 0.25, 0.0);
  FormOptions off;
  off.interface_time_jump = false;
  for (const SlabData& sd : s.st->slabs) {
    const Eigen::MatrixXd a(assemble_lhs(sd.space, sd.geometry, FormOptions{}));
    const Eigen::MatrixXd b(assemble_lhs(sd.space, sd.geometry, off));
    EXPECT_EQ((a - b).cwiseAbs().maxCoeff(), 0.0);
  }
}

}  // namespace
}  // namespace stcut
