#include "stcut/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <lapacke.h>

#include "stcut/errors.hpp"

namespace stcut {

namespace {

double inf_norm(const SparseMatrix& a) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

}  // namespace

Eigen::VectorXd solve_slab(const SlabSystem& system, SolveReport* report) {
  const SparseMatrix& a = system.matrix;
  const Eigen::Index n = a.rows();
  if (a.cols() != n || system.rhs.size() != n)
    throw InvalidArgument("solve_slab: matrix and right-hand side sizes differ");
  if (n == 0) return Eigen::VectorXd();

  // perm[new] = old, ordering unknowns by position so the matrix becomes banded
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  if (system.column_positions.size() == static_cast<std::size_t>(n))
    std::stable_sort(perm.begin(), perm.end(), [&](int i, int j) {
      return system.column_positions[static_cast<std::size_t>(i)] <
             system.column_positions[static_cast<std::size_t>(j)];
    });
  std::vector<int> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);

  int kl = 0, ku = 0;
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const int d = inv[static_cast<std::size_t>(it.row())] - inv[static_cast<std::size_t>(it.col())];
      kl = std::max(kl, d);
      ku = std::max(ku, -d);
    }

  const int ni = static_cast<int>(n);
  const int ldab = 2 * kl + ku + 1;
  std::vector<double> ab(static_cast<std::size_t>(ldab) * static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const int i = inv[static_cast<std::size_t>(it.row())];
      const int j = inv[static_cast<std::size_t>(it.col())];
      ab[static_cast<std::size_t>(kl + ku + i - j) + static_cast<std::size_t>(j) * ldab] += it.value();
    }

  const double norm_a = inf_norm(a);
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, ni, ni, kl, ku, ab.data(), ldab, ipiv.data());
  if (info < 0) throw NumericalError("solve_slab: dgbtrf argument error " + std::to_string(info));

  double min_pivot = INFINITY;
  for (int j = 0; j < ni; ++j)
    min_pivot = std::min(min_pivot, std::abs(ab[static_cast<std::size_t>(kl + ku) + static_cast<std::size_t>(j) * ldab]));
  double rcond = 0.0;
  if (info == 0)
    LAPACKE_dgbcon(LAPACK_COL_MAJOR, 'I', ni, kl, ku, ab.data(), ldab, ipiv.data(), norm_a, &rcond);
  if (info > 0 || min_pivot < 1e-14 * norm_a)
    throw SingularSystemError(system.slab, rcond,
                              "slab " + std::to_string(system.slab) +
                                  ": singular system (smallest pivot " + std::to_string(min_pivot) +
                                  ", rcond " + std::to_string(rcond) + ")");

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = system.rhs[perm[static_cast<std::size_t>(i)]];
  const lapack_int info2 = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', ni, kl, ku, 1, ab.data(), ldab,
                                          ipiv.data(), y.data(), ni);
  if (info2 != 0) throw NumericalError("solve_slab: dgbtrs failed");
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[perm[static_cast<std::size_t>(i)]] = y[i];

  const double denom = norm_a * x.lpNorm<Eigen::Infinity>() + system.rhs.lpNorm<Eigen::Infinity>();
  const double resid = denom > 0.0 ? (a * x - system.rhs).lpNorm<Eigen::Infinity>() / denom : 0.0;
  if (!(resid <= 1e-10))
    throw NumericalError("slab " + std::to_string(system.slab) + ": relative residual " +
                         std::to_string(resid) + " exceeds 1e-10");
  if (report) *report = {rcond, resid, kl, ku};
  return x;
}

SpaceTimeSolution march(const ProblemSpec& problem,
                        std::shared_ptr<const SpaceTimeDiscretization> disc,
                        const FormOptions& opt) {
  if (!disc) throw InvalidArgument("march: null discretization");
  SpaceTimeSolution sol{disc, {}};
  sol.coefficients.reserve(disc->n_slabs());
  for (std::size_t n = 0; n < disc->n_slabs(); ++n) {
    const Eigen::VectorXd* prev = n == 0 ? nullptr : &sol.coefficients.back();
    SlabSystem sys;
    try {
      sys = assemble_slab(*disc, n, problem, prev, opt);
    } catch (const NumericalError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw AssemblyError(n, "slab " + std::to_string(n) + ": " + e.what());
    }
    sol.coefficients.push_back(solve_slab(sys));
  }
  return sol;
}

ResidualReport galerkin_residual(const ProblemSpec& problem, const SpaceTimeSolution& sol,
                                 const FormOptions& opt) {
  if (!sol.discretization || sol.coefficients.size() != sol.discretization->n_slabs())
    throw InvalidArgument("galerkin_residual: incomplete solution");
  const SpaceTimeDiscretization& disc = *sol.discretization;
  ResidualReport rep;
  for (std::size_t n = 0; n < disc.n_slabs(); ++n) {
    const SlabSystem sys =
        assemble_slab(disc, n, problem, n == 0 ? nullptr : &sol.coefficients[n - 1], opt);
    const Eigen::VectorXd& u = sol.coefficients[n];
    rep.max_abs = std::max(rep.max_abs, (sys.matrix * u - sys.rhs).lpNorm<Eigen::Infinity>());
    rep.scale = std::max(rep.scale, inf_norm(sys.matrix) * u.lpNorm<Eigen::Infinity>() +
                                        sys.rhs.lpNorm<Eigen::Infinity>());
  }
  return rep;
}

SpaceTimeSolution march(const ProblemSpec& problem, const OverlapSpec& overlap,
                        const Discretization& disc) {
  problem.validate();
  auto layout = make_layout(problem, overlap, disc);
  return march(problem, build_discretization(layout, disc), FormOptions::from(disc));
}

}  // namespace stcut
