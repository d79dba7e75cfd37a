#include "single.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <sstream>

#include "stcut/assembly.hpp"
#include "stcut/norms.hpp"
#include "stcut/solver.hpp"

namespace stcut::app {

SpaceTimeSolution run_single(const RunConfig& cfg) {
  return march(cfg.problem(), cfg.overlap, cfg.disc);
}

void write_solution_csv(std::ostream& out, const SpaceTimeSolution& sol, std::size_t samples_x,
                        std::size_t samples_t) {
  const Layout& layout = *sol.discretization->layout;
  const double T = layout.time.final_time();
  std::ostringstream line;
  line.precision(12);
  out << "x,t,u_h,side\n";
  for (std::size_t j = 0; j < samples_t; ++j) {
    const double t = samples_t == 1 ? T : T * static_cast<double>(j) / static_cast<double>(samples_t - 1);
    for (std::size_t i = 0; i < samples_x; ++i) {
      const double x = layout.omega.lo + layout.omega.length() * static_cast<double>(i) /
                                             static_cast<double>(samples_x - 1);
      const PointValue v = eval_solution(sol, x, t);
      line.str("");
      line << x << ',' << t << ',' << v.value << ',' << static_cast<int>(v.side) << '\n';
      out << line.str();
    }
  }
}

void write_geometry_csv(std::ostream& out, const SpaceTimeSolution& sol) {
  std::ostringstream line;
  line.precision(12);
  out << "slab,t_start,t_end,velocity,left_start,left_end,right_start,right_end,events,cut_cells\n";
  for (const SlabData& sd : sol.discretization->slabs) {
    const SlabGeometry& g = sd.geometry;
    line.str("");
    line << g.slab + 1 << ',' << g.t_start << ',' << g.t_end << ',' << g.velocity << ','
         << g.left.at(g.t_start) << ',' << g.left.at(g.t_end) << ',' << g.right.at(g.t_start) << ','
         << g.right.at(g.t_end) << ',' << g.events.size() << ',' << g.cut_cells.size() << '\n';
    out << line.str();
  }
}

CheckReport run_checks(const RunConfig& cfg, std::uint64_t seed, std::size_t samples) {
  const ProblemSpec problem = cfg.problem();
  const auto layout = make_layout(problem, cfg.overlap, cfg.disc);
  const auto disc = build_discretization(layout, cfg.disc);
  const FormOptions opt = FormOptions::from(cfg.disc);

  CheckReport rep;
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const BilinearForm form(disc, opt);
  rep.min_coercivity = samples ? INFINITY : 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    SpaceTimeSolution v = make_zero_function(disc);
    for (Eigen::VectorXd& c : v.coefficients)
      for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = coef(rng);
    const double b = xnorm(v).b_sq();
    if (b > 0.0) rep.min_coercivity = std::min(rep.min_coercivity, form.apply(v, v) / b);
  }
  for (const SlabData& sd : disc->slabs) {
    const double t = 0.5 * (sd.geometry.t_start + sd.geometry.t_end);
    const Eigen::MatrixXd a = assemble_Aht(sd.space, sd.geometry, t, opt);
    rep.max_asymmetry = std::max(rep.max_asymmetry, (a - a.transpose()).cwiseAbs().maxCoeff());
  }
  const SpaceTimeSolution sol = march(problem, disc, opt);
  const ResidualReport r = galerkin_residual(problem, sol, opt);
  rep.galerkin_residual = r.max_abs;
  rep.residual_scale = r.scale;
  return rep;
}

}  // namespace stcut::app
