#pragma once

#include <span>
#include <vector>

namespace stcut {

/// Quadrature rule on the reference interval [0, 1]; weights sum to one.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

Rule1D lobatto3();         ///< {0, 1/2, 1}, exact to degree 3
Rule1D gauss_legendre3();  ///< exact to degree 5
Rule1D midpoint();         ///< exact to degree 1
Rule1D trapezoid();        ///< exact to degree 1

struct QuadPoint {
  double x;
  double weight;
};

/// `rule` mapped to [a, b].
std::vector<QuadPoint> map_rule(const Rule1D& rule, double a, double b);

/// `rule` applied on every panel of [a, b] split at `breaks` (sorted, interior).
/// Shared panel endpoints are not merged, so a 3-point rule on two panels
/// yields six points.
std::vector<QuadPoint> composite_rule(double a, double b, std::span<const double> breaks,
                                      const Rule1D& rule);

template <class F>
double integrate(const Rule1D& rule, double a, double b, F&& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    sum += rule.weights[i] * f(a + (b - a) * rule.nodes[i]);
  return sum * (b - a);
}

}  // namespace stcut
