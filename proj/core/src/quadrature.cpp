#include "stcut/quadrature.hpp"

#include <cmath>

namespace stcut {

Rule1D lobatto3() { return {{0.0, 0.5, 1.0}, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}}; }

Rule1D gauss_legendre3() {
  const double d = 0.5 * std::sqrt(0.6);
  return {{0.5 - d, 0.5, 0.5 + d}, {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}};
}

Rule1D midpoint() { return {{0.5}, {1.0}}; }

Rule1D trapezoid() { return {{0.0, 1.0}, {0.5, 0.5}}; }

std::vector<QuadPoint> map_rule(const Rule1D& rule, double a, double b) {
  std::vector<QuadPoint> out;
  out.reserve(rule.size());
  const double len = b - a;
  for (std::size_t i = 0; i < rule.size(); ++i)
    out.push_back({a + len * rule.nodes[i], len * rule.weights[i]});
  return out;
}

std::vector<QuadPoint> composite_rule(double a, double b, std::span<const double> breaks,
                                      const Rule1D& rule) {
  std::vector<QuadPoint> out;
  out.reserve((breaks.size() + 1) * rule.size());
  double left = a;
  auto add_panel = [&](double right) {
    if (right <= left) return;
    const double len = right - left;
    for (std::size_t i = 0; i < rule.size(); ++i)
      out.push_back({left + len * rule.nodes[i], len * rule.weights[i]});
    left = right;
  };
  for (double t : breaks)
    if (t > a && t < b) add_panel(t);
  add_panel(b);
  return out;
}

}  // namespace stcut
