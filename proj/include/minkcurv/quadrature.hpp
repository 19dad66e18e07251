#pragma once

#include <span>
#include <vector>

#include "minkcurv/types.hpp"

namespace minkcurv {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached; n in [1, 64].
const GaussRule& gauss_legendre(int n);

inline constexpr int kPanelOrder = 8;

struct QuadNode {
  double u = 0, v = 0;
  double weight = 0;  // tensor Gauss weight times the chart's partition weight
};

// Tensor product of per-panel Gauss rules over [u0,u1] x [v0,v1].
std::vector<QuadNode> tensor_nodes(double u0, double u1, int panels_u, double v0, double v1,
                                   int panels_v, int order = kPanelOrder);

// Integral of f over [a,b] with `panels` equal panels of the given order.
template <class F>
double integrate_1d(F&& f, double a, double b, int panels, int order = kPanelOrder) {
  const GaussRule& rule = gauss_legendre(order);
  const double w = (b - a) / panels;
  double total = 0;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * w;
    double part = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      part += rule.weights[i] * f(mid + 0.5 * w * rule.nodes[i]);
    total += 0.5 * w * part;
  }
  return total;
}

// Order-independent of thread count; recursive halving keeps rounding growth
// logarithmic.
double pairwise_sum(std::span<const double> values);

// Unit direction on S^2 and its derivatives for the two spherical charts used
// by every sphere-like atlas. Chart 0 has its poles on +-z, chart 1 on +-x;
// (u, v) = (polar angle, azimuth) in both.
struct DirectionJet {
  Vec3 d, du, dv, duu, duv, dvv;
};
DirectionJet spherical_direction(int chart, double theta, double phi);

// Inverse of spherical_direction for a unit vector d.
void spherical_angles(int chart, const Vec3& d, double& theta, double& phi);

// Smooth partition of unity over the two spherical charts, as a function of
// the unit direction. Each weight vanishes identically on a cap around its
// own chart's poles; weights sum to one.
double spherical_partition_weight(int chart, const Vec3& d);

}  // namespace minkcurv
