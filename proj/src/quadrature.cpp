#include "minkcurv/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace minkcurv {
namespace {

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.weights[i] = 2.0 / ((1 - x * x) * dp * dp);
  }
  return rule;
}

constexpr double kCapThreshold = 0.8;

// exp(-1/(0.8 - t)), vanishing for t >= 0.8.
double bump(double t) {
  if (t >= kCapThreshold) return 0.0;
  return std::exp(-1.0 / (kCapThreshold - t));
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 64) throw Error(ErrorCode::InvalidInput, "Gauss-Legendre order must be in [1, 64]");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(build_rule(n));
  return *slot;
}

std::vector<QuadNode> tensor_nodes(double u0, double u1, int panels_u, double v0, double v1,
                                   int panels_v, int order) {
  const GaussRule& rule = gauss_legendre(order);
  const double wu = (u1 - u0) / panels_u;
  const double wv = (v1 - v0) / panels_v;
  std::vector<QuadNode> out;
  out.reserve(static_cast<std::size_t>(panels_u) * panels_v * order * order);
  for (int pu = 0; pu < panels_u; ++pu)
    for (int pv = 0; pv < panels_v; ++pv)
      for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
          QuadNode node;
          node.u = u0 + (pu + 0.5 + 0.5 * rule.nodes[i]) * wu;
          node.v = v0 + (pv + 0.5 + 0.5 * rule.nodes[j]) * wv;
          node.weight = 0.25 * wu * wv * rule.weights[i] * rule.weights[j];
          out.push_back(node);
        }
  return out;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

DirectionJet spherical_direction(int chart, double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  DirectionJet j;
  j.d = Vec3(st * cp, st * sp, ct);
  j.du = Vec3(ct * cp, ct * sp, -st);
  j.dv = Vec3(-st * sp, st * cp, 0);
  j.duu = -j.d;
  j.duv = Vec3(-ct * sp, ct * cp, 0);
  j.dvv = Vec3(-st * cp, -st * sp, 0);
  if (chart == 1) {
    // Cyclic relabelling (x,y,z) -> (z,x,y): orientation preserving.
    auto perm = [](const Vec3& a) { return Vec3(a.z(), a.x(), a.y()); };
    j.d = perm(j.d);
    j.du = perm(j.du);
    j.dv = perm(j.dv);
    j.duu = perm(j.duu);
    j.duv = perm(j.duv);
    j.dvv = perm(j.dvv);
  }
  return j;
}

void spherical_angles(int chart, const Vec3& d, double& theta, double& phi) {
  Vec3 a = chart == 1 ? Vec3(d.y(), d.z(), d.x()) : d;
  theta = std::acos(std::clamp(a.z(), -1.0, 1.0));
  phi = std::atan2(a.y(), a.x());
  if (phi < 0) phi += 2 * std::numbers::pi;
}

double spherical_partition_weight(int chart, const Vec3& d) {
  const double n2 = d.squaredNorm();
  const double bz = bump(d.z() * d.z() / n2);
  const double bx = bump(d.x() * d.x() / n2);
  return (chart == 0 ? bz : bx) / (bz + bx);
}

}  // namespace minkcurv
