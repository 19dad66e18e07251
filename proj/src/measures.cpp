#include "minkcurv/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minkcurv/parallel.hpp"

namespace minkcurv {

std::vector<ChartNodes> quadrature_grid(const Surface& surface, int level) {
  std::vector<ChartNodes> grid;
  for (int c = 0; c < surface.chart_count(); ++c) {
    const ChartDomain& d = surface.chart(c).domain();
    const auto [pu, pv] = surface.base_panels(c);
    ChartNodes cn;
    cn.chart = c;
    for (QuadNode q : tensor_nodes(d.u0, d.u1, pu << level, d.v0, d.v1, pv << level)) {
      const double w = surface.partition_weight(c, q.u, q.v);
      if (w <= 0) continue;
      q.weight *= w;
      cn.nodes.push_back(q);
    }
    grid.push_back(std::move(cn));
  }
  return grid;
}

namespace {

struct NodeTerms {
  double w = 0;
  double omega = 0, K = 0, H = 0, rho = 0, KM = 0, area = 0;
  double lambda1 = 0, eta_xi = 0, mismatch = 0, residual = 0;
};

}  // namespace

SurfaceMeasures integrate_level(const Surface& surface, const NormGauge& norm, int level) {
  const std::vector<ChartNodes> grid = quadrature_grid(surface, level);
  std::vector<std::pair<int, QuadNode>> flat;
  for (const ChartNodes& cn : grid)
    for (const QuadNode& q : cn.nodes) flat.emplace_back(cn.chart, q);

  std::vector<NodeTerms> terms(flat.size());
  parallel_for(flat.size(), [&](std::size_t i) {
    const auto& [c, q] = flat[i];
    const SurfaceChart& chart = surface.chart(c);
    const CurvatureSample s = curvature_sample(chart, norm, q.u, q.v);
    const EuclideanGeometry g = euclidean_geometry(chart, q.u, q.v);
    NodeTerms& t = terms[i];
    t.w = q.weight;
    t.omega = s.omega_density;
    t.K = s.K;
    t.H = s.H;
    t.rho = s.p.dot(s.xi) / s.eta_xi;
    t.KM = g.K;
    t.area = s.area_density;
    t.lambda1 = s.lambda1;
    t.eta_xi = s.eta_xi;
    t.mismatch = std::abs(s.omega_density - s.eta_xi * s.area_density) / s.area_density;
    t.residual = s.residual;
  });

  const std::size_t n = terms.size();
  auto integral = [&](auto&& f) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = terms[i].w * f(terms[i]);
    return pairwise_sum(v);
  };

  SurfaceMeasures m;
  m.level = level;
  m.nodes = n;
  m.lambda_M = integral([](const NodeTerms& t) { return t.omega; });
  m.int_K = integral([](const NodeTerms& t) { return t.K * t.omega; });
  m.int_abs_K = integral([](const NodeTerms& t) { return std::abs(t.K) * t.omega; });
  m.int_H = integral([](const NodeTerms& t) { return t.H * t.omega; });
  m.int_H2 = integral([](const NodeTerms& t) { return t.H * t.H * t.omega; });
  m.flux_volume = integral([](const NodeTerms& t) { return t.rho * t.omega; }) / 3;
  m.alexandrov = integral([](const NodeTerms& t) { return (1 - t.rho * t.H) * t.omega; });
  m.int_K_plus = integral([](const NodeTerms& t) { return std::max(t.K, 0.0) * t.omega; });
  m.int_KM_plus_e = integral([](const NodeTerms& t) { return std::max(t.KM, 0.0) * t.area; });
  m.euclidean_area = integral([](const NodeTerms& t) { return t.area; });

  constexpr double inf = std::numeric_limits<double>::infinity();
  m.min_H = m.min_K = m.min_eta_xi = inf;
  m.max_H = m.max_K = m.max_lambda1 = m.max_eta_xi = -inf;
  std::vector<double> hs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeTerms& t = terms[i];
    m.min_H = std::min(m.min_H, t.H);
    m.max_H = std::max(m.max_H, t.H);
    m.min_K = std::min(m.min_K, t.K);
    m.max_K = std::max(m.max_K, t.K);
    m.max_lambda1 = std::max(m.max_lambda1, t.lambda1);
    m.min_eta_xi = std::min(m.min_eta_xi, t.eta_xi);
    m.max_eta_xi = std::max(m.max_eta_xi, t.eta_xi);
    m.max_omega_mismatch = std::max(m.max_omega_mismatch, t.mismatch);
    m.max_residual = std::max(m.max_residual, t.residual);
    hs[i] = t.H;
  }
  m.mean_H = pairwise_sum(hs) / static_cast<double>(n);
  for (double& h : hs) h = (h - m.mean_H) * (h - m.mean_H);
  m.stdev_H = std::sqrt(pairwise_sum(hs) / static_cast<double>(n));
  m.int_invH = m.min_H > 0 ? integral([](const NodeTerms& t) { return t.omega / t.H; })
                           : std::numeric_limits<double>::quiet_NaN();
  return m;
}

SurfaceMeasures integrate_surface(const Surface& surface, const NormGauge& norm, const GridSpec& grid) {
  if (grid.max_levels < 2) throw Error(ErrorCode::InvalidInput, "need at least two grid levels to check convergence");
  SurfaceMeasures prev = integrate_level(surface, norm, grid.start_level);
  double change = 0;
  for (int k = 1; k < grid.max_levels; ++k) {
    SurfaceMeasures cur = integrate_level(surface, norm, grid.start_level + k);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    change = std::max({rel(prev.lambda_M, cur.lambda_M), rel(prev.int_abs_K, cur.int_abs_K),
                       rel(prev.int_H2, cur.int_H2)});
    cur.last_change = change;
    if (change < grid.rel_tol) return cur;
    prev = cur;
  }
  throw Error(ErrorCode::QuadratureNotConverged,
              "integrals over " + surface.describe() + " still moved by " + std::to_string(change) +
                  " relative at the finest level");
}

double minkowski_area(const Surface& s, const NormGauge& n, const GridSpec& g) {
  return integrate_surface(s, n, g).lambda_M;
}
double integral_K(const Surface& s, const NormGauge& n, const GridSpec& g) {
  return integrate_surface(s, n, g).int_K;
}
double integral_H(const Surface& s, const NormGauge& n, const GridSpec& g) {
  return integrate_surface(s, n, g).int_H;
}
double willmore_energy(const Surface& s, const NormGauge& n, const GridSpec& g) {
  return integrate_surface(s, n, g).int_H2;
}
double integral_invH(const Surface& s, const NormGauge& n, const GridSpec& g) {
  const SurfaceMeasures m = integrate_surface(s, n, g);
  if (!(m.min_H > 0))
    throw Error(ErrorCode::NonPositiveMeanCurvature, "mean curvature reaches " + std::to_string(m.min_H));
  return m.int_invH;
}
double flux_volume(const Surface& s, const NormGauge& n, const GridSpec& g) {
  const double v = integrate_surface(s, n, g).flux_volume;
  if (v < 0) throw Error(ErrorCode::OrientationError, "flux volume is negative; normal points inward");
  return v;
}
double alexandrov_residual(const Surface& s, const NormGauge& n, const GridSpec& g) {
  return integrate_surface(s, n, g).alexandrov;
}

HuberBounds huber_bounds(const SurfaceMeasures& m, const SphereExtrema& ext) {
  HuberBounds b;
  b.value = m.int_K_plus;
  b.lower = ext.min_eta_xi / ext.max_curvature * m.int_KM_plus_e;
  b.upper = ext.max_eta_xi / ext.min_curvature * m.int_KM_plus_e;
  // The three numbers come from different products of the same integrals;
  // allow for rounding when the chain collapses to equalities.
  const double slack = 1e-9 * std::max(1.0, std::abs(b.value));
  b.ordered = b.lower <= b.value + slack && b.value <= b.upper + slack;
  return b;
}

HuberBounds huber_bounds(const Surface& s, const NormGauge& n, const GridSpec& g) {
  return huber_bounds(integrate_surface(s, n, g), sphere_extrema(n));
}

}  // namespace minkcurv
