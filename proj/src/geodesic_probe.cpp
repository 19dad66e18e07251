#include "minkcurv/geodesic_probe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "minkcurv/birkhoff.hpp"
#include "minkcurv/parallel.hpp"
#include "minkcurv/quadrature.hpp"

namespace minkcurv {

namespace {

constexpr double kPi = std::numbers::pi;

// u, v, u', v', J, J', integral of J.
using State = std::array<double, 7>;

struct RayRhs {
  const SurfaceChart& chart;

  State operator()(const State& y) const {
    double u = y[0], v = y[1];
    if (!chart.normalize(u, v)) throw Error(ErrorCode::RayEscapedAtlas, "geodesic ray left the chart domain");
    const ChartJet j = chart.jet(u, v);
    Mat2 g;
    g << j.pu.dot(j.pu), j.pu.dot(j.pv), j.pu.dot(j.pv), j.pv.dot(j.pv);
    const double du = y[2], dv = y[3];
    const Vec3 second = j.puu * (du * du) + 2 * j.puv * (du * dv) + j.pvv * (dv * dv);
    // u''^k = -Gamma^k_ij u'^i u'^j with Gamma^k_ij = g^kl <phi_ij, phi_l>.
    const Vec2 acc = -g.ldlt().solve(Vec2(second.dot(j.pu), second.dot(j.pv)));
    const double K = euclidean_geometry(chart, j).K;
    return {du, dv, acc[0], acc[1], y[5], -K * y[4], y[4]};
  }
};

double speed(const SurfaceChart& chart, const State& y) {
  double u = y[0], v = y[1];
  chart.normalize(u, v);
  const ChartJet j = chart.first_jet(u, v);
  return (j.pu * y[2] + j.pv * y[3]).norm();
}

// Dormand-Prince 5(4) with the fifth-order solution propagated.
GeodesicRay integrate_ray(const SurfaceChart& chart, State y, double length, const OdeTolerance& opt) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  const RayRhs f{chart};
  auto axpy = [](const State& base, std::initializer_list<std::pair<double, const State*>> terms, double h) {
    State out = base;
    for (const auto& [c, k] : terms)
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * c * (*k)[i];
    return out;
  };

  GeodesicRay ray;
  double s = 0, h = length / 16;
  State k1 = f(y);
  for (int step = 0;; ++step) {
    if (step >= opt.max_steps) throw Error(ErrorCode::StepSizeUnderflow, "geodesic ray exceeded the step budget");
    if (s + h > length) h = length - s;
    const State k2 = f(axpy(y, {{a21, &k1}}, h));
    const State k3 = f(axpy(y, {{a31, &k1}, {a32, &k2}}, h));
    const State k4 = f(axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
    const State k5 = f(axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
    const State k6 = f(axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
    const State next = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
    const State k7 = f(next);
    double err = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = opt.tol * (1 + std::max(std::abs(y[i]), std::abs(next[i])));
      err = std::max(err, std::abs(e) / scale);
    }
    if (err <= 1) {
      s += h;
      y = next;
      k1 = k7;  // first-same-as-last
      ++ray.steps;
      ray.speed_error = std::max(ray.speed_error, std::abs(speed(chart, y) - 1));
      if (s >= length) break;
    }
    const double factor = err == 0 ? 5 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
    if (h < 1e-14 * length) throw Error(ErrorCode::StepSizeUnderflow, "geodesic step size underflow");
  }
  ray.u = y[0];
  ray.v = y[1];
  ray.J = y[4];
  ray.area = y[6];
  return ray;
}

}  // namespace

GeodesicFan geodesic_fan(const SurfaceChart& chart, double u, double v, double r, int n_dirs,
                         const OdeTolerance& tol) {
  if (!(r > 0) || n_dirs < 3) throw Error(ErrorCode::InvalidInput, "geodesic fan needs r > 0 and n_dirs >= 3");
  double uu = u, vv = v;
  if (!chart.normalize(uu, vv)) throw Error(ErrorCode::RayEscapedAtlas, "fan center outside the chart domain");
  const ChartJet j = chart.first_jet(uu, vv);
  // Orthonormal tangent frame, then parameter velocities for each direction.
  const Vec3 e1 = j.pu.normalized();
  const Vec3 e2 = (j.pv - j.pv.dot(e1) * e1).normalized();
  Mat2 g;
  g << j.pu.dot(j.pu), j.pu.dot(j.pv), j.pu.dot(j.pv), j.pv.dot(j.pv);
  const auto ldlt = g.ldlt();

  GeodesicFan fan;
  fan.u = uu;
  fan.v = vv;
  fan.radius = r;
  fan.rays.resize(static_cast<std::size_t>(n_dirs));
  parallel_for(fan.rays.size(), [&](std::size_t i) {
    const double theta = 2 * kPi * static_cast<double>(i) / n_dirs;
    const Vec3 w = std::cos(theta) * e1 + std::sin(theta) * e2;
    const Vec2 c = ldlt.solve(Vec2(j.pu.dot(w), j.pv.dot(w)));
    GeodesicRay ray = integrate_ray(chart, {uu, vv, c[0], c[1], 0, 1, 0}, r, tol);
    ray.theta = theta;
    fan.rays[i] = ray;
  });
  double c = 0, a = 0;
  for (const auto& ray : fan.rays) {
    c += ray.J;
    a += ray.area;
    fan.max_speed_error = std::max(fan.max_speed_error, ray.speed_error);
  }
  fan.circumference = c * 2 * kPi / n_dirs;
  fan.area = a * 2 * kPi / n_dirs;
  return fan;
}

GeodesicCircle geodesic_circle(const SurfaceChart& chart, double u, double v, double r, int n_dirs) {
  const GeodesicFan fan = geodesic_fan(chart, u, v, r, n_dirs);
  return {fan.circumference, fan.area};
}

double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw Error(ErrorCode::InvalidInput, "extrapolation needs matching data");
  std::vector<double> p = y;
  const std::size_t n = x.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i) p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
  return p[0];
}

namespace {

double local_curvature_radius(const SurfaceChart& chart, double u, double v) {
  const EuclideanGeometry geo = euclidean_geometry(chart, u, v);
  const double k = std::max(std::abs(geo.k1), std::abs(geo.k2));
  return k > 0 ? 1 / k : std::numeric_limits<double>::infinity();
}

double loglog_slope(const std::vector<double>& r, const std::vector<double>& d) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double x = std::log(r[i]), y = std::log(std::abs(d[i]));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ChartPoint sphere_point_of(const Surface& sphere, const SurfaceChart& chart, const NormGauge& norm, const ChartPoint& p) {
  return sphere.locate(birkhoff_normal(chart, norm, p.u, p.v));
}

}  // namespace

std::vector<double> default_bdp_radii(const Surface& surface, const NormGauge& norm, const ChartPoint& p) {
  const SurfacePtr sphere = make_minkowski_sphere(norm, 1);
  const ChartPoint q = sphere_point_of(*sphere, surface.chart(p.chart), norm, p);
  double rc = std::min(local_curvature_radius(surface.chart(p.chart), p.u, p.v),
                       local_curvature_radius(sphere->chart(q.chart), q.u, q.v));
  if (!std::isfinite(rc)) throw Error(ErrorCode::FlatPoint, "no curvature scale at a flat point");
  return {0.08 * rc, 0.04 * rc, 0.02 * rc};
}

BdpEstimate bdp_estimate(const Surface& surface, const NormGauge& norm, const ChartPoint& p,
                         std::vector<double> radii, int n_dirs) {
  if (radii.empty()) radii = default_bdp_radii(surface, norm, p);
  if (radii.size() < 3) throw Error(ErrorCode::InvalidInput, "bdp needs at least three radii");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (!(radii[i] > 0) || (i > 0 && !(radii[i] < radii[i - 1])))
      throw Error(ErrorCode::InvalidInput, "bdp radii must be positive and decreasing");

  const SurfacePtr sphere = make_minkowski_sphere(norm, 1);
  const SurfaceChart& chart = surface.chart(p.chart);
  BdpEstimate out;
  out.point = p;
  out.sphere_point = sphere_point_of(*sphere, chart, norm, p);
  const SurfaceChart& schart = sphere->chart(out.sphere_point.chart);

  std::vector<double> r2, rc, ra, defM, defB;
  bool any_deficit = false;
  for (double r : radii) {
    const GeodesicFan fm = geodesic_fan(chart, p.u, p.v, r, n_dirs);
    const GeodesicFan fb = geodesic_fan(schart, out.sphere_point.u, out.sphere_point.v, r, n_dirs);
    BdpRadius row;
    row.r = r;
    row.C_M = fm.circumference;
    row.A_M = fm.area;
    row.C_B = fb.circumference;
    row.A_B = fb.area;
    const double dm = 2 * kPi * r - row.C_M, db = 2 * kPi * r - row.C_B;
    if (std::abs(dm) > 1e-12) any_deficit = true;
    row.ratio_circumference = dm / db;
    row.ratio_area = (kPi * r * r - row.A_M) / (kPi * r * r - row.A_B);
    out.max_speed_error = std::max({out.max_speed_error, fm.max_speed_error, fb.max_speed_error});
    out.radii.push_back(row);
    r2.push_back(r * r);
    rc.push_back(row.ratio_circumference);
    ra.push_back(row.ratio_area);
    defM.push_back(dm);
    defB.push_back(db);
  }
  if (!any_deficit) throw Error(ErrorCode::FlatPoint, "circumference deficit below the noise floor at every radius");
  out.K_circumference = extrapolate_to_zero(r2, rc);
  out.K_area = extrapolate_to_zero(r2, ra);
  out.slope_M = loglog_slope(radii, defM);
  out.slope_B = loglog_slope(radii, defB);
  return out;
}

AreaRatioEstimate area_ratio_limit(const SurfaceChart& chart, const NormGauge& norm, double u, double v,
                                   std::vector<double> radii) {
  if (radii.empty()) {
    // Parameter radius whose image has euclidean size about 0.08 curvature radii.
    const ChartJet j = chart.first_jet(u, v);
    const double stretch = std::max(j.pu.norm(), j.pv.norm());
    const double rc = std::min(local_curvature_radius(chart, u, v), 1e3 * chart.param_scale() * stretch);
    const double r0 = 0.08 * rc / stretch;
    radii = {r0, r0 / 2, r0 / 4};
  }
  const double h = default_shape_step(chart);
  const GaussRule& rule = gauss_legendre(16);
  constexpr int kAngles = 64;

  AreaRatioEstimate out;
  out.radii = radii;
  std::vector<double> x;
  for (double rho : radii) {
    const std::size_t n = rule.nodes.size() * kAngles;
    std::vector<double> image(n), base(n);
    parallel_for(n, [&](std::size_t idx) {
      const std::size_t i = idx / kAngles, k = idx % kAngles;
      const double s = 0.5 * rho * (1 + rule.nodes[i]);
      const double a = 2 * kPi * static_cast<double>(k) / kAngles;
      const double uu = u + s * std::cos(a), vv = v + s * std::sin(a);
      const double w = 0.5 * rho * rule.weights[i] * s * (2 * kPi / kAngles);
      const ChartJet j = chart.first_jet(uu, vv);
      const Vec3 eta = birkhoff_normal(chart, norm, uu, vv);
      const Vec3 eu = (birkhoff_normal(chart, norm, uu + h, vv) - birkhoff_normal(chart, norm, uu - h, vv)) / (2 * h);
      const Vec3 ev = (birkhoff_normal(chart, norm, uu, vv + h) - birkhoff_normal(chart, norm, uu, vv - h)) / (2 * h);
      const double o = chart.orientation();
      image[idx] = w * o * eu.cross(ev).dot(eta);
      base[idx] = w * o * j.pu.cross(j.pv).dot(eta);
    });
    out.ratios.push_back(pairwise_sum(image) / pairwise_sum(base));
    x.push_back(rho * rho);
  }
  out.extrapolated = extrapolate_to_zero(x, out.ratios);
  return out;
}

}  // namespace minkcurv
