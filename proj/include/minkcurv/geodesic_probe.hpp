#pragma once

#include <vector>

#include "minkcurv/norm_gauge.hpp"
#include "minkcurv/surface_charts.hpp"

namespace minkcurv {

// One unit-speed geodesic of the induced euclidean metric, integrated to
// length r together with the polar metric coefficient sqrt(G) = J, the
// Jacobi field with J(0) = 0, J'(0) = 1.
struct GeodesicRay {
  double theta = 0;
  double u = 0, v = 0;       // endpoint parameters (unwrapped)
  double J = 0;              // sqrt(G)(r, theta)
  double area = 0;           // integral of J over [0, r]
  double speed_error = 0;    // max | |d/ds phi| - 1 | over accepted steps
  int steps = 0;
};

struct GeodesicFan {
  double u = 0, v = 0, radius = 0;
  std::vector<GeodesicRay> rays;
  double circumference = 0;  // trapezoid over theta of J
  double area = 0;           // trapezoid over theta of the ray areas
  double max_speed_error = 0;
};

struct OdeTolerance {
  double tol = 1e-10;  // relative and absolute, per component
  int max_steps = 200000;
};

// Rays at theta_i = 2 pi i / n_dirs from an orthonormal frame of the tangent
// plane at phi(u, v). RayEscapedAtlas when a ray leaves the chart domain,
// StepSizeUnderflow when the step controller collapses.
GeodesicFan geodesic_fan(const SurfaceChart& chart, double u, double v, double r, int n_dirs = 256,
                         const OdeTolerance& tol = {});

struct GeodesicCircle {
  double circumference = 0, area = 0;
};
GeodesicCircle geodesic_circle(const SurfaceChart& chart, double u, double v, double r, int n_dirs = 256);

// Value at x = 0 of the polynomial through (x_k, y_k) (Neville).
double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y);

struct BdpRadius {
  double r = 0;
  double C_M = 0, A_M = 0;    // circle on M about p
  double C_B = 0, A_B = 0;    // circle on dB about eta(p)
  double ratio_circumference = 0, ratio_area = 0;
};

struct BdpEstimate {
  ChartPoint point;           // p on M
  ChartPoint sphere_point;    // eta(p) on dB
  std::vector<BdpRadius> radii;
  double K_circumference = 0; // extrapolated to r -> 0 in r^2
  double K_area = 0;
  double slope_M = 0, slope_B = 0;  // log-log slopes of the circumference deficits
  double max_speed_error = 0;
};

// {0.08, 0.04, 0.02} times the smaller local curvature radius of M at p and
// of dB at eta(p).
std::vector<double> default_bdp_radii(const Surface& surface, const NormGauge& norm, const ChartPoint& p);

// Ratios of geodesic circle deficits on M and on dB with the same r.
// Needs three or more decreasing radii; FlatPoint when the deficit on M is
// below 1e-12 at every radius.
BdpEstimate bdp_estimate(const Surface& surface, const NormGauge& norm, const ChartPoint& p,
                         std::vector<double> radii = {}, int n_dirs = 256);

struct AreaRatioEstimate {
  std::vector<double> radii;   // parameter-space disk radii
  std::vector<double> ratios;  // lambda_dB(eta(D)) / lambda_M(D)
  double extrapolated = 0;
};

// Disks in the chart's parameters centered at (u, v), shrinking by halves.
// The image area uses det(eta_u, eta_v, eta) with eta differentiated directly
// and M's Minkowski area uses det(phi_u, phi_v, eta).
AreaRatioEstimate area_ratio_limit(const SurfaceChart& chart, const NormGauge& norm, double u, double v,
                                   std::vector<double> radii = {});

}  // namespace minkcurv
