#pragma once

#include "minkcurv/norm_gauge.hpp"
#include "minkcurv/surface_charts.hpp"
#include "minkcurv/types.hpp"

namespace minkcurv {

// Everything the curvature theory attaches to one chart point.
struct CurvatureSample {
  Vec3 p = Vec3::Zero();
  Vec3 xi = Vec3::Zero();   // euclidean unit normal (oriented)
  Vec3 eta = Vec3::Zero();  // Birkhoff normal, F(eta) = 1
  Mat2 A = Mat2::Zero();    // d eta in the basis {phi_u, phi_v}
  double lambda1 = 0, lambda2 = 0;  // eigenvalues of A, lambda1 >= lambda2
  double K = 0, H = 0;              // det A, tr A / 2
  bool umbilic = false;             // |lambda1 - lambda2| < 1e-8
  double omega_density = 0;         // det(phi_u, phi_v, eta), oriented
  double area_density = 0;          // |phi_u x phi_v|
  double eta_xi = 0;                // <eta, xi>
  double residual = 0;              // out-of-plane part of the FD differential
};

// eta(p) = u(xi(p)).
Vec3 birkhoff_normal(const SurfaceChart& chart, const NormGauge& norm, double u, double v);

struct ShapeMatrix {
  Mat2 A = Mat2::Zero();
  double residual = 0;  // max over columns of |out-of-plane part| / |column|
};

// Central differences of eta with parameter step h, projected on
// span{phi_u, phi_v} by least squares. No refinement.
ShapeMatrix shape_matrix_fd(const SurfaceChart& chart, const NormGauge& norm, double u, double v,
                            double h);

// As above but halves h (up to four times) while the tangency residual
// exceeds 1e-4; throws TangencyViolation if it never drops.
Mat2 shape_matrix(const SurfaceChart& chart, const NormGauge& norm, double u, double v, double h);

// Default step for shape matrices: 1e-4 * chart parameter scale.
double default_shape_step(const SurfaceChart& chart);

// Full bundle. A is Richardson-extrapolated from steps h and h/2.
CurvatureSample curvature_sample(const SurfaceChart& chart, const NormGauge& norm, double u, double v);

// Real eigenvalues of a 2x2 matrix, larger first. Slightly negative
// discriminants (relative 1e-8) are rounding and clamp to a double root;
// anything below throws ComplexEigenvalues.
std::pair<double, double> real_eigenvalues(const Mat2& A);

// K_M(p) / K_dB(eta(p)).
double curvature_ratio(const SurfaceChart& chart, const NormGauge& norm, double u, double v);

}  // namespace minkcurv
