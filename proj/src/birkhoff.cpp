#include "minkcurv/birkhoff.hpp"

#include <cmath>

namespace minkcurv {

Vec3 birkhoff_normal(const SurfaceChart& chart, const NormGauge& norm, double u, double v) {
  return inverse_gauss_map(norm, euclidean_normal(chart, u, v)).x;
}

double default_shape_step(const SurfaceChart& chart) { return 1e-4 * chart.param_scale(); }

namespace {

ShapeMatrix shape_matrix_at(const SurfaceChart& chart, const NormGauge& norm, double u, double v,
                            double h, const Vec3& eta0) {
  const ChartJet j = chart.first_jet(u, v);
  auto eta = [&](double a, double b) {
    return inverse_gauss_map(norm, euclidean_normal(chart, a, b), eta0).x;
  };
  const Vec3 eu = (eta(u + h, v) - eta(u - h, v)) / (2 * h);
  const Vec3 ev = (eta(u, v + h) - eta(u, v - h)) / (2 * h);
  Eigen::Matrix<double, 3, 2> basis;
  basis << j.pu, j.pv;
  const Mat2 gram = basis.transpose() * basis;
  Eigen::Matrix<double, 3, 2> cols;
  cols << eu, ev;
  ShapeMatrix out;
  out.A = gram.inverse() * (basis.transpose() * cols);
  for (int c = 0; c < 2; ++c) {
    const double len = cols.col(c).norm();
    if (len < 1e-14) continue;
    const double off = (cols.col(c) - basis * out.A.col(c)).norm();
    out.residual = std::max(out.residual, off / len);
  }
  return out;
}

}  // namespace

ShapeMatrix shape_matrix_fd(const SurfaceChart& chart, const NormGauge& norm, double u, double v,
                            double h) {
  return shape_matrix_at(chart, norm, u, v, h, birkhoff_normal(chart, norm, u, v));
}

Mat2 shape_matrix(const SurfaceChart& chart, const NormGauge& norm, double u, double v, double h) {
  if (!(h > 0)) throw Error(ErrorCode::InvalidInput, "shape_matrix step must be positive");
  for (int k = 0; k < 5; ++k, h *= 0.5) {
    const ShapeMatrix s = shape_matrix_fd(chart, norm, u, v, h);
    if (s.residual <= 1e-4) return s.A;
  }
  throw Error(ErrorCode::TangencyViolation, "d eta leaves the tangent plane at the smallest step");
}

std::pair<double, double> real_eigenvalues(const Mat2& A) {
  const double half_tr = 0.5 * A.trace();
  const double det = A.determinant();
  // tr^2/4 - det cancels badly near umbilics; this form does not.
  const double half_diff = 0.5 * (A(0, 0) - A(1, 1));
  double disc = half_diff * half_diff + A(0, 1) * A(1, 0);
  if (disc < 0) {
    const double scale = std::max(half_tr * half_tr, std::abs(det));
    if (disc < -1e-8 * scale) throw Error(ErrorCode::ComplexEigenvalues, "shape matrix has complex eigenvalues");
    disc = 0;
  }
  const double s = std::sqrt(disc);
  return {half_tr + s, half_tr - s};
}

CurvatureSample curvature_sample(const SurfaceChart& chart, const NormGauge& norm, double u, double v) {
  const ChartJet j = chart.first_jet(u, v);
  CurvatureSample s;
  s.p = j.p;
  s.xi = euclidean_normal(chart, u, v);
  s.eta = inverse_gauss_map(norm, s.xi).x;
  s.area_density = j.pu.cross(j.pv).norm();
  s.eta_xi = s.eta.dot(s.xi);
  s.omega_density = chart.orientation() * j.pu.cross(j.pv).dot(s.eta);

  double h = default_shape_step(chart);
  for (int k = 0;; ++k, h *= 0.5) {
    const ShapeMatrix coarse = shape_matrix_at(chart, norm, u, v, h, s.eta);
    const ShapeMatrix fine = shape_matrix_at(chart, norm, u, v, 0.5 * h, s.eta);
    if (fine.residual <= 1e-4) {
      s.A = (4 * fine.A - coarse.A) / 3;
      s.residual = fine.residual;
      break;
    }
    if (k == 4) throw Error(ErrorCode::TangencyViolation, "d eta leaves the tangent plane at the smallest step");
  }
  s.K = s.A.determinant();
  s.H = 0.5 * s.A.trace();
  const auto [l1, l2] = real_eigenvalues(s.A);
  s.lambda1 = l1;
  s.lambda2 = l2;
  s.umbilic = std::abs(l1 - l2) < 1e-8;
  return s;
}

double curvature_ratio(const SurfaceChart& chart, const NormGauge& norm, double u, double v) {
  const EuclideanGeometry g = euclidean_geometry(chart, u, v);
  const SpherePoint e = inverse_gauss_map(norm, g.xi);
  return g.K / sphere_curvature(norm, e);
}

}  // namespace minkcurv
