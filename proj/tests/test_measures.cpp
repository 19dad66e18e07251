#include <doctest.h>

#include <cmath>
#include <numbers>

#include "minkcurv/measures.hpp"

using namespace minkcurv;
using std::numbers::pi;

TEST_CASE("quadrature grid integrates euclidean area") {
  const auto E = make_ellipsoid(1, 1, 1);
  double prev = 1e300;
  for (int level : {0, 1, 2, 3}) {
    double area = 0;
    for (const ChartNodes& cn : quadrature_grid(*E, level))
      for (const QuadNode& q : cn.nodes) {
        const ChartJet j = E->chart(cn.chart).first_jet(q.u, q.v);
        area += q.weight * j.pu.cross(j.pv).norm();
      }
    const double err = std::abs(area - 4 * pi);
    CHECK(err < 0.05 * prev);  // refinement gains well over an order of magnitude
    prev = err;
  }
  CHECK(prev < 1e-9 * 4 * pi);
}

TEST_CASE("unit round sphere under the euclidean norm") {
  const SurfaceMeasures m = integrate_surface(*make_round_sphere(1), NormGauge::euclidean());
  CHECK(m.lambda_M == doctest::Approx(4 * pi).epsilon(1e-8));
  CHECK(m.int_K == doctest::Approx(4 * pi).epsilon(1e-8));
  CHECK(m.int_H == doctest::Approx(4 * pi).epsilon(1e-8));
  CHECK(m.int_H2 == doctest::Approx(4 * pi).epsilon(1e-8));
  CHECK(m.int_invH == doctest::Approx(4 * pi).epsilon(1e-8));
  CHECK(m.flux_volume == doctest::Approx(4 * pi / 3).epsilon(1e-8));
  CHECK(std::abs(m.alexandrov) < 1e-8);
  CHECK(m.last_change < GridSpec{}.rel_tol);
  const HuberBounds h = huber_bounds(m, sphere_extrema(NormGauge::euclidean()));
  CHECK(h.ordered);
  CHECK(h.lower == doctest::Approx(h.value).epsilon(1e-9));
  CHECK(h.upper == doctest::Approx(h.value).epsilon(1e-9));
}

TEST_CASE("Minkowski sphere under its own norm") {
  const NormGauge N = NormGauge::lp(4);
  const double lambda = sphere_area(N);
  const double r = 2;
  const SurfaceMeasures m = integrate_surface(*make_minkowski_sphere(N, r), N);
  CHECK(m.lambda_M == doctest::Approx(r * r * lambda).epsilon(1e-7));
  CHECK(m.int_K == doctest::Approx(lambda).epsilon(1e-7));
  CHECK(m.int_H2 == doctest::Approx(lambda).epsilon(1e-6));
  CHECK(m.flux_volume == doctest::Approx(r * r * r * lambda / 3).epsilon(1e-7));
  CHECK(m.int_invH == doctest::Approx(3 * m.flux_volume).epsilon(1e-6));
  CHECK(m.stdev_H <= 1e-6 * m.mean_H);
  CHECK(m.max_omega_mismatch <= 1e-10);
}

TEST_CASE("ellipsoid under l4") {
  const NormGauge N = NormGauge::lp(4);
  const double lambda = sphere_area(N);
  const double a = 1, b = 1.5, c = 2;
  const auto E = make_ellipsoid(a, b, c);
  const SurfaceMeasures m = integrate_surface(*E, N);
  CHECK(std::abs(m.int_K - lambda) <= 1e-4 * lambda);
  CHECK(m.int_H2 > lambda);
  CHECK(m.flux_volume == doctest::Approx(4 * pi * a * b * c / 3).epsilon(1e-5));
  CHECK(std::abs(m.alexandrov) <= 1e-5 * m.lambda_M);
  CHECK(m.int_invH >= 3 * m.flux_volume - 1e-6);
  CHECK(m.stdev_H > 1e-3 * m.mean_H);
  CHECK(m.max_omega_mismatch <= 1e-10);
  const HuberBounds h = huber_bounds(m, sphere_extrema(N));
  CHECK(h.ordered);
  CHECK(h.value == doctest::Approx(lambda).epsilon(1e-4));
  CHECK(h.lower < h.value);
  CHECK(h.value < h.upper);
  // Self-convergence of the area across two levels.
  const double l2 = integrate_level(*E, N, m.level + 1).lambda_M;
  CHECK(m.lambda_M == doctest::Approx(l2).epsilon(1e-6));
}

TEST_CASE("flux volume does not depend on the norm") {
  const double R = 2, r = 0.5;
  const auto T = make_torus(R, r);
  for (const NormGauge& N : {NormGauge::euclidean(), NormGauge::lp(4)}) {
    const SurfaceMeasures m = integrate_surface(*T, N);
    CHECK(m.flux_volume == doctest::Approx(2 * pi * pi * R * r * r).epsilon(1e-5));
    CHECK(std::abs(m.alexandrov) <= 1e-5 * m.lambda_M);
    CHECK(m.int_H2 >= sphere_area(N) - 1e-6);
    // Total curvature of a torus vanishes.
    CHECK(std::abs(m.int_K) <= 1e-6 * m.int_abs_K);
    const HuberBounds h = huber_bounds(m, sphere_extrema(N));
    CHECK(h.ordered);
  }
}

TEST_CASE("mean curvature sign guard") {
  // Fat torus: inner equator has H < 0.
  const auto T = make_torus(2, 1.5);
  try {
    integral_invH(*T, NormGauge::euclidean());
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveMeanCurvature);
  }
}

TEST_CASE("grid validation") {
  GridSpec g;
  g.max_levels = 1;
  CHECK_THROWS_AS(integrate_surface(*make_round_sphere(1), NormGauge::euclidean(), g), Error);
  g.max_levels = 2;
  g.rel_tol = 1e-30;
  try {
    integrate_surface(*make_ellipsoid(1, 1.5, 2), NormGauge::lp(3), g);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::QuadratureNotConverged);
  }
}
