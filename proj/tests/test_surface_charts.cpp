#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "minkcurv/surface_charts.hpp"

using namespace minkcurv;
using std::numbers::pi;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Vec3(g(rng), g(rng), g(rng)).normalized();
}

// Gaussian curvature from a least-squares quadric fitted to normal heights of
// chart points around (u, v): h = c0 + c1 y + c2 z + (A y^2 + 2 B y z + C z^2) / 2.
double paraboloid_fit_curvature(const SurfaceChart& chart, double u, double v, double step) {
  const Vec3 p0 = chart.point(u, v);
  const Vec3 pu = chart.point(u + 1e-6, v) - chart.point(u - 1e-6, v);
  const Vec3 pv = chart.point(u, v + 1e-6) - chart.point(u, v - 1e-6);
  const Vec3 n = pu.cross(pv).normalized();
  const Vec3 e1 = pu.normalized();
  const Vec3 e2 = n.cross(e1);
  Eigen::MatrixXd M(49, 6);
  Eigen::VectorXd rhs(49);
  int row = 0;
  for (int i = -3; i <= 3; ++i)
    for (int k = -3; k <= 3; ++k, ++row) {
      const Vec3 d = chart.point(u + i * step, v + k * step) - p0;
      const double y = d.dot(e1), z = d.dot(e2);
      M.row(row) << 1, y, z, 0.5 * y * y, y * z, 0.5 * z * z;
      rhs[row] = d.dot(n);
    }
  const Eigen::VectorXd c = M.colPivHouseholderQr().solve(rhs);
  return c[3] * c[5] - c[4] * c[4];
}

}  // namespace

TEST_CASE("euclidean normals at symmetric points") {
  const auto sphere = make_round_sphere(1);
  CHECK((euclidean_normal(sphere->chart(0), pi / 2, 0) - Vec3(1, 0, 0)).norm() < 1e-14);
  const auto torus = make_torus(2, 0.5);
  CHECK((torus->chart(0).point(0, 0) - Vec3(2.5, 0, 0)).norm() < 1e-14);
  CHECK((euclidean_normal(torus->chart(0), 0, 0) - Vec3(1, 0, 0)).norm() < 1e-14);
  const auto saddle = make_graph("x^2 - y^2");
  CHECK((euclidean_normal(saddle->chart(0), 0, 0) - Vec3(0, 0, 1)).norm() < 1e-14);
  CHECK(euclidean_gaussian_curvature(saddle->chart(0), 0, 0) == doctest::Approx(-4).epsilon(1e-12));
}

TEST_CASE("gaussian curvature: closed forms") {
  const auto s2 = make_round_sphere(2);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> th(0.2, pi - 0.2), ph(0, 2 * pi);
  for (int i = 0; i < 50; ++i)
    CHECK(euclidean_gaussian_curvature(s2->chart(i % 2), th(rng), ph(rng)) == doctest::Approx(0.25).epsilon(1e-12));

  const double R = 2, r = 0.5;
  const auto torus = make_torus(R, r);
  for (int i = 0; i < 64; ++i) {
    const double v = 2 * pi * i / 64;
    const EuclideanGeometry g = euclidean_geometry(torus->chart(0), 0.3, v);
    CHECK(g.K == doctest::Approx(std::cos(v) / (r * (R + r * std::cos(v)))).epsilon(1e-12));
    // Principal curvatures 1/r (meridian) and cos v / (R + r cos v).
    CHECK(g.k1 == doctest::Approx(1 / r).epsilon(1e-12));
    CHECK(g.k2 == doctest::Approx(std::cos(v) / (R + r * std::cos(v))).epsilon(1e-12));
  }
}

TEST_CASE("gaussian curvature of the ellipsoid matches an osculating paraboloid fit") {
  const auto E = make_ellipsoid(1, 1.5, 2);
  const SurfaceChart& c = E->chart(0);
  const double K = euclidean_gaussian_curvature(c, pi / 2, 0);
  CHECK(K == doctest::Approx(paraboloid_fit_curvature(c, pi / 2, 0, 1e-3)).epsilon(1e-5));
  // Generic point too.
  CHECK(euclidean_gaussian_curvature(c, 1.1, 0.7) ==
        doctest::Approx(paraboloid_fit_curvature(c, 1.1, 0.7, 1e-3)).epsilon(1e-5));
}

TEST_CASE("finite-difference charts agree with analytic jets to second order") {
  const auto E = make_ellipsoid(1, 1.5, 2);
  const ChartPtr base = E->chart_ptr(0);
  const FunctionChart fd([base](double u, double v) { return base->point(u, v); }, base->domain(),
                         base->param_scale(), base->orientation());
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> th(0.3, pi - 0.3), ph(0, 2 * pi);
  for (int i = 0; i < 40; ++i) {
    const double u = th(rng), v = ph(rng);
    const ChartJet a = base->jet(u, v), b = fd.jet(u, v);
    CHECK((a.pu - b.pu).norm() < 1e-9);
    CHECK((a.pv - b.pv).norm() < 1e-9);
    CHECK((a.puu - b.puu).norm() < 1e-6);
    CHECK((a.puv - b.puv).norm() < 1e-6);
    CHECK((a.pvv - b.pvv).norm() < 1e-6);
  }
  // Halving a plain second difference divides the error by about four.
  const double u = 1.0, v = 0.4;
  auto err = [&](double h) {
    const Vec3 d2 = (base->point(u + h, v) - 2 * base->point(u, v) + base->point(u - h, v)) / (h * h);
    return (d2 - base->jet(u, v).puu).norm();
  };
  CHECK(err(1e-2) / err(5e-3) == doctest::Approx(4).epsilon(0.02));
}

TEST_CASE("partition of unity sums to one") {
  std::mt19937_64 rng(8);
  const auto surfaces = {make_ellipsoid(1, 1.5, 2), make_minkowski_sphere(NormGauge::lp(4), 2),
                         make_homothety(make_ellipsoid(1, 1.5, 2), 3)};
  for (const auto& S : surfaces) {
    for (int i = 0; i < 2000; ++i) {
      const Vec3 d = random_unit(rng);
      // parameters_in only looks at the direction of d.
      const auto at0 = S->parameters_in(0, d);
      REQUIRE(at0);
      const Vec3 p = S->chart(0).point(at0->u, at0->v);
      double sum = 0;
      for (int c = 0; c < S->chart_count(); ++c) {
        const auto at = S->parameters_in(c, p);
        REQUIRE(at);
        CHECK((S->chart(c).point(at->u, at->v) - p).norm() < 1e-12 * S->scale());
        sum += S->partition_weight(c, at->u, at->v);
      }
      CHECK(std::abs(sum - 1) < 1e-12);
    }
  }
}

TEST_CASE("curvature agrees across overlapping charts") {
  std::mt19937_64 rng(9);
  const auto surfaces = {make_ellipsoid(1, 1.5, 2), make_minkowski_sphere(NormGauge::lp(3), 1)};
  for (const auto& S : surfaces) {
    int shared = 0;
    for (int i = 0; i < 500 && shared < 50; ++i) {
      const Vec3 d = random_unit(rng);
      const auto a = S->parameters_in(0, d);
      const Vec3 p = S->chart(0).point(a->u, a->v);
      const auto b = S->parameters_in(1, p);
      if (S->partition_weight(0, a->u, a->v) <= 0 || S->partition_weight(1, b->u, b->v) <= 0) continue;
      ++shared;
      const double K0 = euclidean_gaussian_curvature(S->chart(0), a->u, a->v);
      const double K1 = euclidean_gaussian_curvature(S->chart(1), b->u, b->v);
      CHECK(K0 == doctest::Approx(K1).epsilon(1e-7));
      CHECK((euclidean_normal(S->chart(0), a->u, a->v) - euclidean_normal(S->chart(1), b->u, b->v)).norm() < 1e-10);
    }
    CHECK(shared == 50);
  }
}

TEST_CASE("Minkowski sphere curvature scales with the radius") {
  std::mt19937_64 rng(10);
  const NormGauge N = NormGauge::superellipsoid(1, 1.2, 0.8, 4);
  const double r = 2.5;
  const auto S = make_minkowski_sphere(N, r);
  for (int i = 0; i < 100; ++i) {
    const Vec3 d = random_unit(rng);
    const Vec3 x = d / N.value(d);
    const ChartPoint at = S->locate(r * x);
    CHECK((S->chart(at.chart).point(at.u, at.v) - r * x).norm() < 1e-12);
    CHECK(euclidean_gaussian_curvature(S->chart(at.chart), at.u, at.v) ==
          doctest::Approx(sphere_curvature(N, x) / (r * r)).epsilon(1e-7));
  }
}

TEST_CASE("outward orientation and containment") {
  std::mt19937_64 rng(12);
  const auto surfaces = {make_ellipsoid(1, 1.5, 2), make_torus(2, 0.5), make_minkowski_sphere(NormGauge::lp(4), 1)};
  for (const auto& S : surfaces) {
    std::uniform_real_distribution<double> U(0.3, 2.8);
    for (int i = 0; i < 200; ++i) {
      const int c = i % S->chart_count();
      const double u = U(rng), v = U(rng) * 2;
      const Vec3 p = S->chart(c).point(u, v);
      const Vec3 xi = euclidean_normal(S->chart(c), u, v);
      CHECK(S->contains(p - 1e-4 * xi));
      CHECK_FALSE(S->contains(p + 1e-4 * xi));
    }
  }
}

TEST_CASE("degenerate and invalid surfaces") {
  const auto sphere = make_round_sphere(1);
  try {
    euclidean_normal(sphere->chart(0), 0, 1);  // pole of the chart
    FAIL("pole accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateChart);
  }
  CHECK_THROWS_AS(make_torus(1, 1), Error);
  CHECK_THROWS_AS(make_ellipsoid(1, 0, 1), Error);
  CHECK_THROWS_AS(make_graph("x +"), Error);
  CHECK_THROWS_AS(make_graph("1/x", -1, 1, -1, 1), Error);
}

TEST_CASE("homothety scales points and curvature") {
  const auto E = make_ellipsoid(1, 1.5, 2);
  const auto E3 = make_homothety(E, 3);
  for (int c = 0; c < 2; ++c) {
    CHECK((E3->chart(c).point(1.0, 2.0) - 3 * E->chart(c).point(1.0, 2.0)).norm() < 1e-14);
    CHECK(euclidean_gaussian_curvature(E3->chart(c), 1.0, 2.0) ==
          doctest::Approx(euclidean_gaussian_curvature(E->chart(c), 1.0, 2.0) / 9).epsilon(1e-12));
  }
}
