#include <doctest.h>

#include <cmath>
#include <numbers>

#include "minkcurv/birkhoff.hpp"
#include "minkcurv/geodesic_probe.hpp"

using namespace minkcurv;
using std::numbers::pi;

TEST_CASE("flat plane: no deficit") {
  const auto P = make_graph("0.3*x - 0.2*y + 1");
  for (double r : {0.05, 0.2, 0.5}) {
    const GeodesicFan fan = geodesic_fan(P->chart(0), 0.1, -0.2, r);
    const double L = 2 * pi * r;  // tilted plane is still flat
    CHECK(std::abs(fan.circumference - L) < 1e-12);
    CHECK(std::abs(fan.area - pi * r * r) < 1e-12);
    CHECK(fan.max_speed_error < 1e-8);
  }
  try {
    bdp_estimate(*make_graph("0"), NormGauge::lp(4), ChartPoint{0, 0, 0}, {0.1, 0.05, 0.025});
    FAIL("flat point accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FlatPoint);
  }
}

TEST_CASE("round sphere circles") {
  const auto S = make_round_sphere(1);
  for (double r : {0.05, 0.2, 0.6}) {
    const GeodesicCircle c = geodesic_circle(S->chart(0), 1.2, 0.4, r);
    CHECK(c.circumference == doctest::Approx(2 * pi * std::sin(r)).epsilon(1e-10));
    CHECK(c.area == doctest::Approx(2 * pi * (1 - std::cos(r))).epsilon(1e-10));
  }
}

TEST_CASE("ellipsoid circle follows the classical expansion") {
  const auto E = make_ellipsoid(1, 1.5, 2);
  const double K = euclidean_gaussian_curvature(E->chart(0), pi / 2, 0);
  CHECK(K == doctest::Approx(1.0 / 9).epsilon(1e-12));
  const double r = 0.05;
  const GeodesicFan fan = geodesic_fan(E->chart(0), pi / 2, 0, r);
  const double expansion = 2 * pi * r - pi / 3 * K * r * r * r;
  CHECK(std::abs(fan.circumference - expansion) < std::pow(r, 5));
  CHECK(std::abs(fan.area - (pi * r * r - pi / 12 * K * std::pow(r, 4))) < std::pow(r, 5));
  CHECK(fan.max_speed_error < 1e-8);
  // Ray endpoints sit at geodesic distance r, so at most r in space.
  for (const GeodesicRay& ray : fan.rays) CHECK((E->chart(0).point(ray.u, ray.v) - E->chart(0).point(pi / 2, 0)).norm() <= r);
}

TEST_CASE("BDP ratio examples") {
  const NormGauge Eu = NormGauge::euclidean();
  const auto S2 = make_round_sphere(2);
  const BdpEstimate a = bdp_estimate(*S2, Eu, ChartPoint{0, 1.0, 2.0});
  CHECK(a.K_circumference == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(a.K_area == doctest::Approx(0.25).epsilon(1e-6));

  const NormGauge l4 = NormGauge::lp(4);
  const auto B = make_minkowski_sphere(l4, 1);
  const BdpEstimate b = bdp_estimate(*B, l4, ChartPoint{0, 1.0, 0.6});
  CHECK(b.K_circumference == doctest::Approx(1).epsilon(1e-6));
  CHECK(b.K_area == doctest::Approx(1).epsilon(1e-6));

  const auto E = make_ellipsoid(1, 1.5, 2);
  const double K = curvature_sample(E->chart(0), l4, pi / 2, 0).K;
  const BdpEstimate c = bdp_estimate(*E, l4, ChartPoint{0, pi / 2, 0});
  CHECK(std::abs(c.K_circumference - K) <= 1e-2 * K);
  CHECK(std::abs(c.K_area - K) <= 1e-2 * K);
  CHECK(c.slope_M == doctest::Approx(3).epsilon(0.1 / 3));
  CHECK(c.slope_B == doctest::Approx(3).epsilon(0.1 / 3));
  CHECK(c.max_speed_error < 1e-8);
  REQUIRE(c.radii.size() == 3);
  CHECK(c.radii[0].r > c.radii[1].r);
}

TEST_CASE("BDP on a saddle point of the torus") {
  const auto T = make_torus(2, 0.5);
  const NormGauge N = NormGauge::lp(4);
  const double u = 0.4, v = 2.6;
  const double K = curvature_sample(T->chart(0), N, u, v).K;
  REQUIRE(K < -0.05);
  const BdpEstimate e = bdp_estimate(*T, N, ChartPoint{0, u, v});
  CHECK(std::abs(e.K_circumference - K) <= 1e-2 * std::abs(K));
  CHECK(std::abs(e.K_area - K) <= 1e-2 * std::abs(K));
}

TEST_CASE("bad inputs") {
  const auto E = make_ellipsoid(1, 1.5, 2);
  CHECK_THROWS_AS(bdp_estimate(*E, NormGauge::lp(4), ChartPoint{0, 1, 1}, {0.1, 0.05}), Error);
  CHECK_THROWS_AS(bdp_estimate(*E, NormGauge::lp(4), ChartPoint{0, 1, 1}, {0.05, 0.1, 0.2}), Error);
  const auto P = make_graph("x*x + y*y");
  try {
    geodesic_fan(P->chart(0), 0.95, 0, 0.3);
    FAIL("ray left the patch silently");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RayEscapedAtlas);
  }
  const auto radii = default_bdp_radii(*E, NormGauge::lp(4), ChartPoint{0, 1, 1});
  REQUIRE(radii.size() == 3);
  CHECK(radii[0] == doctest::Approx(2 * radii[1]));
  CHECK(radii[1] == doctest::Approx(2 * radii[2]));
}

TEST_CASE("Neville extrapolation is exact on polynomials") {
  CHECK(extrapolate_to_zero({1, 2, 3}, {4, 3, 0}) == doctest::Approx(3));  // 3 + 2x - x^2
  CHECK(extrapolate_to_zero({0.5, 0.25}, {2.5, 2.25}) == doctest::Approx(2));
}

TEST_CASE("area ratio limit") {
  const NormGauge N = NormGauge::lp(4);
  const auto E = make_ellipsoid(1, 1.5, 2);
  for (auto [u, v] : {std::pair{1.1, 0.7}, {2.0, 4.0}}) {
    const double K = curvature_sample(E->chart(0), N, u, v).K;
    const AreaRatioEstimate a = area_ratio_limit(E->chart(0), N, u, v);
    CHECK(std::abs(a.extrapolated - K) <= 1e-2 * K);
    REQUIRE(a.ratios.size() == a.radii.size());
  }
  const auto B = make_minkowski_sphere(N, 1);
  CHECK(area_ratio_limit(B->chart(0), N, 1.0, 1.0).extrapolated == doctest::Approx(1).epsilon(1e-6));
}
