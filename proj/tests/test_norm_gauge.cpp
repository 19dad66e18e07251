#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "minkcurv/norm_gauge.hpp"
#include "minkcurv/offsets_tubes.hpp"

using namespace minkcurv;
using std::numbers::pi;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 d(g(rng), g(rng), g(rng));
  return d.normalized();
}

std::vector<NormGauge> test_norms() {
  return {NormGauge::euclidean(), NormGauge::lp(3), NormGauge::lp(4),
          NormGauge::superellipsoid(1, 1.2, 0.8, 4)};
}

Vec3 spherical(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

// x-coordinate of dB above (y, z) near the +x pole, by bisection on F.
double pole_height(const NormGauge& N, double y, double z) {
  double lo = 0.2, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (N.value(Vec3(mid, y, z)) < 1 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("gauge is positively homogeneous and symmetric") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> t(0.01, 50);
  for (const auto& N : test_norms()) {
    for (int i = 0; i < 2000; ++i) {
      const Vec3 x = random_unit(rng) * t(rng);
      const double s = t(rng);
      const double f = N.value(x);
      CHECK(f > 0);
      CHECK(std::abs(N.value(s * x) - s * f) <= 1e-10 * s * f);
      CHECK(std::abs(N.value(-x) - f) <= 1e-12 * f);
    }
  }
}

TEST_CASE("unit sphere radii lie within the reported bounds") {
  std::mt19937_64 rng(5);
  for (const auto& N : test_norms()) {
    for (int i = 0; i < 5000; ++i) {
      const Vec3 d = random_unit(rng);
      const double radius = 1.0 / N.value(d);
      CHECK(radius >= N.r_min() - 1e-12);
      CHECK(radius <= N.r_max() + 1e-12);
    }
  }
}

TEST_CASE("gradient and Hessian match finite differences of the gauge") {
  std::mt19937_64 rng(3);
  const double h = 1e-5;
  for (const auto& N : test_norms()) {
    for (int i = 0; i < 50; ++i) {
      const Vec3 x = random_unit(rng) * 1.3;
      const GaugeJet J = N.jet(x);
      for (int k = 0; k < 3; ++k) {
        const Vec3 e = Vec3::Unit(k) * h;
        const double dfd = (N.value(x + e) - N.value(x - e)) / (2 * h);
        CHECK(J.grad[k] == doctest::Approx(dfd).epsilon(1e-7));
        const Vec3 dg = (N.gradient(x + e) - N.gradient(x - e)) / (2 * h);
        CHECK((J.hess.col(k) - dg).norm() <= 1e-6 * (1 + J.hess.norm()));
      }
    }
  }
}

TEST_CASE("invalid norm parameters are rejected") {
  CHECK_THROWS_AS(NormGauge::lp(1.0), Error);
  CHECK_THROWS_AS(NormGauge::lp(-2), Error);
  CHECK_THROWS_AS(NormGauge::euclidean(0), Error);
  CHECK_THROWS_AS(NormGauge::superellipsoid(1, -1, 1, 4), Error);
  try {
    NormGauge::lp(4, 0);  // pure l4: flat at the poles
    FAIL("pure l4 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidNorm);
  }
  CHECK_NOTHROW(NormGauge::lp(2, 0));
}

TEST_CASE("custom norms: analytic data is cross-checked") {
  // Ellipsoidal norm F(x) = sqrt(x^T Q x).
  const Vec3 axes(1.0, 1.5, 2.0);
  const Mat3 Q = axes.cwiseInverse().cwiseAbs2().asDiagonal();
  auto value = [Q](const Vec3& x) { return std::sqrt(x.dot(Q * x)); };
  auto grad = [Q, value](const Vec3& x) { return Vec3(Q * x / value(x)); };
  auto hess = [Q, value](const Vec3& x) {
    const double f = value(x);
    const Vec3 g = Q * x / f;
    return Mat3((Q - g * g.transpose()) / f);
  };
  const NormGauge N = NormGauge::custom("ellipsoidal", value, grad, hess);
  // Unit sphere is the ellipsoid with these semi-axes; K at (a,0,0) is a^2/(b^2 c^2).
  CHECK(sphere_curvature(N, Vec3(1, 0, 0)) == doctest::Approx(1.0 / (1.5 * 1.5 * 4.0)).epsilon(1e-10));
  CHECK(sphere_curvature(N, Vec3(0, 0, 2)) == doctest::Approx(4.0 / (1.0 * 2.25)).epsilon(1e-10));

  auto bad_grad = [Q, value](const Vec3& x) { return Vec3(2.0 * Q * x / value(x)); };
  CHECK_THROWS_AS(NormGauge::custom("broken", value, bad_grad, hess), Error);
}

TEST_CASE("inverse Gauss map: fixed examples") {
  const SpherePoint e = inverse_gauss_map(NormGauge::euclidean(), Vec3(0, 0, 1));
  CHECK((e.x - Vec3(0, 0, 1)).norm() < 1e-12);
  const SpherePoint a = inverse_gauss_map(NormGauge::lp(4), Vec3(1, 0, 0));
  CHECK((a.x - Vec3(1, 0, 0)).norm() < 1e-12);
  CHECK_THROWS_AS(inverse_gauss_map(NormGauge::lp(4), Vec3(1, 1, 0)), Error);
}

TEST_CASE("inverse Gauss map: brute-force support point for l4 along the diagonal") {
  const NormGauge N = NormGauge::lp(4);
  const Vec3 n = Vec3(1, 1, 1).normalized();
  auto h = [&](double th, double ph) {
    const Vec3 d = spherical(th, ph);
    return d.dot(n) / N.value(d);
  };
  const int G = 2000;
  double best = -1, bt = 0, bp = 0;
  for (int i = 0; i < G; ++i) {
    const double th = pi * (i + 0.5) / G;
    for (int j = 0; j < G; ++j) {
      const double ph = 2 * pi * j / G;
      const double v = h(th, ph);
      if (v > best) best = v, bt = th, bp = ph;
    }
  }
  // Compass search from the best grid node.
  for (double step = pi / G; step > 1e-13;) {
    bool moved = false;
    for (auto [dt, dp] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
      const double v = h(bt + dt, bp + dp);
      if (v > best) best = v, bt += dt, bp += dp, moved = true;
    }
    if (!moved) step *= 0.5;
  }
  const Vec3 brute = spherical(bt, bp) / N.value(spherical(bt, bp));
  const SpherePoint s = inverse_gauss_map(N, n);
  CHECK((s.x - brute).norm() < 1e-6);
  CHECK(s.x.dot(n) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("inverse Gauss map round trip and support function") {
  std::mt19937_64 rng(17);
  for (const auto& N : test_norms()) {
    std::vector<Vec3> sphere;
    for (int i = 0; i < 100000; ++i) {
      const Vec3 d = random_unit(rng);
      sphere.push_back(d / N.value(d));
    }
    for (int i = 0; i < 40; ++i) {
      const Vec3 n = random_unit(rng);
      const SpherePoint s = inverse_gauss_map(N, n);
      CHECK(std::abs(N.value(s.x) - 1) < 1e-10);
      CHECK(N.gradient(s.x).normalized().dot(n) == doctest::Approx(1).epsilon(1e-10));
      CHECK((s.n - n).norm() < 1e-10);
      Vec3 best = sphere[0];
      for (const Vec3& y : sphere)
        if (y.dot(n) > best.dot(n)) best = y;
      CHECK(s.x.dot(n) >= best.dot(n) - 1e-12);
      // Raw samples sit ~1e-5 below the max; polish the best one.
      const Vec3 b = best.normalized();
      double bt = std::acos(std::clamp(b.z(), -1.0, 1.0)), bp = std::atan2(b.y(), b.x());
      auto h = [&](double th, double ph) {
        const Vec3 d = spherical(th, ph);
        return d.dot(n) / N.value(d);
      };
      double hmax = h(bt, bp);
      for (double step = 0.02; step > 1e-12;) {
        bool moved = false;
        for (auto [dt, dp] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
          const double v = h(bt + dt, bp + dp);
          if (v > hmax) hmax = v, bt += dt, bp += dp, moved = true;
        }
        if (!moved) step *= 0.5;
      }
      CHECK(std::abs(s.x.dot(n) - hmax) <= 1e-6);
      CHECK(s.x.dot(n) >= hmax - 1e-12);
    }
  }
}

TEST_CASE("sphere curvature examples") {
  std::mt19937_64 rng(2);
  const NormGauge E = NormGauge::euclidean();
  const NormGauge E3 = NormGauge::euclidean(3.0);
  for (int i = 0; i < 20; ++i) {
    const Vec3 d = random_unit(rng);
    CHECK(sphere_curvature(E, d) == doctest::Approx(1).epsilon(1e-12));
    CHECK(sphere_curvature(E3, 3 * d) == doctest::Approx(1.0 / 9).epsilon(1e-12));
  }
}

TEST_CASE("sphere curvature at the l4 pole matches a graph finite-difference oracle") {
  const NormGauge N = NormGauge::lp(4);
  const double h = 1e-3;
  const double g0 = pole_height(N, 0, 0);
  const double gyy = (pole_height(N, h, 0) - 2 * g0 + pole_height(N, -h, 0)) / (h * h);
  const double gzz = (pole_height(N, 0, h) - 2 * g0 + pole_height(N, 0, -h)) / (h * h);
  const double gyz = (pole_height(N, h, h) - pole_height(N, h, -h) - pole_height(N, -h, h) +
                      pole_height(N, -h, -h)) / (4 * h * h);
  const double K_graph = gyy * gzz - gyz * gyz;  // gradient vanishes at the pole
  CHECK(sphere_curvature(N, Vec3(1, 0, 0)) == doctest::Approx(K_graph).epsilon(1e-5));
}

TEST_CASE("sphere area") {
  CHECK(sphere_area(NormGauge::euclidean()) == doctest::Approx(4 * pi).epsilon(1e-8));
  // Cone identity at radius 2: lambda = 3 V = 32 pi.
  CHECK(sphere_area(NormGauge::euclidean(2.0)) == doctest::Approx(32 * pi).epsilon(1e-8));
  const double a = sphere_area(NormGauge::lp(4), 1e-11);
  const double b = sphere_area(NormGauge::lp(4), 1e-7);
  CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("sphere area equals three times the Monte Carlo ball volume") {
  for (const auto& N : test_norms()) {
    const double lambda = sphere_area(N);
    const double R = N.r_max() * 1.001;
    const std::uint64_t n = 400000;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const Vec3 z(R * (2 * counter_uniform(99, 3 * i) - 1), R * (2 * counter_uniform(99, 3 * i + 1) - 1),
                   R * (2 * counter_uniform(99, 3 * i + 2) - 1));
      if (N.value(z) <= 1) ++hits;
    }
    const double box = 8 * R * R * R;
    const double f = double(hits) / double(n);
    const double vol = f * box, se = box * std::sqrt(f * (1 - f) / double(n));
    CHECK(std::abs(lambda - 3 * vol) <= 3 * 3 * se);
  }
}
