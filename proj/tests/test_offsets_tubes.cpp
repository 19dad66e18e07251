#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "minkcurv/offsets_tubes.hpp"
#include "minkcurv/parallel.hpp"

using namespace minkcurv;
using std::numbers::pi;

namespace {

bool within_sigma(double value, const McEstimate& mc, double k = 3) {
  return std::abs(value - mc.estimate) <= k * mc.std_error;
}

// Fraction of uniform samples of [-R, R]^3 with F(z) <= t, scaled to volume.
McEstimate ball_volume(const NormGauge& N, double t, std::uint64_t n, std::uint64_t seed) {
  const double R = t * N.r_max() * 1.001;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Vec3 z(2 * counter_uniform(seed, 3 * i) - 1, 2 * counter_uniform(seed, 3 * i + 1) - 1,
                 2 * counter_uniform(seed, 3 * i + 2) - 1);
    if (N.value(R * z) <= t) ++hits;
  }
  const double box = 8 * R * R * R, f = double(hits) / double(n);
  return {f * box, box * std::sqrt(f * (1 - f) / double(n)), hits, n};
}

}  // namespace

TEST_CASE("parallel curvature formula") {
  for (double c : {-0.5, 0.0, 0.3, 2.0}) CHECK(parallel_curvature_predicted(1, 1, c) == doctest::Approx(1 / ((1 + c) * (1 + c))));
  CHECK(parallel_curvature_predicted(0.7, -0.2, 0) == 0.7);
  CHECK(parallel_curvature_predicted(0.25, 0.5, 2) == doctest::Approx(1.0 / 16));
  try {
    parallel_curvature_predicted(1, 1, -1);
    FAIL("focal point accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularOffset);
  }
}

TEST_CASE("parallel curvature recomputed on the offset chart") {
  const auto E = make_ellipsoid(1, 1.5, 2);
  const auto T = make_torus(2, 0.5);
  for (const NormGauge& N : {NormGauge::lp(4), NormGauge::lp(3)})
    for (double c : {-0.1, -0.05, 0.05, 0.1}) {
      for (auto [u, v] : {std::pair{1.1, 0.7}, {2.2, 4.0}}) {
        const ParallelCheck a = check_parallel_curvature(E->chart_ptr(0), N, u, v, c);
        CHECK(a.rel_error <= 1e-5);
        const ParallelCheck b = check_parallel_curvature(T->chart_ptr(0), N, u, v, c);
        CHECK(b.rel_error <= 1e-5);
      }
    }
  // Sphere of the norm offset to radius 1 + c: curvature 1 / (1 + c)^2.
  const NormGauge N = NormGauge::lp(4);
  const auto B = make_minkowski_sphere(N, 1);
  const ParallelCheck s = check_parallel_curvature(B->chart_ptr(0), N, 1.0, 1.0, 0.5);
  CHECK(s.predicted == doctest::Approx(1 / 2.25).epsilon(1e-7));
  CHECK(s.recomputed == doctest::Approx(1 / 2.25).epsilon(1e-6));
}

TEST_CASE("safe offsets") {
  CHECK(max_safe_offset(*make_round_sphere(1), NormGauge::euclidean()) == doctest::Approx(1).epsilon(1e-7));
  const NormGauge N = NormGauge::lp(3);
  CHECK(max_safe_offset(*make_minkowski_sphere(N, 1.5), N) == doctest::Approx(1.5).epsilon(1e-6));
  // Torus: largest principal curvature 1/r; grid nodes miss the exact maximum by little.
  const double t = max_safe_offset(*make_torus(2, 0.5), NormGauge::euclidean());
  CHECK(t == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("Weyl polynomial on the round sphere is the exact shell volume") {
  const SurfaceMeasures m = integrate_surface(*make_round_sphere(1), NormGauge::euclidean());
  for (double eps : {0.05, 0.25, 0.5, 0.9}) {
    const double shell = 4 * pi / 3 * (std::pow(1 + eps, 3) - std::pow(1 - eps, 3));
    CHECK(std::abs(tube_volume_weyl(m, eps) - shell) <= 1e-10 * shell);
  }
  CHECK(tube_volume_weyl(m, 0) == 0);
  try {
    tube_volume_weyl(m, 1.2);
    FAIL("unsafe radius accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsafeOffset);
  }
}

TEST_CASE("Steiner coefficients of the unit ball") {
  const SteinerCoefficients s = steiner_polynomial(*make_round_sphere(1), NormGauge::euclidean());
  CHECK(s.c0 == doctest::Approx(4 * pi / 3).epsilon(1e-8));
  CHECK(s.c1 == doctest::Approx(4 * pi).epsilon(1e-8));
  CHECK(s.c2 == doctest::Approx(4 * pi).epsilon(1e-8));
  CHECK(s.c3 == doctest::Approx(4 * pi / 3).epsilon(1e-8));
  for (double rho : {0.1, 0.5, 2.0}) CHECK(s(rho) == doctest::Approx(4 * pi / 3 * std::pow(1 + rho, 3)).epsilon(1e-8));
}

TEST_CASE("Steiner polynomial of a norm ball under its own norm") {
  const NormGauge N = NormGauge::lp(4);
  const double lambda = sphere_area(N);
  const SteinerCoefficients s = steiner_polynomial(*make_minkowski_sphere(N, 1), N);
  CHECK(s.c0 == doctest::Approx(lambda / 3).epsilon(1e-7));
  CHECK(s.c1 == doctest::Approx(lambda).epsilon(1e-7));
  CHECK(s.c2 == doctest::Approx(lambda).epsilon(1e-7));
  CHECK(s.c3 == doctest::Approx(lambda / 3).epsilon(1e-7));
  // B + rho B = (1 + rho) B, sampled directly.
  for (double rho : {0.05, 0.1, 0.2}) CHECK(within_sigma(s(rho), ball_volume(N, 1 + rho, 400000, 21 + int(rho * 100))));
}

TEST_CASE("Monte Carlo tube volume of the round sphere") {
  const double eps = 0.25;
  const McEstimate mc = tube_volume_monte_carlo(*make_round_sphere(1), NormGauge::euclidean(), eps, 10'000'000, 7);
  const double exact = 8 * pi * eps + 8 * pi / 3 * eps * eps * eps;
  CHECK(within_sigma(exact, mc));
  CHECK(mc.samples == 10'000'000);
}

TEST_CASE("inner and outer half tubes differ by the mean curvature term") {
  const auto S = make_round_sphere(1);
  const NormGauge E = NormGauge::euclidean();
  const double eps = 0.2;
  const TubeSampling t = sample_tubes(*S, E, {eps}, 1'000'000, 3);
  const McEstimate in = t.inner_shell(0), out = t.outer_shell(0);
  const double int_H = integrate_surface(*S, E).int_H;
  const double diff = out.estimate - in.estimate;
  const double se = std::hypot(in.std_error, out.std_error);
  CHECK(std::abs(diff - 2 * eps * eps * int_H) <= 3 * se);
  CHECK(within_sigma(4 * pi / 3 * (std::pow(1 + eps, 3) - 1), out));
  CHECK(within_sigma(4 * pi / 3 * (1 - std::pow(1 - eps, 3)), in));
}

TEST_CASE("Monte Carlo estimates are reproducible and thread-count independent") {
  const auto T = make_torus(2, 0.5);
  const NormGauge N = NormGauge::lp(3);
  set_thread_count(1);
  const McEstimate a = tube_volume_monte_carlo(*T, N, 0.2, 50000, 42);
  set_thread_count(3);
  const McEstimate b = tube_volume_monte_carlo(*T, N, 0.2, 50000, 42);
  set_thread_count(0);
  const McEstimate c = tube_volume_monte_carlo(*T, N, 0.2, 50000, 42);
  CHECK(a.hits == b.hits);
  CHECK(a.hits == c.hits);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == c.std_error);
  const McEstimate d = tube_volume_monte_carlo(*T, N, 0.2, 50000, 43);
  CHECK(d.hits != a.hits);
}

TEST_CASE("thresholds keep the caller's order") {
  const auto S = make_round_sphere(1);
  const NormGauge E = NormGauge::euclidean();
  const TubeSampling a = sample_tubes(*S, E, {0.3, 0.1, 0.2}, 20000, 5);
  const TubeSampling b = sample_tubes(*S, E, {0.1, 0.2, 0.3}, 20000, 5);
  // Same box (same max threshold), so counts line up exactly.
  CHECK(a.tube(0).hits == b.tube(2).hits);
  CHECK(a.tube(1).hits == b.tube(0).hits);
  CHECK(a.tube(2).hits == b.tube(1).hits);
}

TEST_CASE("unsafe tube radius on the torus: the polynomial no longer matches") {
  const auto T = make_torus(2, 0.5);
  const NormGauge N = NormGauge::lp(3);
  const SurfaceMeasures m = integrate_surface(*T, N);
  const double eps = 0.9;
  REQUIRE(eps > max_safe_offset(m));
  CHECK_THROWS_AS(tube_volume_weyl(m, eps), Error);
  const double poly = 2 * eps * m.lambda_M + 2 * eps * eps * eps / 3 * m.int_K;
  const McEstimate mc = tube_volume_monte_carlo(*T, N, eps, 200000, 9);
  // Past the hole the tube swallows the whole solid torus, so the polynomial undercounts.
  CHECK(std::abs(mc.estimate - poly) > 10 * mc.std_error);
}

TEST_CASE("Steiner derivative at zero from Monte Carlo volumes") {
  const auto E = make_ellipsoid(1, 1.5, 2);
  const NormGauge N = NormGauge::lp(4);
  const SteinerCoefficients s = steiner_polynomial(*E, N);
  const double h = 0.1;
  const TubeSampling t = sample_tubes(*E, N, {h / 2, h}, 1'000'000, 11);
  const double V0 = t.enclosed().estimate;
  const double d_h = (t.outer_body(1).estimate - V0) / h;
  const double d_half = (t.outer_body(0).estimate - V0) / (h / 2);
  const double slope = 2 * d_half - d_h;  // removes the linear term in h
  CHECK(slope == doctest::Approx(s.c1).epsilon(0.05));
  CHECK(within_sigma(s.c0, t.enclosed()));
}

TEST_CASE("distance to the surface against brute force") {
  const auto S = make_round_sphere(1);
  const NormGauge N = NormGauge::lp(4);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-1.4, 1.4);
  for (int k = 0; k < 10; ++k) {
    const Vec3 z(U(rng), U(rng), U(rng));
    double brute = 1e300;
    const int n = 600;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 2 * n; ++j) {
        const double th = pi * (i + 0.5) / n, ph = pi * j / n;
        const Vec3 p(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
        brute = std::min(brute, N.value(z - p));
      }
    const double d = distance_to_surface(*S, N, z);
    CHECK(d <= brute + 1e-12);
    CHECK(d >= brute - 1e-4);
  }
  CHECK(distance_to_surface(*S, NormGauge::euclidean(), Vec3(0.3, -0.4, 1.2)) ==
        doctest::Approx(std::sqrt(0.09 + 0.16 + 1.44) - 1).epsilon(1e-12));
}

TEST_CASE("counter-based uniforms") {
  double sum = 0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const double x = counter_uniform(1, i);
    CHECK(x >= 0);
    CHECK(x < 1);
    sum += x;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
  CHECK(counter_uniform(1, 5) == counter_uniform(1, 5));
  CHECK(counter_uniform(1, 5) != counter_uniform(2, 5));
}
