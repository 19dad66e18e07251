#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "minkcurv/measures.hpp"
#include "minkcurv/norm_gauge.hpp"
#include "minkcurv/surface_charts.hpp"

namespace minkcurv {

// K / (c^2 K + 2 c H + 1); SingularOffset at focal points.
double parallel_curvature_predicted(double K, double H, double c);

// psi = phi + c eta over a base chart. The derivatives of eta are
// Richardson-extrapolated central differences (inner step 1e-3 * param scale);
// second derivatives of psi difference first derivatives the same way.
class ParallelChart final : public SurfaceChart {
 public:
  ParallelChart(ChartPtr base, NormGauge norm, double c);
  ChartJet jet(double u, double v) const override;
  ChartJet first_jet(double u, double v) const override;
  double offset() const { return c_; }

 private:
  Vec3 eta(double u, double v) const;
  ChartPtr base_;
  NormGauge norm_;
  double c_;
};

struct ParallelCheck {
  double K = 0, H = 0;      // base surface
  double predicted = 0;     // formula
  double recomputed = 0;    // det of the shape matrix on the offset chart
  double rel_error = 0;
};
ParallelCheck check_parallel_curvature(ChartPtr base, const NormGauge& norm, double u, double v, double c);

// 1 / max over the grid of the larger principal curvature; +inf when no
// principal curvature is positive.
double max_safe_offset(const SurfaceMeasures& m);
double max_safe_offset(const Surface& surface, const NormGauge& norm, const GridSpec& grid = {});

// 2 eps lambda_M + (2 eps^3 / 3) int K omega. UnsafeOffset when eps is not
// below the safe offset.
double tube_volume_weyl(const SurfaceMeasures& m, double eps);
double tube_volume_weyl(const Surface& surface, const NormGauge& norm, double eps, const GridSpec& grid = {});

struct SteinerCoefficients {
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0;  // volume, lambda_M, int H omega, int K omega / 3
  double operator()(double rho) const { return c0 + rho * (c1 + rho * (c2 + rho * c3)); }
};
SteinerCoefficients steiner_polynomial(const SurfaceMeasures& m);
SteinerCoefficients steiner_polynomial(const Surface& surface, const NormGauge& norm, const GridSpec& grid = {});

// dist_N(z, M) = min F(z - phi). Seeds from the surface, damped Newton polish;
// falls back to the 32x32 multistart if no seed converges. Returns a value
// larger than cutoff (not necessarily the distance) once the cheap bound
// shows the point is farther than cutoff.
double distance_to_surface(const Surface& surface, const NormGauge& norm, const Vec3& z,
                           double cutoff = std::numeric_limits<double>::infinity());

struct McEstimate {
  double estimate = 0, std_error = 0;
  std::uint64_t hits = 0, samples = 0;
};

// One sampling pass serving several thresholds. Samples are uniform in the
// bounding box of M inflated by max(thresholds) * r_max; sample i draws from
// a counter-based stream keyed by (seed, i), so results do not depend on the
// thread count.
struct TubeSampling {
  double box_volume = 0;
  std::uint64_t samples = 0;
  std::vector<double> thresholds;
  std::uint64_t inside = 0;                // z in the region bounded by M
  std::vector<std::uint64_t> inner_hits;   // inside and dist <= t
  std::vector<std::uint64_t> outer_hits;   // outside and dist <= t

  McEstimate count(std::uint64_t hits) const;
  McEstimate tube(std::size_t i) const { return count(inner_hits[i] + outer_hits[i]); }
  McEstimate inner_shell(std::size_t i) const { return count(inner_hits[i]); }
  McEstimate outer_shell(std::size_t i) const { return count(outer_hits[i]); }
  McEstimate enclosed() const { return count(inside); }
  // Volume of M + t B (region plus outer shell).
  McEstimate outer_body(std::size_t i) const { return count(inside + outer_hits[i]); }
};
TubeSampling sample_tubes(const Surface& surface, const NormGauge& norm, std::vector<double> thresholds,
                          std::uint64_t n_samples, std::uint64_t seed);

McEstimate tube_volume_monte_carlo(const Surface& surface, const NormGauge& norm, double eps,
                                   std::uint64_t n_samples, std::uint64_t seed);

// Uniform double in [0, 1) from a counter-based stream.
double counter_uniform(std::uint64_t seed, std::uint64_t index);

}  // namespace minkcurv
