#pragma once

#include <cstddef>
#include <vector>

#include "minkcurv/birkhoff.hpp"
#include "minkcurv/norm_gauge.hpp"
#include "minkcurv/quadrature.hpp"
#include "minkcurv/surface_charts.hpp"

namespace minkcurv {

// Refinement schedule: level l uses base_panels * 2^l panels per direction.
struct GridSpec {
  int start_level = 0;
  int max_levels = 4;
  double rel_tol = 1e-7;
};

struct ChartNodes {
  int chart = 0;
  std::vector<QuadNode> nodes;  // weight includes the partition of unity
};

// Tensor Gauss-Legendre nodes over every chart at one level; nodes with zero
// partition weight are dropped.
std::vector<ChartNodes> quadrature_grid(const Surface& surface, int level);

// One pass over the grid collects every functional at once.
struct SurfaceMeasures {
  double lambda_M = 0;     // integral of omega
  double int_K = 0;        // K omega
  double int_abs_K = 0;    // |K| omega
  double int_H = 0;        // H omega
  double int_H2 = 0;       // H^2 omega
  double int_invH = 0;     // (1/H) omega, NaN unless H > 0 everywhere
  double flux_volume = 0;  // (1/3) rho omega
  double alexandrov = 0;   // (1 - rho H) omega
  double int_K_plus = 0;   // K^+ omega
  double int_KM_plus_e = 0;  // K_M^+ omega_e
  double euclidean_area = 0;

  // Pointwise statistics over the nodes of the reported level.
  double min_H = 0, max_H = 0, mean_H = 0, stdev_H = 0;
  double min_K = 0, max_K = 0;
  double max_lambda1 = 0;
  double min_eta_xi = 0, max_eta_xi = 0;
  double max_omega_mismatch = 0;  // |omega - <eta,xi> omega_e| / omega_e
  double max_residual = 0;

  int level = 0;
  std::size_t nodes = 0;
  double last_change = 0;  // relative change at the final refinement
};

// Refines until lambda_M, int |K| omega and int H^2 omega change by less than
// rel_tol; throws QuadratureNotConverged otherwise.
SurfaceMeasures integrate_surface(const Surface& surface, const NormGauge& norm, const GridSpec& grid = {});

// Single-level evaluation, no convergence check.
SurfaceMeasures integrate_level(const Surface& surface, const NormGauge& norm, int level);

double minkowski_area(const Surface& surface, const NormGauge& norm, const GridSpec& grid = {});
double integral_K(const Surface& surface, const NormGauge& norm, const GridSpec& grid = {});
double integral_H(const Surface& surface, const NormGauge& norm, const GridSpec& grid = {});
double willmore_energy(const Surface& surface, const NormGauge& norm, const GridSpec& grid = {});
// Throws NonPositiveMeanCurvature when min H <= 0.
double integral_invH(const Surface& surface, const NormGauge& norm, const GridSpec& grid = {});
// Throws OrientationError when the result is negative.
double flux_volume(const Surface& surface, const NormGauge& norm, const GridSpec& grid = {});
double alexandrov_residual(const Surface& surface, const NormGauge& norm, const GridSpec& grid = {});

struct HuberBounds {
  double lower = 0, value = 0, upper = 0;
  bool ordered = false;  // lower <= value <= upper up to rounding
};
HuberBounds huber_bounds(const SurfaceMeasures& m, const SphereExtrema& ext);
HuberBounds huber_bounds(const Surface& surface, const NormGauge& norm, const GridSpec& grid = {});

}  // namespace minkcurv
