#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "minkcurv/norm_gauge.hpp"
#include "minkcurv/plane2d.hpp"
#include "minkcurv/surface_charts.hpp"

namespace minkcurv {

// {"kind":"euclidean"} | {"kind":"lp","p":4} | {"kind":"superellipsoid","a":..,"b":..,"c":..,"p":..}
// with optional "blend" (lp family) and "r" (euclidean ball radius).
struct NormSpec {
  std::string kind = "euclidean";
  double p = 2, a = 1, b = 1, c = 1, r = 1;
  double blend = NormGauge::kDefaultBlend;

  NormGauge build() const;
  std::string label() const;
  nlohmann::json to_json() const;
};

// {"kind":"minkowski_sphere","r":..} | {"kind":"ellipsoid","a":..,"b":..,"c":..}
// | {"kind":"torus","R":..,"r":..} | {"kind":"graph","expr":"...", "x0":.. ,...}
struct SurfaceSpec {
  std::string kind = "ellipsoid";
  double a = 1, b = 1.5, c = 2;
  double R = 2, r = 0.5;
  std::string expr;
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;

  // Minkowski spheres take the unit ball of the given norm.
  SurfacePtr build(const NormGauge& norm) const;
  std::string label() const;
  nlohmann::json to_json() const;
  bool convex() const { return kind != "torus" && kind != "graph"; }
};

// Plane norm block: {"kind":"euclidean"} | {"kind":"lp","p":..,"blend":..}.
struct PlaneNormSpec {
  std::string kind = "lp";
  double p = 4, r = 1;
  double blend = PlaneNorm::kDefaultBlend;

  PlaneNorm build() const;
  std::string label() const;
  nlohmann::json to_json() const;
};

// {"kind":"ellipse","a":..,"b":..} | {"kind":"norm_circle","r":..}.
struct CurveSpec {
  std::string kind = "ellipse";
  double a = 2, b = 1, r = 1;

  PlaneCurvePtr build(const PlaneNorm& norm) const;
  std::string label() const;
  nlohmann::json to_json() const;
};

struct PointSpec {
  int chart = 0;
  double u = 0, v = 0;
};

struct RunConfig {
  NormSpec norm;
  SurfaceSpec surface;
  // verify matrix; empty means the built-in matrix
  std::vector<NormSpec> norms;
  std::vector<SurfaceSpec> surfaces;
  std::vector<PlaneNormSpec> plane_norms;

  PlaneNormSpec plane_norm;
  CurveSpec curve;

  int grid = 40;                 // per-point sampling resolution (CSV dumps, oracle grids)
  double epsilon = 0.2;          // tube radius
  std::vector<double> offsets{-0.1, -0.05, 0.05, 0.1};
  std::vector<double> rho{0.05, 0.1, 0.2};
  std::vector<double> radii;     // geodesic radii; empty means curvature-scaled defaults
  std::vector<PointSpec> points; // empty means the default test points
  std::uint64_t samples = 10'000'000;
  std::uint64_t verify_samples = 200'000;
  std::uint64_t seed = 7;
  unsigned threads = 0;
  std::string out = ".";
};

// Strict: unknown keys, wrong types and out-of-range values raise
// ConfigError naming the offending field (e.g. "norm.p").
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
nlohmann::json to_json(const RunConfig& c);

// Chart points used when the config lists none: fixed fractions of chart 0's
// domain, away from coordinate planes.
std::vector<PointSpec> default_points(const Surface& surface);

}  // namespace minkcurv
