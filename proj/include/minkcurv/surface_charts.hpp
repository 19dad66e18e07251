#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minkcurv/expression.hpp"
#include "minkcurv/norm_gauge.hpp"
#include "minkcurv/types.hpp"

namespace minkcurv {

struct ChartJet {
  Vec3 p = Vec3::Zero();
  Vec3 pu = Vec3::Zero(), pv = Vec3::Zero();
  Vec3 puu = Vec3::Zero(), puv = Vec3::Zero(), pvv = Vec3::Zero();
};

struct ChartDomain {
  double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
  bool periodic_u = false, periodic_v = false;
};

// A parametrized immersion patch phi(u, v) over a rectangle.
class SurfaceChart {
 public:
  virtual ~SurfaceChart() = default;

  virtual ChartJet jet(double u, double v) const = 0;
  // Only p, pu, pv are meaningful. Charts whose second derivatives are
  // expensive override this.
  virtual ChartJet first_jet(double u, double v) const { return jet(u, v); }
  Vec3 point(double u, double v) const { return first_jet(u, v).p; }

  const ChartDomain& domain() const { return domain_; }
  // Parameter-space length over which the chart varies by O(1); FD steps are
  // relative to it.
  double param_scale() const { return param_scale_; }
  // +1 when pu x pv is the outward (or chosen) normal, -1 otherwise.
  int orientation() const { return orientation_; }

  // Wraps periodic coordinates; false if (u, v) lies outside the domain.
  bool normalize(double& u, double& v) const;

 protected:
  ChartDomain domain_;
  double param_scale_ = 1;
  int orientation_ = 1;
};

using ChartPtr = std::shared_ptr<const SurfaceChart>;

// Chart given only by positions; derivatives by central differences with
// h = eps^(1/3) * param_scale (first) and eps^(1/4) * param_scale (second).
class FunctionChart final : public SurfaceChart {
 public:
  using Fn = std::function<Vec3(double, double)>;
  FunctionChart(Fn f, ChartDomain domain, double param_scale, int orientation);
  ChartJet jet(double u, double v) const override;
  ChartJet first_jet(double u, double v) const override;

 private:
  Fn f_;
};

struct ChartPoint {
  int chart = 0;
  double u = 0, v = 0;
};

struct Box {
  Vec3 lo = Vec3::Zero(), hi = Vec3::Zero();
};

// A surface covered by one or more charts, with a partition of unity masking
// overlaps for integration.
class Surface {
 public:
  virtual ~Surface() = default;

  int chart_count() const { return static_cast<int>(charts_.size()); }
  const SurfaceChart& chart(int i) const { return *charts_.at(static_cast<std::size_t>(i)); }
  ChartPtr chart_ptr(int i) const { return charts_.at(static_cast<std::size_t>(i)); }

  // Weights over all charts covering a point sum to one.
  virtual double partition_weight(int /*chart*/, double /*u*/, double /*v*/) const { return 1.0; }
  // Quadrature panels at refinement level 0; panel edges fall on lines where
  // the built-in norms lose smoothness.
  std::pair<int, int> base_panels(int chart) const { return panels_.at(static_cast<std::size_t>(chart)); }

  bool closed() const { return closed_; }
  const std::string& kind() const { return kind_; }
  virtual std::string describe() const { return kind_; }
  // Euclidean size (circumradius about the origin).
  double scale() const { return scale_; }

  virtual Box bounding_box() const = 0;
  // Closed surfaces only: z lies in the enclosed region.
  virtual bool contains(const Vec3& z) const;
  // Lower bound for the euclidean distance from z to the surface.
  virtual double distance_lower_bound(const Vec3& /*z*/) const { return 0; }
  // Starting parameters for a nearest-point search from z. The default is a
  // 32x32 multistart per chart keeping the best four.
  virtual std::vector<ChartPoint> nearest_seeds(const Vec3& z) const;
  // Parameters of the surface point p in the given chart, if it has them.
  virtual std::optional<ChartPoint> parameters_in(int chart, const Vec3& p) const;
  // Parameters of p in the chart where it carries the largest weight.
  ChartPoint locate(const Vec3& p) const;

 protected:
  std::vector<ChartPtr> charts_;
  std::vector<std::pair<int, int>> panels_;
  bool closed_ = true;
  std::string kind_;
  double scale_ = 1;
};

using SurfacePtr = std::shared_ptr<const Surface>;

// Built-ins. Spheres and ellipsoids use the two spherical charts, the torus a
// single doubly periodic chart, graphs a single patch over a rectangle.
SurfacePtr make_ellipsoid(double a, double b, double c);
inline SurfacePtr make_round_sphere(double r) { return make_ellipsoid(r, r, r); }
// r * dB.
SurfacePtr make_minkowski_sphere(const NormGauge& norm, double r);
SurfacePtr make_torus(double R, double r);
// z = f(x, y) over [x0,x1] x [y0,y1], normal pointing up.
SurfacePtr make_graph(const std::string& expr, double x0 = -1, double x1 = 1, double y0 = -1,
                      double y1 = 1);
// c * M.
SurfacePtr make_homothety(SurfacePtr base, double c);

// Euclidean geometry of a chart.
struct EuclideanGeometry {
  Vec3 xi = Vec3::Zero();  // oriented unit normal
  double area_density = 0;  // |pu x pv|
  double K = 0, H = 0;      // Gaussian and mean curvature (H > 0 on convex outward)
  double k1 = 0, k2 = 0;    // principal curvatures, k1 >= k2
};
EuclideanGeometry euclidean_geometry(const SurfaceChart& chart, double u, double v);
EuclideanGeometry euclidean_geometry(const SurfaceChart& chart, const ChartJet& j);

Vec3 euclidean_normal(const SurfaceChart& chart, double u, double v);
double euclidean_gaussian_curvature(const SurfaceChart& chart, double u, double v);

}  // namespace minkcurv
