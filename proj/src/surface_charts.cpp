#include "minkcurv/surface_charts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "minkcurv/quadrature.hpp"

namespace minkcurv {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double x, double a, double b) {
  const double period = b - a;
  double r = std::fmod(x - a, period);
  if (r < 0) r += period;
  return a + r;
}

}  // namespace

bool SurfaceChart::normalize(double& u, double& v) const {
  const ChartDomain& d = domain_;
  if (d.periodic_u) u = wrap(u, d.u0, d.u1);
  if (d.periodic_v) v = wrap(v, d.v0, d.v1);
  return u >= d.u0 && u <= d.u1 && v >= d.v0 && v <= d.v1;
}

FunctionChart::FunctionChart(Fn f, ChartDomain domain, double param_scale, int orientation)
    : f_(std::move(f)) {
  domain_ = domain;
  param_scale_ = param_scale;
  orientation_ = orientation;
}

ChartJet FunctionChart::first_jet(double u, double v) const {
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * param_scale_;
  ChartJet j;
  j.p = f_(u, v);
  j.pu = (f_(u + h, v) - f_(u - h, v)) / (2 * h);
  j.pv = (f_(u, v + h) - f_(u, v - h)) / (2 * h);
  return j;
}

ChartJet FunctionChart::jet(double u, double v) const {
  ChartJet j = first_jet(u, v);
  const double h = std::pow(std::numeric_limits<double>::epsilon(), 0.25) * param_scale_;
  j.puu = (f_(u + h, v) - 2 * j.p + f_(u - h, v)) / (h * h);
  j.pvv = (f_(u, v + h) - 2 * j.p + f_(u, v - h)) / (h * h);
  j.puv = (f_(u + h, v + h) - f_(u + h, v - h) - f_(u - h, v + h) + f_(u - h, v - h)) / (4 * h * h);
  return j;
}

bool Surface::contains(const Vec3&) const {
  throw Error(ErrorCode::InvalidInput, describe() + " does not enclose a region");
}

std::vector<ChartPoint> Surface::nearest_seeds(const Vec3& z) const {
  struct Cand {
    double dist;
    ChartPoint at;
  };
  std::vector<Cand> all;
  constexpr int kGrid = 32;
  for (int c = 0; c < chart_count(); ++c) {
    const SurfaceChart& ch = chart(c);
    const ChartDomain& d = ch.domain();
    for (int i = 0; i < kGrid; ++i) {
      for (int k = 0; k < kGrid; ++k) {
        const double u = d.u0 + (i + 0.5) * (d.u1 - d.u0) / kGrid;
        const double v = d.v0 + (k + 0.5) * (d.v1 - d.v0) / kGrid;
        if (partition_weight(c, u, v) <= 0) continue;
        all.push_back({(ch.point(u, v) - z).norm(), {c, u, v}});
      }
    }
  }
  const std::size_t keep = std::min<std::size_t>(4, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    [](const Cand& a, const Cand& b) { return a.dist < b.dist; });
  std::vector<ChartPoint> out;
  for (std::size_t i = 0; i < keep; ++i) out.push_back(all[i].at);
  return out;
}

std::optional<ChartPoint> Surface::parameters_in(int, const Vec3&) const { return std::nullopt; }

ChartPoint Surface::locate(const Vec3& p) const {
  std::optional<ChartPoint> best;
  double best_w = -1;
  for (int c = 0; c < chart_count(); ++c) {
    auto at = parameters_in(c, p);
    if (!at) continue;
    const double w = partition_weight(c, at->u, at->v);
    if (w > best_w) {
      best_w = w;
      best = at;
    }
  }
  if (!best) throw Error(ErrorCode::InvalidInput, "point is not covered by any chart of " + describe());
  return *best;
}

namespace {

// ---- sphere-like surfaces: p = G(d), d on the unit sphere ------------------

class SphericalChartBase : public SurfaceChart {
 public:
  explicit SphericalChartBase(int which) : which_(which) {
    domain_ = {0, kPi, 0, 2 * kPi, false, true};
    param_scale_ = 1;
    orientation_ = 1;
  }

 protected:
  int which_;
};

class EllipsoidChart final : public SphericalChartBase {
 public:
  EllipsoidChart(int which, const Vec3& axes) : SphericalChartBase(which), a_(axes) {}
  ChartJet jet(double u, double v) const override {
    const DirectionJet d = spherical_direction(which_, u, v);
    ChartJet j;
    j.p = a_.cwiseProduct(d.d);
    j.pu = a_.cwiseProduct(d.du);
    j.pv = a_.cwiseProduct(d.dv);
    j.puu = a_.cwiseProduct(d.duu);
    j.puv = a_.cwiseProduct(d.duv);
    j.pvv = a_.cwiseProduct(d.dvv);
    return j;
  }

 private:
  Vec3 a_;
};

// x(d) = r d / F(d)
class NormSphereChart final : public SphericalChartBase {
 public:
  NormSphereChart(int which, NormGauge norm, double r)
      : SphericalChartBase(which), norm_(std::move(norm)), r_(r) {}

  ChartJet jet(double u, double v) const override {
    const DirectionJet d = spherical_direction(which_, u, v);
    const GaugeJet g = norm_.jet(d.d);
    const double F = g.value;
    auto dx = [&](const Vec3& a) { return r_ * (a / F - d.d * (g.grad.dot(a) / (F * F))); };
    auto d2x = [&](const Vec3& a, const Vec3& b) {
      const double ga = g.grad.dot(a), gb = g.grad.dot(b);
      return r_ * (-(a * gb + b * ga) / (F * F) + d.d * (2 * ga * gb / (F * F * F)) -
                   d.d * (a.dot(g.hess * b) / (F * F)));
    };
    ChartJet j;
    j.p = r_ * d.d / F;
    j.pu = dx(d.du);
    j.pv = dx(d.dv);
    j.puu = d2x(d.du, d.du) + dx(d.duu);
    j.puv = d2x(d.du, d.dv) + dx(d.duv);
    j.pvv = d2x(d.dv, d.dv) + dx(d.dvv);
    return j;
  }
  ChartJet first_jet(double u, double v) const override {
    const DirectionJet d = spherical_direction(which_, u, v);
    const GaugeJet g = norm_.jet(d.d);
    const double F = g.value;
    ChartJet j;
    j.p = r_ * d.d / F;
    j.pu = r_ * (d.du / F - d.d * (g.grad.dot(d.du) / (F * F)));
    j.pv = r_ * (d.dv / F - d.d * (g.grad.dot(d.dv) / (F * F)));
    return j;
  }

 private:
  NormGauge norm_;
  double r_;
};

class SphereLike : public Surface {
 public:
  double partition_weight(int chart, double u, double v) const override {
    return spherical_partition_weight(chart, spherical_direction(chart, u, v).d);
  }
  std::optional<ChartPoint> parameters_in(int chart, const Vec3& p) const override {
    const Vec3 d = direction_of(p);
    ChartPoint at{chart, 0, 0};
    spherical_angles(chart, d, at.u, at.v);
    return at;
  }
  std::vector<ChartPoint> nearest_seeds(const Vec3& z) const override {
    if (z.norm() < 1e-9 * scale_) return Surface::nearest_seeds(z);
    const Vec3 d = seed_direction(z);
    // Stay away from the chosen chart's poles.
    const int chart = std::abs(d.z()) <= std::abs(d.x()) ? 0 : 1;
    ChartPoint at{chart, 0, 0};
    spherical_angles(chart, d, at.u, at.v);
    return {at};
  }

 protected:
  // Unit direction d with G(d) = p for a surface point p.
  virtual Vec3 direction_of(const Vec3& p) const = 0;
  // Direction whose image is near the euclidean nearest point to z.
  virtual Vec3 seed_direction(const Vec3& z) const { return direction_of(z); }
};

class Ellipsoid final : public SphereLike {
 public:
  explicit Ellipsoid(const Vec3& axes) : a_(axes) {
    for (int c = 0; c < 2; ++c) {
      charts_.push_back(std::make_shared<EllipsoidChart>(c, axes));
      panels_.emplace_back(4, 8);
    }
    kind_ = "ellipsoid";
    scale_ = axes.maxCoeff();
  }
  std::string describe() const override {
    std::ostringstream s;
    s << "ellipsoid(" << a_.x() << "," << a_.y() << "," << a_.z() << ")";
    return s.str();
  }
  Box bounding_box() const override { return {-a_, a_}; }
  bool contains(const Vec3& z) const override { return z.cwiseQuotient(a_).squaredNorm() <= 1; }
  double distance_lower_bound(const Vec3& z) const override {
    return a_.minCoeff() * std::abs(z.cwiseQuotient(a_).norm() - 1);
  }

 protected:
  Vec3 direction_of(const Vec3& p) const override { return p.cwiseQuotient(a_).normalized(); }

 private:
  Vec3 a_;
};

class MinkowskiSphere final : public SphereLike {
 public:
  MinkowskiSphere(NormGauge norm, double r) : norm_(std::move(norm)), r_(r) {
    for (int c = 0; c < 2; ++c) {
      charts_.push_back(std::make_shared<NormSphereChart>(c, norm_, r));
      panels_.emplace_back(4, 8);
    }
    kind_ = "minkowski_sphere";
    scale_ = r * norm_.r_max();
    for (int i = 0; i < 3; ++i) {
      const SpherePoint s = inverse_gauss_map(norm_, Vec3::Unit(i));
      extent_[i] = r * s.x[i];
    }
  }
  std::string describe() const override {
    std::ostringstream s;
    s << "minkowski_sphere(r=" << r_ << ", " << norm_.describe() << ")";
    return s.str();
  }
  Box bounding_box() const override { return {-extent_, extent_}; }
  bool contains(const Vec3& z) const override { return norm_.value(z) <= r_; }
  double distance_lower_bound(const Vec3& z) const override {
    return norm_.r_min() * std::abs(norm_.value(z) - r_);
  }

 protected:
  Vec3 direction_of(const Vec3& p) const override { return p.normalized(); }

 private:
  NormGauge norm_;
  double r_;
  Vec3 extent_ = Vec3::Zero();
};

// ---- torus ---------------------------------------------------------------

class TorusChart final : public SurfaceChart {
 public:
  TorusChart(double R, double r) : R_(R), r_(r) {
    domain_ = {0, 2 * kPi, 0, 2 * kPi, true, true};
    param_scale_ = 1;
    orientation_ = 1;
  }
  ChartJet jet(double u, double v) const override {
    const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
    const double rho = R_ + r_ * cv;
    ChartJet j;
    j.p = Vec3(rho * cu, rho * su, r_ * sv);
    j.pu = Vec3(-rho * su, rho * cu, 0);
    j.pv = Vec3(-r_ * sv * cu, -r_ * sv * su, r_ * cv);
    j.puu = Vec3(-rho * cu, -rho * su, 0);
    j.puv = Vec3(r_ * sv * su, -r_ * sv * cu, 0);
    j.pvv = Vec3(-r_ * cv * cu, -r_ * cv * su, -r_ * sv);
    return j;
  }

 private:
  double R_, r_;
};

class Torus final : public Surface {
 public:
  Torus(double R, double r) : R_(R), r_(r) {
    charts_.push_back(std::make_shared<TorusChart>(R, r));
    panels_.emplace_back(8, 8);
    kind_ = "torus";
    scale_ = R + r;
  }
  std::string describe() const override {
    std::ostringstream s;
    s << "torus(R=" << R_ << ",r=" << r_ << ")";
    return s.str();
  }
  Box bounding_box() const override {
    return {Vec3(-(R_ + r_), -(R_ + r_), -r_), Vec3(R_ + r_, R_ + r_, r_)};
  }
  bool contains(const Vec3& z) const override {
    const double q = std::hypot(z.x(), z.y()) - R_;
    return q * q + z.z() * z.z() <= r_ * r_;
  }
  double distance_lower_bound(const Vec3& z) const override {
    return std::abs(std::hypot(std::hypot(z.x(), z.y()) - R_, z.z()) - r_);
  }
  std::vector<ChartPoint> nearest_seeds(const Vec3& z) const override {
    const double rho = std::hypot(z.x(), z.y());
    if (rho < 1e-9 * R_) return Surface::nearest_seeds(z);
    return {*parameters_in(0, z)};
  }
  std::optional<ChartPoint> parameters_in(int, const Vec3& p) const override {
    const double rho = std::hypot(p.x(), p.y());
    double u = std::atan2(p.y(), p.x()), v = std::atan2(p.z(), rho - R_);
    if (u < 0) u += 2 * kPi;
    if (v < 0) v += 2 * kPi;
    return ChartPoint{0, u, v};
  }

 private:
  double R_, r_;
};

// ---- graphs --------------------------------------------------------------

class GraphChart final : public SurfaceChart {
 public:
  GraphChart(Expression f, double x0, double x1, double y0, double y1) : f_(std::move(f)) {
    domain_ = {x0, x1, y0, y1, false, false};
    param_scale_ = 0.5 * std::max(x1 - x0, y1 - y0);
    orientation_ = 1;
  }
  ChartJet jet(double u, double v) const override {
    const Jet2 z = f_.eval_jet(u, v);
    ChartJet j;
    j.p = Vec3(u, v, z.v);
    j.pu = Vec3(1, 0, z.dx);
    j.pv = Vec3(0, 1, z.dy);
    j.puu = Vec3(0, 0, z.dxx);
    j.puv = Vec3(0, 0, z.dxy);
    j.pvv = Vec3(0, 0, z.dyy);
    return j;
  }

 private:
  Expression f_;
};

class Graph final : public Surface {
 public:
  Graph(const std::string& expr, double x0, double x1, double y0, double y1)
      : expr_(expr) {
    if (!(x1 > x0) || !(y1 > y0)) throw Error(ErrorCode::InvalidInput, "graph domain is empty");
    auto chart = std::make_shared<GraphChart>(Expression::parse(expr), x0, x1, y0, y1);
    charts_.push_back(chart);
    panels_.emplace_back(4, 4);
    closed_ = false;
    kind_ = "graph";
    constexpr int n = 64;
    box_.lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    box_.hi = -box_.lo;
    for (int i = 0; i <= n; ++i)
      for (int k = 0; k <= n; ++k) {
        const Vec3 p = chart->point(x0 + (x1 - x0) * i / n, y0 + (y1 - y0) * k / n);
        if (!p.allFinite()) throw Error(ErrorCode::InvalidInput, "graph '" + expr + "' is not finite on its domain");
        box_.lo = box_.lo.cwiseMin(p);
        box_.hi = box_.hi.cwiseMax(p);
      }
    scale_ = std::max(box_.lo.norm(), box_.hi.norm());
  }
  std::string describe() const override { return "graph(" + expr_ + ")"; }
  Box bounding_box() const override { return box_; }
  std::optional<ChartPoint> parameters_in(int, const Vec3& p) const override {
    const ChartDomain& d = chart(0).domain();
    if (p.x() < d.u0 || p.x() > d.u1 || p.y() < d.v0 || p.y() > d.v1) return std::nullopt;
    return ChartPoint{0, p.x(), p.y()};
  }

 private:
  std::string expr_;
  Box box_;
};

// ---- homothety -----------------------------------------------------------

class ScaledChart final : public SurfaceChart {
 public:
  ScaledChart(ChartPtr base, double c) : base_(std::move(base)), c_(c) {
    domain_ = base_->domain();
    param_scale_ = base_->param_scale();
    orientation_ = base_->orientation();
  }
  ChartJet jet(double u, double v) const override { return scale(base_->jet(u, v)); }
  ChartJet first_jet(double u, double v) const override { return scale(base_->first_jet(u, v)); }

 private:
  ChartJet scale(ChartJet j) const {
    j.p *= c_;
    j.pu *= c_;
    j.pv *= c_;
    j.puu *= c_;
    j.puv *= c_;
    j.pvv *= c_;
    return j;
  }
  ChartPtr base_;
  double c_;
};

class Homothety final : public Surface {
 public:
  Homothety(SurfacePtr base, double c) : base_(std::move(base)), c_(c) {
    for (int i = 0; i < base_->chart_count(); ++i) {
      charts_.push_back(std::make_shared<ScaledChart>(base_->chart_ptr(i), c));
      panels_.push_back(base_->base_panels(i));
    }
    closed_ = base_->closed();
    kind_ = base_->kind();
    scale_ = c * base_->scale();
  }
  std::string describe() const override {
    std::ostringstream s;
    s << c_ << "*" << base_->describe();
    return s.str();
  }
  double partition_weight(int chart, double u, double v) const override {
    return base_->partition_weight(chart, u, v);
  }
  Box bounding_box() const override {
    const Box b = base_->bounding_box();
    return {c_ * b.lo, c_ * b.hi};
  }
  bool contains(const Vec3& z) const override { return base_->contains(z / c_); }
  double distance_lower_bound(const Vec3& z) const override {
    return c_ * base_->distance_lower_bound(z / c_);
  }
  std::vector<ChartPoint> nearest_seeds(const Vec3& z) const override {
    return base_->nearest_seeds(z / c_);
  }
  std::optional<ChartPoint> parameters_in(int chart, const Vec3& p) const override {
    return base_->parameters_in(chart, p / c_);
  }

 private:
  SurfacePtr base_;
  double c_;
};

void require_positive(double x, const char* what) {
  if (!(x > 0) || !std::isfinite(x))
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must be positive and finite");
}

}  // namespace

SurfacePtr make_ellipsoid(double a, double b, double c) {
  require_positive(a, "ellipsoid a");
  require_positive(b, "ellipsoid b");
  require_positive(c, "ellipsoid c");
  return std::make_shared<Ellipsoid>(Vec3(a, b, c));
}

SurfacePtr make_minkowski_sphere(const NormGauge& norm, double r) {
  require_positive(r, "minkowski_sphere r");
  return std::make_shared<MinkowskiSphere>(norm, r);
}

SurfacePtr make_torus(double R, double r) {
  require_positive(R, "torus R");
  require_positive(r, "torus r");
  if (r >= R) throw Error(ErrorCode::InvalidInput, "torus needs r < R to be embedded");
  return std::make_shared<Torus>(R, r);
}

SurfacePtr make_graph(const std::string& expr, double x0, double x1, double y0, double y1) {
  return std::make_shared<Graph>(expr, x0, x1, y0, y1);
}

SurfacePtr make_homothety(SurfacePtr base, double c) {
  require_positive(c, "homothety factor");
  return std::make_shared<Homothety>(std::move(base), c);
}

EuclideanGeometry euclidean_geometry(const SurfaceChart& chart, const ChartJet& j) {
  const Vec3 n = j.pu.cross(j.pv);
  const double len = n.norm();
  if (!(len > 1e-8))
    throw Error(ErrorCode::DegenerateChart, "chart is not immersed here");
  EuclideanGeometry g;
  g.xi = chart.orientation() * n / len;
  g.area_density = len;
  const double E = j.pu.dot(j.pu), F = j.pu.dot(j.pv), G = j.pv.dot(j.pv);
  // Second fundamental form against -xi so that convex outward surfaces get H > 0.
  const double L = -j.puu.dot(g.xi), M = -j.puv.dot(g.xi), N = -j.pvv.dot(g.xi);
  const double det = E * G - F * F;
  g.K = (L * N - M * M) / det;
  g.H = (E * N - 2 * F * M + G * L) / (2 * det);
  const double disc = std::sqrt(std::max(0.0, g.H * g.H - g.K));
  g.k1 = g.H + disc;
  g.k2 = g.H - disc;
  return g;
}

EuclideanGeometry euclidean_geometry(const SurfaceChart& chart, double u, double v) {
  return euclidean_geometry(chart, chart.jet(u, v));
}

Vec3 euclidean_normal(const SurfaceChart& chart, double u, double v) {
  const ChartJet j = chart.first_jet(u, v);
  const Vec3 n = j.pu.cross(j.pv);
  const double len = n.norm();
  if (!(len > 1e-8)) throw Error(ErrorCode::DegenerateChart, "chart is not immersed here");
  return chart.orientation() * n / len;
}

double euclidean_gaussian_curvature(const SurfaceChart& chart, double u, double v) {
  return euclidean_geometry(chart, u, v).K;
}

}  // namespace minkcurv
