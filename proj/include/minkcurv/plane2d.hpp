#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "minkcurv/types.hpp"

namespace minkcurv {

// Norm on the plane: same blended l^p family as in space,
// F^2 = (N_p(x)^2 + blend |x|^2) / (1 + blend). The area form is the
// standard determinant.
class PlaneNorm {
 public:
  static constexpr double kDefaultBlend = 1.0;

  static PlaneNorm euclidean(double radius = 1.0);
  static PlaneNorm lp(double p, double blend = kDefaultBlend);

  double value(const Vec2& x) const;
  Vec2 gradient(const Vec2& x) const;
  Mat2 hessian(const Vec2& x) const;
  void jet(const Vec2& x, double& f, Vec2& g, Mat2& h) const;

  std::string describe() const;
  double p() const { return p_; }
  double blend() const { return blend_; }
  double radius() const { return radius_; }

 private:
  PlaneNorm(double p, double blend, double radius);
  void validate() const;
  double p_, blend_, radius_;
};

// Point y(a) = e(a) / F(e(a)) of the unit circle S and its first two
// derivatives in the angle a.
struct CirclePoint {
  Vec2 y, dy, ddy;
};
CirclePoint unit_circle_point(const PlaneNorm& norm, double angle);

// Maximizer of <y, w> over S: 1D Newton on the angle, bracketed, started
// from the best of a coarse scan.
Vec2 support_point(const PlaneNorm& norm, const Vec2& w);

// sup{det(x, y) : y in S}.
double antinorm(const PlaneNorm& norm, const Vec2& x);

struct CurveJet {
  Vec2 p, d1, d2;
};

// Closed curve over t in [0, 2 pi), counterclockwise.
class PlaneCurve {
 public:
  virtual ~PlaneCurve() = default;
  virtual CurveJet jet(double t) const = 0;
  virtual std::string describe() const = 0;
};
using PlaneCurvePtr = std::shared_ptr<const PlaneCurve>;

PlaneCurvePtr make_ellipse(double a, double b);
// r * S.
PlaneCurvePtr make_norm_circle(const PlaneNorm& norm, double r);

// Outward Birkhoff normal: the point of S whose tangent is parallel to
// gamma'(t), on the outer side.
Vec2 birkhoff_normal_2d(const PlaneCurve& curve, const PlaneNorm& norm, double t);

struct CircularCurvature {
  double k_c = 0;
  // det(eta, gamma') - ||gamma'||_a; zero for the outward normal.
  double normalization_residual = 0;
};
// eta' = k_c gamma'. Both sides are differentiated in t; the ratio is the
// same in any parameter, arc length included. eta' is a Richardson central
// difference with step 1e-4, one-sided next to the axis crossings of S.
CircularCurvature circular_curvature_detail(const PlaneCurve& curve, const PlaneNorm& norm, double t);
double circular_curvature(const PlaneCurve& curve, const PlaneNorm& norm, double t);

// Euclidean curvature of gamma over that of S at the Birkhoff-corresponding
// point.
double circular_curvature_ratio(const PlaneCurve& curve, const PlaneNorm& norm, double t);

double euclidean_curvature_2d(const PlaneCurve& curve, double t);
double enclosed_area(const PlaneCurve& curve);  // Green's theorem

// Cumulative arc length of a positive speed over [t0, t1] with inversion.
class ArcLength {
 public:
  ArcLength(std::function<double(double)> speed, double t0, double t1, int panels);
  double total() const { return cumulative_.back(); }
  double s_of_t(double t) const;
  // Monotone Hermite guess, then Newton on s_of_t.
  double t_of_s(double s) const;
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& cumulative() const { return cumulative_; }

 private:
  std::function<double(double)> speed_;
  std::vector<double> knots_, cumulative_, slopes_;
};

double minkowski_length(const PlaneCurve& curve, const PlaneNorm& norm);
double antinorm_length(const PlaneCurve& curve, const PlaneNorm& norm);
// l(S) = integral of ||y'(a)|| over a full turn.
double unit_circle_length(const PlaneNorm& norm);

// Integral of k_c over Minkowski arc length.
double total_circular_curvature(const PlaneCurve& curve, const PlaneNorm& norm);

struct AreaBound {
  double twice_area = 0;      // 2 lambda(D)
  double integral = 0;        // integral of 1/k_c over antinorm arc length
  bool holds = false;         // twice_area <= integral + 1e-6
};
// NonPositiveCurvature if k_c <= 0 anywhere on the sampling.
AreaBound area_curvature_bound(const PlaneCurve& curve, const PlaneNorm& norm);

struct CurveSample {
  double t, s, s_a, k_c;
};
// Table for plotting; s and s_a from the cumulative tables.
std::vector<CurveSample> sample_curve(const PlaneCurve& curve, const PlaneNorm& norm, int n);

}  // namespace minkcurv
