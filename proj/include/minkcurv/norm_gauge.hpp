#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "minkcurv/types.hpp"

namespace minkcurv {

enum class NormKind { Euclidean, Lp, Superellipsoid, Custom };

struct GaugeJet {
  double value = 0;
  Vec3 grad = Vec3::Zero();
  Mat3 hess = Mat3::Zero();
};

struct NormParams {
  NormKind kind = NormKind::Euclidean;
  double radius = 1.0;          // euclidean: ball radius
  double p = 2.0;               // lp / superellipsoid exponent
  double blend = 0.0;           // weight of the euclidean term, see NormGauge::lp
  Vec3 semi_axes = Vec3::Ones();  // superellipsoid a, b, c
  std::string name;             // custom norms
};

// The ambient norm, given by its gauge F (F(x) = ||x||) with gradient and
// Hessian. Immutable after construction; copies share the model.
//
// The unit sphere must have strictly positive Gaussian curvature. Pure l^p
// spheres with p != 2 are flat to second order wherever a coordinate
// vanishes, so the lp and superellipsoid kinds carry a euclidean blend:
//
//   F(x)^2 = (N_p(Dx)^2 + blend * |Dx|^2) / (1 + blend)
//
// with D = diag(1/a, 1/b, 1/c) (identity for lp). F(e_i) = a_i either way.
// blend = 0 gives the pure gauge, which construction rejects for p != 2.
class NormGauge {
 public:
  static constexpr double kDefaultBlend = 1.0;

  static NormGauge euclidean(double radius = 1.0);
  static NormGauge lp(double p, double blend = kDefaultBlend);
  static NormGauge superellipsoid(double a, double b, double c, double p,
                                  double blend = kDefaultBlend);

  using ValueFn = std::function<double(const Vec3&)>;
  using GradFn = std::function<Vec3(const Vec3&)>;
  using HessFn = std::function<Mat3(const Vec3&)>;
  // Analytic gradient and Hessian are required; they are cross-checked
  // against finite differences of value/gradient at construction.
  static NormGauge custom(std::string name, ValueFn value, GradFn grad, HessFn hess);

  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  Mat3 hessian(const Vec3& x) const;
  GaugeJet jet(const Vec3& x) const;

  NormKind kind() const { return params_.kind; }
  const NormParams& params() const { return params_; }
  // Bounding radii of the unit sphere: r_min |d| <= |x| <= r_max |d| for x on dB.
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  std::string describe() const;

  struct Model {
    virtual ~Model() = default;
    virtual double value(const Vec3& x) const = 0;
    virtual GaugeJet jet(const Vec3& x) const = 0;
  };

 private:
  NormGauge(std::shared_ptr<const Model> model, NormParams params);
  static NormGauge build_lp_family(NormKind kind, const Vec3& axes, double p, double blend);
  void validate();

  std::shared_ptr<const Model> model_;
  NormParams params_;
  double r_min_ = 1, r_max_ = 1;
  std::vector<std::string> warnings_;
};

// Point of the unit sphere with its outward euclidean unit normal.
struct SpherePoint {
  Vec3 x = Vec3::Zero();
  Vec3 n = Vec3::Zero();
};

// u: the inverse of the euclidean Gauss map of dB. Solves grad F(x) = mu n,
// F(x) = 1 by damped Newton from x0 = n / F(n).
SpherePoint inverse_gauss_map(const NormGauge& norm, const Vec3& n);
// Same, started from a nearby point of dB (e.g. u at a neighbouring normal).
SpherePoint inverse_gauss_map(const NormGauge& norm, const Vec3& n, const Vec3& start);

// Euclidean Gaussian curvature of dB at x (x on dB).
double sphere_curvature(const NormGauge& norm, const Vec3& x);
inline double sphere_curvature(const NormGauge& norm, const SpherePoint& s) {
  return sphere_curvature(norm, s.x);
}

// lambda(dB): integral of omega(X,Y) = det(X, Y, x) over the unit sphere,
// two-chart Gauss-Legendre quadrature refined until successive levels agree
// to rel_tol.
double sphere_area(const NormGauge& norm, double rel_tol = 1e-11);

// Ranges over dB of <eta, xi> (= 1/|grad F|) and of the curvature of dB.
struct SphereExtrema {
  double min_eta_xi = 1, max_eta_xi = 1;
  double min_curvature = 1, max_curvature = 1;
};
SphereExtrema sphere_extrema(const NormGauge& norm, int resolution = 96);

}  // namespace minkcurv
