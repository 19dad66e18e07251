#include "minkcurv/norm_gauge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "minkcurv/quadrature.hpp"

namespace minkcurv {
namespace {

class EuclideanModel final : public NormGauge::Model {
 public:
  explicit EuclideanModel(double r) : inv_r_(1.0 / r) {}
  double value(const Vec3& x) const override { return x.norm() * inv_r_; }
  GaugeJet jet(const Vec3& x) const override {
    GaugeJet j;
    const double len = x.norm();
    j.value = len * inv_r_;
    if (len == 0) return j;
    const Vec3 e = x / len;
    j.grad = e * inv_r_;
    j.hess = (Mat3::Identity() - e * e.transpose()) * (inv_r_ / len);
    return j;
  }

 private:
  double inv_r_;
};

// Blended l^p gauge evaluated in scaled coordinates y = D x.
class LpModel final : public NormGauge::Model {
 public:
  LpModel(double p, double blend, const Vec3& semi_axes)
      : p_(p), blend_(blend), inv_axes_(semi_axes.cwiseInverse()) {}

  double value(const Vec3& x) const override {
    const Vec3 y = inv_axes_.cwiseProduct(x);
    const double n = lp_norm(y);
    return std::sqrt((n * n + blend_ * y.squaredNorm()) / (1 + blend_));
  }

  GaugeJet jet(const Vec3& x) const override {
    GaugeJet j;
    const Vec3 y = inv_axes_.cwiseProduct(x);
    const double m = y.cwiseAbs().maxCoeff();
    if (m == 0) return j;
    const double n = lp_norm(y);
    // t_i = |y_i| / N keeps the powers in [0, 1].
    Vec3 gn, diag;
    for (int i = 0; i < 3; ++i) {
      const double t = std::abs(y[i]) / n;
      const double s = y[i] < 0 ? -1.0 : 1.0;
      gn[i] = s * pow_int_or_real(t, p_ - 1);
      diag[i] = pow_int_or_real(t, p_ - 2);
    }
    Mat3 hn = Mat3(diag.asDiagonal()) - gn * gn.transpose();
    hn *= (p_ - 1) / n;
    const double q = (n * n + blend_ * y.squaredNorm()) / (1 + blend_);
    const double g = std::sqrt(q);
    const Vec3 grad_y = (n * gn + blend_ * y) / ((1 + blend_) * g);
    Mat3 hess_y = (gn * gn.transpose() + n * hn + blend_ * Mat3::Identity()) / ((1 + blend_) * g);
    hess_y -= grad_y * grad_y.transpose() / g;
    j.value = g;
    j.grad = inv_axes_.cwiseProduct(grad_y);
    j.hess = inv_axes_.asDiagonal() * hess_y * inv_axes_.asDiagonal();
    return j;
  }

 private:
  double pow_int_or_real(double t, double e) const {
    if (e == 0) return 1.0;
    if (e == 1) return t;
    if (e == 2) return t * t;
    if (e == 3) return t * t * t;
    return std::pow(t, e);
  }

  double lp_norm(const Vec3& y) const {
    const double m = y.cwiseAbs().maxCoeff();
    if (m == 0) return 0;
    double s = 0;
    for (int i = 0; i < 3; ++i) s += pow_int_or_real(std::abs(y[i]) / m, p_);
    if (p_ == 2) return m * std::sqrt(s);
    if (p_ == 4) return m * std::sqrt(std::sqrt(s));
    if (p_ == 3) return m * std::cbrt(s);
    return m * std::pow(s, 1.0 / p_);
  }

  double p_, blend_;
  Vec3 inv_axes_;
};

class CustomModel final : public NormGauge::Model {
 public:
  CustomModel(NormGauge::ValueFn v, NormGauge::GradFn g, NormGauge::HessFn h)
      : value_(std::move(v)), grad_(std::move(g)), hess_(std::move(h)) {}
  double value(const Vec3& x) const override { return value_(x); }
  GaugeJet jet(const Vec3& x) const override { return {value_(x), grad_(x), hess_(x)}; }

 private:
  NormGauge::ValueFn value_;
  NormGauge::GradFn grad_;
  NormGauge::HessFn hess_;
};

// Probe directions: random plus the symmetric ones where smoothness or
// curvature typically fails first (axes, coordinate planes, diagonals).
std::vector<Vec3> probe_directions() {
  std::vector<Vec3> dirs;
  for (int i = 0; i < 3; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = 1;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  for (int sx = -1; sx <= 1; ++sx)
    for (int sy = -1; sy <= 1; ++sy)
      for (int sz = -1; sz <= 1; ++sz) {
        Vec3 d(sx, sy, sz);
        if (d.squaredNorm() >= 2) dirs.push_back(d.normalized());
      }
  std::mt19937_64 rng(0x6e6f726dULL);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 2000; ++k) {
    Vec3 d(gauss(rng), gauss(rng), gauss(rng));
    // Every fourth sample lies on a coordinate plane.
    if (k % 4 == 0) d[k / 4 % 3] = 0;
    dirs.push_back(d.normalized());
  }
  return dirs;
}

// Minimizes sign * f over (theta, phi) by compass search from a start point.
double compass_refine(const std::function<double(double, double)>& f, double theta, double phi,
                      double sign, double step) {
  double best = sign * f(theta, phi);
  while (step > 1e-9) {
    bool moved = false;
    const double cand[4][2] = {{step, 0}, {-step, 0}, {0, step}, {0, -step}};
    for (const auto& c : cand) {
      const double val = sign * f(theta + c[0], phi + c[1]);
      if (val < best) {
        best = val;
        theta += c[0];
        phi += c[1];
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return sign * best;
}

}  // namespace

NormGauge::NormGauge(std::shared_ptr<const Model> model, NormParams params)
    : model_(std::move(model)), params_(std::move(params)) {}

NormGauge NormGauge::euclidean(double radius) {
  if (!(radius > 0) || !std::isfinite(radius))
    throw Error(ErrorCode::InvalidInput, "euclidean norm radius must be positive");
  NormParams params;
  params.kind = NormKind::Euclidean;
  params.radius = radius;
  NormGauge g(std::make_shared<EuclideanModel>(radius), params);
  g.validate();
  return g;
}

NormGauge NormGauge::lp(double p, double blend) {
  return build_lp_family(NormKind::Lp, Vec3::Ones(), p, blend);
}

NormGauge NormGauge::superellipsoid(double a, double b, double c, double p, double blend) {
  return build_lp_family(NormKind::Superellipsoid, Vec3(a, b, c), p, blend);
}

NormGauge NormGauge::build_lp_family(NormKind kind, const Vec3& axes, double p, double blend) {
  if (!std::isfinite(p) || !(p > 1))
    throw Error(ErrorCode::InvalidInput, "exponent p must lie in (1, inf)");
  if (p < 2)
    throw Error(ErrorCode::InvalidNorm,
                "exponent p < 2 makes the gauge non-C2 on the coordinate planes (unbounded curvature)");
  if (!(blend >= 0) || !std::isfinite(blend))
    throw Error(ErrorCode::InvalidInput, "blend must be a non-negative number");
  for (int i = 0; i < 3; ++i)
    if (!(axes[i] > 0) || !std::isfinite(axes[i]))
      throw Error(ErrorCode::InvalidInput, "superellipsoid semi-axes must be positive");
  NormParams params;
  params.kind = kind;
  params.p = p;
  params.blend = blend;
  params.semi_axes = axes;
  NormGauge g(std::make_shared<LpModel>(p, blend, params.semi_axes), params);
  if (p > 8)
    g.warnings_.push_back("p > 8: unit-sphere curvature is small near the axes; Newton conditioning degrades");
  g.validate();
  return g;
}

NormGauge NormGauge::custom(std::string name, ValueFn value, GradFn grad, HessFn hess) {
  if (!value || !grad || !hess)
    throw Error(ErrorCode::InvalidInput, "custom norm requires value, gradient and Hessian");
  NormParams params;
  params.kind = NormKind::Custom;
  params.name = std::move(name);
  NormGauge g(std::make_shared<CustomModel>(std::move(value), std::move(grad), std::move(hess)),
              params);
  g.validate();
  return g;
}

double NormGauge::value(const Vec3& x) const { return model_->value(x); }
Vec3 NormGauge::gradient(const Vec3& x) const { return model_->jet(x).grad; }
Mat3 NormGauge::hessian(const Vec3& x) const { return model_->jet(x).hess; }
GaugeJet NormGauge::jet(const Vec3& x) const { return model_->jet(x); }

std::string NormGauge::describe() const {
  std::ostringstream os;
  switch (params_.kind) {
    case NormKind::Euclidean: os << "euclidean(r=" << params_.radius << ")"; break;
    case NormKind::Lp: os << "lp(p=" << params_.p << ", blend=" << params_.blend << ")"; break;
    case NormKind::Superellipsoid:
      os << "superellipsoid(a=" << params_.semi_axes.x() << ", b=" << params_.semi_axes.y()
         << ", c=" << params_.semi_axes.z() << ", p=" << params_.p << ", blend=" << params_.blend
         << ")";
      break;
    case NormKind::Custom: os << "custom(" << params_.name << ")"; break;
  }
  return os.str();
}

void NormGauge::validate() {
  const std::vector<Vec3> dirs = probe_directions();
  std::mt19937_64 rng(0x686f6d6fULL);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  auto fail = [&](const std::string& what, const Vec3& d) {
    std::ostringstream os;
    os << describe() << ": " << what << " at direction (" << d.x() << ", " << d.y() << ", "
       << d.z() << ")";
    throw Error(ErrorCode::InvalidNorm, os.str());
  };
  for (const Vec3& d : dirs) {
    const GaugeJet j = jet(d);
    if (!(j.value > 0) || !std::isfinite(j.value)) fail("gauge is not positive", d);
    if (std::abs(value(-d) - j.value) > 1e-12 * j.value) fail("gauge is not symmetric", d);
    const double t = scale(rng);
    if (std::abs(value(t * d) - t * j.value) > 1e-10 * t * j.value)
      fail("gauge is not positively homogeneous", d);
    if (!j.grad.allFinite() || !j.hess.allFinite()) fail("non-finite derivatives", d);
    // Hessian of F^2 must be positive definite (strict convexity, positive
    // curvature of the unit sphere).
    const Mat3 h2 = 2.0 * (j.grad * j.grad.transpose() + j.value * j.hess);
    Eigen::SelfAdjointEigenSolver<Mat3> eig;
    eig.computeDirect(h2, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 1e-8 * hi)) fail("Hessian of F^2 is not positive definite (flat unit sphere)", d);
    if (params_.kind == NormKind::Custom) {
      const double h = 1e-5;
      for (int i = 0; i < 3; ++i) {
        Vec3 e = Vec3::Zero();
        e[i] = h;
        const double fd = (value(d + e) - value(d - e)) / (2 * h);
        if (std::abs(fd - j.grad[i]) > 1e-5 * (1 + std::abs(j.grad[i])))
          fail("gradient disagrees with finite differences of the gauge", d);
        const Vec3 fdh = (gradient(d + e) - gradient(d - e)) / (2 * h);
        if ((fdh - j.hess.col(i)).norm() > 1e-4 * (1 + j.hess.norm()))
          fail("Hessian disagrees with finite differences of the gradient", d);
      }
    }
  }

  auto radius = [this](double theta, double phi) {
    return 1.0 / value(spherical_direction(0, theta, phi).d);
  };
  const int nt = 90, np = 180;
  double lo = radius(0, 0), hi = lo;
  double lo_t = 0, lo_p = 0, hi_t = 0, hi_p = 0;
  for (int i = 0; i <= nt; ++i)
    for (int k = 0; k < np; ++k) {
      const double t = std::numbers::pi * i / nt, p = 2 * std::numbers::pi * k / np;
      const double r = radius(t, p);
      if (r < lo) lo = r, lo_t = t, lo_p = p;
      if (r > hi) hi = r, hi_t = t, hi_p = p;
    }
  for (const Vec3& d : dirs) {
    const double r = 1.0 / value(d);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  lo = std::min(lo, compass_refine(radius, lo_t, lo_p, 1.0, 0.02));
  hi = std::max(hi, compass_refine(radius, hi_t, hi_p, -1.0, 0.02));
  r_min_ = lo * (1 - 1e-6);
  r_max_ = hi * (1 + 1e-6);
}

SpherePoint inverse_gauss_map(const NormGauge& norm, const Vec3& n_in) {
  return inverse_gauss_map(norm, n_in, Vec3::Zero());
}

SpherePoint inverse_gauss_map(const NormGauge& norm, const Vec3& n_in, const Vec3& start) {
  const double len = n_in.norm();
  if (!std::isfinite(len) || std::abs(len - 1) > 1e-8)
    throw Error(ErrorCode::InvalidInput, "inverse_gauss_map: normal must be a euclidean unit vector");
  const Vec3 n = n_in / len;

  Vec3 x = start.isZero() ? Vec3(n / norm.value(n)) : start;
  GaugeJet j = norm.jet(x);
  double mu = j.grad.dot(n);
  auto residual = [&](const GaugeJet& jj, double m) {
    Eigen::Vector4d r;
    r.head<3>() = jj.grad - m * n;
    r[3] = jj.value - 1;
    return r;
  };
  Eigen::Vector4d r = residual(j, mu);
  constexpr int kMaxIterations = 50;
  for (int it = 0; it < kMaxIterations && r.norm() > 1e-16; ++it) {
    Eigen::Matrix4d jac = Eigen::Matrix4d::Zero();
    jac.topLeftCorner<3, 3>() = j.hess;
    jac.topRightCorner<3, 1>() = -n;
    jac.bottomLeftCorner<1, 3>() = j.grad.transpose();
    const Eigen::Vector4d step = jac.inverse() * (-r);
    if (!step.allFinite()) break;
    // Near the rounding floor a rejected full step ends the iteration;
    // halving only pays off far from the root.
    const int max_halvings = r.norm() > 1e-10 ? 40 : 1;
    double t = 1;
    bool accepted = false;
    for (int halving = 0; halving < max_halvings; ++halving, t *= 0.5) {
      const Vec3 xt = x + t * step.head<3>();
      const double mt = mu + t * step[3];
      const GaugeJet jt = norm.jet(xt);
      const Eigen::Vector4d rt = residual(jt, mt);
      if (rt.norm() < r.norm()) {
        x = xt;
        mu = mt;
        j = jt;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    // Quadratic convergence: one step from 1e-8 lands at the rounding floor.
    if (t == 1 && step.norm() < 1e-8) break;
  }
  SpherePoint s;
  s.x = x;
  s.n = j.grad.normalized();
  if ((s.n - n).norm() > 1e-12 || std::abs(j.value - 1) > 1e-12)
    throw Error(ErrorCode::NonConvergence,
                "inverse_gauss_map: Newton did not converge for " + norm.describe());
  return s;
}

double sphere_curvature(const NormGauge& norm, const Vec3& x) {
  const GaugeJet j = norm.jet(x);
  const Mat3& h = j.hess;
  // Cofactor matrix of the (symmetric) Hessian.
  Mat3 adj;
  adj(0, 0) = h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1);
  adj(0, 1) = h(1, 2) * h(2, 0) - h(1, 0) * h(2, 2);
  adj(0, 2) = h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0);
  adj(1, 1) = h(0, 0) * h(2, 2) - h(0, 2) * h(2, 0);
  adj(1, 2) = h(0, 1) * h(2, 0) - h(0, 0) * h(2, 1);
  adj(2, 2) = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
  adj(1, 0) = adj(0, 1);
  adj(2, 0) = adj(0, 2);
  adj(2, 1) = adj(1, 2);
  const double g2 = j.grad.squaredNorm();
  const double k = j.grad.dot(adj * j.grad) / (g2 * g2);
  if (!(k > 0))
    throw Error(ErrorCode::DegenerateCurvature,
                "unit sphere of " + norm.describe() + " has non-positive curvature");
  return k;
}

double sphere_area(const NormGauge& norm, double rel_tol) {
  double previous = 0;
  for (int level = 0; level <= 7; ++level) {
    const int nt = 4 << level, np = 8 << level;
    std::vector<double> terms;
    for (int chart = 0; chart < 2; ++chart) {
      for (const QuadNode& q : tensor_nodes(0, std::numbers::pi, nt, 0, 2 * std::numbers::pi, np)) {
        const DirectionJet dj = spherical_direction(chart, q.u, q.v);
        const double w = spherical_partition_weight(chart, dj.d);
        if (w == 0) continue;
        const GaugeJet gj = norm.jet(dj.d);
        const Vec3 x = dj.d / gj.value;
        const Mat3 dx = Mat3::Identity() / gj.value - dj.d * gj.grad.transpose() / (gj.value * gj.value);
        const double omega = (dx * dj.du).cross(dx * dj.dv).dot(x);
        terms.push_back(q.weight * w * omega);
      }
    }
    const double total = pairwise_sum(terms);
    if (level > 0 && std::abs(total - previous) <= rel_tol * std::abs(total)) return total;
    previous = total;
  }
  throw Error(ErrorCode::QuadratureNotConverged, "sphere_area did not converge for " + norm.describe());
}

SphereExtrema sphere_extrema(const NormGauge& norm, int resolution) {
  auto point = [&](double theta, double phi) {
    const Vec3 d = spherical_direction(0, theta, phi).d;
    return Vec3(d / norm.value(d));
  };
  auto eta_xi = [&](double t, double p) { return 1.0 / norm.gradient(point(t, p)).norm(); };
  auto curv = [&](double t, double p) { return sphere_curvature(norm, point(t, p)); };

  struct Track {
    double value, t, p;
  };
  Track e_lo{1e300, 0, 0}, e_hi{-1e300, 0, 0}, k_lo{1e300, 0, 0}, k_hi{-1e300, 0, 0};
  const int nt = resolution, np = 2 * resolution;
  for (int i = 0; i <= nt; ++i)
    for (int k = 0; k < np; ++k) {
      const double t = std::numbers::pi * i / nt, p = 2 * std::numbers::pi * k / np;
      const double e = eta_xi(t, p), c = curv(t, p);
      if (e < e_lo.value) e_lo = {e, t, p};
      if (e > e_hi.value) e_hi = {e, t, p};
      if (c < k_lo.value) k_lo = {c, t, p};
      if (c > k_hi.value) k_hi = {c, t, p};
    }
  const double step = std::numbers::pi / resolution;
  SphereExtrema out;
  out.min_eta_xi = std::min(e_lo.value, compass_refine(eta_xi, e_lo.t, e_lo.p, 1, step));
  out.max_eta_xi = std::max(e_hi.value, compass_refine(eta_xi, e_hi.t, e_hi.p, -1, step));
  out.min_curvature = std::min(k_lo.value, compass_refine(curv, k_lo.t, k_lo.p, 1, step));
  out.max_curvature = std::max(k_hi.value, compass_refine(curv, k_hi.t, k_hi.p, -1, step));
  return out;
}

}  // namespace minkcurv
