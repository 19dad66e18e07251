#include "minkcurv/plane2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "minkcurv/quadrature.hpp"

namespace minkcurv {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// Panels per full turn; a multiple of four keeps the axes on panel edges.
constexpr int kTurnPanels = 32;

}  // namespace

PlaneNorm::PlaneNorm(double p, double blend, double radius) : p_(p), blend_(blend), radius_(radius) {}

PlaneNorm PlaneNorm::euclidean(double radius) {
  if (!(radius > 0) || !std::isfinite(radius))
    throw Error(ErrorCode::InvalidInput, "plane norm radius must be positive");
  return PlaneNorm(2, 0, radius);
}

PlaneNorm PlaneNorm::lp(double p, double blend) {
  if (!(p > 1) || !std::isfinite(p)) throw Error(ErrorCode::InvalidInput, "plane lp norm needs 1 < p < inf");
  if (!(blend >= 0) || !std::isfinite(blend)) throw Error(ErrorCode::InvalidInput, "blend must be >= 0");
  if (p < 2) throw Error(ErrorCode::InvalidNorm, "plane lp norm with p < 2 is not twice differentiable");
  PlaneNorm n(p, blend, 1);
  n.validate();
  return n;
}

void PlaneNorm::jet(const Vec2& x, double& f, Vec2& g, Mat2& h) const {
  const double m = x.cwiseAbs().maxCoeff();
  f = 0;
  g.setZero();
  h.setZero();
  if (m == 0) return;
  if (p_ == 2 && blend_ == 0) {
    const double len = x.norm();
    const Vec2 e = x / len;
    f = len / radius_;
    g = e / radius_;
    h = (Mat2::Identity() - e * e.transpose()) / (radius_ * len);
    return;
  }
  double s = 0;
  for (int i = 0; i < 2; ++i) s += std::pow(std::abs(x[i]) / m, p_);
  const double n = m * std::pow(s, 1 / p_);
  Vec2 gn, diag;
  for (int i = 0; i < 2; ++i) {
    const double t = std::abs(x[i]) / n;
    gn[i] = (x[i] < 0 ? -1.0 : 1.0) * std::pow(t, p_ - 1);
    diag[i] = std::pow(t, p_ - 2);
  }
  const Mat2 hn = (Mat2(diag.asDiagonal()) - gn * gn.transpose()) * ((p_ - 1) / n);
  const double q = (n * n + blend_ * x.squaredNorm()) / (1 + blend_);
  f = std::sqrt(q);
  g = (n * gn + blend_ * x) / ((1 + blend_) * f);
  h = (gn * gn.transpose() + n * hn + blend_ * Mat2::Identity()) / ((1 + blend_) * f) - g * g.transpose() / f;
}

double PlaneNorm::value(const Vec2& x) const {
  double f;
  Vec2 g;
  Mat2 h;
  jet(x, f, g, h);
  return f;
}

Vec2 PlaneNorm::gradient(const Vec2& x) const {
  double f;
  Vec2 g;
  Mat2 h;
  jet(x, f, g, h);
  return g;
}

Mat2 PlaneNorm::hessian(const Vec2& x) const {
  double f;
  Vec2 g;
  Mat2 h;
  jet(x, f, g, h);
  return h;
}

std::string PlaneNorm::describe() const {
  std::ostringstream s;
  if (p_ == 2 && blend_ == 0) s << "euclidean(r=" << radius_ << ")";
  else s << "lp(p=" << p_ << ", blend=" << blend_ << ")";
  return s.str();
}

void PlaneNorm::validate() const {
  for (int k = 0; k < 720; ++k) {
    const double a = kTwoPi * k / 720;
    const Vec2 e(std::cos(a), std::sin(a));
    double f;
    Vec2 g;
    Mat2 h;
    jet(e, f, g, h);
    if (!(f > 0)) throw Error(ErrorCode::InvalidNorm, describe() + ": gauge is not positive");
    if (std::abs(value(-e) - f) > 1e-12 * f) throw Error(ErrorCode::InvalidNorm, describe() + ": not symmetric");
    if (std::abs(value(3.7 * e) - 3.7 * f) > 1e-10 * 3.7 * f)
      throw Error(ErrorCode::InvalidNorm, describe() + ": not positively homogeneous");
    const Mat2 h2 = 2 * (g * g.transpose() + f * h);
    Eigen::SelfAdjointEigenSolver<Mat2> eig(h2, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues()[0] > 1e-8 * eig.eigenvalues()[1]))
      throw Error(ErrorCode::InvalidNorm, describe() + ": unit circle is not strictly convex");
  }
}

CirclePoint unit_circle_point(const PlaneNorm& norm, double a) {
  const Vec2 e(std::cos(a), std::sin(a)), e1(-std::sin(a), std::cos(a));
  double F;
  Vec2 g;
  Mat2 H;
  norm.jet(e, F, g, H);
  const double Fp = g.dot(e1);
  const double Fpp = e1.dot(H * e1) - F;  // e'' = -e and grad F . e = F
  CirclePoint c;
  c.y = e / F;
  c.dy = e1 / F - e * (Fp / (F * F));
  c.ddy = -e / F - 2 * e1 * (Fp / (F * F)) - e * (Fpp / (F * F)) + e * (2 * Fp * Fp / (F * F * F));
  return c;
}

Vec2 support_point(const PlaneNorm& norm, const Vec2& w) {
  if (w.norm() == 0) return Vec2::Zero();
  // The objective has a single maximum per turn; bracket it from a scan.
  constexpr int kScan = 64;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < kScan; ++k) {
    const double v = unit_circle_point(norm, kTwoPi * k / kScan).y.dot(w);
    if (v > best_val) best_val = v, best = k;
  }
  const double step = kTwoPi / kScan;
  double lo = step * (best - 1), hi = step * (best + 1);
  auto d1 = [&](double a) { return unit_circle_point(norm, a).dy.dot(w); };
  // g' > 0 at lo, < 0 at hi for a strict maximum inside.
  double a = step * best;
  for (int it = 0; it < 100; ++it) {
    const CirclePoint c = unit_circle_point(norm, a);
    const double g1 = c.dy.dot(w), g2 = c.ddy.dot(w);
    if (g1 > 0) lo = a;
    else hi = a;
    double next = g2 < 0 ? a - g1 / g2 : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - a) < 1e-15 * (1 + std::abs(a)) || hi - lo < 1e-15) {
      return unit_circle_point(norm, next).y;
    }
    a = next;
  }
  if (std::abs(d1(a)) > 1e-9 * w.norm())
    throw Error(ErrorCode::NonConvergence, "support_point: angle search did not converge");
  return unit_circle_point(norm, a).y;
}

double antinorm(const PlaneNorm& norm, const Vec2& x) {
  if (x.norm() == 0) return 0;
  // det(x, y) = <y, J x> with J x = (-x2, x1).
  const Vec2 jx(-x.y(), x.x());
  return support_point(norm, jx).dot(jx);
}

namespace {

class Ellipse final : public PlaneCurve {
 public:
  Ellipse(double a, double b) : a_(a), b_(b) {}
  CurveJet jet(double t) const override {
    const double c = std::cos(t), s = std::sin(t);
    return {Vec2(a_ * c, b_ * s), Vec2(-a_ * s, b_ * c), Vec2(-a_ * c, -b_ * s)};
  }
  std::string describe() const override {
    std::ostringstream s;
    s << "ellipse(" << a_ << "," << b_ << ")";
    return s.str();
  }

 private:
  double a_, b_;
};

class NormCircle final : public PlaneCurve {
 public:
  NormCircle(PlaneNorm norm, double r) : norm_(std::move(norm)), r_(r) {}
  CurveJet jet(double t) const override {
    const CirclePoint c = unit_circle_point(norm_, t);
    return {r_ * c.y, r_ * c.dy, r_ * c.ddy};
  }
  std::string describe() const override {
    std::ostringstream s;
    s << r_ << "*S[" << norm_.describe() << "]";
    return s.str();
  }

 private:
  PlaneNorm norm_;
  double r_;
};

}  // namespace

PlaneCurvePtr make_ellipse(double a, double b) {
  if (!(a > 0) || !(b > 0)) throw Error(ErrorCode::InvalidInput, "ellipse axes must be positive");
  return std::make_shared<Ellipse>(a, b);
}

PlaneCurvePtr make_norm_circle(const PlaneNorm& norm, double r) {
  if (!(r > 0)) throw Error(ErrorCode::InvalidInput, "circle radius must be positive");
  return std::make_shared<NormCircle>(norm, r);
}

Vec2 birkhoff_normal_2d(const PlaneCurve& curve, const PlaneNorm& norm, double t) {
  const Vec2 d = curve.jet(t).d1;
  // Counterclockwise: the outward euclidean normal is d rotated by -90 degrees.
  return support_point(norm, Vec2(d.y(), -d.x()).normalized());
}

CircularCurvature circular_curvature_detail(const PlaneCurve& curve, const PlaneNorm& norm, double t) {
  const double h = 1e-4;
  auto eta_at = [&](double s) { return birkhoff_normal_2d(curve, norm, t + s); };
  const Vec2 eta = eta_at(0);
  // The built-in norms lose smoothness where S meets a coordinate axis; a
  // stencil straddling such a point degrades to first order, so switch to a
  // one-sided rule on the smooth side.
  auto crosses = [&](const Vec2& other) {
    for (int i = 0; i < 2; ++i)
      if (eta[i] * other[i] < 0 || std::abs(eta[i]) < 1e-14) return true;
    return false;
  };
  const bool minus = crosses(eta_at(-h)), plus = crosses(eta_at(h));
  std::function<Vec2(double)> diff;
  if (!minus && !plus) {
    diff = [&](double step) { return Vec2((eta_at(step) - eta_at(-step)) / (2 * step)); };
  } else {
    const double dir = minus ? 1.0 : -1.0;
    if (minus && plus && std::abs(eta[0]) > 1e-14 && std::abs(eta[1]) > 1e-14)
      throw Error(ErrorCode::NonConvergence, "circular curvature stencil straddles two kinks");
    diff = [&, dir](double step) {
      const double s = dir * step;
      return Vec2((-3 * eta + 4 * eta_at(s) - eta_at(2 * s)) / (2 * s));
    };
  }
  const Vec2 deta = (4 * diff(h / 2) - diff(h)) / 3;
  const Vec2 d = curve.jet(t).d1;
  CircularCurvature out;
  out.k_c = deta.dot(d) / d.squaredNorm();
  out.normalization_residual = (eta.x() * d.y() - eta.y() * d.x()) - antinorm(norm, d);
  return out;
}

double circular_curvature(const PlaneCurve& curve, const PlaneNorm& norm, double t) {
  return circular_curvature_detail(curve, norm, t).k_c;
}

double euclidean_curvature_2d(const PlaneCurve& curve, double t) {
  const CurveJet j = curve.jet(t);
  return (j.d1.x() * j.d2.y() - j.d1.y() * j.d2.x()) / std::pow(j.d1.norm(), 3);
}

double circular_curvature_ratio(const PlaneCurve& curve, const PlaneNorm& norm, double t) {
  const Vec2 eta = birkhoff_normal_2d(curve, norm, t);
  double F;
  Vec2 g;
  Mat2 H;
  norm.jet(eta, F, g, H);
  const Vec2 gp(-g.y(), g.x());
  const double kappa_s = gp.dot(H * gp) / std::pow(g.norm(), 3);
  return euclidean_curvature_2d(curve, t) / kappa_s;
}

double enclosed_area(const PlaneCurve& curve) {
  return 0.5 * integrate_1d(
                   [&](double t) {
                     const CurveJet j = curve.jet(t);
                     return j.p.x() * j.d1.y() - j.p.y() * j.d1.x();
                   },
                   0, kTwoPi, kTurnPanels);
}

ArcLength::ArcLength(std::function<double(double)> speed, double t0, double t1, int panels)
    : speed_(std::move(speed)) {
  if (panels < 1 || !(t1 > t0)) throw Error(ErrorCode::InvalidInput, "arc length table needs a range");
  knots_.resize(static_cast<std::size_t>(panels) + 1);
  cumulative_.assign(knots_.size(), 0);
  slopes_.resize(knots_.size());
  for (int k = 0; k <= panels; ++k) knots_[static_cast<std::size_t>(k)] = t0 + (t1 - t0) * k / panels;
  for (std::size_t k = 0; k < knots_.size(); ++k) {
    const double v = speed_(knots_[k]);
    if (!(v > 0)) throw Error(ErrorCode::InvalidInput, "arc length speed must be positive");
    slopes_[k] = 1 / v;  // dt/ds
    if (k > 0) cumulative_[k] = cumulative_[k - 1] + integrate_1d(speed_, knots_[k - 1], knots_[k], 1);
  }
}

double ArcLength::s_of_t(double t) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  const std::size_t k = it == knots_.begin() ? 0 : std::min<std::size_t>(it - knots_.begin() - 1, knots_.size() - 2);
  return cumulative_[k] + integrate_1d(speed_, knots_[k], t, 1);
}

double ArcLength::t_of_s(double s) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const std::size_t k =
      it == cumulative_.begin() ? 0 : std::min<std::size_t>(it - cumulative_.begin() - 1, cumulative_.size() - 2);
  // Fritsch-Carlson limited cubic Hermite for t(s) on [S_k, S_k+1].
  const double s0 = cumulative_[k], s1 = cumulative_[k + 1];
  const double t0 = knots_[k], t1 = knots_[k + 1];
  const double ds = s1 - s0, secant = (t1 - t0) / ds;
  double m0 = slopes_[k], m1 = slopes_[k + 1];
  const double a = m0 / secant, b = m1 / secant;
  if (a * a + b * b > 9) {
    const double tau = 3 / std::sqrt(a * a + b * b);
    m0 = tau * a * secant;
    m1 = tau * b * secant;
  }
  const double x = (s - s0) / ds;
  const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
  const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
  double t = h00 * t0 + h10 * ds * m0 + h01 * t1 + h11 * ds * m1;
  for (int i = 0; i < 6; ++i) {
    const double dt = (s_of_t(t) - s) / speed_(t);
    t -= dt;
    if (std::abs(dt) < 1e-15 * (1 + std::abs(t))) break;
  }
  return t;
}

namespace {

double speed_norm(const PlaneCurve& c, const PlaneNorm& n, double t) { return n.value(c.jet(t).d1); }
double speed_antinorm(const PlaneCurve& c, const PlaneNorm& n, double t) { return antinorm(n, c.jet(t).d1); }

// Integrates f over [0, 2 pi) doubling the panel count until two levels agree
// to tol relative.
template <class F>
double turn_integral(F&& f, const char* what, double tol = 1e-12) {
  double prev = integrate_1d(f, 0, kTwoPi, kTurnPanels);
  for (int level = 1; level <= 5; ++level) {
    const double cur = integrate_1d(f, 0, kTwoPi, kTurnPanels << level);
    if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw Error(ErrorCode::QuadratureNotConverged, std::string(what) + " did not converge");
}

}  // namespace

double minkowski_length(const PlaneCurve& curve, const PlaneNorm& norm) {
  return turn_integral([&](double t) { return speed_norm(curve, norm, t); }, "minkowski_length");
}

double antinorm_length(const PlaneCurve& curve, const PlaneNorm& norm) {
  return turn_integral([&](double t) { return speed_antinorm(curve, norm, t); }, "antinorm_length");
}

double unit_circle_length(const PlaneNorm& norm) {
  return turn_integral([&](double a) { return norm.value(unit_circle_point(norm, a).dy); }, "unit_circle_length");
}

double total_circular_curvature(const PlaneCurve& curve, const PlaneNorm& norm) {
  return turn_integral(
      [&](double t) { return circular_curvature(curve, norm, t) * speed_norm(curve, norm, t); },
      "total_circular_curvature", 1e-10);
}

AreaBound area_curvature_bound(const PlaneCurve& curve, const PlaneNorm& norm) {
  AreaBound out;
  out.twice_area = 2 * enclosed_area(curve);
  // Integrate in antinorm arc length: panels in s_a whose edges are the
  // images of the t-panel edges, nodes mapped back through the table.
  const ArcLength table([&](double t) { return speed_antinorm(curve, norm, t); }, 0, kTwoPi, 4 * kTurnPanels);
  const GaussRule& rule = gauss_legendre(kPanelOrder);
  const auto& S = table.cumulative();
  std::vector<double> parts;
  for (std::size_t k = 0; k + 1 < S.size(); ++k) {
    const double mid = 0.5 * (S[k] + S[k + 1]), half = 0.5 * (S[k + 1] - S[k]);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = table.t_of_s(mid + half * rule.nodes[i]);
      const double kc = circular_curvature(curve, norm, t);
      if (!(kc > 0)) throw Error(ErrorCode::NonPositiveCurvature, "circular curvature is not positive");
      parts.push_back(half * rule.weights[i] / kc);
    }
  }
  out.integral = pairwise_sum(parts);
  out.holds = out.twice_area <= out.integral + 1e-6;
  return out;
}

std::vector<CurveSample> sample_curve(const PlaneCurve& curve, const PlaneNorm& norm, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "need at least one sample");
  const ArcLength s_tab([&](double t) { return speed_norm(curve, norm, t); }, 0, kTwoPi, 4 * kTurnPanels);
  const ArcLength sa_tab([&](double t) { return speed_antinorm(curve, norm, t); }, 0, kTwoPi, 4 * kTurnPanels);
  std::vector<CurveSample> out;
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * i / n;
    out.push_back({t, s_tab.s_of_t(t), sa_tab.s_of_t(t), circular_curvature(curve, norm, t)});
  }
  return out;
}

}  // namespace minkcurv
