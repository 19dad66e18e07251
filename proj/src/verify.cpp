#include "minkcurv/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include "minkcurv/birkhoff.hpp"
#include "minkcurv/geodesic_probe.hpp"
#include "minkcurv/measures.hpp"
#include "minkcurv/offsets_tubes.hpp"
#include "minkcurv/parallel.hpp"

namespace minkcurv {

using nlohmann::json;

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* to_string(CheckKind k) {
  switch (k) {
    case CheckKind::Equal: return "equal";
    case CheckKind::Relative: return "relative";
    case CheckKind::Absolute: return "absolute";
    case CheckKind::AtLeast: return "at_least";
    case CheckKind::AtMost: return "at_most";
    case CheckKind::Failed: return "failed";
  }
  return "?";
}

bool evaluate(CheckKind kind, double lhs, double rhs, double tol) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) return false;
  switch (kind) {
    case CheckKind::Equal: return std::abs(lhs - rhs) <= tol * std::max(1.0, std::abs(rhs));
    case CheckKind::Relative: return std::abs(lhs - rhs) <= tol * std::abs(rhs);
    case CheckKind::Absolute: return std::abs(lhs - rhs) <= tol;
    case CheckKind::AtLeast: return lhs >= rhs - tol;
    case CheckKind::AtMost: return lhs <= rhs + tol;
    case CheckKind::Failed: return false;
  }
  return false;
}

CheckResult make_check(std::string id, std::string surface, std::string norm, CheckKind kind, double lhs,
                       double rhs, double tol, std::string oracle) {
  CheckResult c;
  c.id = std::move(id);
  c.surface = std::move(surface);
  c.norm = std::move(norm);
  c.kind = kind;
  c.lhs = lhs;
  c.rhs = rhs;
  c.tol = tol;
  c.oracle = std::move(oracle);
  c.pass = evaluate(kind, lhs, rhs, tol);
  return c;
}

bool VerificationReport::all_pass() const { return failures() == 0; }

std::size_t VerificationReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.pass ? 0 : 1;
  return n;
}

namespace {

// NaN and inf are not valid JSON numbers.
json number_or_string(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

}  // namespace

json VerificationReport::body() const {
  json j;
  j["seed"] = seed;
  j["config"] = config;
  j["checks"] = json::array();
  for (const auto& c : checks) {
    json e{{"id", c.id},         {"surface", c.surface},          {"norm", c.norm},
           {"kind", to_string(c.kind)}, {"lhs", number_or_string(c.lhs)}, {"rhs", number_or_string(c.rhs)},
           {"tol", c.tol},       {"pass", c.pass},                {"oracle", c.oracle}};
    if (!c.note.empty()) e["note"] = c.note;
    j["checks"].push_back(std::move(e));
  }
  j["summary"] = {{"total", checks.size()}, {"failed", failures()}, {"passed", checks.size() - failures()}};
  return j;
}

std::string VerificationReport::hash() const {
  const std::string text = body().dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json VerificationReport::to_json() const {
  json j = body();
  j["report_hash"] = hash();
  json t;
  t["wall_seconds"] = wall_seconds;
  t["groups"] = json::array();
  for (const auto& g : timing) t["groups"].push_back({{"surface", g.surface}, {"norm", g.norm}, {"seconds", g.seconds}});
  j["timing"] = t;
  return j;
}

std::string VerificationReport::table() const {
  std::ostringstream s;
  char line[512];
  std::snprintf(line, sizeof line, "%-4s  %-34s %-22s %-34s %-9s %16s %16s %9s\n", "", "check", "surface", "norm",
                "kind", "lhs", "rhs", "tol");
  s << line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-4s  %-34s %-22s %-34s %-9s %16.10g %16.10g %9.2g\n", c.pass ? "PASS" : "FAIL",
                  c.id.c_str(), c.surface.c_str(), c.norm.c_str(), to_string(c.kind), c.lhs, c.rhs, c.tol);
    s << line;
    if (!c.note.empty() && !c.pass) s << "      " << c.note << "\n";
  }
  s << checks.size() - failures() << "/" << checks.size() << " checks passed\n";
  return s.str();
}

std::vector<SurfaceSpec> default_verify_surfaces() {
  SurfaceSpec ell;  // (1, 1.5, 2)
  SurfaceSpec torus;
  torus.kind = "torus";
  SurfaceSpec sphere;
  sphere.kind = "minkowski_sphere";
  sphere.r = 2;
  return {ell, torus, sphere};
}

std::vector<NormSpec> default_verify_norms() {
  NormSpec e, l3, l4, se;
  l3.kind = l4.kind = "lp";
  l3.p = 3;
  l4.p = 4;
  se.kind = "superellipsoid";
  se.a = 1, se.b = 1.2, se.c = 0.8, se.p = 4;
  return {e, l3, l4, se};
}

std::vector<PlaneNormSpec> default_verify_plane_norms() {
  PlaneNormSpec e, l3, l4;
  e.kind = "euclidean";
  l3.p = 3;
  l4.p = 4;
  return {e, l3, l4};
}

namespace {

struct NormCache {
  double area = 0;
  SphereExtrema extrema;
};

double enclosed_volume(const SurfaceSpec& s, double sphere_area_value) {
  if (s.kind == "ellipsoid") return 4 * kPi * s.a * s.b * s.c / 3;
  if (s.kind == "torus") return 2 * kPi * kPi * s.R * s.r * s.r;
  // r dB: the cone over dB with apex 0 has volume lambda(dB) / 3.
  return s.r * s.r * s.r * sphere_area_value / 3;
}

class GroupRunner {
 public:
  GroupRunner(const RunConfig& cfg, const SurfaceSpec& ss, const NormSpec& ns, const NormCache& nc,
              std::vector<CheckResult>& out)
      : cfg_(cfg), ss_(ss), ns_(ns), nc_(nc), out_(out), sl_(ss.label()), nl_(ns.label()) {}

  void run() {
    norm_ = ns_.build();
    surface_ = ss_.build(norm_);
    points_ = cfg_.points.empty() ? default_points(*surface_) : cfg_.points;
    guarded("pointwise", [&] { pointwise(); });
    if (surface_->closed()) {
      guarded("integrals", [&] { integrals(); });
      if (have_measures_) guarded("tubes", [&] { tubes(); });
    }
    guarded("geodesic", [&] { geodesic(); });
  }

 private:
  void add(std::string id, CheckKind kind, double lhs, double rhs, double tol, std::string oracle) {
    out_.push_back(make_check(std::move(id), sl_, nl_, kind, lhs, rhs, tol, std::move(oracle)));
  }

  template <class F>
  void guarded(const char* stage, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      CheckResult c = make_check(std::string("error-") + stage, sl_, nl_, CheckKind::Failed, 0, 0, 0, "none");
      c.note = e.what();
      out_.push_back(c);
    }
  }

  void pointwise() {
    // Oracle equivalence and sign agreement on a midpoint grid of chart 0.
    const SurfaceChart& ch = surface_->chart(0);
    const ChartDomain& d = ch.domain();
    const int n = std::min(cfg_.grid, 20);
    std::vector<double> rel(static_cast<std::size_t>(n * n)), sign_bad(rel.size());
    parallel_for(rel.size(), [&](std::size_t idx) {
      const double u = d.u0 + (static_cast<double>(idx / n) + 0.5) * (d.u1 - d.u0) / n;
      const double v = d.v0 + (static_cast<double>(idx % n) + 0.5) * (d.v1 - d.v0) / n;
      const CurvatureSample s = curvature_sample(ch, norm_, u, v);
      const double ratio = curvature_ratio(ch, norm_, u, v);
      rel[idx] = std::abs(s.K - ratio) / std::max(std::abs(ratio), 1e-3);
      const double km = euclidean_geometry(ch, u, v).K;
      sign_bad[idx] = (std::abs(km) > 1e-8 && (s.K > 0) != (km > 0)) ? 1 : 0;
    });
    double worst = 0, bad = 0;
    for (std::size_t i = 0; i < rel.size(); ++i) worst = std::max(worst, rel[i]), bad += sign_bad[i];
    add("curvature-ratio-oracle", CheckKind::AtMost, worst, 0, 1e-5, "euclidean curvatures of M and dB");
    add("curvature-sign", CheckKind::AtMost, bad, 0, 0, "sign of the euclidean curvature");

    const PointSpec& p = points_.front();
    const SurfaceChart& pc = surface_->chart(p.chart);
    const CurvatureSample s = curvature_sample(pc, norm_, p.u, p.v);
    for (double c : {0.5, 3.0}) {
      const SurfacePtr scaled = make_homothety(surface_, c);
      const CurvatureSample t = curvature_sample(scaled->chart(p.chart), norm_, p.u, p.v);
      add("homothety-K(c=" + fmt(c) + ")", CheckKind::Relative, t.K * c * c, s.K, 1e-7, "curvature at p");
      add("homothety-H(c=" + fmt(c) + ")", CheckKind::Relative, t.H * c, s.H, 1e-7, "curvature at p");
    }
    for (std::size_t i = 0; i < std::min<std::size_t>(2, points_.size()); ++i) {
      const PointSpec& q = points_[i];
      for (double c : cfg_.offsets) {
        const ParallelCheck pcheck = check_parallel_curvature(surface_->chart_ptr(q.chart), norm_, q.u, q.v, c);
        add("parallel-curvature(p" + std::to_string(i) + ",c=" + fmt(c) + ")", CheckKind::Relative,
            pcheck.recomputed, pcheck.predicted, 1e-5, "offset formula");
      }
    }
    if (ns_.kind == "euclidean" && ns_.r == 1) {
      for (std::size_t i = 0; i < points_.size(); ++i) {
        const PointSpec& q = points_[i];
        const CurvatureSample t = curvature_sample(surface_->chart(q.chart), norm_, q.u, q.v);
        const EuclideanGeometry g = euclidean_geometry(surface_->chart(q.chart), q.u, q.v);
        add("euclidean-reduction-K(p" + std::to_string(i) + ")", CheckKind::Equal, t.K, g.K, 1e-6,
            "fundamental forms");
        add("euclidean-reduction-H(p" + std::to_string(i) + ")", CheckKind::Equal, t.H, g.H, 1e-6,
            "fundamental forms");
      }
    }
    if (ss_.kind == "minkowski_sphere") {
      for (std::size_t i = 0; i < points_.size(); ++i) {
        const PointSpec& q = points_[i];
        const CurvatureSample t = curvature_sample(surface_->chart(q.chart), norm_, q.u, q.v);
        add("sphere-fixed-point-K(p" + std::to_string(i) + ")", CheckKind::Relative, t.K * ss_.r * ss_.r, 1, 1e-7,
            "d eta = id / r");
        add("sphere-fixed-point-H(p" + std::to_string(i) + ")", CheckKind::Relative, t.H * ss_.r, 1, 1e-7,
            "d eta = id / r");
      }
    }
  }

  void integrals() {
    m_ = integrate_surface(*surface_, norm_);
    have_measures_ = true;
    const double lb = nc_.area;
    const bool own_sphere = ss_.kind == "minkowski_sphere";
    if (ss_.convex())
      add("total-curvature", CheckKind::Relative, m_.int_K, lb, 1e-4, "unit sphere area");
    add("willmore", CheckKind::AtLeast, m_.int_H2, lb, 1e-6, "unit sphere area");
    if (own_sphere) add("willmore-equality", CheckKind::Relative, m_.int_H2, lb, 1e-6, "unit sphere area");
    if (m_.min_H > 0) {
      add("inverse-mean-curvature-bound", CheckKind::AtLeast, m_.int_invH, 3 * m_.flux_volume, 1e-6, "flux volume");
      if (own_sphere)
        add("inverse-mean-curvature-equality", CheckKind::Relative, m_.int_invH, 3 * m_.flux_volume, 1e-5,
            "flux volume");
    }
    add("flux-volume", CheckKind::Relative, m_.flux_volume, enclosed_volume(ss_, lb), 1e-5, "closed-form volume");
    add("alexandrov-identity", CheckKind::Absolute, m_.alexandrov, 0, 1e-5 * m_.lambda_M, "zero");
    add("omega-density", CheckKind::AtMost, m_.max_omega_mismatch, 0, 1e-10, "<eta,xi> omega_e");
    const HuberBounds hb = huber_bounds(m_, nc_.extrema);
    const double slack = 1e-9 * std::max(1.0, std::abs(hb.value));
    add("huber-lower", CheckKind::AtLeast, hb.value, hb.lower, slack, "sphere extrema");
    add("huber-upper", CheckKind::AtMost, hb.value, hb.upper, slack, "sphere extrema");
    if (ns_.kind == "euclidean" && ns_.r == 1) {
      add("huber-equality-lower", CheckKind::Equal, hb.lower, hb.value, 1e-9, "euclidean collapse");
      add("huber-equality-upper", CheckKind::Equal, hb.upper, hb.value, 1e-9, "euclidean collapse");
    }
    if (ss_.kind != "torus") {
      // Constant mean curvature singles out the Minkowski spheres.
      if (own_sphere)
        add("constant-mean-curvature", CheckKind::AtMost, m_.stdev_H, 0, 1e-6 * m_.mean_H, "node statistics");
      else
        add("non-constant-mean-curvature", CheckKind::AtLeast, m_.stdev_H, 1e-3 * m_.mean_H, 0, "node statistics");
    }
  }

  void tubes() {
    const double safe = max_safe_offset(m_);
    const double eps = std::min(cfg_.epsilon, 0.8 * safe);
    std::vector<double> thresholds{eps};
    if (ss_.convex())
      for (double r : cfg_.rho) thresholds.push_back(r);
    const TubeSampling ts = sample_tubes(*surface_, norm_, thresholds, cfg_.verify_samples, cfg_.seed);
    const McEstimate mc = ts.tube(0);
    add("weyl-tube(eps=" + fmt(eps) + ")", CheckKind::Absolute, tube_volume_weyl(m_, eps), mc.estimate,
        3 * mc.std_error, "monte carlo, 3 sigma");
    if (ss_.convex()) {
      const SteinerCoefficients sc = steiner_polynomial(m_);
      add("steiner-area-coefficient", CheckKind::Relative, sc.c1, m_.lambda_M, 1e-12, "minkowski area");
      for (std::size_t i = 1; i < thresholds.size(); ++i) {
        const McEstimate ob = ts.outer_body(i);
        add("steiner-volume(rho=" + fmt(thresholds[i]) + ")", CheckKind::Absolute, sc(thresholds[i]), ob.estimate,
            3 * ob.std_error, "monte carlo, 3 sigma");
      }
    }
  }

  void geodesic() {
    const PointSpec& p = points_.front();
    const SurfaceChart& ch = surface_->chart(p.chart);
    const double km = euclidean_geometry(ch, p.u, p.v).K;
    if (std::abs(km) <= 0.05) return;
    const CurvatureSample s = curvature_sample(ch, norm_, p.u, p.v);
    const BdpEstimate b = bdp_estimate(*surface_, norm_, {p.chart, p.u, p.v}, cfg_.radii);
    add("bdp-circumference", CheckKind::Relative, b.K_circumference, s.K, 1e-2, "det of the shape matrix");
    add("bdp-area", CheckKind::Relative, b.K_area, s.K, 1e-2, "det of the shape matrix");
    add("bdp-deficit-slope", CheckKind::Absolute, b.slope_M, 3, 0.1, "cubic deficit");
    const AreaRatioEstimate ar = area_ratio_limit(ch, norm_, p.u, p.v);
    add("area-ratio-limit", CheckKind::Relative, ar.extrapolated, s.K, 1e-2, "det of the shape matrix");
  }

  static std::string fmt(double x) {
    std::ostringstream s;
    s << x;
    return s.str();
  }

  const RunConfig& cfg_;
  const SurfaceSpec& ss_;
  const NormSpec& ns_;
  const NormCache& nc_;
  std::vector<CheckResult>& out_;
  std::string sl_, nl_;
  NormGauge norm_ = NormGauge::euclidean();
  SurfacePtr surface_;
  std::vector<PointSpec> points_;
  SurfaceMeasures m_;
  bool have_measures_ = false;
};

void plane_checks(const PlaneNormSpec& spec, std::vector<CheckResult>& out) {
  const std::string nl = spec.label();
  auto add = [&](std::string id, const std::string& curve, CheckKind kind, double lhs, double rhs, double tol,
                 std::string oracle) {
    out.push_back(make_check(std::move(id), curve, nl, kind, lhs, rhs, tol, std::move(oracle)));
  };
  try {
    const PlaneNorm n = spec.build();
    const PlaneCurvePtr ellipse = make_ellipse(2, 1);
    const PlaneCurvePtr circle = make_norm_circle(n, 1.5);
    const double ls = unit_circle_length(n);
    add("total-circular-curvature", ellipse->describe(), CheckKind::Relative, total_circular_curvature(*ellipse, n),
        ls, 1e-5, "length of S");
    add("total-circular-curvature", "1.5*S", CheckKind::Relative, total_circular_curvature(*circle, n), ls, 1e-5,
        "length of S");
    const AreaBound be = area_curvature_bound(*ellipse, n);
    add("antinorm-area-bound", ellipse->describe(), CheckKind::AtLeast, be.integral, be.twice_area, 1e-6,
        "twice the enclosed area");
    const AreaBound bc = area_curvature_bound(*circle, n);
    add("antinorm-area-equality", "1.5*S", CheckKind::Relative, bc.integral, bc.twice_area, 1e-5,
        "twice the enclosed area");
    double worst = 0;
    for (int i = 0; i < 64; ++i) {
      const double t = 2 * kPi * (i + 0.37) / 64;
      const double r = circular_curvature_ratio(*ellipse, n, t);
      worst = std::max(worst, std::abs(circular_curvature(*ellipse, n, t) - r) / r);
    }
    add("circular-curvature-oracle", ellipse->describe(), CheckKind::AtMost, worst, 0, 1e-5,
        "ratio of euclidean curvatures");
  } catch (const std::exception& e) {
    CheckResult c = make_check("error-plane", "plane", nl, CheckKind::Failed, 0, 0, 0, "none");
    c.note = e.what();
    out.push_back(c);
  }
}

}  // namespace

VerificationReport run_verification(const RunConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  VerificationReport rep;
  rep.seed = cfg.seed;
  rep.config = to_json(cfg);
  const auto surfaces = cfg.surfaces.empty() ? default_verify_surfaces() : cfg.surfaces;
  const auto norms = cfg.norms.empty() ? default_verify_norms() : cfg.norms;
  const auto plane_norms = cfg.plane_norms.empty() ? default_verify_plane_norms() : cfg.plane_norms;

  for (const NormSpec& ns : norms) {
    NormCache nc;
    const auto tn = Clock::now();
    try {
      const NormGauge norm = ns.build();
      nc.area = sphere_area(norm);
      nc.extrema = sphere_extrema(norm);
      // Cone identity: lambda(dB) = 3 vol(B), volume by Monte Carlo.
      const TubeSampling ts = sample_tubes(*make_minkowski_sphere(norm, 1), norm, {0.01}, cfg.verify_samples, cfg.seed);
      const McEstimate vol = ts.enclosed();
      rep.checks.push_back(make_check("unit-sphere-area-cone", "dB", ns.label(), CheckKind::Absolute, nc.area,
                                      3 * vol.estimate, 9 * vol.std_error, "monte carlo volume, 3 sigma"));
    } catch (const std::exception& e) {
      CheckResult c = make_check("error-norm", "dB", ns.label(), CheckKind::Failed, 0, 0, 0, "none");
      c.note = e.what();
      rep.checks.push_back(c);
      continue;
    }
    rep.timing.push_back({"dB", ns.label(), std::chrono::duration<double>(Clock::now() - tn).count()});
    for (const SurfaceSpec& ss : surfaces) {
      const auto tg = Clock::now();
      GroupRunner(cfg, ss, ns, nc, rep.checks).run();
      rep.timing.push_back({ss.label(), ns.label(), std::chrono::duration<double>(Clock::now() - tg).count()});
    }
  }
  for (const PlaneNormSpec& pn : plane_norms) {
    const auto tp = Clock::now();
    plane_checks(pn, rep.checks);
    rep.timing.push_back({"plane", pn.label(), std::chrono::duration<double>(Clock::now() - tp).count()});
  }
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return rep;
}

}  // namespace minkcurv
