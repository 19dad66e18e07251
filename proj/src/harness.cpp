#include "minkcurv/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include <json.hpp>

#include "minkcurv/birkhoff.hpp"
#include "minkcurv/config.hpp"
#include "minkcurv/geodesic_probe.hpp"
#include "minkcurv/measures.hpp"
#include "minkcurv/offsets_tubes.hpp"
#include "minkcurv/parallel.hpp"
#include "minkcurv/plane2d.hpp"
#include "minkcurv/verify.hpp"

namespace minkcurv {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json num(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

struct Context {
  RunConfig cfg;
  fs::path out_dir;
  std::ostream& out;

  void write(const std::string& name, const std::string& text) const {
    std::ofstream f(out_dir / name, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + (out_dir / name).string());
    f << text;
  }
  void write_json(const std::string& name, const json& j) const {
    write(name, j.dump(2) + "\n");
    out << j.dump(2) << "\n";
  }
};

json describe_norm(const NormGauge& n) {
  json j{{"describe", n.describe()}, {"r_min", n.r_min()}, {"r_max", n.r_max()}};
  j["warnings"] = n.warnings();
  return j;
}

int cmd_norm_info(const Context& c) {
  const NormGauge n = c.cfg.norm.build();
  const double area = sphere_area(n);
  const SphereExtrema ext = sphere_extrema(n);
  json j = describe_norm(n);
  j["norm"] = c.cfg.norm.to_json();
  j["lambda_dB"] = area;
  j["ball_volume"] = area / 3;
  j["sphere_curvature"] = {ext.min_curvature, ext.max_curvature};
  j["eta_xi"] = {ext.min_eta_xi, ext.max_eta_xi};
  json axes = json::array();
  for (int i = 0; i < 3; ++i) {
    const SpherePoint s = inverse_gauss_map(n, Vec3::Unit(i));
    axes.push_back({{"n", {i == 0, i == 1, i == 2}}, {"x", {s.x.x(), s.x.y(), s.x.z()}},
                    {"curvature", sphere_curvature(n, s)}});
  }
  j["axis_points"] = axes;
  c.write_json("norm_info.json", j);
  return kExitOk;
}

int cmd_curvature(const Context& c) {
  const NormGauge n = c.cfg.norm.build();
  const SurfacePtr s = c.cfg.surface.build(n);
  const SurfaceChart& ch = s->chart(0);
  const ChartDomain& d = ch.domain();
  const int g = c.cfg.grid;
  struct Row {
    double u, v;
    CurvatureSample s;
    double ratio;
  };
  std::vector<Row> rows(static_cast<std::size_t>(g) * g);
  parallel_for(rows.size(), [&](std::size_t idx) {
    const double u = d.u0 + (static_cast<double>(idx / g) + 0.5) * (d.u1 - d.u0) / g;
    const double v = d.v0 + (static_cast<double>(idx % g) + 0.5) * (d.v1 - d.v0) / g;
    rows[idx] = {u, v, curvature_sample(ch, n, u, v), curvature_ratio(ch, n, u, v)};
  });
  std::string csv = "u,v,K,H,lambda1,lambda2,K_ratio,residual\n";
  char line[512];
  for (const Row& r : rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.6g\n", r.u, r.v, r.s.K, r.s.H,
                  r.s.lambda1, r.s.lambda2, r.ratio, r.s.residual);
    csv += line;
  }
  c.write("curvature.csv", csv);
  c.out << "wrote " << rows.size() << " rows to " << (c.out_dir / "curvature.csv").string() << "\n";
  return kExitOk;
}

int cmd_integrate(const Context& c) {
  const NormGauge n = c.cfg.norm.build();
  const SurfacePtr s = c.cfg.surface.build(n);
  const SurfaceMeasures m = integrate_surface(*s, n);
  const HuberBounds hb = huber_bounds(m, sphere_extrema(n));
  json j;
  j["surface"] = c.cfg.surface.to_json();
  j["norm"] = c.cfg.norm.to_json();
  j["lambda_M"] = m.lambda_M;
  j["int_K"] = m.int_K;
  j["lambda_dB"] = sphere_area(n);
  j["willmore"] = m.int_H2;
  j["flux_volume"] = m.flux_volume;
  j["alexandrov_residual"] = m.alexandrov;
  j["huber"] = {hb.lower, hb.value, hb.upper};
  j["huber_ordered"] = hb.ordered;
  j["int_H"] = m.int_H;
  j["int_invH"] = num(m.int_invH);
  j["int_abs_K"] = m.int_abs_K;
  j["euclidean_area"] = m.euclidean_area;
  j["max_safe_offset"] = num(max_safe_offset(m));
  j["mean_H"] = m.mean_H;
  j["stdev_H"] = m.stdev_H;
  j["level"] = m.level;
  j["nodes"] = m.nodes;
  j["last_change"] = m.last_change;
  c.write_json("integrate.json", j);
  return kExitOk;
}

json mc_json(const McEstimate& e) {
  return {{"estimate", e.estimate}, {"std_error", e.std_error}, {"hits", e.hits}, {"samples", e.samples}};
}

int cmd_tube(const Context& c) {
  const NormGauge n = c.cfg.norm.build();
  const SurfacePtr s = c.cfg.surface.build(n);
  const SurfaceMeasures m = integrate_surface(*s, n);
  const double eps = c.cfg.epsilon;
  const double safe = max_safe_offset(m);
  // The polynomial is evaluated even past the safe offset, where it no longer
  // matches the tube volume; "safe" tells the two cases apart.
  const double poly = 2 * eps * m.lambda_M + 2 * eps * eps * eps / 3 * m.int_K;
  const TubeSampling ts = sample_tubes(*s, n, {eps}, c.cfg.samples, c.cfg.seed);
  const McEstimate mc = ts.tube(0);
  json j;
  j["surface"] = c.cfg.surface.to_json();
  j["norm"] = c.cfg.norm.to_json();
  j["epsilon"] = eps;
  j["max_safe_offset"] = num(safe);
  j["safe"] = eps < safe;
  j["weyl"] = poly;
  j["monte_carlo"] = mc_json(mc);
  j["inner_shell"] = mc_json(ts.inner_shell(0));
  j["outer_shell"] = mc_json(ts.outer_shell(0));
  j["z_score"] = mc.std_error > 0 ? (poly - mc.estimate) / mc.std_error : 0.0;
  j["seed"] = c.cfg.seed;
  c.write_json("tube.json", j);
  return kExitOk;
}

int cmd_steiner(const Context& c) {
  const NormGauge n = c.cfg.norm.build();
  const SurfacePtr s = c.cfg.surface.build(n);
  const SurfaceMeasures m = integrate_surface(*s, n);
  const SteinerCoefficients sc = steiner_polynomial(m);
  const TubeSampling ts = sample_tubes(*s, n, c.cfg.rho, c.cfg.samples, c.cfg.seed);
  json j;
  j["surface"] = c.cfg.surface.to_json();
  j["norm"] = c.cfg.norm.to_json();
  j["coefficients"] = {sc.c0, sc.c1, sc.c2, sc.c3};
  j["lambda_M"] = m.lambda_M;
  j["rows"] = json::array();
  for (std::size_t i = 0; i < c.cfg.rho.size(); ++i) {
    const McEstimate ob = ts.outer_body(i);
    j["rows"].push_back({{"rho", c.cfg.rho[i]},
                         {"polynomial", sc(c.cfg.rho[i])},
                         {"monte_carlo", mc_json(ob)},
                         {"z_score", ob.std_error > 0 ? (sc(c.cfg.rho[i]) - ob.estimate) / ob.std_error : 0.0}});
  }
  j["seed"] = c.cfg.seed;
  c.write_json("steiner.json", j);
  return kExitOk;
}

std::vector<PointSpec> points_for(const Context& c, const Surface& s) {
  return c.cfg.points.empty() ? default_points(s) : c.cfg.points;
}

int cmd_parallel(const Context& c) {
  const NormGauge n = c.cfg.norm.build();
  const SurfacePtr s = c.cfg.surface.build(n);
  json j;
  j["surface"] = c.cfg.surface.to_json();
  j["norm"] = c.cfg.norm.to_json();
  j["rows"] = json::array();
  for (const PointSpec& p : points_for(c, *s)) {
    for (double off : c.cfg.offsets) {
      const ParallelCheck pc = check_parallel_curvature(s->chart_ptr(p.chart), n, p.u, p.v, off);
      j["rows"].push_back({{"chart", p.chart}, {"u", p.u}, {"v", p.v}, {"c", off}, {"K", pc.K}, {"H", pc.H},
                           {"predicted", pc.predicted}, {"recomputed", pc.recomputed}, {"rel_error", pc.rel_error}});
    }
  }
  c.write_json("parallel.json", j);
  return kExitOk;
}

int cmd_bdp(const Context& c) {
  const NormGauge n = c.cfg.norm.build();
  const SurfacePtr s = c.cfg.surface.build(n);
  json j;
  j["surface"] = c.cfg.surface.to_json();
  j["norm"] = c.cfg.norm.to_json();
  j["points"] = json::array();
  for (const PointSpec& p : points_for(c, *s)) {
    const CurvatureSample cs = curvature_sample(s->chart(p.chart), n, p.u, p.v);
    const BdpEstimate b = bdp_estimate(*s, n, {p.chart, p.u, p.v}, c.cfg.radii);
    const AreaRatioEstimate ar = area_ratio_limit(s->chart(p.chart), n, p.u, p.v);
    json rows = json::array();
    for (const BdpRadius& r : b.radii)
      rows.push_back({{"r", r.r}, {"C_M", r.C_M}, {"A_M", r.A_M}, {"C_dB", r.C_B}, {"A_dB", r.A_B},
                      {"ratio_circumference", r.ratio_circumference}, {"ratio_area", r.ratio_area}});
    j["points"].push_back({{"chart", p.chart}, {"u", p.u}, {"v", p.v}, {"K", cs.K},
                           {"K_M", euclidean_geometry(s->chart(p.chart), p.u, p.v).K},
                           {"radii", rows}, {"K_circumference", b.K_circumference}, {"K_area", b.K_area},
                           {"slope_M", b.slope_M}, {"slope_dB", b.slope_B},
                           {"area_ratio", {{"radii", ar.radii}, {"ratios", ar.ratios}, {"extrapolated", ar.extrapolated}}},
                           {"max_speed_error", b.max_speed_error}});
  }
  c.write_json("bdp.json", j);
  return kExitOk;
}

int cmd_plane2d(const Context& c) {
  const PlaneNorm n = c.cfg.plane_norm.build();
  const PlaneCurvePtr curve = c.cfg.curve.build(n);
  const auto rows = sample_curve(*curve, n, c.cfg.grid * 4);
  std::string csv = "t,s,s_a,k_c\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", r.t, r.s, r.s_a, r.k_c);
    csv += line;
  }
  c.write("plane2d.csv", csv);
  const double ls = unit_circle_length(n);
  const double total = total_circular_curvature(*curve, n);
  const AreaBound b = area_curvature_bound(*curve, n);
  double worst = 0;
  for (const auto& r : rows) {
    const double ratio = circular_curvature_ratio(*curve, n, r.t);
    worst = std::max(worst, std::abs(r.k_c - ratio) / ratio);
  }
  json j;
  j["plane_norm"] = c.cfg.plane_norm.to_json();
  j["curve"] = c.cfg.curve.to_json();
  j["total_circular_curvature"] = {{"lhs", total}, {"length_S", ls}, {"rel_error", std::abs(total - ls) / ls}};
  j["area_bound"] = {{"twice_area", b.twice_area}, {"integral", b.integral}, {"holds", b.holds}};
  j["curvature_ratio_oracle"] = {{"max_rel_error", worst}, {"samples", rows.size()}};
  j["length"] = minkowski_length(*curve, n);
  j["antinorm_length"] = antinorm_length(*curve, n);
  c.write_json("plane2d.json", j);
  return kExitOk;
}

int cmd_verify(const Context& c) {
  const VerificationReport rep = run_verification(c.cfg);
  c.write("report.json", rep.to_json().dump(2) + "\n");
  const std::string table = rep.table();
  c.write("report.txt", table);
  c.out << table << "report_hash " << rep.hash() << "\n";
  return rep.all_pass() ? kExitOk : kExitFail;
}

const std::map<std::string, std::function<int(const Context&)>>& commands() {
  static const std::map<std::string, std::function<int(const Context&)>> table{
      {"norm-info", cmd_norm_info}, {"curvature", cmd_curvature}, {"integrate", cmd_integrate},
      {"tube", cmd_tube},           {"steiner", cmd_steiner},     {"parallel", cmd_parallel},
      {"bdp", cmd_bdp},             {"plane2d", cmd_plane2d},     {"verify", cmd_verify}};
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : commands()) v.push_back(k);
    return v;
  }();
  return names;
}

int run_command(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  const auto it = commands().find(opts.command);
  if (it == commands().end()) {
    err << "error: unknown command '" << opts.command << "'\n";
    return kExitConfig;
  }
  RunConfig cfg;
  try {
    cfg = opts.config_text.empty() ? RunConfig{} : parse_config_text(opts.config_text);
    if (opts.out_dir) cfg.out = *opts.out_dir;
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.threads) cfg.threads = *opts.threads;
    if (opts.grid) {
      if (*opts.grid < 2 || *opts.grid > 2000) throw Error(ErrorCode::ConfigError, "grid: must be in [2, 2000]");
      cfg.grid = *opts.grid;
    }
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const unsigned previous = thread_count();
  set_thread_count(cfg.threads);
  int code = kExitFail;
  try {
    fs::create_directories(cfg.out);
    code = it->second(Context{cfg, fs::path(cfg.out), out});
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "] in " << opts.command << " (" << cfg.surface.label() << ", "
        << cfg.norm.label() << "): " << e.what() << "\n";
    code = e.code() == ErrorCode::ConfigError ? kExitConfig : kExitFail;
  } catch (const std::exception& e) {
    err << "error in " << opts.command << ": " << e.what() << "\n";
    code = kExitFail;
  }
  set_thread_count(previous);
  return code;
}

}  // namespace minkcurv
