#include "minkcurv/minkcurv.h"

#include <iostream>
#include <string>

#include <json.hpp>

#include "minkcurv/birkhoff.hpp"
#include "minkcurv/config.hpp"
#include "minkcurv/geodesic_probe.hpp"
#include "minkcurv/harness.hpp"
#include "minkcurv/measures.hpp"
#include "minkcurv/offsets_tubes.hpp"
#include "minkcurv/parallel.hpp"
#include "minkcurv/plane2d.hpp"

struct mkc_norm {
  minkcurv::NormGauge norm;
};
struct mkc_surface {
  minkcurv::SurfacePtr surface;
};
struct mkc_plane_norm {
  minkcurv::PlaneNorm norm;
};
struct mkc_curve {
  minkcurv::PlaneCurvePtr curve;
};

namespace {

thread_local std::string g_last_error;

template <class F>
mkc_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return MKC_OK;
  } catch (const minkcurv::Error& e) {
    g_last_error = e.what();
    return static_cast<mkc_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MKC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MKC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return MKC_ERR_INTERNAL;
  }
}

mkc_status null_arg(const char* name) {
  g_last_error = std::string("null argument: ") + name;
  return MKC_ERR_NULL_ARGUMENT;
}

#define MKC_REQUIRE(ptr) \
  if (!(ptr)) return null_arg(#ptr)

minkcurv::Vec3 vec3(const double* x) { return {x[0], x[1], x[2]}; }

void put(const minkcurv::Vec3& v, double* out) {
  out[0] = v.x();
  out[1] = v.y();
  out[2] = v.z();
}

const minkcurv::SurfaceChart& chart_of(const mkc_surface* s, int chart) {
  if (chart < 0 || chart >= s->surface->chart_count())
    throw minkcurv::Error(minkcurv::ErrorCode::InvalidInput, "chart index out of range");
  return s->surface->chart(chart);
}

}  // namespace

extern "C" {

const char* mkc_version(void) { return "1.0.0"; }

const char* mkc_status_name(mkc_status status) {
  if (status == MKC_OK) return "ok";
  if (status == MKC_ERR_NULL_ARGUMENT) return "null_argument";
  if (status >= 1 && status <= 18) return minkcurv::to_string(static_cast<minkcurv::ErrorCode>(status));
  return "unknown";
}

const char* mkc_last_error(void) { return g_last_error.c_str(); }

void mkc_set_threads(unsigned n) { minkcurv::set_thread_count(n); }

double mkc_default_blend(void) { return minkcurv::NormGauge::kDefaultBlend; }

mkc_status mkc_norm_euclidean(double radius, mkc_norm** out) {
  MKC_REQUIRE(out);
  return guard([&] { *out = new mkc_norm{minkcurv::NormGauge::euclidean(radius)}; });
}

mkc_status mkc_norm_lp(double p, double blend, mkc_norm** out) {
  MKC_REQUIRE(out);
  return guard([&] { *out = new mkc_norm{minkcurv::NormGauge::lp(p, blend)}; });
}

mkc_status mkc_norm_superellipsoid(double a, double b, double c, double p, double blend, mkc_norm** out) {
  MKC_REQUIRE(out);
  return guard([&] { *out = new mkc_norm{minkcurv::NormGauge::superellipsoid(a, b, c, p, blend)}; });
}

mkc_status mkc_norm_from_json(const char* json, mkc_norm** out) {
  MKC_REQUIRE(json);
  MKC_REQUIRE(out);
  return guard([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
      throw minkcurv::Error(minkcurv::ErrorCode::ConfigError, std::string("norm: malformed JSON: ") + e.what());
    }
    const minkcurv::RunConfig cfg = minkcurv::parse_config(nlohmann::json{{"norm", j}});
    *out = new mkc_norm{cfg.norm.build()};
  });
}

void mkc_norm_free(mkc_norm* norm) { delete norm; }

mkc_status mkc_norm_value(const mkc_norm* norm, const double x[3], double* out) {
  MKC_REQUIRE(norm);
  MKC_REQUIRE(x);
  MKC_REQUIRE(out);
  return guard([&] { *out = norm->norm.value(vec3(x)); });
}

mkc_status mkc_norm_inverse_gauss(const mkc_norm* norm, const double n[3], double x[3]) {
  MKC_REQUIRE(norm);
  MKC_REQUIRE(n);
  MKC_REQUIRE(x);
  return guard([&] { put(minkcurv::inverse_gauss_map(norm->norm, vec3(n)).x, x); });
}

mkc_status mkc_norm_sphere_curvature(const mkc_norm* norm, const double x[3], double* out) {
  MKC_REQUIRE(norm);
  MKC_REQUIRE(x);
  MKC_REQUIRE(out);
  return guard([&] { *out = minkcurv::sphere_curvature(norm->norm, vec3(x)); });
}

mkc_status mkc_norm_sphere_area(const mkc_norm* norm, double* out) {
  MKC_REQUIRE(norm);
  MKC_REQUIRE(out);
  return guard([&] { *out = minkcurv::sphere_area(norm->norm); });
}

mkc_status mkc_surface_ellipsoid(double a, double b, double c, mkc_surface** out) {
  MKC_REQUIRE(out);
  return guard([&] { *out = new mkc_surface{minkcurv::make_ellipsoid(a, b, c)}; });
}

mkc_status mkc_surface_torus(double R, double r, mkc_surface** out) {
  MKC_REQUIRE(out);
  return guard([&] { *out = new mkc_surface{minkcurv::make_torus(R, r)}; });
}

mkc_status mkc_surface_minkowski_sphere(const mkc_norm* norm, double r, mkc_surface** out) {
  MKC_REQUIRE(norm);
  MKC_REQUIRE(out);
  return guard([&] { *out = new mkc_surface{minkcurv::make_minkowski_sphere(norm->norm, r)}; });
}

mkc_status mkc_surface_graph(const char* expr, double x0, double x1, double y0, double y1, mkc_surface** out) {
  MKC_REQUIRE(expr);
  MKC_REQUIRE(out);
  return guard([&] { *out = new mkc_surface{minkcurv::make_graph(expr, x0, x1, y0, y1)}; });
}

mkc_status mkc_surface_homothety(const mkc_surface* base, double c, mkc_surface** out) {
  MKC_REQUIRE(base);
  MKC_REQUIRE(out);
  return guard([&] { *out = new mkc_surface{minkcurv::make_homothety(base->surface, c)}; });
}

void mkc_surface_free(mkc_surface* surface) { delete surface; }

int mkc_surface_chart_count(const mkc_surface* surface) { return surface ? surface->surface->chart_count() : 0; }

mkc_status mkc_surface_point(const mkc_surface* surface, int chart, double u, double v, double p[3]) {
  MKC_REQUIRE(surface);
  MKC_REQUIRE(p);
  return guard([&] { put(chart_of(surface, chart).point(u, v), p); });
}

mkc_status mkc_curvature_sample(const mkc_surface* surface, const mkc_norm* norm, int chart, double u, double v,
                                mkc_curvature* out) {
  MKC_REQUIRE(surface);
  MKC_REQUIRE(norm);
  MKC_REQUIRE(out);
  return guard([&] {
    const auto& ch = chart_of(surface, chart);
    const minkcurv::CurvatureSample s = minkcurv::curvature_sample(ch, norm->norm, u, v);
    mkc_curvature c{};
    put(s.p, c.p);
    put(s.xi, c.xi);
    put(s.eta, c.eta);
    c.K = s.K;
    c.H = s.H;
    c.lambda1 = s.lambda1;
    c.lambda2 = s.lambda2;
    c.omega_density = s.omega_density;
    c.eta_xi = s.eta_xi;
    c.residual = s.residual;
    c.K_M = minkcurv::euclidean_geometry(ch, u, v).K;
    *out = c;
  });
}

mkc_status mkc_curvature_ratio(const mkc_surface* surface, const mkc_norm* norm, int chart, double u, double v,
                               double* out) {
  MKC_REQUIRE(surface);
  MKC_REQUIRE(norm);
  MKC_REQUIRE(out);
  return guard([&] { *out = minkcurv::curvature_ratio(chart_of(surface, chart), norm->norm, u, v); });
}

mkc_status mkc_integrate(const mkc_surface* surface, const mkc_norm* norm, mkc_measures* out) {
  MKC_REQUIRE(surface);
  MKC_REQUIRE(norm);
  MKC_REQUIRE(out);
  return guard([&] {
    const minkcurv::SurfaceMeasures m = minkcurv::integrate_surface(*surface->surface, norm->norm);
    const minkcurv::HuberBounds hb = minkcurv::huber_bounds(m, minkcurv::sphere_extrema(norm->norm));
    mkc_measures r{};
    r.lambda_M = m.lambda_M;
    r.int_K = m.int_K;
    r.int_H = m.int_H;
    r.int_H2 = m.int_H2;
    r.int_invH = m.int_invH;
    r.flux_volume = m.flux_volume;
    r.alexandrov = m.alexandrov;
    r.int_K_plus = m.int_K_plus;
    r.huber_lower = hb.lower;
    r.huber_value = hb.value;
    r.huber_upper = hb.upper;
    r.max_safe_offset = minkcurv::max_safe_offset(m);
    r.mean_H = m.mean_H;
    r.stdev_H = m.stdev_H;
    r.level = m.level;
    *out = r;
  });
}

mkc_status mkc_tube_weyl(const mkc_surface* surface, const mkc_norm* norm, double eps, double* out) {
  MKC_REQUIRE(surface);
  MKC_REQUIRE(norm);
  MKC_REQUIRE(out);
  return guard([&] { *out = minkcurv::tube_volume_weyl(*surface->surface, norm->norm, eps); });
}

mkc_status mkc_tube_monte_carlo(const mkc_surface* surface, const mkc_norm* norm, double eps, uint64_t samples,
                                uint64_t seed, double* estimate, double* std_error) {
  MKC_REQUIRE(surface);
  MKC_REQUIRE(norm);
  MKC_REQUIRE(estimate);
  MKC_REQUIRE(std_error);
  return guard([&] {
    const minkcurv::McEstimate e =
        minkcurv::tube_volume_monte_carlo(*surface->surface, norm->norm, eps, samples, seed);
    *estimate = e.estimate;
    *std_error = e.std_error;
  });
}

mkc_status mkc_parallel_check(const mkc_surface* surface, const mkc_norm* norm, int chart, double u, double v,
                              double c, double* predicted, double* recomputed) {
  MKC_REQUIRE(surface);
  MKC_REQUIRE(norm);
  MKC_REQUIRE(predicted);
  MKC_REQUIRE(recomputed);
  return guard([&] {
    (void)chart_of(surface, chart);
    const minkcurv::ParallelCheck pc =
        minkcurv::check_parallel_curvature(surface->surface->chart_ptr(chart), norm->norm, u, v, c);
    *predicted = pc.predicted;
    *recomputed = pc.recomputed;
  });
}

mkc_status mkc_bdp(const mkc_surface* surface, const mkc_norm* norm, int chart, double u, double v,
                   const double* radii, size_t n_radii, double* K_circumference, double* K_area, double* slope) {
  MKC_REQUIRE(surface);
  MKC_REQUIRE(norm);
  MKC_REQUIRE(K_circumference);
  MKC_REQUIRE(K_area);
  MKC_REQUIRE(slope);
  return guard([&] {
    (void)chart_of(surface, chart);
    std::vector<double> r;
    if (radii) r.assign(radii, radii + n_radii);
    const minkcurv::BdpEstimate b = minkcurv::bdp_estimate(*surface->surface, norm->norm, {chart, u, v}, r);
    *K_circumference = b.K_circumference;
    *K_area = b.K_area;
    *slope = b.slope_M;
  });
}

mkc_status mkc_plane_norm_euclidean(double radius, mkc_plane_norm** out) {
  MKC_REQUIRE(out);
  return guard([&] { *out = new mkc_plane_norm{minkcurv::PlaneNorm::euclidean(radius)}; });
}

mkc_status mkc_plane_norm_lp(double p, double blend, mkc_plane_norm** out) {
  MKC_REQUIRE(out);
  return guard([&] { *out = new mkc_plane_norm{minkcurv::PlaneNorm::lp(p, blend)}; });
}

void mkc_plane_norm_free(mkc_plane_norm* norm) { delete norm; }

mkc_status mkc_plane_antinorm(const mkc_plane_norm* norm, const double x[2], double* out) {
  MKC_REQUIRE(norm);
  MKC_REQUIRE(x);
  MKC_REQUIRE(out);
  return guard([&] { *out = minkcurv::antinorm(norm->norm, minkcurv::Vec2(x[0], x[1])); });
}

mkc_status mkc_plane_unit_circle_length(const mkc_plane_norm* norm, double* out) {
  MKC_REQUIRE(norm);
  MKC_REQUIRE(out);
  return guard([&] { *out = minkcurv::unit_circle_length(norm->norm); });
}

mkc_status mkc_curve_ellipse(double a, double b, mkc_curve** out) {
  MKC_REQUIRE(out);
  return guard([&] { *out = new mkc_curve{minkcurv::make_ellipse(a, b)}; });
}

mkc_status mkc_curve_norm_circle(const mkc_plane_norm* norm, double r, mkc_curve** out) {
  MKC_REQUIRE(norm);
  MKC_REQUIRE(out);
  return guard([&] { *out = new mkc_curve{minkcurv::make_norm_circle(norm->norm, r)}; });
}

void mkc_curve_free(mkc_curve* curve) { delete curve; }

mkc_status mkc_curve_circular_curvature(const mkc_curve* curve, const mkc_plane_norm* norm, double t, double* out) {
  MKC_REQUIRE(curve);
  MKC_REQUIRE(norm);
  MKC_REQUIRE(out);
  return guard([&] { *out = minkcurv::circular_curvature(*curve->curve, norm->norm, t); });
}

mkc_status mkc_curve_total_circular_curvature(const mkc_curve* curve, const mkc_plane_norm* norm, double* out) {
  MKC_REQUIRE(curve);
  MKC_REQUIRE(norm);
  MKC_REQUIRE(out);
  return guard([&] { *out = minkcurv::total_circular_curvature(*curve->curve, norm->norm); });
}

mkc_status mkc_curve_area_bound(const mkc_curve* curve, const mkc_plane_norm* norm, double* twice_area,
                                double* integral) {
  MKC_REQUIRE(curve);
  MKC_REQUIRE(norm);
  MKC_REQUIRE(twice_area);
  MKC_REQUIRE(integral);
  return guard([&] {
    const minkcurv::AreaBound b = minkcurv::area_curvature_bound(*curve->curve, norm->norm);
    *twice_area = b.twice_area;
    *integral = b.integral;
  });
}

int mkc_run(const mkc_run_options* options) {
  if (!options || !options->command) {
    std::cerr << "error: no command\n";
    return minkcurv::kExitConfig;
  }
  minkcurv::RunOptions o;
  o.command = options->command;
  if (options->config_json) o.config_text = options->config_json;
  if (options->out_dir) o.out_dir = std::string(options->out_dir);
  if (options->has_seed) o.seed = options->seed;
  if (options->has_threads) o.threads = options->threads;
  if (options->grid != 0) o.grid = options->grid;
  return minkcurv::run_command(o, std::cout, std::cerr);
}

const char* mkc_command_list(void) {
  static const std::string list = [] {
    std::string s;
    for (const auto& c : minkcurv::command_names()) s += (s.empty() ? "" : " ") + c;
    return s;
  }();
  return list.c_str();
}

}  // extern "C"
