/* C interface to the minkcurv library. All objects are opaque handles owned
 * by the caller and released with the matching _free function. Every call
 * returns a status; on failure mkc_last_error() describes the problem for the
 * calling thread. */
#ifndef MINKCURV_H
#define MINKCURV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MKC_BUILDING_LIBRARY)
#    define MKC_API __declspec(dllexport)
#  else
#    define MKC_API __declspec(dllimport)
#  endif
#else
#  define MKC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mkc_status {
  MKC_OK = 0,
  MKC_ERR_INVALID_INPUT = 1,
  MKC_ERR_INVALID_NORM = 2,
  MKC_ERR_NON_CONVERGENCE = 3,
  MKC_ERR_DEGENERATE_CURVATURE = 4,
  MKC_ERR_DEGENERATE_CHART = 5,
  MKC_ERR_TANGENCY_VIOLATION = 6,
  MKC_ERR_QUADRATURE_NOT_CONVERGED = 7,
  MKC_ERR_NON_POSITIVE_MEAN_CURVATURE = 8,
  MKC_ERR_ORIENTATION = 9,
  MKC_ERR_SINGULAR_OFFSET = 10,
  MKC_ERR_UNSAFE_OFFSET = 11,
  MKC_ERR_RAY_ESCAPED_ATLAS = 12,
  MKC_ERR_STEP_SIZE_UNDERFLOW = 13,
  MKC_ERR_FLAT_POINT = 14,
  MKC_ERR_NON_POSITIVE_CURVATURE = 15,
  MKC_ERR_COMPLEX_EIGENVALUES = 16,
  MKC_ERR_CONFIG = 17,
  MKC_ERR_INTERNAL = 18,
  MKC_ERR_NULL_ARGUMENT = 100
} mkc_status;

typedef struct mkc_norm mkc_norm;
typedef struct mkc_surface mkc_surface;
typedef struct mkc_plane_norm mkc_plane_norm;
typedef struct mkc_curve mkc_curve;

MKC_API const char* mkc_version(void);
MKC_API const char* mkc_status_name(mkc_status status);
/* Message of the last failed call on this thread; "" if none. */
MKC_API const char* mkc_last_error(void);
/* 0 restores the hardware default. */
MKC_API void mkc_set_threads(unsigned n);

/* ---- norms ---- */
MKC_API mkc_status mkc_norm_euclidean(double radius, mkc_norm** out);
MKC_API mkc_status mkc_norm_lp(double p, double blend, mkc_norm** out);
MKC_API mkc_status mkc_norm_superellipsoid(double a, double b, double c, double p, double blend, mkc_norm** out);
/* Same block as in a run config, e.g. {"kind":"lp","p":4}. */
MKC_API mkc_status mkc_norm_from_json(const char* json, mkc_norm** out);
MKC_API void mkc_norm_free(mkc_norm* norm);
MKC_API double mkc_default_blend(void);

MKC_API mkc_status mkc_norm_value(const mkc_norm* norm, const double x[3], double* out);
/* Point of the unit sphere with outward euclidean normal n (|n| = 1). */
MKC_API mkc_status mkc_norm_inverse_gauss(const mkc_norm* norm, const double n[3], double x[3]);
MKC_API mkc_status mkc_norm_sphere_curvature(const mkc_norm* norm, const double x[3], double* out);
MKC_API mkc_status mkc_norm_sphere_area(const mkc_norm* norm, double* out);

/* ---- surfaces ---- */
MKC_API mkc_status mkc_surface_ellipsoid(double a, double b, double c, mkc_surface** out);
MKC_API mkc_status mkc_surface_torus(double R, double r, mkc_surface** out);
MKC_API mkc_status mkc_surface_minkowski_sphere(const mkc_norm* norm, double r, mkc_surface** out);
MKC_API mkc_status mkc_surface_graph(const char* expr, double x0, double x1, double y0, double y1,
                                     mkc_surface** out);
MKC_API mkc_status mkc_surface_homothety(const mkc_surface* base, double c, mkc_surface** out);
MKC_API void mkc_surface_free(mkc_surface* surface);
MKC_API int mkc_surface_chart_count(const mkc_surface* surface);
MKC_API mkc_status mkc_surface_point(const mkc_surface* surface, int chart, double u, double v, double p[3]);

typedef struct mkc_curvature {
  double p[3], xi[3], eta[3];
  double K, H, lambda1, lambda2;
  double omega_density, eta_xi, residual;
  double K_M; /* euclidean gaussian curvature */
} mkc_curvature;

MKC_API mkc_status mkc_curvature_sample(const mkc_surface* surface, const mkc_norm* norm, int chart, double u,
                                        double v, mkc_curvature* out);
/* K_M / K_dB(eta). */
MKC_API mkc_status mkc_curvature_ratio(const mkc_surface* surface, const mkc_norm* norm, int chart, double u,
                                       double v, double* out);

typedef struct mkc_measures {
  double lambda_M, int_K, int_H, int_H2, int_invH;
  double flux_volume, alexandrov, int_K_plus;
  double huber_lower, huber_value, huber_upper;
  double max_safe_offset;
  double mean_H, stdev_H;
  int level;
} mkc_measures;

MKC_API mkc_status mkc_integrate(const mkc_surface* surface, const mkc_norm* norm, mkc_measures* out);
MKC_API mkc_status mkc_tube_weyl(const mkc_surface* surface, const mkc_norm* norm, double eps, double* out);
MKC_API mkc_status mkc_tube_monte_carlo(const mkc_surface* surface, const mkc_norm* norm, double eps,
                                        uint64_t samples, uint64_t seed, double* estimate, double* std_error);
MKC_API mkc_status mkc_parallel_check(const mkc_surface* surface, const mkc_norm* norm, int chart, double u,
                                      double v, double c, double* predicted, double* recomputed);
/* radii may be NULL (curvature-scaled defaults) or n_radii >= 3 decreasing values. */
MKC_API mkc_status mkc_bdp(const mkc_surface* surface, const mkc_norm* norm, int chart, double u, double v,
                           const double* radii, size_t n_radii, double* K_circumference, double* K_area,
                           double* slope);

/* ---- plane ---- */
MKC_API mkc_status mkc_plane_norm_euclidean(double radius, mkc_plane_norm** out);
MKC_API mkc_status mkc_plane_norm_lp(double p, double blend, mkc_plane_norm** out);
MKC_API void mkc_plane_norm_free(mkc_plane_norm* norm);
MKC_API mkc_status mkc_plane_antinorm(const mkc_plane_norm* norm, const double x[2], double* out);
MKC_API mkc_status mkc_plane_unit_circle_length(const mkc_plane_norm* norm, double* out);

MKC_API mkc_status mkc_curve_ellipse(double a, double b, mkc_curve** out);
MKC_API mkc_status mkc_curve_norm_circle(const mkc_plane_norm* norm, double r, mkc_curve** out);
MKC_API void mkc_curve_free(mkc_curve* curve);
MKC_API mkc_status mkc_curve_circular_curvature(const mkc_curve* curve, const mkc_plane_norm* norm, double t,
                                                double* out);
MKC_API mkc_status mkc_curve_total_circular_curvature(const mkc_curve* curve, const mkc_plane_norm* norm,
                                                      double* out);
MKC_API mkc_status mkc_curve_area_bound(const mkc_curve* curve, const mkc_plane_norm* norm, double* twice_area,
                                        double* integral);

/* ---- command runner used by the CLI ---- */
typedef struct mkc_run_options {
  const char* command;     /* norm-info, curvature, integrate, tube, steiner, parallel, bdp, plane2d, verify */
  const char* config_json; /* NULL or "" for defaults */
  const char* out_dir;     /* NULL keeps the config value */
  int has_seed;
  uint64_t seed;
  int has_threads;
  unsigned threads;
  int grid;                /* 0 keeps the config value */
} mkc_run_options;

/* Returns the process exit code: 0 ok, 1 failure, 2 configuration error. */
MKC_API int mkc_run(const mkc_run_options* options);
/* Space-separated command names. */
MKC_API const char* mkc_command_list(void);

#ifdef __cplusplus
}
#endif

#endif
