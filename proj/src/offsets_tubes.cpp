#include "minkcurv/offsets_tubes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minkcurv/birkhoff.hpp"
#include "minkcurv/parallel.hpp"

namespace minkcurv {

double parallel_curvature_predicted(double K, double H, double c) {
  const double den = c * c * K + 2 * c * H + 1;
  if (std::abs(den) <= 1e-12) throw Error(ErrorCode::SingularOffset, "offset hits a focal point");
  return K / den;
}

ParallelChart::ParallelChart(ChartPtr base, NormGauge norm, double c)
    : base_(std::move(base)), norm_(std::move(norm)), c_(c) {
  domain_ = base_->domain();
  param_scale_ = base_->param_scale();
  orientation_ = base_->orientation();
}

Vec3 ParallelChart::eta(double u, double v) const { return birkhoff_normal(*base_, norm_, u, v); }

ChartJet ParallelChart::first_jet(double u, double v) const {
  const double h = 1e-3 * param_scale_;
  auto d = [&](double step, bool along_u) {
    const Vec3 plus = along_u ? eta(u + step, v) : eta(u, v + step);
    const Vec3 minus = along_u ? eta(u - step, v) : eta(u, v - step);
    return Vec3((plus - minus) / (2 * step));
  };
  const ChartJet b = base_->first_jet(u, v);
  ChartJet j;
  j.p = b.p + c_ * eta(u, v);
  j.pu = b.pu + c_ * (4 * d(h / 2, true) - d(h, true)) / 3;
  j.pv = b.pv + c_ * (4 * d(h / 2, false) - d(h, false)) / 3;
  return j;
}

ChartJet ParallelChart::jet(double u, double v) const {
  ChartJet j = first_jet(u, v);
  const double h = 1e-3 * param_scale_;
  struct Pair {
    Vec3 pu, pv;
  };
  auto diff = [&](double step, bool along_u) {
    const ChartJet a = along_u ? first_jet(u + step, v) : first_jet(u, v + step);
    const ChartJet b = along_u ? first_jet(u - step, v) : first_jet(u, v - step);
    return Pair{(a.pu - b.pu) / (2 * step), (a.pv - b.pv) / (2 * step)};
  };
  const Pair u1 = diff(h, true), u2 = diff(h / 2, true);
  const Pair v1 = diff(h, false), v2 = diff(h / 2, false);
  j.puu = (4 * u2.pu - u1.pu) / 3;
  j.pvv = (4 * v2.pv - v1.pv) / 3;
  // Mixed derivative from both directions, averaged.
  j.puv = 0.5 * ((4 * u2.pv - u1.pv) / 3 + (4 * v2.pu - v1.pu) / 3);
  return j;
}

ParallelCheck check_parallel_curvature(ChartPtr base, const NormGauge& norm, double u, double v, double c) {
  const CurvatureSample s = curvature_sample(*base, norm, u, v);
  ParallelCheck out;
  out.K = s.K;
  out.H = s.H;
  out.predicted = parallel_curvature_predicted(s.K, s.H, c);
  const ParallelChart offset(std::move(base), norm, c);
  out.recomputed = curvature_sample(offset, norm, u, v).K;
  out.rel_error = std::abs(out.recomputed - out.predicted) / std::max(std::abs(out.predicted), 1e-300);
  return out;
}

double max_safe_offset(const SurfaceMeasures& m) {
  if (!(m.max_lambda1 > 0)) return std::numeric_limits<double>::infinity();
  return 1.0 / m.max_lambda1;
}

double max_safe_offset(const Surface& surface, const NormGauge& norm, const GridSpec& grid) {
  return max_safe_offset(integrate_surface(surface, norm, grid));
}

double tube_volume_weyl(const SurfaceMeasures& m, double eps) {
  if (eps < 0) throw Error(ErrorCode::InvalidInput, "tube radius must be non-negative");
  if (!(eps < max_safe_offset(m)))
    throw Error(ErrorCode::UnsafeOffset, "tube radius " + std::to_string(eps) +
                                             " is not below the safe offset " +
                                             std::to_string(max_safe_offset(m)));
  return 2 * eps * m.lambda_M + 2 * eps * eps * eps / 3 * m.int_K;
}

double tube_volume_weyl(const Surface& surface, const NormGauge& norm, double eps, const GridSpec& grid) {
  return tube_volume_weyl(integrate_surface(surface, norm, grid), eps);
}

SteinerCoefficients steiner_polynomial(const SurfaceMeasures& m) {
  return {m.flux_volume, m.lambda_M, m.int_H, m.int_K / 3};
}

SteinerCoefficients steiner_polynomial(const Surface& surface, const NormGauge& norm, const GridSpec& grid) {
  return steiner_polynomial(integrate_surface(surface, norm, grid));
}

namespace {

struct Polish {
  double dist = std::numeric_limits<double>::infinity();
  bool converged = false;
};

// Damped Newton (Levenberg-Marquardt safeguard) on f = F(z - phi)^2 / 2.
Polish polish(const Surface& surface, const NormGauge& norm, const Vec3& z, ChartPoint at) {
  const SurfaceChart& ch = surface.chart(at.chart);
  const ChartDomain& d = ch.domain();
  double u = at.u, v = at.v;
  auto keep_in = [&](double& a, double& b) {
    ch.normalize(a, b);
    if (!d.periodic_u) a = std::clamp(a, d.u0, d.u1);
    if (!d.periodic_v) b = std::clamp(b, d.v0, d.v1);
  };
  auto value = [&](double a, double b) {
    const double F = norm.value(z - ch.point(a, b));
    return 0.5 * F * F;
  };
  const double tiny = 1e-15 * (1 + z.norm());
  Polish out;
  double mu = 0;
  for (int it = 0; it < 60; ++it) {
    const ChartJet j = ch.jet(u, v);
    const Vec3 w = z - j.p;
    if (w.norm() <= tiny) return {0.0, true};
    const GaugeJet g = norm.jet(w);
    const double f = 0.5 * g.value * g.value;
    const Vec3 q = g.value * g.grad;
    const Mat3 P = g.grad * g.grad.transpose() + g.value * g.hess;
    const Vec2 grad(-j.pu.dot(q), -j.pv.dot(q));
    Mat2 hs;
    hs(0, 0) = j.pu.dot(P * j.pu) - q.dot(j.puu);
    hs(0, 1) = hs(1, 0) = j.pu.dot(P * j.pv) - q.dot(j.puv);
    hs(1, 1) = j.pv.dot(P * j.pv) - q.dot(j.pvv);
    out.dist = g.value;
    const double gscale = (j.pu.norm() + j.pv.norm()) * g.value;
    if (grad.norm() <= 1e-10 * gscale) {
      out.converged = true;
      return out;
    }
    const double scale = std::abs(hs.trace()) + 1e-300;
    if (hs.determinant() <= 0 || hs.trace() <= 0) mu = std::max(mu, 1e-3 * scale);
    bool accepted = false;
    Vec2 step = Vec2::Zero();
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      step = -(hs + mu * Mat2::Identity()).inverse() * grad;
      double a = u + step[0], b = v + step[1];
      keep_in(a, b);
      const double ft = value(a, b);
      if (ft < f) {
        u = a;
        v = b;
        accepted = true;
        out.dist = std::sqrt(2 * ft);
        mu = mu * 0.1 < 1e-12 * scale ? 0 : mu * 0.1;
      } else {
        mu = std::max(10 * mu, 1e-6 * scale);
      }
    }
    if (!accepted) {
      // Rounding floor: accept if the gradient is already small.
      out.converged = grad.norm() <= 1e-6 * gscale;
      return out;
    }
    if (step.norm() < 1e-13 * ch.param_scale()) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

}  // namespace

double distance_to_surface(const Surface& surface, const NormGauge& norm, const Vec3& z, double cutoff) {
  const double lower = surface.distance_lower_bound(z) / norm.r_max();
  if (lower > cutoff) return lower;
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const ChartPoint& seed : surface.nearest_seeds(z)) {
    const Polish p = polish(surface, norm, z, seed);
    if (p.converged) {
      any = true;
      best = std::min(best, p.dist);
    }
  }
  if (!any) {
    for (const ChartPoint& seed : surface.Surface::nearest_seeds(z)) {
      const Polish p = polish(surface, norm, z, seed);
      best = std::min(best, p.dist);
    }
  }
  return best;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(splitmix(splitmix(seed) + index) >> 11) * 0x1.0p-53;
}

McEstimate TubeSampling::count(std::uint64_t hits) const {
  McEstimate e;
  e.hits = hits;
  e.samples = samples;
  const double f = static_cast<double>(hits) / static_cast<double>(samples);
  e.estimate = box_volume * f;
  e.std_error = box_volume * std::sqrt(f * (1 - f) / static_cast<double>(samples));
  return e;
}

TubeSampling sample_tubes(const Surface& surface, const NormGauge& norm, std::vector<double> thresholds,
                          std::uint64_t n_samples, std::uint64_t seed) {
  if (!surface.closed()) throw Error(ErrorCode::InvalidInput, "tube sampling needs a closed surface");
  if (thresholds.empty() || n_samples == 0) throw Error(ErrorCode::InvalidInput, "nothing to sample");
  // Results are indexed in the caller's order.
  if (*std::min_element(thresholds.begin(), thresholds.end()) < 0)
    throw Error(ErrorCode::InvalidInput, "tube radii must be non-negative");
  const double cutoff = *std::max_element(thresholds.begin(), thresholds.end());
  Box box = surface.bounding_box();
  const Vec3 pad = Vec3::Constant(cutoff * norm.r_max() * (1 + 1e-9));
  box.lo -= pad;
  box.hi += pad;
  const Vec3 size = box.hi - box.lo;

  const std::size_t nt = thresholds.size();
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (n_samples + kBlock - 1) / kBlock;
  struct Counts {
    std::uint64_t inside = 0;
    std::vector<std::uint64_t> inner, outer;
  };
  std::vector<Counts> per_block(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    Counts c;
    c.inner.assign(nt, 0);
    c.outer.assign(nt, 0);
    const std::uint64_t first = b * kBlock, last = std::min(n_samples, first + kBlock);
    for (std::uint64_t i = first; i < last; ++i) {
      const Vec3 z(box.lo.x() + size.x() * counter_uniform(seed, 3 * i),
                   box.lo.y() + size.y() * counter_uniform(seed, 3 * i + 1),
                   box.lo.z() + size.z() * counter_uniform(seed, 3 * i + 2));
      const bool in = surface.contains(z);
      c.inside += in;
      const double dist = distance_to_surface(surface, norm, z, cutoff);
      for (std::size_t k = 0; k < nt; ++k) {
        if (dist > thresholds[k]) continue;
        (in ? c.inner : c.outer)[k] += 1;
      }
    }
    per_block[b] = std::move(c);
  });

  TubeSampling out;
  out.box_volume = size.x() * size.y() * size.z();
  out.samples = n_samples;
  out.thresholds = thresholds;
  out.inner_hits.assign(nt, 0);
  out.outer_hits.assign(nt, 0);
  for (const Counts& c : per_block) {
    out.inside += c.inside;
    for (std::size_t k = 0; k < nt; ++k) {
      out.inner_hits[k] += c.inner[k];
      out.outer_hits[k] += c.outer[k];
    }
  }
  return out;
}

McEstimate tube_volume_monte_carlo(const Surface& surface, const NormGauge& norm, double eps,
                                   std::uint64_t n_samples, std::uint64_t seed) {
  return sample_tubes(surface, norm, {eps}, n_samples, seed).tube(0);
}

}  // namespace minkcurv
