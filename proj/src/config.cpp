#include "minkcurv/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace minkcurv {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::ConfigError, field + ": " + msg);
}

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (!v->is_number()) fail(field(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(field(key), "must be finite");
    }
  }
  void positive(const std::string& key, double& out) {
    number(key, out);
    if (has(key) && !(out > 0)) fail(field(key), "must be positive");
  }
  void integer(const std::string& key, std::uint64_t& out) {
    if (const json* v = get(key)) {
      if (!v->is_number_integer() || v->get<long long>() < 0) fail(field(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (!v->is_string()) fail(field(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  void numbers(const std::string& key, std::vector<double>& out) {
    if (const json* v = get(key)) {
      if (!v->is_array()) fail(field(key), "expected an array of numbers");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_number()) fail(field(key) + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back((*v)[i].get<double>());
      }
    }
  }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(field(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string num(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

NormSpec parse_norm(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  NormSpec n;
  r.string("kind", n.kind);
  if (n.kind == "euclidean") {
    r.positive("r", n.r);
  } else if (n.kind == "lp" || n.kind == "superellipsoid") {
    if (!r.has("p")) fail(r.field("p"), "required");
    r.number("p", n.p);
    if (!(n.p > 1)) fail(r.field("p"), "must be > 1");
    r.number("blend", n.blend);
    if (!(n.blend >= 0)) fail(r.field("blend"), "must be >= 0");
    if (n.kind == "superellipsoid") {
      for (const char* k : {"a", "b", "c"})
        if (!r.has(k)) fail(r.field(k), "required");
      r.positive("a", n.a);
      r.positive("b", n.b);
      r.positive("c", n.c);
    }
  } else {
    fail(r.field("kind"), "unknown norm kind '" + n.kind + "'");
  }
  r.finish();
  try {
    (void)n.build();
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return n;
}

SurfaceSpec parse_surface(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  SurfaceSpec s;
  r.string("kind", s.kind);
  if (s.kind == "minkowski_sphere") {
    s.r = 1;
    r.positive("r", s.r);
  } else if (s.kind == "ellipsoid") {
    r.positive("a", s.a);
    r.positive("b", s.b);
    r.positive("c", s.c);
  } else if (s.kind == "torus") {
    r.positive("R", s.R);
    r.positive("r", s.r);
    if (!(s.r < s.R)) fail(r.field("r"), "must be smaller than R");
  } else if (s.kind == "graph") {
    if (!r.has("expr")) fail(r.field("expr"), "required");
    r.string("expr", s.expr);
    r.number("x0", s.x0);
    r.number("x1", s.x1);
    r.number("y0", s.y0);
    r.number("y1", s.y1);
    if (!(s.x1 > s.x0)) fail(r.field("x1"), "must exceed x0");
    if (!(s.y1 > s.y0)) fail(r.field("y1"), "must exceed y0");
    try {
      (void)Expression::parse(s.expr);
    } catch (const Error& e) {
      fail(r.field("expr"), e.what());
    }
  } else {
    fail(r.field("kind"), "unknown surface kind '" + s.kind + "'");
  }
  r.finish();
  return s;
}

PlaneNormSpec parse_plane_norm(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  PlaneNormSpec n;
  r.string("kind", n.kind);
  if (n.kind == "euclidean") {
    r.positive("r", n.r);
  } else if (n.kind == "lp") {
    if (!r.has("p")) fail(r.field("p"), "required");
    r.number("p", n.p);
    if (!(n.p > 1)) fail(r.field("p"), "must be > 1");
    r.number("blend", n.blend);
    if (!(n.blend >= 0)) fail(r.field("blend"), "must be >= 0");
  } else {
    fail(r.field("kind"), "unknown plane norm kind '" + n.kind + "'");
  }
  r.finish();
  try {
    (void)n.build();
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return n;
}

CurveSpec parse_curve(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  CurveSpec c;
  r.string("kind", c.kind);
  if (c.kind == "ellipse") {
    r.positive("a", c.a);
    r.positive("b", c.b);
  } else if (c.kind == "norm_circle") {
    r.positive("r", c.r);
  } else {
    fail(r.field("kind"), "unknown curve kind '" + c.kind + "'");
  }
  r.finish();
  return c;
}

template <class T, class F>
std::vector<T> parse_list(ObjectReader& r, const std::string& key, F&& parse) {
  std::vector<T> out;
  if (const json* v = r.get(key)) {
    if (!v->is_array()) fail(r.field(key), "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) out.push_back(parse((*v)[i], r.field(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

NormGauge NormSpec::build() const {
  if (kind == "euclidean") return NormGauge::euclidean(r);
  if (kind == "lp") return NormGauge::lp(p, blend);
  if (kind == "superellipsoid") return NormGauge::superellipsoid(a, b, c, p, blend);
  throw Error(ErrorCode::ConfigError, "unknown norm kind '" + kind + "'");
}

std::string NormSpec::label() const {
  if (kind == "euclidean") return r == 1 ? "euclidean" : "euclidean(r=" + num(r) + ")";
  std::string s = kind == "lp" ? "lp(p=" + num(p) : "superellipsoid(" + num(a) + "," + num(b) + "," + num(c) + ",p=" + num(p);
  if (blend != NormGauge::kDefaultBlend) s += ",blend=" + num(blend);
  return s + ")";
}

json NormSpec::to_json() const {
  json j{{"kind", kind}};
  if (kind == "euclidean") {
    j["r"] = r;
  } else {
    j["p"] = p;
    j["blend"] = blend;
    if (kind == "superellipsoid") j["a"] = a, j["b"] = b, j["c"] = c;
  }
  return j;
}

SurfacePtr SurfaceSpec::build(const NormGauge& norm) const {
  if (kind == "minkowski_sphere") return make_minkowski_sphere(norm, r);
  if (kind == "ellipsoid") return make_ellipsoid(a, b, c);
  if (kind == "torus") return make_torus(R, r);
  if (kind == "graph") return make_graph(expr, x0, x1, y0, y1);
  throw Error(ErrorCode::ConfigError, "unknown surface kind '" + kind + "'");
}

std::string SurfaceSpec::label() const {
  if (kind == "minkowski_sphere") return num(r) + "*dB";
  if (kind == "ellipsoid") return "ellipsoid(" + num(a) + "," + num(b) + "," + num(c) + ")";
  if (kind == "torus") return "torus(" + num(R) + "," + num(r) + ")";
  return "graph(" + expr + ")";
}

json SurfaceSpec::to_json() const {
  json j{{"kind", kind}};
  if (kind == "minkowski_sphere") j["r"] = r;
  else if (kind == "ellipsoid") j["a"] = a, j["b"] = b, j["c"] = c;
  else if (kind == "torus") j["R"] = R, j["r"] = r;
  else j["expr"] = expr, j["x0"] = x0, j["x1"] = x1, j["y0"] = y0, j["y1"] = y1;
  return j;
}

PlaneNorm PlaneNormSpec::build() const {
  if (kind == "euclidean") return PlaneNorm::euclidean(r);
  return PlaneNorm::lp(p, blend);
}

std::string PlaneNormSpec::label() const {
  if (kind == "euclidean") return r == 1 ? "euclidean" : "euclidean(r=" + num(r) + ")";
  std::string s = "lp(p=" + num(p);
  if (blend != PlaneNorm::kDefaultBlend) s += ",blend=" + num(blend);
  return s + ")";
}

json PlaneNormSpec::to_json() const {
  if (kind == "euclidean") return {{"kind", kind}, {"r", r}};
  return {{"kind", kind}, {"p", p}, {"blend", blend}};
}

PlaneCurvePtr CurveSpec::build(const PlaneNorm& norm) const {
  if (kind == "ellipse") return make_ellipse(a, b);
  return make_norm_circle(norm, r);
}

std::string CurveSpec::label() const {
  if (kind == "ellipse") return "ellipse(" + num(a) + "," + num(b) + ")";
  return num(r) + "*S";
}

json CurveSpec::to_json() const {
  if (kind == "ellipse") return {{"kind", kind}, {"a", a}, {"b", b}};
  return {{"kind", kind}, {"r", r}};
}

RunConfig parse_config(const json& j) {
  ObjectReader r(j, "");
  RunConfig c;
  if (const json* v = r.get("norm")) c.norm = parse_norm(*v, "norm");
  if (const json* v = r.get("surface")) c.surface = parse_surface(*v, "surface");
  c.norms = parse_list<NormSpec>(r, "norms", parse_norm);
  c.surfaces = parse_list<SurfaceSpec>(r, "surfaces", parse_surface);
  c.plane_norms = parse_list<PlaneNormSpec>(r, "plane_norms", parse_plane_norm);
  if (const json* v = r.get("plane_norm")) c.plane_norm = parse_plane_norm(*v, "plane_norm");
  if (const json* v = r.get("curve")) c.curve = parse_curve(*v, "curve");

  std::uint64_t grid = static_cast<std::uint64_t>(c.grid);
  r.integer("grid", grid);
  if (grid < 2 || grid > 2000) fail("grid", "must be in [2, 2000]");
  c.grid = static_cast<int>(grid);
  r.positive("epsilon", c.epsilon);
  r.numbers("offsets", c.offsets);
  r.numbers("rho", c.rho);
  for (std::size_t i = 0; i < c.rho.size(); ++i)
    if (!(c.rho[i] > 0)) fail("rho[" + std::to_string(i) + "]", "must be positive");
  r.numbers("radii", c.radii);
  for (std::size_t i = 0; i < c.radii.size(); ++i)
    if (!(c.radii[i] > 0) || (i > 0 && !(c.radii[i] < c.radii[i - 1])))
      fail("radii[" + std::to_string(i) + "]", "radii must be positive and decreasing");
  if (!c.radii.empty() && c.radii.size() < 3) fail("radii", "need at least three radii");
  if (const json* v = r.get("points")) {
    if (!v->is_array()) fail("points", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = "points[" + std::to_string(i) + "]";
      ObjectReader pr((*v)[i], path);
      PointSpec p;
      std::uint64_t chart = 0;
      pr.integer("chart", chart);
      p.chart = static_cast<int>(chart);
      if (!pr.has("u")) fail(pr.field("u"), "required");
      if (!pr.has("v")) fail(pr.field("v"), "required");
      pr.number("u", p.u);
      pr.number("v", p.v);
      pr.finish();
      c.points.push_back(p);
    }
  }
  r.integer("samples", c.samples);
  if (c.samples == 0) fail("samples", "must be positive");
  r.integer("verify_samples", c.verify_samples);
  if (c.verify_samples == 0) fail("verify_samples", "must be positive");
  r.integer("seed", c.seed);
  std::uint64_t threads = c.threads;
  r.integer("threads", threads);
  c.threads = static_cast<unsigned>(threads);
  r.string("out", c.out);
  r.finish();
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("config: malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["norm"] = c.norm.to_json();
  j["surface"] = c.surface.to_json();
  j["norms"] = json::array();
  for (const auto& n : c.norms) j["norms"].push_back(n.to_json());
  j["surfaces"] = json::array();
  for (const auto& s : c.surfaces) j["surfaces"].push_back(s.to_json());
  j["plane_norms"] = json::array();
  for (const auto& n : c.plane_norms) j["plane_norms"].push_back(n.to_json());
  j["plane_norm"] = c.plane_norm.to_json();
  j["curve"] = c.curve.to_json();
  j["grid"] = c.grid;
  j["epsilon"] = c.epsilon;
  j["offsets"] = c.offsets;
  j["rho"] = c.rho;
  j["radii"] = c.radii;
  j["points"] = json::array();
  for (const auto& p : c.points) j["points"].push_back({{"chart", p.chart}, {"u", p.u}, {"v", p.v}});
  j["samples"] = c.samples;
  j["verify_samples"] = c.verify_samples;
  j["seed"] = c.seed;
  // threads and out do not change results
  return j;
}

std::vector<PointSpec> default_points(const Surface& surface) {
  const ChartDomain& d = surface.chart(0).domain();
  static constexpr double kFractions[5][2] = {{0.35, 0.11}, {0.6, 0.38}, {0.27, 0.64}, {0.7, 0.84}, {0.45, 0.2}};
  std::vector<PointSpec> out;
  for (const auto& f : kFractions) out.push_back({0, d.u0 + f[0] * (d.u1 - d.u0), d.v0 + f[1] * (d.v1 - d.v0)});
  return out;
}

}  // namespace minkcurv
