#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "minkcurv/config.hpp"

namespace minkcurv {

// How lhs and rhs are compared.
//   Equal     |lhs - rhs| <= tol * max(1, |rhs|)
//   Relative  |lhs - rhs| <= tol * |rhs|
//   Absolute  |lhs - rhs| <= tol
//   AtLeast   lhs >= rhs - tol
//   AtMost    lhs <= rhs + tol
//   Failed    computation threw; never passes
enum class CheckKind { Equal, Relative, Absolute, AtLeast, AtMost, Failed };
const char* to_string(CheckKind k);

struct CheckResult {
  std::string id;
  std::string surface, norm;
  CheckKind kind = CheckKind::Equal;
  double lhs = 0, rhs = 0, tol = 0;
  bool pass = false;
  std::string oracle;  // where rhs comes from
  std::string note;
};

CheckResult make_check(std::string id, std::string surface, std::string norm, CheckKind kind, double lhs,
                       double rhs, double tol, std::string oracle);
bool evaluate(CheckKind kind, double lhs, double rhs, double tol);

struct GroupTiming {
  std::string surface, norm;
  double seconds = 0;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<CheckResult> checks;
  std::vector<GroupTiming> timing;
  double wall_seconds = 0;

  bool all_pass() const;
  std::size_t failures() const;
  // Everything except wall-clock data.
  nlohmann::json body() const;
  // FNV-1a 64 over body().dump(), hex.
  std::string hash() const;
  // body() plus "report_hash" and the separate "timing" block.
  nlohmann::json to_json() const;
  std::string table() const;
};

// Default matrices used when the config leaves them empty.
std::vector<SurfaceSpec> default_verify_surfaces();
std::vector<NormSpec> default_verify_norms();
std::vector<PlaneNormSpec> default_verify_plane_norms();

// Full theorem suite over {surfaces} x {norms}, plus the planar checks over
// the plane norms. Groups run one after another; the numerical kernels inside
// each group are parallel.
VerificationReport run_verification(const RunConfig& cfg);

}  // namespace minkcurv
