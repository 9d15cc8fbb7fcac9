#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cde/potentials.hpp"

namespace cde {

enum class LandingOutcome { Landed, Diverged, OnSingular };
const char* landing_name(LandingOutcome o);

struct DescentSettings {
  double rtol = 1e-9;
  double atol = 1e-12;
  double grad_tol = 1e-10;
  double box = 10.0;           // |fast|_inf bound before Diverged
  double stall_time = 1e9;     // flow time after which a non-PSD rest point is reported
  long max_steps = 200000;
};

struct LandingResult {
  LandingOutcome outcome = LandingOutcome::Diverged;
  std::optional<TotalPoint> landing;
  double potential_drop = 0.0;
  std::vector<Vec> path_samples;  // fast coordinates
  std::string diagnostics;
};

// Gradient flow x' = -dV/dx at frozen slow parameters.
LandingResult fast_descent(const CatastropheFamily& fam, const TotalPoint& start,
                           const DescentSettings& s = {});

// Move q by `magnitude` along the Hessian null direction, toward decreasing V.
TotalPoint perturb_off_singular(const CatastropheFamily& fam, const TotalPoint& q,
                                double magnitude = 1e-6);

// True if q is on S_V with a singular fast Hessian (relative tolerance).
bool on_singular_set(const CatastropheFamily& fam, const TotalPoint& q, double tol = 1e-8);

// Closed-form landing for swallowtail B points. The landing root is
// -x + sqrt(-2x^2 - a); finite jumps exist for a < 0 and
// x in (-sqrt(-a/6), sqrt(-a/2)]. Throws DomainError otherwise.
TotalPoint swallowtail_jump_map(const TotalPoint& q);
// The other root of the quadratic factor:
// -x - sqrt(-2x^2 - a), a fiber maximum.
double swallowtail_maximum_root(const TotalPoint& q);

// (x, a, b) -> (-2x, a, b) on the cusp fold.
TotalPoint cusp_jump_map(const TotalPoint& q);

struct JumpCandidate {
  TotalPoint point;
  SetMembership membership;
  bool is_query = false;
  bool reached_by_descent = false;
  bool admissible = false;
  std::string reason;
};

struct JumpSearchReport {
  TotalPoint query;
  std::vector<JumpCandidate> candidates;
  std::vector<TotalPoint> admissible;
  LandingResult descent;
  bool complete = true;
  int grid_count = -1;       // 2-D only
  int resultant_count = -1;  // 2-D only
  std::vector<std::string> diagnostics;
};

struct JumpSearchSettings {
  int grid = 64;
  double dedup_radius = 1e-6;
  double match_tol = 1e-7;
  bool parallel = true;
  DescentSettings descent;
};

JumpSearchReport search_finite_jump(const CatastropheFamily& fam, const TotalPoint& q,
                                    const JumpSearchSettings& s = {});

}  // namespace cde
