#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cde/integrator.hpp"

namespace cde {

struct SlowFastSpec {
  CdeSpec cde;
  double epsilon = 1e-3;
  void validate() const;
};

struct SlowFastSettings {
  double rtol = 1e-9;
  double atol = 1e-11;
  double step_cap_factor = 0.2;  // explicit steps limited to factor * epsilon
  bool fast_time = false;        // integrate in tau = t / epsilon
  long max_steps = 20000000;
};

// Samples are reported in physical time t for both time scales.
struct SlowFastTrajectory {
  std::vector<double> t;
  std::vector<TotalPoint> state;
  std::vector<Vec> rate;  // d(fast, slow)/dt at each sample
  double error_estimate = 0.0;
  TotalPoint at(double time) const;  // Hermite interpolation
};

// epsilon x' = -dV/dx, alpha' = g.
SlowFastTrajectory integrate_slowfast(const SlowFastSpec& sf, const TotalPoint& start,
                                      double horizon, const SlowFastSettings& s = {});

struct ErrorRow {
  double epsilon = 0.0;
  double sup_slow_error = 0.0;
  double runtime_ms = 0.0;
  std::vector<std::pair<double, double>> excluded_windows;
  std::string note;  // failure message, empty on success
};

struct ErrorTable {
  std::vector<ErrorRow> rows;
  bool monotone() const;  // strictly decreasing errors (or at the 1e-10 floor)
};

struct ConvergenceSettings {
  IntegrationSettings cde;
  SlowFastSettings slowfast;
  bool parallel = true;
};

// The CDE reference starts at the fast-descent landing of `start`.
ErrorTable convergence_study(const CdeSpec& cde, const TotalPoint& start, double horizon,
                             const std::vector<double>& epsilons,
                             const ConvergenceSettings& s = {});

struct BuiltinModel {
  std::string name;
  CdeSpec spec;
  TotalPoint start;  // on S_V,min
  double horizon = 10.0;
};

// Cusp with a = -1 held fixed, b' = x - x0. Relaxation oscillation for
// |x0| < 1/sqrt(3); excitable with a stable rest point otherwise.
BuiltinModel zeeman_heartbeat(double x0 = 0.7);
// Cusp with a' = -2a - 2x, b' = -1 - a.
BuiltinModel zeeman_nerve();

}  // namespace cde
