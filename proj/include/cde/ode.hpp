#pragma once

#include <functional>

#include "cde/potentials.hpp"

namespace cde {

using OdeRhs = std::function<Vec(const Vec&)>;

// One Dormand-Prince 5(4) step. k1 may be passed in (FSAL); k7 is returned.
struct DopriStep {
  Vec y;      // 5th-order solution
  Vec err;    // y5 - y4
  Vec k_end;  // f(y) at the new point
};

DopriStep dopri_step(const OdeRhs& f, const Vec& y, const Vec& k1, double h);

// Weighted RMS error norm used for step acceptance.
double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double rtol, double atol);

// Step-size update factor from an error norm, order 5 controller.
double step_factor(double err_norm);

// Cubic Hermite interpolation between (y0,f0) and (y1,f1) at theta in [0,1].
Vec hermite(const Vec& y0, const Vec& f0, const Vec& y1, const Vec& f1, double h,
            double theta);

struct OdeSettings {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h0 = 1e-3;
  double max_step = 0.05;
  double min_step = 1e-14;
  long max_steps = 2000000;
};

// Fixed-horizon adaptive integration; records every accepted step.
struct OdeSolution {
  std::vector<double> t;
  std::vector<Vec> y;
  std::vector<Vec> f;
  double error_estimate = 0.0;
};

OdeSolution integrate_adaptive(const OdeRhs& f, const Vec& y0, double t1,
                               const OdeSettings& s);

// Evaluate an OdeSolution at time t by Hermite interpolation.
Vec dense_eval(const OdeSolution& sol, double t);

}  // namespace cde
