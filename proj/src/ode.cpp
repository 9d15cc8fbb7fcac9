#include "cde/ode.hpp"

#include <algorithm>
#include <cmath>

#include "cde/errors.hpp"

namespace cde {

namespace {
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace

DopriStep dopri_step(const OdeRhs& f, const Vec& y, const Vec& k1, double h) {
  Vec k2 = f(y + h * a21 * k1);
  Vec k3 = f(y + h * (a31 * k1 + a32 * k2));
  Vec k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  Vec k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  Vec k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  DopriStep s;
  s.y = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  s.k_end = f(s.y);
  s.err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * s.k_end);
  return s;
}

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double rtol, double atol) {
  double s = 0.0;
  for (int i = 0; i < err.size(); ++i) {
    double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    double r = err[i] / sc;
    s += r * r;
  }
  return err.size() ? std::sqrt(s / err.size()) : 0.0;
}

double step_factor(double e) {
  if (!(e > 0)) return 5.0;
  return std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
}

Vec hermite(const Vec& y0, const Vec& f0, const Vec& y1, const Vec& f1, double h,
            double th) {
  double t2 = th * th, t3 = t2 * th;
  double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + th;
  double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1;
}

OdeSolution integrate_adaptive(const OdeRhs& f, const Vec& y0, double t1,
                               const OdeSettings& s) {
  if (!(t1 >= 0)) throw ArgumentError("integration horizon must be non-negative");
  OdeSolution sol;
  double t = 0.0;
  Vec y = y0;
  Vec k = f(y);
  sol.t.push_back(t);
  sol.y.push_back(y);
  sol.f.push_back(k);
  double h = std::min(s.h0, s.max_step);
  long steps = 0;
  while (t < t1) {
    if (++steps > s.max_steps) throw NumericalError("ODE step budget exhausted");
    h = std::min({h, s.max_step, t1 - t});
    if (h < s.min_step && t1 - t > s.min_step)
      throw NumericalError("ODE step size underflow at t=" + std::to_string(t));
    DopriStep st = dopri_step(f, y, k, h);
    double e = error_norm(st.err, y, st.y, s.rtol, s.atol);
    if (!std::isfinite(e)) {
      h *= 0.25;
      continue;
    }
    if (e <= 1.0) {
      t = (t1 - t <= h) ? t1 : t + h;
      y = st.y;
      k = st.k_end;
      sol.error_estimate += st.err.cwiseAbs().maxCoeff();
      sol.t.push_back(t);
      sol.y.push_back(y);
      sol.f.push_back(k);
    }
    h *= step_factor(e);
  }
  return sol;
}

Vec dense_eval(const OdeSolution& sol, double t) {
  if (sol.t.empty()) throw ArgumentError("empty solution");
  if (t <= sol.t.front()) return sol.y.front();
  if (t >= sol.t.back()) return sol.y.back();
  auto it = std::upper_bound(sol.t.begin(), sol.t.end(), t);
  size_t i = static_cast<size_t>(it - sol.t.begin()) - 1;
  double h = sol.t[i + 1] - sol.t[i];
  if (h <= 0) return sol.y[i];
  return hermite(sol.y[i], sol.f[i], sol.y[i + 1], sol.f[i + 1], h, (t - sol.t[i]) / h);
}

}  // namespace cde
