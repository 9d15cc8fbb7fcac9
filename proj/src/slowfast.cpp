#include "cde/slowfast.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cde/errors.hpp"
#include "cde/kernels.hpp"
#include "cde/ode.hpp"

namespace cde {

void SlowFastSpec::validate() const {
  cde.validate();
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw ArgumentError("epsilon must be > 0");
}

TotalPoint SlowFastTrajectory::at(double time) const {
  if (t.empty()) throw PreconditionError("empty slow-fast trajectory");
  const int n = static_cast<int>(state.front().fast.size());
  auto flat = [&](std::size_t i) {
    Vec w(n + state[i].slow.size());
    w << state[i].fast, state[i].slow;
    return w;
  };
  std::size_t i = std::upper_bound(t.begin(), t.end(), time) - t.begin();
  if (i == 0) i = 1;
  if (i >= t.size()) i = t.size() - 1;
  Vec w;
  if (t.size() == 1) {
    w = flat(0);
  } else {
    double h = t[i] - t[i - 1];
    double th = std::clamp((time - t[i - 1]) / h, 0.0, 1.0);
    w = hermite(flat(i - 1), rate[i - 1], flat(i), rate[i], h, th);
  }
  return TotalPoint{w.head(n), w.tail(w.size() - n)};
}

SlowFastTrajectory integrate_slowfast(const SlowFastSpec& sf, const TotalPoint& start,
                                      double horizon, const SlowFastSettings& s) {
  sf.validate();
  const CatastropheFamily& fam = sf.cde.family;
  check_dims(fam, start);
  if (!(horizon >= 0)) throw ArgumentError("horizon must be non-negative");
  const long n = fam.fast_dim;
  const double eps = sf.epsilon;
  auto split = [n](const Vec& w) { return TotalPoint{w.head(n), w.tail(w.size() - n)}; };
  // Right-hand side in physical time.
  auto phys = [&](const Vec& w) -> Vec {
    TotalPoint p = split(w);
    Vec out(w.size());
    out.head(n) = -grad_fast(fam, p) / eps;
    out.tail(w.size() - n) = sf.cde.eval_g(p);
    return out;
  };
  Vec w0(n + start.slow.size());
  w0 << start.fast, start.slow;

  OdeSettings os;
  os.rtol = s.rtol;
  os.atol = s.atol;
  os.max_steps = s.max_steps;
  OdeSolution sol;
  double scale = 1.0;
  if (s.fast_time) {
    os.max_step = s.step_cap_factor;
    os.h0 = std::min(1e-3, os.max_step);
    os.min_step = 1e-14;
    sol = integrate_adaptive([&](const Vec& w) { return Vec(eps * phys(w)); }, w0,
                             horizon / eps, os);
    scale = eps;
  } else {
    os.max_step = s.step_cap_factor * eps;
    os.h0 = std::min(1e-3 * eps, os.max_step);
    os.min_step = 1e-14 * eps;
    sol = integrate_adaptive(phys, w0, horizon, os);
  }
  SlowFastTrajectory out;
  out.error_estimate = sol.error_estimate;
  out.t.reserve(sol.t.size());
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    out.t.push_back(sol.t[i] * scale);
    out.state.push_back(split(sol.y[i]));
    out.rate.push_back(sol.f[i] / scale);
  }
  if (s.fast_time && !out.t.empty()) out.t.back() = horizon;
  return out;
}

bool ErrorTable::monotone() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = rows[i - 1].sup_slow_error, b = rows[i].sup_slow_error;
    if (!rows[i].note.empty() || !rows[i - 1].note.empty()) return false;
    if (!(b < a || (a <= 1e-10 && b <= 1e-10))) return false;
  }
  return true;
}

namespace {

ErrorRow study_row(const CdeSpec& cde, const TotalPoint& start, double horizon, double eps,
                   const Trajectory& ref, const ConvergenceSettings& s) {
  ErrorRow row;
  row.epsilon = eps;
  const auto t0 = std::chrono::steady_clock::now();
  const double w = std::cbrt(eps);
  for (const Event& e : ref.events)
    if (e.kind == EventKind::Jump || e.kind == EventKind::SingularCrossing)
      row.excluded_windows.emplace_back(std::max(0.0, e.time - w), e.time + w);
  // The reference ends early at a terminal event; compare up to there only.
  double stop = horizon;
  if (!ref.events.empty() && ref.events.back().kind != EventKind::HorizonReached)
    stop = std::min(stop, ref.events.back().time);
  try {
    SlowFastTrajectory tr = integrate_slowfast({cde, eps}, start, stop, s.slowfast);
    double sup = 0.0;
    for (const Segment& seg : ref.segments) {
      for (std::size_t i = 0; i < seg.t.size(); ++i) {
        const double t = seg.t[i];
        if (t > stop) continue;
        bool skip = false;
        for (const auto& [lo, hi] : row.excluded_windows) skip = skip || (t >= lo && t <= hi);
        if (skip) continue;
        TotalPoint p = tr.at(t);
        sup = std::max(sup, (p.slow - seg.lifted[i].slow).cwiseAbs().maxCoeff());
      }
    }
    row.sup_slow_error = sup;
  } catch (const Error& e) {
    row.sup_slow_error = NAN;
    row.note = e.what();
  }
  row.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

ErrorTable convergence_study(const CdeSpec& cde, const TotalPoint& start, double horizon,
                             const std::vector<double>& epsilons, const ConvergenceSettings& s) {
  cde.validate();
  check_dims(cde.family, start);
  if (epsilons.empty()) throw ArgumentError("convergence_study needs at least one epsilon");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0)) throw ArgumentError("epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      throw ArgumentError("epsilons must be strictly decreasing");
  }
  LandingResult lr = fast_descent(cde.family, start, s.cde.descent);
  if (lr.outcome != LandingOutcome::Landed)
    throw PreconditionError("start does not relax onto S_V: " + lr.diagnostics);
  if (classify_membership(cde.family, *lr.landing).attracting != Attracting::Interior)
    throw PreconditionError("start relaxes to the boundary of S_V,min");
  IntegrationSettings is = s.cde;
  is.horizon = horizon;
  const Trajectory ref = integrate_cde(cde, chart_of(cde.family, *lr.landing), is);

  auto fn = [&](std::size_t i) { return study_row(cde, start, horizon, epsilons[i], ref, s); };
  ErrorTable table;
  table.rows = s.parallel ? map_parallel<ErrorRow>(epsilons.size(), fn)
                          : map_serial<ErrorRow>(epsilons.size(), fn);
  return table;
}

namespace {

TotalPoint cusp2_point(double x, double a) {
  CatastropheFamily fam = CatastropheFamily::make(FamilyTag::Cusp, 2);
  Vec c(2);
  c << x, a;
  return lift_to_constraint(fam, c);
}

}  // namespace

BuiltinModel zeeman_heartbeat(double x0) {
  if (!std::isfinite(x0)) throw ArgumentError("x0 must be finite");
  BuiltinModel m;
  m.name = "zeeman_heartbeat";
  m.spec.family = CatastropheFamily::make(FamilyTag::Cusp, 2);
  m.spec.g = {Polynomial(), Polynomial::var(kX) - Polynomial::constant(x0)};
  m.spec.name = m.name;
  m.spec.validate();
  m.start = cusp2_point(1.0, -1.0);
  m.horizon = 10.0;
  return m;
}

BuiltinModel zeeman_nerve() {
  BuiltinModel m;
  m.name = "zeeman_nerve";
  m.spec.family = CatastropheFamily::make(FamilyTag::Cusp, 2);
  const Polynomial x = Polynomial::var(kX), a = Polynomial::var(kA);
  m.spec.g = {-2.0 * a - 2.0 * x, Polynomial::constant(-1.0) - a};
  m.spec.name = m.name;
  m.spec.validate();
  m.start = cusp2_point(1.1, -1.2);
  m.horizon = 10.0;
  return m;
}

}  // namespace cde
