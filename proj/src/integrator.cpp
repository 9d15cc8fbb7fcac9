#include "cde/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "cde/errors.hpp"
#include "cde/ode.hpp"

namespace cde {

const char* event_name(EventKind k) {
  switch (k) {
    case EventKind::SingularCrossing: return "singular_crossing";
    case EventKind::Jump: return "jump";
    case EventKind::Equilibrium: return "equilibrium";
    case EventKind::DomainExit: return "domain_exit";
    case EventKind::HorizonReached: return "horizon_reached";
  }
  return "?";
}

void IntegrationSettings::validate() const {
  if (!(rel_tol > 0 && abs_tol > 0 && max_step > 0 && event_tol > 0 && det_tol > 0 &&
        equilibrium_tol > 0 && box > 0))
    throw ArgumentError("integration tolerances must be positive");
  if (!(horizon >= 0)) throw ArgumentError("horizon must be non-negative");
}

int orientation_factor(const CatastropheFamily& fam, const ChartPoint& chart) {
  double d = det_projection(fam, chart);
  return (d > 0) - (d < 0);
}

double locate_root(const std::function<double(double)>& g, double h, double tol) {
  double a = 0.0, b = h;
  double ga = g(a), gb = g(b);
  if (!(ga > 0 && gb <= 0)) throw ContractError("locate_root: bracket has no sign change");
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    if (b - a <= tol * (1.0 + b)) break;
    double c = (a * gb - b * ga) / (gb - ga);
    if (!(c > a && c < b) || it % 8 == 7) c = 0.5 * (a + b);
    double gc = g(c);
    if (gc > 0) {
      a = c;
      ga = gc;
      if (side == 1) gb *= 0.5;
      side = 1;
    } else {
      b = c;
      gb = gc;
      if (side == -1) ga *= 0.5;
      side = -1;
      if (gc == 0.0) break;
    }
  }
  return b;
}

namespace {

struct State {
  Vec z;     // chart point
  double t;  // physical time
};

Vec pack(const State& s) {
  Vec w(s.z.size() + 1);
  w.head(s.z.size()) = s.z;
  w[s.z.size()] = s.t;
  return w;
}

State unpack(const Vec& w) {
  const long m = w.size() - 1;
  return State{w.head(m), w[m]};
}

void push_sample(Segment& seg, const CatastropheFamily& fam, const State& s) {
  seg.t.push_back(s.t);
  seg.chart.push_back(s.z);
  seg.lifted.push_back(lift_to_constraint(fam, s.z));
  seg.det.push_back(det_projection(fam, s.z));
}

}  // namespace

Trajectory integrate_cde(const CdeSpec& spec, const ChartPoint& start,
                         const IntegrationSettings& s) {
  spec.validate();
  s.validate();
  const CatastropheFamily& fam = spec.family;
  if (start.size() != fam.slow_dim) throw ArgumentError("start chart dimension mismatch");
  {
    SetMembership m = classify_membership(fam, lift_to_constraint(fam, start));
    if (m.attracting != Attracting::Interior)
      throw PreconditionError(std::string("start point is not in the interior of S_V,min (") +
                              attracting_name(m.attracting) + ")");
    if (std::abs(det_projection(fam, start)) <= s.det_tol)
      throw PreconditionError("start point lies on the singular set B");
  }
  Trajectory traj;
  State cur{start, 0.0};
  int jumps = 0;
  long steps = 0;

  while (true) {
    Segment seg;
    const int orient = orientation_factor(fam, cur.z);
    seg.orientation = orient;
    push_sample(seg, fam, cur);
    OdeRhs rhs = [&](const Vec& w) -> Vec {
      State st = unpack(w);
      Vec out(w.size());
      out.head(st.z.size()) = orient * desingularized_field_generic(spec, st.z);
      out[st.z.size()] = orient * det_projection(fam, st.z);
      return out;
    };
    Vec w = pack(cur);
    Vec k = rhs(w);
    double h = std::min(1e-3, s.max_step);
    int quiet = 0;
    std::optional<Event> ev;

    while (!ev) {
      if (++steps > s.max_steps) throw NumericalError("integrate_cde: step budget exhausted");
      DopriStep st = dopri_step(rhs, w, k, h);
      double e = error_norm(st.err, w, st.y, s.rel_tol, s.abs_tol);
      if (!(e <= 1.0)) {
        ++traj.rejected_steps;
        h *= std::isfinite(e) ? step_factor(e) : 0.25;
        if (h < 1e-14)
          throw NumericalError("integrate_cde: step size underflow at t=" +
                               std::to_string(unpack(w).t) + " (event localization failed)");
        continue;
      }
      ++traj.accepted_steps;
      State next = unpack(st.y);

      // Event indicators: positive inside, non-positive once the event fired.
      auto g_det = [&](const State& x) { return orient * det_projection(fam, x.z) - 0.5 * s.det_tol; };
      auto g_hor = [&](const State& x) { return s.horizon - x.t; };
      auto g_box = [&](const State& x) {
        return s.box - x.z.cwiseAbs().maxCoeff();
      };
      std::function<double(const State&)> gs[3] = {g_det, g_hor, g_box};
      const EventKind kinds[3] = {EventKind::SingularCrossing, EventKind::HorizonReached,
                                  EventKind::DomainExit};
      double best = INFINITY;
      int which = -1;
      for (int i = 0; i < 3; ++i) {
        if (gs[i](next) > 0) continue;
        auto g = [&, i](double th) {
          if (th == 0.0) return gs[i](unpack(w));
          return gs[i](unpack(dopri_step(rhs, w, k, th).y));
        };
        double th = (g(0.0) > 0) ? locate_root(g, h, s.event_tol) : 0.0;
        if (th < best) {
          best = th;
          which = i;
        }
      }
      if (which >= 0) {
        State at = (best == 0.0) ? unpack(w) : unpack(dopri_step(rhs, w, k, best).y);
        if (kinds[which] == EventKind::HorizonReached) at.t = s.horizon;
        if (best > 0) push_sample(seg, fam, at);
        cur = at;
        Event e0;
        e0.kind = kinds[which];
        e0.time = at.t;
        e0.at = lift_to_constraint(fam, at.z);
        ev = e0;
        break;
      }
      traj.error_estimate += st.err.cwiseAbs().maxCoeff();
      w = st.y;
      k = st.k_end;
      cur = next;
      push_sample(seg, fam, cur);
      double xnorm = k.head(k.size() - 1).cwiseAbs().maxCoeff();
      quiet = (xnorm < s.equilibrium_tol) ? quiet + 1 : 0;
      if (quiet >= s.equilibrium_steps) {
        Event e0;
        e0.kind = EventKind::Equilibrium;
        e0.time = cur.t;
        e0.at = lift_to_constraint(fam, cur.z);
        ev = e0;
        break;
      }
      h = std::min(h * step_factor(e), s.max_step);
    }

    traj.segments.push_back(std::move(seg));
    if (ev->kind != EventKind::SingularCrossing) {
      traj.events.push_back(*ev);
      return traj;
    }
    // Singular crossing: follow the fast fiber.
    const TotalPoint q = ev->at;
    LandingResult lr = fast_descent(fam, perturb_off_singular(fam, q), s.descent);
    bool ok = false;
    if (lr.outcome == LandingOutcome::Landed) {
      SetMembership m = classify_membership(fam, *lr.landing);
      ChartPoint c = chart_of(fam, *lr.landing);
      if (m.attracting == Attracting::Interior &&
          std::abs(det_projection(fam, c)) > s.det_tol && jumps < s.max_jumps &&
          c.cwiseAbs().maxCoeff() < s.box) {
        ev->kind = EventKind::Jump;
        ev->to = *lr.landing;
        cur = State{c, ev->time};
        ok = true;
        ++jumps;
      } else {
        ev->note = "descent landed on the boundary of S_V,min or outside the domain";
      }
    } else {
      ev->note = std::string("no finite jump: descent ") + landing_name(lr.outcome);
    }
    traj.events.push_back(*ev);
    if (!ok) return traj;
  }
}

}  // namespace cde
