#include "cde/jumps.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "cde/errors.hpp"
#include "cde/kernels.hpp"
#include "cde/ode.hpp"
#include "cde/roots.hpp"

namespace cde {

const char* landing_name(LandingOutcome o) {
  switch (o) {
    case LandingOutcome::Landed: return "landed";
    case LandingOutcome::Diverged: return "diverged";
    case LandingOutcome::OnSingular: return "on_singular";
  }
  return "?";
}

namespace {

double min_eig(const Mat& h) {
  if (h.rows() == 1) return h(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

TotalPoint with_fast(const TotalPoint& p, const Vec& x) { return TotalPoint{x, p.slow}; }

// Newton on grad V = 0 from x; only accepted if the gradient shrinks.
Vec newton_polish(const CatastropheFamily& fam, const TotalPoint& base, Vec x, double target) {
  for (int it = 0; it < 30; ++it) {
    TotalPoint p = with_fast(base, x);
    Vec g = grad_fast(fam, p);
    if (g.cwiseAbs().maxCoeff() <= target) break;
    Mat h = hessian_fast(fam, p);
    Eigen::FullPivLU<Mat> lu(h);
    if (!lu.isInvertible()) break;
    Vec xn = x - lu.solve(g);
    if (grad_fast(fam, with_fast(base, xn)).cwiseAbs().maxCoeff() >= g.cwiseAbs().maxCoeff())
      break;
    x = xn;
  }
  return x;
}

// V(x + d) - V(x) from the exact Taylor expansion of the fiber polynomial;
// stays accurate when the change is far below the roundoff of V itself.
double potential_change(const CatastropheFamily& fam, const TotalPoint& p, const Vec& d) {
  double sum = 0.0, fact = 1.0;
  for (int k = 1; k <= 6; ++k) {
    fact *= k;
    sum += directional_derivative(fam, p, d, k) / fact;
  }
  return sum;
}

}  // namespace

LandingResult fast_descent(const CatastropheFamily& fam, const TotalPoint& start,
                           const DescentSettings& s) {
  check_dims(fam, start);
  LandingResult res;
  const double v0 = eval_potential(fam, start);
  OdeRhs rhs = [&](const Vec& x) -> Vec { return -grad_fast(fam, with_fast(start, x)); };
  Vec x = start.fast;
  Vec k = rhs(x);
  double v = v0;
  double t = 0.0, h = 1e-3;
  std::vector<double> vals{v0};
  res.path_samples.push_back(x);

  auto finish_landed = [&](Vec xl) {
    double vl = eval_potential(fam, with_fast(start, xl));
    // Roundoff in the polish must not break monotonicity of the samples.
    while (res.path_samples.size() > 1 && vals.back() < vl) {
      res.path_samples.pop_back();
      vals.pop_back();
    }
    res.path_samples.push_back(xl);
    vals.push_back(vl);
    res.outcome = LandingOutcome::Landed;
    res.landing = with_fast(start, xl);
    res.potential_drop = std::max(0.0, v0 - vl);
  };

  for (long step = 0; step < s.max_steps; ++step) {
    TotalPoint p = with_fast(start, x);
    Vec g = -k;
    double gn = g.cwiseAbs().maxCoeff();
    Mat hs = hessian_fast(fam, p);
    double lmin = min_eig(hs);
    if (gn <= 1e-6 && lmin > 1e-8) {
      Vec xp = newton_polish(fam, start, x, 1e-14);
      if (grad_fast(fam, with_fast(start, xp)).cwiseAbs().maxCoeff() <= s.grad_tol) {
        finish_landed(xp);
        return res;
      }
    }
    if (gn <= s.grad_tol && lmin >= -s.grad_tol) {
      finish_landed(x);
      return res;
    }
    if (gn <= s.grad_tol && t > s.stall_time) {
      res.outcome = LandingOutcome::OnSingular;
      res.landing = p;
      res.potential_drop = std::max(0.0, v0 - v);
      res.diagnostics = "gradient flow rests at a non-minimum critical point";
      return res;
    }
    if (x.cwiseAbs().maxCoeff() > s.box) {
      res.outcome = LandingOutcome::Diverged;
      res.diagnostics = "left the fast domain box";
      return res;
    }
    if (gn < 1e-8) {
      // Escape from a degenerate rest point: linearly implicit Euler with
      // the negative curvature clipped; explicit steps would be stiffness-bound.
      Eigen::SelfAdjointEigenSolver<Mat> es(hs);
      Vec lam = es.eigenvalues().cwiseMax(0.0);
      Mat m = es.eigenvectors() * (Vec::Ones(lam.size()) + h * lam).asDiagonal() *
              es.eigenvectors().transpose();
      Vec d = -h * m.ldlt().solve(g);
      double dv = potential_change(fam, p, d);
      if (d.allFinite() && dv < 0.0 && d.cwiseAbs().maxCoeff() <= 1e-2 * (1 + x.norm())) {
        t += h;
        x += d;
        k = rhs(x);
        v += dv;
        double vx = eval_potential(fam, with_fast(start, x));
        if (vx < vals.back()) {
          res.path_samples.push_back(x);
          vals.push_back(vx);
        }
        h = std::min(2.0 * h, 1e12);
      } else {
        h *= 0.5;
        if (h < 1e-300) {
          res.outcome = LandingOutcome::Diverged;
          res.diagnostics = "step size underflow in fast descent";
          return res;
        }
      }
      continue;
    }
    DopriStep st = dopri_step(rhs, x, k, h);
    double e = error_norm(st.err, x, st.y, s.rtol, s.atol);
    double dv = st.y.allFinite() ? potential_change(fam, p, Vec(st.y - x)) : INFINITY;
    if (e <= 1.0 && dv <= 0.0) {
      t += h;
      x = st.y;
      k = st.k_end;
      v += dv;
      double vx = eval_potential(fam, with_fast(start, x));
      if (vx < vals.back()) {
        res.path_samples.push_back(x);
        vals.push_back(vx);
      }
      h *= step_factor(e);
    } else {
      h *= (e > 1.0 && std::isfinite(e)) ? std::max(0.2, step_factor(e)) : 0.5;
      if (h < 1e-300) {
        res.outcome = LandingOutcome::Diverged;
        res.diagnostics = "step size underflow in fast descent";
        return res;
      }
    }
    h = std::min(h, 1e12);
  }
  res.outcome = LandingOutcome::Diverged;
  res.diagnostics = "max descent steps exhausted";
  return res;
}

bool on_singular_set(const CatastropheFamily& fam, const TotalPoint& q, double tol) {
  double sc = 1.0 + q.fast.cwiseAbs().maxCoeff() + q.slow.cwiseAbs().maxCoeff();
  Vec g = grad_fast(fam, q);
  if (g.cwiseAbs().maxCoeff() > tol * sc * sc * sc) return false;
  Mat h = hessian_fast(fam, q);
  double smallest;
  if (h.rows() == 1) {
    smallest = std::abs(h(0, 0));
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    smallest = es.eigenvalues().cwiseAbs().minCoeff();
  }
  return smallest <= tol * sc * sc;
}

TotalPoint perturb_off_singular(const CatastropheFamily& fam, const TotalPoint& q,
                                double magnitude) {
  check_dims(fam, q);
  Mat h = hessian_fast(fam, q);
  Vec v(fam.fast_dim);
  if (fam.fast_dim == 1) {
    v << 1.0;
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    int i = std::abs(es.eigenvalues()[0]) <= std::abs(es.eigenvalues()[1]) ? 0 : 1;
    v = es.eigenvectors().col(i);
  }
  double k3 = directional_derivative(fam, q, v, 3);
  double sign = 1.0;
  if (std::abs(k3) > 1e-12) {
    sign = k3 > 0 ? -1.0 : 1.0;
  } else {
    double k5 = directional_derivative(fam, q, v, 5);
    if (std::abs(k5) > 1e-12) sign = k5 > 0 ? -1.0 : 1.0;
  }
  TotalPoint p = q;
  p.fast += sign * magnitude * v;
  return p;
}

TotalPoint swallowtail_jump_map(const TotalPoint& q) {
  CatastropheFamily fam = CatastropheFamily::make(FamilyTag::Swallowtail);
  check_dims(fam, q);
  if (!on_singular_set(fam, q)) throw PreconditionError("swallowtail_jump_map: q is not on B");
  const double x = q.fast[0], a = q.slow[0];
  if (!(a < 0)) throw DomainError("swallowtail_jump_map: no finite jump for a >= 0");
  const double right = std::sqrt(-a / 2.0), left = -std::sqrt(-a / 6.0);
  if (x <= left)
    throw DomainError("swallowtail_jump_map: descent from x <= -sqrt(-a/6) is unbounded");
  if (x > right * (1.0 + 1e-14))
    throw DomainError("swallowtail_jump_map: x > sqrt(-a/2), no other critical point");
  TotalPoint out = q;
  double disc = -2.0 * x * x - a;
  out.fast[0] = (disc <= 0.0) ? -x : -x + std::sqrt(disc);
  return out;
}

double swallowtail_maximum_root(const TotalPoint& q) {
  const double x = q.fast[0], a = q.slow[0];
  double disc = -2.0 * x * x - a;
  if (disc < 0) throw DomainError("swallowtail_maximum_root: negative discriminant");
  return -x - std::sqrt(disc);
}

TotalPoint cusp_jump_map(const TotalPoint& q) {
  if (q.fast.size() != 1 || q.slow.size() < 2)
    throw ArgumentError("cusp_jump_map expects (x, a, b[, c])");
  CatastropheFamily fam =
      CatastropheFamily::make(FamilyTag::Cusp, static_cast<int>(q.slow.size()));
  if (!on_singular_set(fam, q)) throw PreconditionError("cusp_jump_map: q is not on B");
  TotalPoint out = q;
  out.fast[0] = -2.0 * q.fast[0];
  return out;
}

namespace {

std::vector<Vec> grid_fiber_points(const CatastropheFamily& fam, const TotalPoint& q,
                                   double radius, int grid, bool parallel, double dedup) {
  NewtonProblem p;
  p.f = [&](const Vec& x) { return grad_fast(fam, TotalPoint{x, q.slow}); };
  p.jac = [&](const Vec& x) { return hessian_fast(fam, TotalPoint{x, q.slow}); };
  p.ftol = 1e-11;
  Vec lo = Vec::Constant(2, -radius), hi = Vec::Constant(2, radius);
  return parallel ? grid_newton_parallel(p, lo, hi, grid, dedup)
                  : grid_newton_serial(p, lo, hi, grid, dedup);
}

// Merge points near q into q and deduplicate the rest.
std::vector<Vec> merge_near_query(const std::vector<Vec>& pts, const Vec& q, double r) {
  std::vector<Vec> out;
  for (const Vec& p : pts)
    if ((p - q).cwiseAbs().maxCoeff() > r) out.push_back(p);
  return dedup_points(out, r);
}

}  // namespace

JumpSearchReport search_finite_jump(const CatastropheFamily& fam, const TotalPoint& q,
                                    const JumpSearchSettings& s) {
  check_dims(fam, q);
  if (fam.codim() == 0) throw ArgumentError("search_finite_jump needs a catastrophe family");
  if (!on_singular_set(fam, q)) throw PreconditionError("search_finite_jump: q is not on B");
  JumpSearchReport rep;
  rep.query = q;
  const double near_q = 1e-4 * (1.0 + q.fast.cwiseAbs().maxCoeff());

  std::vector<Vec> others;
  if (fam.fast_dim == 1) {
    for (double r : fiber_critical_points_1d(fam, q.slow)) {
      Vec x(1);
      x << r;
      others.push_back(x);
    }
    others = merge_near_query(others, q.fast, near_q);
  } else {
    ResultantSolve rs = resultant_critical_points(fam, q.slow);
    std::vector<Vec> res_pts = merge_near_query(rs.points, q.fast, near_q);
    double bound = 3.0;
    for (const Vec& p : res_pts) bound = std::max(bound, 1.5 * p.cwiseAbs().maxCoeff());
    std::vector<Vec> grid_pts =
        merge_near_query(grid_fiber_points(fam, q, bound, s.grid, s.parallel, s.dedup_radius),
                         q.fast, near_q);
    if (grid_pts.size() != res_pts.size())
      grid_pts = merge_near_query(
          grid_fiber_points(fam, q, 2.0 * bound, s.grid, s.parallel, s.dedup_radius), q.fast,
          near_q);
    rep.grid_count = static_cast<int>(grid_pts.size());
    rep.resultant_count = rs.complete ? static_cast<int>(res_pts.size()) : -1;
    if (!rs.complete) {
      rep.complete = false;
      rep.diagnostics.push_back("resultant: " + rs.note);
    } else if (grid_pts.size() != res_pts.size()) {
      rep.complete = false;
      rep.diagnostics.push_back("grid Newton found " + std::to_string(grid_pts.size()) +
                                " fiber critical points, resultant " +
                                std::to_string(res_pts.size()));
    }
    others = res_pts;
    for (const Vec& g : grid_pts) others.push_back(g);
    others = dedup_points(others, 1e-6 * (1.0 + near_q));
  }

  rep.descent = fast_descent(fam, perturb_off_singular(fam, q), s.descent);
  bool descent_matched = false;

  JumpCandidate self;
  self.point = q;
  self.membership = classify_membership(fam, q, 1e-8);
  self.is_query = true;
  self.reason = "query point";
  rep.candidates.push_back(self);

  for (const Vec& x : others) {
    JumpCandidate c;
    c.point = TotalPoint{x, q.slow};  // slow coordinates copied exactly
    c.membership = classify_membership(fam, c.point, 1e-8);
    bool psd = c.membership.on_constraint && c.membership.attracting != Attracting::Outside;
    if (rep.descent.outcome == LandingOutcome::Landed &&
        (rep.descent.landing->fast - x).cwiseAbs().maxCoeff() <= s.match_tol * (1 + x.norm())) {
      c.reached_by_descent = true;
      descent_matched = true;
    }
    if (!c.membership.on_constraint) c.reason = "not a critical point within tolerance";
    else if (!psd) c.reason = "not in S_V,min";
    else if (!c.reached_by_descent) c.reason = "no V-decreasing fiber path from the query";
    else if (!(eval_potential(fam, c.point) < eval_potential(fam, q))) c.reason = "V does not decrease";
    else {
      c.admissible = true;
      c.reason = "finite jump";
      rep.admissible.push_back(c.point);
    }
    rep.candidates.push_back(c);
  }
  if (rep.descent.outcome == LandingOutcome::Landed && !descent_matched &&
      (rep.descent.landing->fast - q.fast).cwiseAbs().maxCoeff() > near_q) {
    rep.complete = false;
    rep.diagnostics.push_back("descent landing not among enumerated critical points");
  }
  return rep;
}

}  // namespace cde
