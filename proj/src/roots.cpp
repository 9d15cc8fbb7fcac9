#include "cde/roots.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "cde/errors.hpp"

namespace cde {

double upoly_eval(const UPoly& p, double x) {
  double s = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * x + *it;
  return s;
}

UPoly upoly_mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

UPoly upoly_add(const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

UPoly upoly_trim(UPoly p, double rel) {
  double mx = 0.0;
  for (double c : p) mx = std::max(mx, std::abs(c));
  while (!p.empty() && std::abs(p.back()) <= rel * mx) p.pop_back();
  return p;
}

namespace {

UPoly derivative(const UPoly& p) {
  UPoly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<double>(i));
  return d;
}

double polish(const UPoly& p, double x) {
  UPoly d = derivative(p);
  for (int it = 0; it < 30; ++it) {
    double f = upoly_eval(p, x), df = upoly_eval(d, x);
    if (f == 0.0 || df == 0.0) break;
    double step = f / df;
    double xn = x - step;
    if (std::abs(upoly_eval(p, xn)) >= std::abs(f)) break;
    x = xn;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
  }
  return x;
}

}  // namespace

std::vector<double> real_roots(const UPoly& p_in, double imag_tol) {
  UPoly p = upoly_trim(p_in, 1e-14);
  if (p.empty()) throw ArgumentError("real_roots: zero polynomial");
  std::vector<double> roots;
  // Roots at zero first; they make the companion matrix ill conditioned.
  size_t lead_zero = 0;
  while (lead_zero < p.size() && p[lead_zero] == 0.0) ++lead_zero;
  if (lead_zero > 0) roots.push_back(0.0);
  UPoly q(p.begin() + static_cast<long>(lead_zero), p.end());
  const int n = static_cast<int>(q.size()) - 1;
  if (n >= 1) {
    Mat c = Mat::Zero(n, n);
    for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) c(i, n - 1) = -q[i] / q[n];
    Eigen::EigenSolver<Mat> es(c, false);
    for (int i = 0; i < n; ++i) {
      auto z = es.eigenvalues()[i];
      if (std::abs(z.imag()) <= imag_tol * (1.0 + std::abs(z))) roots.push_back(polish(q, z.real()));
    }
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots)
    if (out.empty() || std::abs(r - out.back()) > 1e-7 * (1.0 + std::abs(r))) out.push_back(r);
  return out;
}

std::vector<double> fiber_critical_points_1d(const CatastropheFamily& fam, const Vec& slow) {
  if (fam.fast_dim != 1) throw ArgumentError("fiber_critical_points_1d needs one fast variable");
  int deg = fiber_degree(fam, 0);
  TotalPoint origin{Vec::Zero(1), slow};
  UPoly p(static_cast<size_t>(deg), 0.0);
  double fact = 1.0;
  for (int i = 0; i < deg; ++i) {
    if (i > 0) fact *= i;
    p[static_cast<size_t>(i)] = fast_partial(fam, origin, i + 1, 0) / fact;
  }
  if (upoly_trim(p).empty()) throw NumericalError("fiber gradient vanishes identically");
  return real_roots(p);
}

BiTable gradient_table(const CatastropheFamily& fam, const Vec& slow, int component) {
  const int dx = fiber_degree(fam, 0), dy = fiber_degree(fam, 1);
  TotalPoint origin{Vec::Zero(fam.fast_dim), slow};
  BiTable t(static_cast<size_t>(dx + 1), std::vector<double>(static_cast<size_t>(dy + 1), 0.0));
  double fi = 1.0;
  for (int i = 0; i <= dx; ++i) {
    if (i > 0) fi *= i;
    double fj = 1.0;
    for (int j = 0; j <= dy; ++j) {
      if (j > 0) fj *= j;
      int di = i + (component == 0), dj = j + (component == 1);
      t[i][j] = fast_partial(fam, origin, di, dj) / (fi * fj);
    }
  }
  return t;
}

double bitable_eval(const BiTable& t, double x, double y) {
  double s = 0.0;
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = 0; j < t[i].size(); ++j)
      if (t[i][j] != 0.0) s += t[i][j] * std::pow(x, static_cast<double>(i)) * std::pow(y, static_cast<double>(j));
  return s;
}

namespace {

// Coefficients of y^j as polynomials in x.
std::vector<UPoly> as_poly_in_y(const BiTable& t) {
  size_t dy = t.empty() ? 0 : t[0].size();
  std::vector<UPoly> out(dy, UPoly(t.size(), 0.0));
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = 0; j < dy; ++j) out[j][i] = t[i][j];
  while (!out.empty() && upoly_trim(out.back()).empty()) out.pop_back();
  return out;
}

using PolyMat = std::vector<std::vector<UPoly>>;

UPoly laplace_det(const PolyMat& m) {
  const size_t n = m.size();
  if (n == 0) return {1.0};
  if (n == 1) return m[0][0];
  UPoly det;
  for (size_t c = 0; c < n; ++c) {
    if (upoly_trim(m[0][c]).empty()) continue;
    PolyMat minor;
    for (size_t r = 1; r < n; ++r) {
      std::vector<UPoly> row;
      for (size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    UPoly term = upoly_mul(m[0][c], laplace_det(minor));
    if (c % 2) for (double& v : term) v = -v;
    det = upoly_add(det, term);
  }
  return det;
}

// Sylvester matrix of P, Q in y (coefficient lists low to high).
PolyMat sylvester(const std::vector<UPoly>& p, const std::vector<UPoly>& q) {
  const int dp = static_cast<int>(p.size()) - 1, dq = static_cast<int>(q.size()) - 1;
  const int n = dp + dq;
  PolyMat s(static_cast<size_t>(n), std::vector<UPoly>(static_cast<size_t>(n), UPoly{}));
  for (int r = 0; r < dq; ++r)
    for (int k = 0; k <= dp; ++k) s[r][r + k] = p[dp - k];
  for (int r = 0; r < dp; ++r)
    for (int k = 0; k <= dq; ++k) s[dq + r][r + k] = q[dq - k];
  return s;
}

UPoly in_y_at(const std::vector<UPoly>& c, double x) {
  UPoly out;
  for (const UPoly& u : c) out.push_back(upoly_eval(u, x));
  return out;
}

Vec newton2(const BiTable& p, const BiTable& q, Vec z) {
  auto f = [&](const Vec& v) {
    Vec r(2);
    r << bitable_eval(p, v[0], v[1]), bitable_eval(q, v[0], v[1]);
    return r;
  };
  for (int it = 0; it < 40; ++it) {
    Vec r = f(z);
    double h = 1e-7 * (1.0 + z.cwiseAbs().maxCoeff());
    Mat j(2, 2);
    for (int k = 0; k < 2; ++k) {
      Vec e = Vec::Zero(2);
      e[k] = h;
      j.col(k) = (f(z + e) - f(z - e)) / (2 * h);
    }
    Eigen::FullPivLU<Mat> lu(j);
    if (!lu.isInvertible()) break;
    Vec zn = z - lu.solve(r);
    if (f(zn).norm() >= r.norm()) break;
    z = zn;
  }
  return z;
}

}  // namespace

ResultantSolve resultant_critical_points(const CatastropheFamily& fam, const Vec& slow) {
  if (fam.fast_dim != 2) throw ArgumentError("resultant solve needs two fast variables");
  ResultantSolve out;
  BiTable tp = gradient_table(fam, slow, 0), tq = gradient_table(fam, slow, 1);
  std::vector<UPoly> p = as_poly_in_y(tp), q = as_poly_in_y(tq);
  if (p.empty() || q.empty()) {
    out.complete = false;
    out.note = "gradient component vanishes identically";
    return out;
  }
  // Degree 0 in y for one component: its x-roots are the candidates directly.
  UPoly res;
  if (p.size() == 1) res = p[0];
  else if (q.size() == 1) res = q[0];
  else res = laplace_det(sylvester(p, q));
  res = upoly_trim(res, 1e-13);
  out.resultant_degree = static_cast<int>(res.size()) - 1;
  if (res.empty()) {
    out.complete = false;
    out.note = "resultant vanishes identically";
    return out;
  }
  std::vector<Vec> pts;
  for (double x : real_roots(res)) {
    UPoly py = upoly_trim(in_y_at(p, x), 1e-12), qy = upoly_trim(in_y_at(q, x), 1e-12);
    const UPoly& use = (py.size() >= 2) ? py : qy;
    const BiTable& other = (py.size() >= 2) ? tq : tp;
    if (use.size() < 2) continue;
    for (double y : real_roots(use)) {
      double scale = 1.0 + std::abs(x) + std::abs(y);
      if (std::abs(bitable_eval(other, x, y)) > 1e-5 * scale * scale) continue;
      Vec z(2);
      z << x, y;
      z = newton2(tp, tq, z);
      // Spurious pairings (wrong y for a clustered x root) do not polish.
      double sc = 1.0 + z.cwiseAbs().maxCoeff();
      double r = std::max(std::abs(bitable_eval(tp, z[0], z[1])), std::abs(bitable_eval(tq, z[0], z[1])));
      if (r > 1e-9 * sc * sc) continue;
      pts.push_back(z);
    }
  }
  std::vector<Vec> ded;
  for (const Vec& z : pts) {
    bool dup = false;
    for (const Vec& w : ded)
      if ((z - w).cwiseAbs().maxCoeff() <= 1e-6) dup = true;
    if (!dup) ded.push_back(z);
  }
  out.points = ded;
  return out;
}

}  // namespace cde
