#include "cde/potentials.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cde/errors.hpp"

namespace cde {

namespace {

constexpr int kMaxX = 7;  // x^0 .. x^6
constexpr int kMaxY = 5;  // y^0 .. y^4

// Dense bivariate polynomial in the fast variables: c[i][j] * x^i y^j.
struct BiPoly {
  std::array<std::array<double, kMaxY>, kMaxX> c{};
};

// V(x, alpha) = base(x) + sum_p alpha_p * unfold[p](x).
struct FamilyData {
  int fast_dim = 1;
  int codim = 0;
  BiPoly base;
  std::vector<BiPoly> unfold;
};

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

double ipow(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

double bi_deriv(const BiPoly& p, int dx, int dy, double x, double y) {
  double s = 0.0;
  for (int i = dx; i < kMaxX; ++i)
    for (int j = dy; j < kMaxY; ++j) {
      double c = p.c[i][j];
      if (c == 0.0) continue;
      s += c * falling(i, dx) * falling(j, dy) * ipow(x, i - dx) * ipow(y, j - dy);
    }
  return s;
}

BiPoly mono(int i, int j, double c) {
  BiPoly p;
  p.c[i][j] = c;
  return p;
}

BiPoly plus(BiPoly a, const BiPoly& b) {
  for (int i = 0; i < kMaxX; ++i)
    for (int j = 0; j < kMaxY; ++j) a.c[i][j] += b.c[i][j];
  return a;
}

FamilyData build(FamilyTag tag) {
  FamilyData d;
  switch (tag) {
    case FamilyTag::NonCritical:
      d.base = mono(1, 0, 1.0);
      break;
    case FamilyTag::Morse:
      d.base = mono(2, 0, 0.5);
      break;
    case FamilyTag::Fold:
      d.codim = 1;
      d.base = mono(3, 0, 1.0 / 3.0);
      d.unfold = {mono(1, 0, 1.0)};
      break;
    case FamilyTag::Cusp:
      d.codim = 2;
      d.base = mono(4, 0, 0.25);
      d.unfold = {mono(2, 0, 0.5), mono(1, 0, 1.0)};
      break;
    case FamilyTag::Swallowtail:
      d.codim = 3;
      d.base = mono(5, 0, 0.2);
      d.unfold = {mono(3, 0, 1.0 / 3.0), mono(2, 0, 0.5), mono(1, 0, 1.0)};
      break;
    case FamilyTag::EllipticUmbilic:
      d.fast_dim = 2;
      d.codim = 3;
      d.base = plus(mono(3, 0, 1.0), mono(1, 2, -3.0));
      d.unfold = {plus(mono(2, 0, 1.0), mono(0, 2, 1.0)), mono(1, 0, 1.0), mono(0, 1, 1.0)};
      break;
    case FamilyTag::HyperbolicUmbilic:
      d.fast_dim = 2;
      d.codim = 3;
      d.base = plus(mono(3, 0, 1.0), mono(0, 3, 1.0));
      d.unfold = {mono(1, 1, 1.0), mono(1, 0, 1.0), mono(0, 1, 1.0)};
      break;
    case FamilyTag::Butterfly:
      d.codim = 4;
      d.base = mono(6, 0, 1.0 / 6.0);
      d.unfold = {mono(4, 0, 0.25), mono(3, 0, 1.0 / 3.0), mono(2, 0, 0.5), mono(1, 0, 1.0)};
      break;
    case FamilyTag::ParabolicUmbilic:
      d.fast_dim = 2;
      d.codim = 4;
      d.base = plus(mono(2, 1, 1.0), mono(0, 4, 1.0));
      d.unfold = {mono(2, 0, 1.0), mono(0, 2, 1.0), mono(1, 0, 1.0), mono(0, 1, 1.0)};
      break;
  }
  return d;
}

const FamilyData& data(FamilyTag tag) {
  static const std::array<FamilyData, 9> table = {
      build(FamilyTag::NonCritical),       build(FamilyTag::Morse),
      build(FamilyTag::Fold),              build(FamilyTag::Cusp),
      build(FamilyTag::Swallowtail),       build(FamilyTag::EllipticUmbilic),
      build(FamilyTag::HyperbolicUmbilic), build(FamilyTag::Butterfly),
      build(FamilyTag::ParabolicUmbilic)};
  return table[static_cast<int>(tag)];
}

// Index of the fast variable a parameter multiplies linearly, or -1.
int linear_fast_index(const BiPoly& p) {
  int hit = -1;
  for (int i = 0; i < kMaxX; ++i)
    for (int j = 0; j < kMaxY; ++j) {
      if (p.c[i][j] == 0.0) continue;
      if (i == 1 && j == 0 && p.c[i][j] == 1.0 && hit == -1) hit = 0;
      else if (i == 0 && j == 1 && p.c[i][j] == 1.0 && hit == -1) hit = 1;
      else return -1;
    }
  return hit;
}

double fx(const Vec& fast) { return fast.size() > 0 ? fast[0] : 0.0; }
double fy(const Vec& fast) { return fast.size() > 1 ? fast[1] : 0.0; }

// Unsigned partial d^(i+j)/dx^i dy^j of V.
double raw_partial(const FamilyData& d, const TotalPoint& p, int i, int j) {
  double x = fx(p.fast), y = fy(p.fast);
  double s = bi_deriv(d.base, i, j, x, y);
  for (int k = 0; k < d.codim && k < p.slow.size(); ++k) s += p.slow[k] * bi_deriv(d.unfold[k], i, j, x, y);
  return s;
}

}  // namespace

std::string family_name(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::NonCritical: return "non_critical";
    case FamilyTag::Morse: return "morse";
    case FamilyTag::Fold: return "fold";
    case FamilyTag::Cusp: return "cusp";
    case FamilyTag::Swallowtail: return "swallowtail";
    case FamilyTag::EllipticUmbilic: return "elliptic_umbilic";
    case FamilyTag::HyperbolicUmbilic: return "hyperbolic_umbilic";
    case FamilyTag::Butterfly: return "butterfly";
    case FamilyTag::ParabolicUmbilic: return "parabolic_umbilic";
  }
  return "?";
}

FamilyTag family_from_name(std::string_view name) {
  for (int i = 0; i < 9; ++i) {
    auto t = static_cast<FamilyTag>(i);
    if (family_name(t) == name) return t;
  }
  throw ArgumentError("unknown family '" + std::string(name) + "'");
}

CatastropheFamily CatastropheFamily::make(FamilyTag tag, int slow_dim, int sign) {
  const FamilyData& d = data(tag);
  CatastropheFamily f;
  f.tag = tag;
  f.fast_dim = d.fast_dim;
  if (slow_dim < 0) slow_dim = (d.codim == 0) ? 3 : d.codim;
  if (slow_dim < d.codim || slow_dim > 4)
    throw ArgumentError("slow_dim " + std::to_string(slow_dim) + " invalid for family " +
                        family_name(tag));
  if (sign != 1 && sign != -1) throw ArgumentError("potential sign must be +1 or -1");
  f.slow_dim = slow_dim;
  f.sign = sign;
  return f;
}

int CatastropheFamily::codim() const { return data(tag).codim; }

const char* attracting_name(Attracting a) {
  switch (a) {
    case Attracting::Interior: return "interior";
    case Attracting::Boundary: return "boundary";
    case Attracting::Outside: return "outside";
  }
  return "?";
}

void check_dims(const CatastropheFamily& fam, const TotalPoint& p) {
  if (p.fast.size() != fam.fast_dim || p.slow.size() != fam.slow_dim)
    throw ArgumentError("point has dims (" + std::to_string(p.fast.size()) + "," +
                        std::to_string(p.slow.size()) + "), family " + family_name(fam.tag) +
                        " expects (" + std::to_string(fam.fast_dim) + "," +
                        std::to_string(fam.slow_dim) + ")");
}

double eval_potential(const CatastropheFamily& fam, const TotalPoint& p) {
  check_dims(fam, p);
  return fam.sign * raw_partial(data(fam.tag), p, 0, 0);
}

Vec grad_fast(const CatastropheFamily& fam, const TotalPoint& p) {
  check_dims(fam, p);
  const FamilyData& d = data(fam.tag);
  Vec g(fam.fast_dim);
  g[0] = fam.sign * raw_partial(d, p, 1, 0);
  if (fam.fast_dim == 2) g[1] = fam.sign * raw_partial(d, p, 0, 1);
  return g;
}

Mat hessian_fast(const CatastropheFamily& fam, const TotalPoint& p) {
  check_dims(fam, p);
  const FamilyData& d = data(fam.tag);
  Mat h(fam.fast_dim, fam.fast_dim);
  h(0, 0) = fam.sign * raw_partial(d, p, 2, 0);
  if (fam.fast_dim == 2) {
    h(0, 1) = h(1, 0) = fam.sign * raw_partial(d, p, 1, 1);
    h(1, 1) = fam.sign * raw_partial(d, p, 0, 2);
  }
  return h;
}

double fast_partial(const CatastropheFamily& fam, const TotalPoint& p, int i, int j) {
  check_dims(fam, p);
  return fam.sign * raw_partial(data(fam.tag), p, i, j);
}

int fiber_degree(const CatastropheFamily& fam, int var) {
  const FamilyData& d = data(fam.tag);
  int deg = 0;
  auto scan = [&](const BiPoly& b) {
    for (int i = 0; i < kMaxX; ++i)
      for (int j = 0; j < kMaxY; ++j)
        if (b.c[i][j] != 0.0) deg = std::max(deg, var == 0 ? i : j);
  };
  scan(d.base);
  for (const auto& u : d.unfold) scan(u);
  return deg;
}

double directional_derivative(const CatastropheFamily& fam, const TotalPoint& p, const Vec& v,
                              int k) {
  check_dims(fam, p);
  const FamilyData& d = data(fam.tag);
  if (fam.fast_dim == 1) return fam.sign * raw_partial(d, p, k, 0) * ipow(v[0], k);
  double s = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= k; ++i) {
    if (i > 0) binom = binom * (k - i + 1) / i;
    if (i >= kMaxX || k - i >= kMaxY) continue;
    s += binom * ipow(v[0], i) * ipow(v[1], k - i) * raw_partial(d, p, i, k - i);
  }
  return fam.sign * s;
}

SetMembership classify_membership(const CatastropheFamily& fam, const TotalPoint& p, double tol) {
  if (!(tol > 0)) throw ArgumentError("tol must be positive");
  SetMembership m;
  Vec g = grad_fast(fam, p);
  m.residual_constraint = g.cwiseAbs().maxCoeff();
  m.on_constraint = m.residual_constraint <= tol;
  Mat h = hessian_fast(fam, p);
  if (fam.fast_dim == 1) {
    m.hessian_eigenvalues = h.col(0);
  } else {
    double tr = h(0, 0) + h(1, 1);
    double dif = h(0, 0) - h(1, 1);
    double r = std::hypot(dif, 2.0 * h(0, 1));
    m.hessian_eigenvalues.resize(2);
    m.hessian_eigenvalues << 0.5 * (tr - r), 0.5 * (tr + r);
  }
  double lmin = m.hessian_eigenvalues.minCoeff();
  m.singular = m.hessian_eigenvalues.cwiseAbs().minCoeff() <= tol;
  if (!m.on_constraint || lmin < -tol)
    m.attracting = Attracting::Outside;
  else if (lmin > tol)
    m.attracting = Attracting::Interior;
  else
    m.attracting = Attracting::Boundary;
  return m;
}

std::vector<int> eliminated_params(const CatastropheFamily& fam) {
  const FamilyData& d = data(fam.tag);
  std::vector<int> out;
  for (int k = 0; k < d.codim; ++k)
    if (linear_fast_index(d.unfold[k]) >= 0) out.push_back(k);
  return out;
}

std::vector<int> free_params(const CatastropheFamily& fam) {
  std::vector<int> elim = eliminated_params(fam);
  std::vector<int> out;
  for (int k = 0; k < fam.slow_dim; ++k)
    if (std::find(elim.begin(), elim.end(), k) == elim.end()) out.push_back(k);
  return out;
}

int chart_dim(const CatastropheFamily& fam) { return fam.slow_dim; }

std::vector<std::string> chart_names(const CatastropheFamily& fam) {
  static const char* slow_names[] = {"a", "b", "c", "d"};
  std::vector<std::string> n;
  if (fam.codim() > 0) {
    n.push_back("x");
    if (fam.fast_dim == 2) n.push_back("y");
  }
  for (int k : free_params(fam)) n.push_back(slow_names[k]);
  return n;
}

std::vector<std::string> total_names(const CatastropheFamily& fam) {
  static const char* slow_names[] = {"a", "b", "c", "d"};
  std::vector<std::string> n{"x"};
  if (fam.fast_dim == 2) n.push_back("y");
  for (int k = 0; k < fam.slow_dim; ++k) n.push_back(slow_names[k]);
  return n;
}

TotalPoint lift_to_constraint(const CatastropheFamily& fam, const ChartPoint& chart) {
  if (chart.size() != fam.slow_dim)
    throw ArgumentError("chart point has " + std::to_string(chart.size()) + " coordinates, " +
                        family_name(fam.tag) + " chart needs " + std::to_string(fam.slow_dim));
  TotalPoint p;
  p.fast = Vec::Zero(fam.fast_dim);
  p.slow = Vec::Zero(fam.slow_dim);
  if (fam.tag == FamilyTag::NonCritical)
    throw PreconditionError("non_critical potential has no critical points; S_V is empty");
  if (fam.tag == FamilyTag::Morse) {
    p.slow = chart;
    return p;
  }
  const FamilyData& d = data(fam.tag);
  for (int i = 0; i < fam.fast_dim; ++i) p.fast[i] = chart[i];
  std::vector<int> fr = free_params(fam);
  for (size_t k = 0; k < fr.size(); ++k) p.slow[fr[k]] = chart[fam.fast_dim + k];
  double x = fx(p.fast), y = fy(p.fast);
  for (int k : eliminated_params(fam)) {
    int i = linear_fast_index(d.unfold[k]);
    double s = bi_deriv(d.base, i == 0, i == 1, x, y);
    for (int q : fr)
      if (q < d.codim) s += p.slow[q] * bi_deriv(d.unfold[q], i == 0, i == 1, x, y);
    p.slow[k] = -s;
  }
  return p;
}

ChartPoint chart_of(const CatastropheFamily& fam, const TotalPoint& p) {
  check_dims(fam, p);
  if (fam.tag == FamilyTag::Morse || fam.tag == FamilyTag::NonCritical) return p.slow;
  ChartPoint c(fam.slow_dim);
  for (int i = 0; i < fam.fast_dim; ++i) c[i] = p.fast[i];
  std::vector<int> fr = free_params(fam);
  for (size_t k = 0; k < fr.size(); ++k) c[fam.fast_dim + k] = p.slow[fr[k]];
  return c;
}

double mixed_param_derivative(const CatastropheFamily& fam, const Vec& fast, int fast_index,
                              int param) {
  const FamilyData& d = data(fam.tag);
  if (param >= d.codim) return 0.0;
  return bi_deriv(d.unfold[param], fast_index == 0, fast_index == 1, fx(fast), fy(fast));
}

}  // namespace cde
