#include "cde/desingularization.hpp"

#include <cmath>

#include "cde/errors.hpp"

namespace cde {

VarValues var_values(const TotalPoint& p) {
  VarValues v{};
  for (int i = 0; i < p.fast.size(); ++i) v[kX + i] = p.fast[i];
  for (int k = 0; k < p.slow.size(); ++k) v[kA + k] = p.slow[k];
  return v;
}

Vec CdeSpec::eval_g(const TotalPoint& p) const {
  VarValues v = var_values(p);
  Vec out(g.size());
  for (size_t i = 0; i < g.size(); ++i) out[i] = g[i](v);
  return out;
}

Vec CdeSpec::g_at_origin() const {
  Vec out(g.size());
  for (size_t i = 0; i < g.size(); ++i) out[i] = g[i].constant_term();
  return out;
}

void CdeSpec::validate() const {
  if (static_cast<int>(g.size()) != family.slow_dim)
    throw ArgumentError("g has " + std::to_string(g.size()) + " components, family " +
                        family_name(family.tag) + " has slow_dim " +
                        std::to_string(family.slow_dim));
  static const char* comp[] = {"a", "b", "c", "d"};
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i].total_degree() > degree_cap)
      throw ArgumentError(std::string("g[") + comp[i] + "] has degree " +
                          std::to_string(g[i].total_degree()) + " above cap " +
                          std::to_string(degree_cap));
    if (family.fast_dim == 1 && g[i].depends_on(kY))
      throw ArgumentError(std::string("g[") + comp[i] + "] uses y but " +
                          family_name(family.tag) + " has one fast variable");
    for (int k = family.slow_dim; k < 4; ++k)
      if (g[i].depends_on(kA + k))
        throw ArgumentError(std::string("g[") + comp[i] + "] uses parameter " + var_name(kA + k) +
                            " beyond slow_dim");
    for (const auto& [e, c] : g[i].terms())
      if (!std::isfinite(c))
        throw ArgumentError(std::string("g[") + comp[i] + "] has a non-finite coefficient");
  }
}

Vec projection_restricted(const CatastropheFamily& fam, const ChartPoint& chart) {
  return lift_to_constraint(fam, chart).slow;
}

Mat jacobian_projection(const CatastropheFamily& fam, const ChartPoint& chart) {
  const int m = fam.slow_dim;
  if (fam.tag == FamilyTag::Morse) {
    if (chart.size() != m) throw ArgumentError("chart dimension mismatch");
    return Mat::Identity(m, m);
  }
  TotalPoint p = lift_to_constraint(fam, chart);
  const int n = fam.fast_dim;
  std::vector<int> fr = free_params(fam);
  std::vector<int> el = eliminated_params(fam);
  Mat j = Mat::Zero(m, m);
  for (size_t k = 0; k < fr.size(); ++k) j(fr[k], n + k) = 1.0;
  // Hessian of the unsigned potential; the lift does not see the sign.
  CatastropheFamily plain = fam;
  plain.sign = 1;
  Mat h = hessian_fast(plain, p);
  for (int k : el) {
    // Eliminated parameter k pairs with the fast variable it multiplies.
    int i = -1;
    for (int t = 0; t < n; ++t)
      if (mixed_param_derivative(fam, p.fast, t, k) == 1.0 &&
          mixed_param_derivative(fam, p.fast, 1 - t, k) == 0.0)
        i = t;
    if (n == 1) i = 0;
    for (int t = 0; t < n; ++t) j(k, t) = -h(i, t);
    for (size_t q = 0; q < fr.size(); ++q)
      j(k, n + q) = -mixed_param_derivative(fam, p.fast, i, fr[q]);
  }
  return j;
}

double det_projection(const CatastropheFamily& fam, const ChartPoint& chart) {
  return jacobian_projection(fam, chart).determinant();
}

Mat adjugate(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  Mat adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1.0;
    return adj;
  }
  Mat minor(n - 1, n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // cofactor C_ij; adj = C^T
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      double cof = minor.determinant() * (((i + j) % 2) ? -1.0 : 1.0);
      adj(j, i) = cof;
    }
  return adj;
}

ChartVector desingularized_field_generic(const CdeSpec& spec, const ChartPoint& chart) {
  TotalPoint p = lift_to_constraint(spec.family, chart);
  Vec x = spec.eval_g(p);
  return adjugate(jacobian_projection(spec.family, chart)) * x;
}

int closed_form_orientation(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::Swallowtail:
    case FamilyTag::EllipticUmbilic:
    case FamilyTag::HyperbolicUmbilic:
      return +1;
    default:
      throw ArgumentError("no closed form for family " + family_name(tag));
  }
}

ChartVector desingularized_field_closed(const CdeSpec& spec, const ChartPoint& chart) {
  const FamilyTag tag = spec.family.tag;
  const int s = closed_form_orientation(tag);
  if (chart.size() != 3) throw ArgumentError("closed forms need a 3-dimensional chart");
  TotalPoint p = lift_to_constraint(spec.family, chart);
  Vec f = spec.eval_g(p);
  const double fa = f[0], fb = f[1], fc = f[2];
  ChartVector out(3);
  if (tag == FamilyTag::Swallowtail) {
    const double x = chart[0], a = chart[1], b = chart[2];
    const double h = 4 * x * x * x + 2 * a * x + b;
    out << x * x * fa + x * fb + fc, -h * fa, -h * fb;
  } else if (tag == FamilyTag::HyperbolicUmbilic) {
    const double x = chart[0], y = chart[1], a = chart[2];
    out << (a * x - 6 * y * y) * fa - 6 * y * fb + a * fc,
        (a * y - 6 * x * x) * fa + a * fb - 6 * x * fc, (36 * x * y - a * a) * fa;
  } else {
    const double x = chart[0], y = chart[1], a = chart[2];
    out << (12 * x * x - 4 * a * x - 12 * y * y) * fa + (6 * x - 2 * a) * fb - 6 * y * fc,
        -4 * y * (a + 6 * x) * fa - 6 * y * fb - (2 * a + 6 * x) * fc,
        (4 * a * a - 36 * x * x - 36 * y * y) * fa;
  }
  return s * out;
}

}  // namespace cde
