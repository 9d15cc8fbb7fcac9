#pragma once

#include <string>
#include <vector>

#include "cde/polynomial.hpp"
#include "cde/potentials.hpp"

namespace cde {

// A constrained differential equation (V, X): the potential family plus one
// polynomial per slow component of X = g_a d/da + g_b d/db + ...
struct CdeSpec {
  CatastropheFamily family;
  std::vector<Polynomial> g;
  int degree_cap = 6;
  std::string name;

  Vec eval_g(const TotalPoint& p) const;
  Vec g_at_origin() const;
  void validate() const;  // throws ArgumentError
};

VarValues var_values(const TotalPoint& p);

Vec projection_restricted(const CatastropheFamily& fam, const ChartPoint& chart);
Mat jacobian_projection(const CatastropheFamily& fam, const ChartPoint& chart);
double det_projection(const CatastropheFamily& fam, const ChartPoint& chart);

Mat adjugate(const Mat& m);

// adj(d pi~) * X(lift(chart)), smooth across B.
ChartVector desingularized_field_generic(const CdeSpec& spec, const ChartPoint& chart);

// Closed forms for swallowtail and the two umbilics, evaluated in chart order
// (x,a,b) resp. (x,y,a). Throws ArgumentError for other families.
ChartVector desingularized_field_closed(const CdeSpec& spec, const ChartPoint& chart);

// Global sign relating the closed forms to the adjugate construction.
int closed_form_orientation(FamilyTag tag);

}  // namespace cde
