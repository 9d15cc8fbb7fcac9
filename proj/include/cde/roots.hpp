#pragma once

#include <string>
#include <vector>

#include "cde/potentials.hpp"

namespace cde {

// Univariate polynomial, coefficients low to high degree.
using UPoly = std::vector<double>;

double upoly_eval(const UPoly& p, double x);
UPoly upoly_mul(const UPoly& a, const UPoly& b);
UPoly upoly_add(const UPoly& a, const UPoly& b);
UPoly upoly_trim(UPoly p, double rel = 0.0);

// Real roots via companion-matrix eigenvalues, Newton polished and
// deduplicated, ascending. Throws ArgumentError for the zero polynomial.
std::vector<double> real_roots(const UPoly& p, double imag_tol = 1e-5);

// Coefficients of the fast gradient at fixed slow parameters:
// grad component k as a bivariate table c[i][j] x^i y^j.
using BiTable = std::vector<std::vector<double>>;
BiTable gradient_table(const CatastropheFamily& fam, const Vec& slow, int component);
double bitable_eval(const BiTable& t, double x, double y);

// Critical points of a 2-D fiber by Sylvester resultant in y and
// back-substitution. `complete` is false when the resultant vanishes
// identically (non-isolated solutions).
struct ResultantSolve {
  std::vector<Vec> points;
  int resultant_degree = -1;
  bool complete = true;
  std::string note;
};
ResultantSolve resultant_critical_points(const CatastropheFamily& fam, const Vec& slow);

// Critical points of a 1-D fiber (real roots of dV/dx).
std::vector<double> fiber_critical_points_1d(const CatastropheFamily& fam, const Vec& slow);

}  // namespace cde
