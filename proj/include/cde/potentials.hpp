#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cde {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Coordinates on S_V: fast variables first, then the free (non-eliminated)
// parameters in alphabetical order. Morse charts are the parameters alone.
using ChartPoint = Vec;
using ChartVector = Vec;

enum class FamilyTag {
  NonCritical,
  Morse,
  Fold,
  Cusp,
  Swallowtail,
  EllipticUmbilic,
  HyperbolicUmbilic,
  Butterfly,
  ParabolicUmbilic,
};

std::string family_name(FamilyTag tag);            // snake_case
FamilyTag family_from_name(std::string_view name);  // throws ArgumentError

struct CatastropheFamily {
  FamilyTag tag = FamilyTag::Morse;
  int fast_dim = 1;
  int slow_dim = 3;
  // Overall sign of V; -1 gives the dual potential -V.
  int sign = +1;

  // slow_dim < 0 selects the codimension (3 for Morse/NonCritical).
  static CatastropheFamily make(FamilyTag tag, int slow_dim = -1, int sign = +1);

  int codim() const;
  bool is_umbilic() const { return fast_dim == 2; }
  bool operator==(const CatastropheFamily&) const = default;
};

struct TotalPoint {
  Vec fast;
  Vec slow;
};

enum class Attracting { Interior, Boundary, Outside };
const char* attracting_name(Attracting a);

struct SetMembership {
  bool on_constraint = false;
  Attracting attracting = Attracting::Outside;
  bool singular = false;
  double residual_constraint = 0.0;
  Vec hessian_eigenvalues;  // ascending
};

inline constexpr double kMembershipTol = 1e-9;

double eval_potential(const CatastropheFamily& fam, const TotalPoint& p);
Vec grad_fast(const CatastropheFamily& fam, const TotalPoint& p);
Mat hessian_fast(const CatastropheFamily& fam, const TotalPoint& p);

// k-th directional derivative of V along v in the fast space (k <= 6).
double directional_derivative(const CatastropheFamily& fam, const TotalPoint& p,
                              const Vec& v, int k);
// Partial derivative d^(i+j) V / dx^i dy^j at p.
double fast_partial(const CatastropheFamily& fam, const TotalPoint& p, int i, int j);
// Largest derivative order in x (resp. y) with a nonzero coefficient.
int fiber_degree(const CatastropheFamily& fam, int var);

SetMembership classify_membership(const CatastropheFamily& fam, const TotalPoint& p,
                                  double tol = kMembershipTol);

// Slow indices eliminated on S_V (the linear-term coefficients), and the
// fast variable each one pairs with.
std::vector<int> eliminated_params(const CatastropheFamily& fam);
std::vector<int> free_params(const CatastropheFamily& fam);
std::vector<std::string> chart_names(const CatastropheFamily& fam);
std::vector<std::string> total_names(const CatastropheFamily& fam);
int chart_dim(const CatastropheFamily& fam);

TotalPoint lift_to_constraint(const CatastropheFamily& fam, const ChartPoint& chart);
ChartPoint chart_of(const CatastropheFamily& fam, const TotalPoint& p);

// Derivative of the fast gradient with respect to a slow parameter:
// d/d(alpha_p) of dV/dx_i, evaluated at the fast point (independent of alpha).
double mixed_param_derivative(const CatastropheFamily& fam, const Vec& fast, int fast_index,
                              int param);

void check_dims(const CatastropheFamily& fam, const TotalPoint& p);

}  // namespace cde
