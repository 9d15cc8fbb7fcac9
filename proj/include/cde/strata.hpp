#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cde/potentials.hpp"

namespace cde {

enum class StratumName { Regular, Fold, Cusp, SwallowtailPoint, UmbilicPoint };
const char* stratum_name(StratumName n);
StratumName stratum_from_name(const std::string& s);  // throws ArgumentError

// Thom-Boardman symbol of the projection restricted to S_V.
// Corank-1 families: Regular (1,0), Fold (1,1,0), Cusp (1,1,1,0),
// SwallowtailPoint (1,1,1,1).
// Umbilics: Regular (2,0), Fold (2,1,0), Cusp (2,1,1,0), UmbilicPoint (2,2);
// the leading 2 is the fiber dimension, the next entry the Hessian kernel.
struct StratumLabel {
  std::vector<int> symbol;
  StratumName name = StratumName::Regular;
  bool operator==(const StratumLabel& o) const { return name == o.name && symbol == o.symbol; }
};

StratumLabel make_stratum(const CatastropheFamily& fam, StratumName n);
std::string symbol_string(const std::vector<int>& symbol);  // "1,1,0"

std::vector<StratumName> supported_strata(const CatastropheFamily& fam);

inline constexpr double kStratumTol = 1e-8;

StratumLabel stratum_of(const CatastropheFamily& fam, const TotalPoint& p,
                        double tol = kStratumTol);

// Explicit parametrization of a stratum: params in [lo,hi]^dim, rejected
// where `accept` is false (keeps samples off lower strata).
struct StratumParametrization {
  int dim = 0;
  Vec lo, hi;
  std::function<TotalPoint(const Vec&)> map;
  std::function<bool(const Vec&)> accept;
};
StratumParametrization stratum_parametrization(const CatastropheFamily& fam, StratumName n,
                                               double radius = 1.0);

std::vector<TotalPoint> sample_stratum(const CatastropheFamily& fam, StratumName n, int count,
                                       std::uint64_t seed = 42, double radius = 1.0);

// Max abs residual of the defining equations of stratum n at p
// (gradient, then the successive degeneracy conditions).
double stratum_residual(const CatastropheFamily& fam, const TotalPoint& p, StratumName n);

}  // namespace cde
