#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cde/errors.hpp"
#include "cde/strata.hpp"
#include "test_util.hpp"

using namespace cde;
using cde::test::tp;

namespace {
const CatastropheFamily kSw = CatastropheFamily::make(FamilyTag::Swallowtail);
const CatastropheFamily kHu = CatastropheFamily::make(FamilyTag::HyperbolicUmbilic);
const CatastropheFamily kEu = CatastropheFamily::make(FamilyTag::EllipticUmbilic);

Vec flatten(const TotalPoint& p) {
  Vec v(p.fast.size() + p.slow.size());
  v << p.fast, p.slow;
  return v;
}

int param_rank(const StratumParametrization& sp, const Vec& u) {
  if (sp.dim == 0) return 0;
  const double h = 1e-6;
  Vec f0 = flatten(sp.map(u));
  Mat j(f0.size(), sp.dim);
  for (int k = 0; k < sp.dim; ++k) {
    Vec up = u, dn = u;
    up[k] += h;
    dn[k] -= h;
    j.col(k) = (flatten(sp.map(up)) - flatten(sp.map(dn))) / (2 * h);
  }
  Eigen::JacobiSVD<Mat> svd(j);
  const Vec& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > 1e-6 * s[0]) ++r;
  return r;
}
}  // namespace

TEST_CASE("swallowtail examples") {
  CHECK(stratum_of(kSw, tp({0}, {0, 0, 0})).name == StratumName::SwallowtailPoint);
  CHECK(symbol_string(stratum_of(kSw, tp({0}, {0, 0, 0})).symbol) == "1,1,1,1");
  StratumLabel r = stratum_of(kSw, tp({1}, {0, 0, -1}));
  CHECK(r.name == StratumName::Regular);
  CHECK(symbol_string(r.symbol) == "1,0");
  for (double x : {0.4, -0.7, 1.1}) {
    double a = 0.3;
    double b = -4 * x * x * x - 2 * a * x, c = 3 * x * x * x * x + a * x * x;
    StratumLabel f = stratum_of(kSw, tp({x}, {a, b, c}));
    CHECK(f.name == StratumName::Fold);
    CHECK(symbol_string(f.symbol) == "1,1,0");
  }
  CHECK_THROWS_AS(stratum_of(kSw, tp({1}, {0, 0, 0})), PreconditionError);
  auto one = sample_stratum(kSw, StratumName::SwallowtailPoint, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].fast.cwiseAbs().maxCoeff() == 0.0);
  CHECK(one[0].slow.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("umbilic fold surfaces") {
  for (const TotalPoint& p : sample_stratum(kHu, StratumName::Fold, 100, 7)) {
    double x = p.fast[0], y = p.fast[1], a = p.slow[0];
    CHECK(std::abs(36 * x * y - a * a) <= 1e-9);
  }
  for (const TotalPoint& p : sample_stratum(kEu, StratumName::Fold, 100, 7)) {
    double x = p.fast[0], y = p.fast[1], a = p.slow[0];
    CHECK(std::abs(36 * x * x + 36 * y * y - 4 * a * a) <= 1e-9);
  }
  CHECK(stratum_of(kHu, tp({0, 0}, {0, 0, 0})).name == StratumName::UmbilicPoint);
  CHECK(symbol_string(make_stratum(kHu, StratumName::UmbilicPoint).symbol) == "2,2");
}

TEST_CASE("property: round trip and nesting") {
  for (FamilyTag tag : {FamilyTag::Fold, FamilyTag::Cusp, FamilyTag::Swallowtail,
                        FamilyTag::HyperbolicUmbilic, FamilyTag::EllipticUmbilic}) {
    auto fam = CatastropheFamily::make(tag);
    for (StratumName n : supported_strata(fam)) {
      CAPTURE(family_name(tag));
      const std::string sname = stratum_name(n);
      CAPTURE(sname);
      auto pts = sample_stratum(fam, n, 100, 99);
      CHECK(pts.size() == 100u);
      const StratumLabel want = make_stratum(fam, n);
      for (const auto& p : pts) {
        CHECK(stratum_of(fam, p) == want);
        for (StratumName m : supported_strata(fam))
          if (static_cast<int>(m) <= static_cast<int>(n)) CHECK(stratum_residual(fam, p, m) <= 1e-8);
      }
    }
  }
}

TEST_CASE("sampling is deterministic per seed") {
  auto a = sample_stratum(kSw, StratumName::Cusp, 20, 5);
  auto b = sample_stratum(kSw, StratumName::Cusp, 20, 5);
  auto c = sample_stratum(kSw, StratumName::Cusp, 20, 6);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(flatten(a[i]) == flatten(b[i]));
  CHECK(flatten(a[0]) != flatten(c[0]));
  CHECK(sample_stratum(kSw, StratumName::Fold, 0).empty());
  CHECK_THROWS_AS(sample_stratum(kSw, StratumName::Fold, -1), ArgumentError);
}

TEST_CASE("parametrization dimensions") {
  const int dims[] = {3, 2, 1, 0};
  StratumName names[] = {StratumName::Regular, StratumName::Fold, StratumName::Cusp,
                         StratumName::SwallowtailPoint};
  for (int i = 0; i < 4; ++i) {
    StratumParametrization sp = stratum_parametrization(kSw, names[i]);
    CHECK(sp.dim == dims[i]);
    Vec u = 0.37 * sp.lo + 0.63 * sp.hi;
    CHECK(param_rank(sp, u) == dims[i]);
  }
}

TEST_CASE("names and errors") {
  for (StratumName n : {StratumName::Regular, StratumName::Fold, StratumName::Cusp,
                        StratumName::SwallowtailPoint, StratumName::UmbilicPoint})
    CHECK(stratum_from_name(stratum_name(n)) == n);
  CHECK_THROWS_AS(stratum_from_name("bogus"), ArgumentError);
  CHECK_THROWS_AS(make_stratum(kSw, StratumName::UmbilicPoint), ArgumentError);
  CHECK_THROWS_AS(make_stratum(kHu, StratumName::SwallowtailPoint), ArgumentError);
}
