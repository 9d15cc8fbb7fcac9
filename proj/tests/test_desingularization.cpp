#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cde/desingularization.hpp"
#include "cde/errors.hpp"

using namespace cde;

namespace {
Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<long>(v.size()));
  long i = 0;
  for (double e : v) out[i++] = e;
  return out;
}
Polynomial P(int v) { return Polynomial::var(v); }
Polynomial K(double c) { return Polynomial::constant(c); }

CdeSpec spec(FamilyTag tag, std::vector<Polynomial> g, int slow_dim = -1) {
  CdeSpec s;
  s.family = CatastropheFamily::make(tag, slow_dim);
  s.g = std::move(g);
  s.validate();
  return s;
}

CdeSpec random_spec(std::mt19937_64& rng, FamilyTag tag) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CdeSpec s;
  s.family = CatastropheFamily::make(tag);
  std::vector<int> vars{kX};
  if (s.family.is_umbilic()) vars.push_back(kY);
  for (int k = 0; k < s.family.slow_dim; ++k) vars.push_back(kA + k);
  for (int k = 0; k < s.family.slow_dim; ++k) {
    Polynomial p = K(u(rng));
    for (int v : vars) p += u(rng) * P(v);
    for (int v : vars) p += u(rng) * P(v) * P(vars[0]);
    s.g.push_back(p);
  }
  return s;
}

// Cofactor expansion written out for 3x3, independent of the library's adjugate.
Mat adj3(const Mat& m) {
  Mat a(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      a(i, j) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
    }
  return a;
}
}  // namespace

TEST_CASE("projection restricted to S_V") {
  auto hu = CatastropheFamily::make(FamilyTag::HyperbolicUmbilic);
  CHECK(projection_restricted(hu, vec({0, 0, 0})).cwiseAbs().maxCoeff() == 0.0);
  auto nerve = CatastropheFamily::make(FamilyTag::Cusp, 2);
  Vec pr = projection_restricted(nerve, vec({1.3, -0.4}));
  CHECK(pr[0] == doctest::Approx(-0.4));
  CHECK(pr[1] == doctest::Approx(-std::pow(1.3, 3) + 0.4 * 1.3));
  auto sw = CatastropheFamily::make(FamilyTag::Swallowtail);
  Vec ps = projection_restricted(sw, vec({1, 0, 0}));
  CHECK(ps[2] == doctest::Approx(-1.0));
}

TEST_CASE("determinants of the restricted projection") {
  auto nerve = CatastropheFamily::make(FamilyTag::Cusp, 2);
  CHECK(det_projection(nerve, vec({1.0, -0.5})) == doctest::Approx(3.0 - 0.5));
  auto fold = CatastropheFamily::make(FamilyTag::Fold, 3);
  CHECK(det_projection(fold, vec({0.7, 0, 0})) == doctest::Approx(-1.4));
  auto hu = CatastropheFamily::make(FamilyTag::HyperbolicUmbilic);
  CHECK(det_projection(hu, vec({1, 1, 0})) == doctest::Approx(36.0));
  auto eu = CatastropheFamily::make(FamilyTag::EllipticUmbilic);
  CHECK(det_projection(eu, vec({0.1, 0.2, 0.5})) == doctest::Approx(1.0 - 36 * 0.05));
  auto sw = CatastropheFamily::make(FamilyTag::Swallowtail);
  CHECK(det_projection(sw, vec({0.5, -1, 0.2})) == doctest::Approx(-(0.5 - 1.0 + 0.2)));
}

TEST_CASE("property: adjugate identity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Mat m(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = u(rng);
    Mat a = adjugate(m);
    CHECK((a - adj3(m)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((a * m - m.determinant() * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("desingularized fields: worked cases") {
  Polynomial zero;
  CdeSpec morse = spec(FamilyTag::Morse, {K(1), zero, zero});
  Vec xm = desingularized_field_generic(morse, vec({0.3, 0.1, -0.2}));
  CHECK(xm[0] == doctest::Approx(1.0));
  CHECK(xm[1] == 0.0);

  // Nerve: chart order (x, a).
  CdeSpec nerve = spec(FamilyTag::Cusp, {-2.0 * P(kA) - 2.0 * P(kX), K(-1) - P(kA)}, 2);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 50; ++i) {
    double x = u(rng), a = u(rng);
    Vec f = desingularized_field_generic(nerve, vec({x, a}));
    CHECK(f[0] == doctest::Approx(1 + a + 2 * (a + x) * x));
    CHECK(f[1] == doctest::Approx(-2 * (3 * x * x + a) * (a + x)));
  }

  CdeSpec swc = spec(FamilyTag::Swallowtail, {zero, zero, K(1)});
  Vec fs = desingularized_field_generic(swc, vec({0.4, -0.3, 0.9}));
  CHECK(fs[0] == doctest::Approx(1.0));
  CHECK(fs[1] == 0.0);
  CHECK(fs[2] == 0.0);

  CdeSpec hu = spec(FamilyTag::HyperbolicUmbilic, {zero, K(1), K(1)});
  CHECK(desingularized_field_generic(hu, vec({0, 0, 0})).cwiseAbs().maxCoeff() == 0.0);

  CdeSpec eu = spec(FamilyTag::EllipticUmbilic, {K(1), zero, zero});
  CHECK(desingularized_field_generic(eu, vec({0, 0, 1}))[2] == doctest::Approx(4.0));
}

TEST_CASE("property: closed forms agree with the adjugate construction") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (FamilyTag tag : {FamilyTag::Swallowtail, FamilyTag::HyperbolicUmbilic,
                        FamilyTag::EllipticUmbilic}) {
    CHECK(closed_form_orientation(tag) == 1);
    for (int i = 0; i < 500; ++i) {
      CdeSpec s = random_spec(rng, tag);
      Vec z = vec({u(rng), u(rng), u(rng)});
      Vec gen = desingularized_field_generic(s, z);
      Vec cl = desingularized_field_closed(s, z);
      CHECK((gen - cl).cwiseAbs().maxCoeff() <= 1e-9 * (1 + gen.cwiseAbs().maxCoeff()));
    }
  }
  CdeSpec fold = spec(FamilyTag::Fold, {K(1), Polynomial(), Polynomial()}, 3);
  CHECK_THROWS_AS(desingularized_field_closed(fold, vec({0, 0, 0})), ArgumentError);
}

TEST_CASE("property: pushforward identity and smoothness across B") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (FamilyTag tag : {FamilyTag::Fold, FamilyTag::Cusp, FamilyTag::Swallowtail,
                        FamilyTag::HyperbolicUmbilic, FamilyTag::EllipticUmbilic}) {
    for (int i = 0; i < 200; ++i) {
      CdeSpec s = random_spec(rng, tag);
      Vec z(chart_dim(s.family));
      for (auto& v : z) v = u(rng);
      double det = det_projection(s.family, z);
      if (std::abs(det) <= 1e-6) continue;
      Vec lhs = jacobian_projection(s.family, z) * desingularized_field_generic(s, z);
      Vec rhs = det * s.eval_g(lift_to_constraint(s.family, z));
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9 * (1 + rhs.cwiseAbs().maxCoeff()));
    }
  }
  // Swallowtail chart point on B: 4x^3 + 2ax + b = 0.
  CdeSpec s = random_spec(rng, FamilyTag::Swallowtail);
  double x = 0.6, a = -0.8, b = -4 * x * x * x - 2 * a * x;
  CHECK(det_projection(s.family, vec({x, a, b})) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(desingularized_field_generic(s, vec({x, a, b})).allFinite());
}

TEST_CASE("spec validation") {
  CdeSpec s;
  s.family = CatastropheFamily::make(FamilyTag::Cusp, 2);
  s.g = {K(1)};
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s.g = {K(1), P(kC)};  // c is not a variable of a two-parameter cusp
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s.g = {K(1), P(kX).pow(9)};
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s.g = {K(1), P(kX)};
  CHECK_NOTHROW(s.validate());
  CHECK(s.g_at_origin()[0] == 1.0);
}
