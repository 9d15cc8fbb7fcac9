#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cde/polynomial.hpp"

using namespace cde;

namespace {
VarValues rand_vals(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  VarValues v{};
  for (auto& e : v) e = u(rng);
  return v;
}

Polynomial rand_poly(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(0, 2);
  Polynomial p;
  for (int t = 0; t < 5; ++t) {
    Exponents ex{};
    for (int v = 0; v < kNumVars; ++v) ex[v] = e(rng) * (v < 5);
    p.add_term(ex, u(rng));
  }
  return p;
}
}  // namespace

TEST_CASE("construction and evaluation") {
  Polynomial x = Polynomial::var(kX), a = Polynomial::var(kA);
  Polynomial p = x.pow(3) + 2.0 * a * x - Polynomial::constant(1.0);
  VarValues v{};
  v[kX] = 2.0;
  v[kA] = -1.5;
  CHECK(p(v) == doctest::Approx(8.0 - 6.0 - 1.0));
  CHECK(p.total_degree() == 3);
  CHECK(p.depends_on(kA));
  CHECK_FALSE(p.depends_on(kB));
  CHECK(p.constant_term() == -1.0);
  CHECK(Polynomial().is_zero());
  CHECK((x - x).is_zero());
}

TEST_CASE("derivative of a monomial") {
  Exponents e{};
  e[kX] = 3;
  e[kY] = 2;
  Polynomial m = Polynomial::monomial(e, 2.0);
  Polynomial dx = m.derivative(kX);
  VarValues v{};
  v[kX] = 1.5;
  v[kY] = -0.5;
  CHECK(dx(v) == doctest::Approx(6.0 * 1.5 * 1.5 * 0.25));
  CHECK(m.derivative(kA).is_zero());
  CHECK(m.min_exponent(kX) == 3);
}

TEST_CASE("variable names round trip") {
  for (int v = 0; v < kNumVars; ++v) CHECK(var_from_name(var_name(v)) == v);
  CHECK(var_from_name("q") == -1);
}

TEST_CASE("property: ring operations commute with evaluation") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    Polynomial p = rand_poly(rng), q = rand_poly(rng);
    VarValues v = rand_vals(rng);
    CHECK((p + q)(v) == doctest::Approx(p(v) + q(v)).epsilon(1e-12));
    CHECK((p * q)(v) == doctest::Approx(p(v) * q(v)).epsilon(1e-12));
    CHECK((p - q)(v) == doctest::Approx(p(v) - q(v)).epsilon(1e-12));
    CHECK(p.pow(2)(v) == doctest::Approx(p(v) * p(v)).epsilon(1e-12));
  }
}

TEST_CASE("property: derivative matches central differences") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    Polynomial p = rand_poly(rng);
    VarValues v = rand_vals(rng);
    for (int k = 0; k < 5; ++k) {
      const double h = 1e-5;
      VarValues vp = v, vm = v;
      vp[k] += h;
      vm[k] -= h;
      double fd = (p(vp) - p(vm)) / (2 * h);
      CHECK(p.derivative(k)(v) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("prune drops small coefficients") {
  Polynomial p = Polynomial::var(kX) + 1e-20 * Polynomial::var(kY);
  p.prune(1e-15);
  CHECK_FALSE(p.depends_on(kY));
  CHECK(!p.to_string().empty());
}
