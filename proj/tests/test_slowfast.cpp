#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cde/errors.hpp"
#include "cde/slowfast.hpp"
#include "test_util.hpp"

using namespace cde;
using cde::test::tp;
using cde::test::vec;

TEST_CASE("Morse fiber relaxes exponentially") {
  SlowFastSpec sf;
  sf.cde.family = CatastropheFamily::make(FamilyTag::Morse);
  sf.cde.g = {Polynomial::constant(1.0), Polynomial(), Polynomial()};
  sf.epsilon = 0.01;
  SlowFastTrajectory tr = integrate_slowfast(sf, tp({1.0}, {0, 0, 0}), 0.1);
  for (double t : {0.0, 0.01, 0.03, 0.05, 0.1}) {
    TotalPoint p = tr.at(t);
    CHECK(p.fast[0] == doctest::Approx(std::exp(-t / sf.epsilon)).epsilon(1e-7));
    CHECK(p.slow[0] == doctest::Approx(t).epsilon(1e-9));
  }
  CHECK(tr.t.front() == 0.0);
  CHECK(tr.t.back() == doctest::Approx(0.1));
  for (size_t i = 0; i < tr.t.size(); ++i) CHECK(tr.at(tr.t[i]).fast == tr.state[i].fast);
}

TEST_CASE("fast layer matches the descent landing") {
  SlowFastSpec sf;
  sf.cde.family = CatastropheFamily::make(FamilyTag::Cusp, 2);
  sf.cde.g = {Polynomial(), Polynomial()};
  sf.epsilon = 1e-3;
  TotalPoint start = tp({2.0}, {-1.0, 0.1});
  SlowFastTrajectory tr = integrate_slowfast(sf, start, 50 * sf.epsilon);
  LandingResult lr = fast_descent(sf.cde.family, start);
  REQUIRE(lr.outcome == LandingOutcome::Landed);
  CHECK(std::abs(tr.state.back().fast[0] - lr.landing->fast[0]) <= 1e-8);
  CHECK(tr.state.back().slow == start.slow);
}

TEST_CASE("physical and fast time agree") {
  BuiltinModel m = zeeman_nerve();
  SlowFastSpec sf{m.spec, 0.01};
  SlowFastSettings fast;
  fast.fast_time = true;
  SlowFastTrajectory a = integrate_slowfast(sf, m.start, 1.0);
  SlowFastTrajectory b = integrate_slowfast(sf, m.start, 1.0, fast);
  CHECK(b.t.back() == doctest::Approx(1.0));
  for (double t : {0.25, 0.5, 1.0}) {
    Vec da = a.at(t).slow - b.at(t).slow;
    CHECK(da.cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("nerve slow-fast tracks the constrained solution") {
  BuiltinModel m = zeeman_nerve();
  const double eps = 1e-3;
  IntegrationSettings st;
  st.horizon = 2.0;
  Trajectory ref = integrate_cde(m.spec, chart_of(m.spec.family, m.start), st);
  SlowFastTrajectory sf = integrate_slowfast({m.spec, eps}, m.start, 2.0);
  double worst = 0;
  for (const auto& seg : ref.segments)
    for (size_t i = 0; i < seg.t.size(); ++i)
      worst = std::max(worst,
                       (sf.at(seg.t[i]).slow - seg.lifted[i].slow).cwiseAbs().maxCoeff());
  CHECK(worst <= 10 * eps);
}

TEST_CASE("convergence study") {
  CdeSpec s;
  s.family = CatastropheFamily::make(FamilyTag::Morse);
  const Polynomial x = Polynomial::var(kX);
  s.g = {Polynomial::constant(1.0) + x, Polynomial(), Polynomial()};
  TotalPoint start = tp({0.5}, {0.0, 0.2, 0.1});
  ErrorTable t = convergence_study(s, start, 1.0, {1e-1, 1e-2, 1e-3});
  REQUIRE(t.rows.size() == 3);
  for (const auto& r : t.rows) CHECK(r.note.empty());
  CHECK(t.monotone());
  CHECK(t.rows[2].sup_slow_error < 0.05 * t.rows[0].sup_slow_error);

  ConvergenceSettings serial;
  serial.parallel = false;
  ErrorTable u = convergence_study(s, start, 1.0, {1e-1, 1e-2, 1e-3}, serial);
  for (size_t i = 0; i < 3; ++i) CHECK(u.rows[i].sup_slow_error == t.rows[i].sup_slow_error);

  CHECK_THROWS_AS(convergence_study(s, start, 1.0, {}), ArgumentError);
  CHECK_THROWS_AS(convergence_study(s, start, 1.0, {1e-2, 1e-1}), ArgumentError);
  CHECK_THROWS_AS(convergence_study(s, start, 1.0, {-1.0}), ArgumentError);
}

TEST_CASE("error table monotonicity") {
  ErrorTable t;
  t.rows = {{0.1, 0.3}, {0.01, 0.02}, {0.001, 0.001}};
  CHECK(t.monotone());
  t.rows[2].sup_slow_error = 0.05;
  CHECK_FALSE(t.monotone());
  t.rows = {{0.1, 1e-11}, {0.01, 1e-12}, {0.001, 2e-11}};
  CHECK(t.monotone());
}

TEST_CASE("builtin models") {
  BuiltinModel h = zeeman_heartbeat();
  CHECK(h.spec.family.slow_dim == 2);
  CHECK(grad_fast(h.spec.family, h.start).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(classify_membership(h.spec.family, h.start).attracting == Attracting::Interior);
  BuiltinModel n = zeeman_nerve();
  CHECK(classify_membership(n.spec.family, n.start).attracting == Attracting::Interior);
  CHECK_THROWS_AS(zeeman_heartbeat(NAN), ArgumentError);
  SlowFastSpec bad{n.spec, 0.0};
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  CHECK_THROWS_AS(integrate_slowfast({n.spec, 0.1}, n.start, -1.0), ArgumentError);
}
