#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cde/errors.hpp"
#include "cde/integrator.hpp"
#include "cde/slowfast.hpp"
#include "test_util.hpp"

using namespace cde;
using cde::test::vec;

namespace {
double max_grad(const Trajectory& tr, const CatastropheFamily& fam) {
  double m = 0;
  for (const auto& seg : tr.segments)
    for (const auto& p : seg.lifted) m = std::max(m, grad_fast(fam, p).cwiseAbs().maxCoeff());
  return m;
}
}  // namespace

TEST_CASE("locate_root") {
  CHECK(locate_root([](double t) { return 1.0 - t; }, 2.0, 1e-14) ==
        doctest::Approx(1.0).epsilon(1e-13));
  double r = locate_root([](double t) { return std::cos(t); }, 3.0, 1e-14);
  CHECK(r == doctest::Approx(M_PI / 2).epsilon(1e-12));
  // Root at the bracket end.
  double e = locate_root([](double t) { return 0.5 - t; }, 0.5, 1e-14);
  CHECK(e == doctest::Approx(0.5));
  CHECK_THROWS_AS(locate_root([](double t) { return 1.0 + t; }, 1.0, 1e-12), ContractError);
}

TEST_CASE("Morse translation reaches the horizon") {
  CdeSpec s;
  s.family = CatastropheFamily::make(FamilyTag::Morse);
  s.g = {Polynomial::constant(1.0), Polynomial(), Polynomial()};
  IntegrationSettings st;
  st.horizon = 1.0;
  Trajectory tr = integrate_cde(s, vec({0, 0, 0}), st);
  REQUIRE(!tr.events.empty());
  const Event& last = tr.events.back();
  CHECK(last.kind == EventKind::HorizonReached);
  CHECK(last.time == doctest::Approx(1.0));
  CHECK(last.at.slow[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(last.at.slow[1]) <= 1e-14);
  CHECK(std::abs(last.at.fast[0]) <= 1e-14);
  CHECK(orientation_factor(s.family, vec({0, 0, 0})) == 1);
}

TEST_CASE("nerve settles at the regular focus") {
  BuiltinModel m = zeeman_nerve();
  IntegrationSettings st;
  st.horizon = 100.0;
  Trajectory tr = integrate_cde(m.spec, chart_of(m.spec.family, m.start), st);
  const Event& last = tr.events.back();
  CHECK((last.kind == EventKind::Equilibrium || last.kind == EventKind::HorizonReached));
  CHECK(last.at.fast[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(last.at.slow[0] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(max_grad(tr, m.spec.family) <= 1e-9);
}

TEST_CASE("heartbeat jumps at the fold") {
  BuiltinModel m = zeeman_heartbeat(0.2);
  IntegrationSettings st;
  st.horizon = 6.0;
  Trajectory tr = integrate_cde(m.spec, chart_of(m.spec.family, m.start), st);
  const Event* first = nullptr;
  int jumps = 0;
  for (const auto& e : tr.events)
    if (e.kind == EventKind::Jump) {
      if (!first) first = &e;
      ++jumps;
    }
  REQUIRE(first != nullptr);
  CHECK(jumps >= 2);
  const double xf = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(first->at.fast[0] - xf) <= 1e-8);
  CHECK(first->at.slow[1] == doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-8));
  REQUIRE(first->to.has_value());
  CHECK(std::abs(first->to->fast[0] + 2.0 * xf) <= 1e-7);
  CHECK(first->to->slow == first->at.slow);
  // Events are ordered in time and the path stays on S_V.
  for (size_t i = 1; i < tr.events.size(); ++i)
    CHECK(tr.events[i].time >= tr.events[i - 1].time);
  CHECK(max_grad(tr, m.spec.family) <= 1e-9);
}

TEST_CASE("property: motion follows X with positive speed factor") {
  // Away from B, the chart derivative along the trajectory is parallel to the
  // constrained field with the same orientation.
  BuiltinModel m = zeeman_nerve();
  IntegrationSettings st;
  st.horizon = 2.0;
  Trajectory tr = integrate_cde(m.spec, chart_of(m.spec.family, m.start), st);
  for (const auto& seg : tr.segments) {
    for (size_t i = 1; i + 1 < seg.chart.size(); i += 3) {
      double dt = seg.t[i + 1] - seg.t[i - 1];
      if (dt <= 1e-9) continue;
      Vec dz = (seg.chart[i + 1] - seg.chart[i - 1]) / dt;
      Vec f = desingularized_field_generic(m.spec, seg.chart[i]);
      double cos = dz.dot(f) / (dz.norm() * f.norm() + 1e-300);
      CHECK(cos >= 0.99);
    }
  }
}

TEST_CASE("tolerance refinement changes the endpoint consistently") {
  BuiltinModel m = zeeman_nerve();
  IntegrationSettings coarse, fine;
  coarse.horizon = fine.horizon = 3.0;
  coarse.rel_tol = 1e-7;
  coarse.abs_tol = 1e-9;
  Vec z0 = chart_of(m.spec.family, m.start);
  Trajectory a = integrate_cde(m.spec, z0, coarse);
  Trajectory b = integrate_cde(m.spec, z0, fine);
  double diff = (a.events.back().at.slow - b.events.back().at.slow).cwiseAbs().maxCoeff();
  CHECK(diff <= 1e-5);
  CHECK(b.error_estimate <= a.error_estimate + 1e-12);
}

TEST_CASE("argument and precondition errors") {
  BuiltinModel m = zeeman_nerve();
  CHECK_THROWS_AS(integrate_cde(m.spec, vec({1.0})), ArgumentError);
  // x = 0, a = 1 lies on S_V with positive Hessian; x = 0.1, a = -1 is a maximum.
  CHECK_THROWS_AS(integrate_cde(m.spec, vec({0.1, -1.0})), PreconditionError);
  CHECK_THROWS_AS(integrate_cde(m.spec, vec({1.0 / std::sqrt(3.0), -1.0})), PreconditionError);
  IntegrationSettings bad;
  bad.rel_tol = -1;
  CHECK_THROWS_AS(integrate_cde(m.spec, vec({1.1, -1.2}), bad), ArgumentError);
  bad = {};
  bad.horizon = -1;
  CHECK_THROWS_AS(integrate_cde(m.spec, vec({1.1, -1.2}), bad), ArgumentError);
}
