#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cde/classifier.hpp"
#include "cde/errors.hpp"
#include "cde/slowfast.hpp"
#include "test_util.hpp"

using namespace cde;
using cde::test::vec;

namespace {
Polynomial P(int v) { return Polynomial::var(v); }
Polynomial K(double c) { return Polynomial::constant(c); }

CdeSpec make(FamilyTag tag, std::vector<Polynomial> g, int slow_dim = -1) {
  CdeSpec s;
  s.family = CatastropheFamily::make(tag, slow_dim);
  s.g = std::move(g);
  s.validate();
  return s;
}

CdeSpec random_hu(std::mt19937_64& rng, double fb, double fc) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Polynomial> g(3);
  double g0[3] = {u(rng), fb, fc};
  for (int i = 0; i < 3; ++i) {
    g[i] = K(g0[i]);
    for (int v : {kX, kY, kA}) g[i] += u(rng) * P(v);
    g[i] += u(rng) * P(kX) * P(kY);
  }
  return make(FamilyTag::HyperbolicUmbilic, g);
}

std::vector<double> sorted_real(const std::vector<std::complex<double>>& ev) {
  std::vector<double> r;
  for (auto z : ev) r.push_back(z.real());
  std::sort(r.begin(), r.end());
  return r;
}
}  // namespace

TEST_CASE("labels") {
  auto all = all_normal_form_labels();
  CHECK(all.size() == 16);
  int per[8] = {};
  for (const auto& l : all) {
    CHECK(parse_label(label_name(l)) == l);
    ++per[static_cast<int>(l.family)];
  }
  CHECK(per[static_cast<int>(FamilyTag::Morse)] == 5);
  CHECK(per[static_cast<int>(FamilyTag::Fold)] == 5);
  CHECK(per[static_cast<int>(FamilyTag::Cusp)] == 2);
  CHECK(per[static_cast<int>(FamilyTag::Swallowtail)] == 1);
  CHECK(per[static_cast<int>(FamilyTag::HyperbolicUmbilic)] == 2);
  CHECK(per[static_cast<int>(FamilyTag::EllipticUmbilic)] == 1);
  CHECK(label_name({FamilyTag::Fold, Variant::Saddle}) == "fold/saddle");
  CHECK_THROWS_AS(parse_label("fold/center"), ArgumentError);
  CHECK_THROWS_AS(parse_label("nonsense"), ArgumentError);
  NormalFormParams bad;
  bad.k = 1;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  bad = {};
  bad.rho = 0;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("normal form instances") {
  CdeSpec fb = normal_form_instance(parse_label("regular/flow_box"));
  CHECK(fb.g_at_origin() == vec({1, 0, 0}));
  CHECK(fb.g[0].total_degree() == 0);
  CdeSpec sw = normal_form_instance(parse_label("swallowtail/flow_box"));
  CHECK(sw.g_at_origin() == vec({0, 0, 1}));
  CHECK_THROWS_AS(normal_form_instance({FamilyTag::Cusp, Variant::Center}), ArgumentError);
}

TEST_CASE("linearization examples") {
  CdeSpec src = make(FamilyTag::Morse, {P(kA), P(kB), P(kC)});
  CHECK((linearize_origin(src) - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-8);

  CdeSpec hu = make(FamilyTag::HyperbolicUmbilic, {K(0.3), K(1), K(1)});
  auto r = sorted_real(classify_spectrum(linearize_origin(hu)).eigenvalues);
  CHECK(r[0] == doctest::Approx(-6.0).epsilon(1e-8));
  CHECK(std::abs(r[1]) <= 1e-8);
  CHECK(r[2] == doctest::Approx(6.0).epsilon(1e-8));

  CdeSpec eu = make(FamilyTag::EllipticUmbilic, {Polynomial(), K(1), K(1)});
  SpectrumClass sc = classify_spectrum(linearize_origin(eu));
  CHECK(sc.n_zero == 1);
  CHECK(sc.n_pos + sc.n_neg + 2 * sc.n_imag_pair == 2);
}

TEST_CASE("spectrum classification") {
  Mat cs = Vec(vec({0, 6, -6})).asDiagonal();
  SpectrumClass a = classify_spectrum(cs);
  CHECK(a.n_zero == 1);
  CHECK(a.n_pos == 1);
  CHECK(a.n_neg == 1);
  CHECK(a.n_imag_pair == 0);
  Mat rot = Mat::Zero(3, 3);
  rot(1, 2) = 6;
  rot(2, 1) = -6;
  SpectrumClass b = classify_spectrum(rot);
  CHECK(b.n_zero == 1);
  CHECK(b.n_imag_pair == 1);
  SpectrumClass c = classify_spectrum(Mat::Identity(3, 3));
  CHECK(c.n_pos == 3);
}

TEST_CASE("property: spectrum signature is scale invariant") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Mat m(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) m(r, k) = u(rng);
    if (i % 2) {
      // Force a structural zero.
      m.row(2) = 0.3 * m.row(0) - 0.7 * m.row(1);
    }
    SpectrumClass ref = classify_spectrum(m);
    CHECK(ref.n_zero + ref.n_pos + ref.n_neg + 2 * ref.n_imag_pair == 3);
    for (double c : {1e-3, 1e3}) {
      SpectrumClass s = classify_spectrum(c * m);
      CHECK(s.n_zero == ref.n_zero);
      CHECK(s.n_pos == ref.n_pos);
      CHECK(s.n_neg == ref.n_neg);
      CHECK(s.n_imag_pair == ref.n_imag_pair);
    }
  }
}

TEST_CASE("property: hyperbolic umbilic eigenvalues") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  ClassifySettings quick;
  quick.scan_folded = false;
  for (int i = 0; i < 40; ++i) {
    double fb = u(rng), fc = u(rng);
    if (i % 2) fb = -fb, fc = -fc;
    CdeSpec s = random_hu(rng, fb, fc);
    auto r = sorted_real(classify_spectrum(linearize_origin(s)).eigenvalues);
    double lam = 6 * std::sqrt(fb * fc);
    CHECK(r[0] == doctest::Approx(-lam).epsilon(1e-6));
    CHECK(r[2] == doctest::Approx(lam).epsilon(1e-6));
    CHECK(classify_cde(s, quick).label.variant == Variant::CenterSaddle);

    CdeSpec t = random_hu(rng, fb, -fc);
    SpectrumClass sc = classify_spectrum(linearize_origin(t));
    CHECK(sc.n_imag_pair == 1);
    for (auto z : sc.eigenvalues)
      if (std::abs(z.imag()) > 0) CHECK(std::abs(z.imag()) == doctest::Approx(lam).epsilon(1e-6));
    CHECK(classify_cde(t, quick).label.variant == Variant::Center);
  }
}

TEST_CASE("round trip over all normal forms") {
  for (const auto& l : all_normal_form_labels()) {
    CAPTURE(label_name(l));
    Classification c = classify_cde(normal_form_instance(l));
    CHECK(c.label == l);
    CHECK(c.report.generic);
  }
}

TEST_CASE("fold forms on b = c match the two-parameter forms") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Variant v : {Variant::FlowBox1, Variant::FlowBox2, Variant::Source, Variant::Sink,
                    Variant::Saddle}) {
    CdeSpec three = normal_form_instance({FamilyTag::Fold, v});
    CdeSpec two = takens_fold_instance(v);
    for (int i = 0; i < 20; ++i) {
      double x = u(rng), b = u(rng);
      Vec f3 = desingularized_field_generic(three, vec({x, b, b}));
      Vec f2 = desingularized_field_generic(two, vec({x, b}));
      // b' = c' = g_b/2 on the invariant plane.
      CHECK(std::abs(f3[0] - f2[0]) <= 1e-9);
      CHECK(std::abs(f3[1] - 0.5 * f2[1]) <= 1e-9);
      CHECK(std::abs(f3[2] - 0.5 * f2[1]) <= 1e-9);
    }
  }
}

TEST_CASE("equilibria") {
  BuiltinModel nerve = zeeman_nerve();
  auto eq = find_equilibria(nerve.spec, vec({-2, -2}), vec({2, 2}), 41, false);
  REQUIRE(eq.size() == 2);
  bool reg = false, fold = false;
  for (const auto& e : eq) {
    if (std::abs(e.chart[0] - 1) < 1e-10 && std::abs(e.chart[1] + 1) < 1e-10) {
      reg = true;
      CHECK_FALSE(e.on_singular);
      CHECK(e.kind == "regular_focus");
    }
    if (std::abs(e.chart[0] - 0.5) < 1e-10 && std::abs(e.chart[1] + 0.75) < 1e-10) {
      fold = true;
      CHECK(e.on_singular);
      CHECK(e.kind == "folded_saddle");
    }
  }
  CHECK(reg);
  CHECK(fold);
  auto par = find_equilibria(nerve.spec, vec({-2, -2}), vec({2, 2}), 41, true);
  REQUIRE(par.size() == eq.size());
  for (size_t i = 0; i < eq.size(); ++i) CHECK(par[i].chart == eq[i].chart);

  CdeSpec morse = normal_form_instance(parse_label("regular/flow_box"));
  CHECK(find_equilibria(morse, Vec::Constant(3, -1), Vec::Constant(3, 1), 5).empty());

  CdeSpec cs = normal_form_instance({FamilyTag::HyperbolicUmbilic, Variant::CenterSaddle});
  auto ceq = find_equilibria(cs, Vec::Constant(3, -0.5), Vec::Constant(3, 0.5), 5);
  bool origin = false;
  for (const auto& e : ceq)
    if (e.chart.cwiseAbs().maxCoeff() < 1e-8) origin = true;
  CHECK(origin);
}

TEST_CASE("nerve classification notes the folded saddle") {
  Classification c = classify_cde(zeeman_nerve().spec);
  CHECK(label_name(c.label) == "cusp/flow_box");
  bool saddle = false;
  for (const auto& e : c.report.folded)
    if (e.kind == "folded_saddle") saddle = true;
  CHECK(saddle);
}

TEST_CASE("non-generic cases") {
  CdeSpec sw = make(FamilyTag::Swallowtail, {K(1), K(1), P(kX)});
  CHECK(classify_cde(sw).label.variant == Variant::NotGeneric);
  CHECK_FALSE(classify_cde(sw).report.generic);
  CdeSpec cusp = make(FamilyTag::Cusp, {K(1), P(kA), Polynomial()}, 3);
  CHECK(classify_cde(cusp).label.variant == Variant::NotGeneric);
  CdeSpec hu = make(FamilyTag::HyperbolicUmbilic, {K(1), K(1), Polynomial()});
  CHECK(classify_cde(hu).label.variant == Variant::NotGeneric);
  CdeSpec center = make(FamilyTag::Morse, {P(kB), -1.0 * P(kA), P(kC)});
  CHECK(classify_cde(center).label.variant == Variant::NotGeneric);
}

TEST_CASE("center series coefficients are free") {
  NormalFormParams p;
  p.k = 4;
  p.rho_lj[{2, 0}] = -0.5;
  p.eta_lj[{3, 1}] = 2.0;
  p.sigma_lj[{2, 0}] = 0.25;
  CdeSpec s = normal_form_instance({FamilyTag::HyperbolicUmbilic, Variant::Center}, p);
  CHECK(classify_cde(s).label.variant == Variant::Center);
  CHECK_THROWS_AS(normal_form_instance({FamilyTag::Fold, Variant::Sink}, p), ArgumentError);
}
