#include "cde/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cde/errors.hpp"
#include "cde/kernels.hpp"
#include "cde/strata.hpp"

namespace cde {

namespace {

struct VariantName {
  Variant v;
  const char* name;
};
constexpr VariantName kVariantNames[] = {
    {Variant::FlowBox, "flow_box"},         {Variant::Source, "source"},
    {Variant::Saddle1, "saddle_1"},         {Variant::Saddle2, "saddle_2"},
    {Variant::Sink, "sink"},                {Variant::FlowBox1, "flow_box_1"},
    {Variant::FlowBox2, "flow_box_2"},      {Variant::Saddle, "saddle"},
    {Variant::DualFlowBox, "dual_flow_box"}, {Variant::CenterSaddle, "center_saddle"},
    {Variant::Center, "center"},            {Variant::NotGeneric, "not_generic"},
};

std::string group_name(FamilyTag t) {
  return t == FamilyTag::Morse ? std::string("regular") : family_name(t);
}

const char* variant_name(Variant v) {
  for (const auto& e : kVariantNames)
    if (e.v == v) return e.name;
  return "?";
}

bool valid_combo(FamilyTag f, Variant v) {
  if (v == Variant::NotGeneric) return true;
  for (const auto& l : all_normal_form_labels())
    if (l.family == f && l.variant == v) return true;
  return false;
}

double coeff(const SeriesCoeffs& m, int l, int j) {
  auto it = m.find({l, j});
  return it == m.end() ? 1.0 : it->second;
}

Polynomial P(int v) { return Polynomial::var(v); }
Polynomial K(double c) { return Polynomial::constant(c); }

CdeSpec make_spec(FamilyTag tag, std::vector<Polynomial> g, const std::string& name,
                  int slow_dim = 3, int sign = 1) {
  CdeSpec s;
  s.family = CatastropheFamily::make(tag, slow_dim, sign);
  s.g = std::move(g);
  s.name = name;
  int deg = 0;
  for (const auto& p : s.g) deg = std::max(deg, p.total_degree());
  s.degree_cap = std::max(6, deg);
  s.validate();
  return s;
}

}  // namespace

std::string label_name(const NormalFormLabel& l) {
  return group_name(l.family) + "/" + variant_name(l.variant);
}

NormalFormLabel parse_label(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) throw ArgumentError("label '" + s + "' lacks '/'");
  std::string g = s.substr(0, slash), v = s.substr(slash + 1);
  NormalFormLabel l;
  l.family = (g == "regular") ? FamilyTag::Morse : family_from_name(g);
  bool found = false;
  for (const auto& e : kVariantNames)
    if (v == e.name) {
      l.variant = e.v;
      found = true;
    }
  if (!found || !valid_combo(l.family, l.variant))
    throw ArgumentError("unknown normal form label '" + s + "'");
  return l;
}

std::vector<NormalFormLabel> all_normal_form_labels() {
  using F = FamilyTag;
  using V = Variant;
  return {{F::Morse, V::FlowBox},
          {F::Morse, V::Source},
          {F::Morse, V::Saddle1},
          {F::Morse, V::Saddle2},
          {F::Morse, V::Sink},
          {F::Fold, V::FlowBox1},
          {F::Fold, V::FlowBox2},
          {F::Fold, V::Source},
          {F::Fold, V::Sink},
          {F::Fold, V::Saddle},
          {F::Cusp, V::FlowBox},
          {F::Cusp, V::DualFlowBox},
          {F::Swallowtail, V::FlowBox},
          {F::HyperbolicUmbilic, V::CenterSaddle},
          {F::HyperbolicUmbilic, V::Center},
          {F::EllipticUmbilic, V::CenterSaddle}};
}

void NormalFormParams::validate() const {
  if (rho != 1 && rho != -1) throw ArgumentError("rho must be +1 or -1");
  if (sign_choice != 1 && sign_choice != -1) throw ArgumentError("sign_choice must be +1 or -1");
  if (k < 2) throw ArgumentError("truncation order k must be >= 2");
  if (!std::isfinite(delta)) throw ArgumentError("delta must be finite");
}

CdeSpec normal_form_instance(const NormalFormLabel& label, const NormalFormParams& p) {
  p.validate();
  if (!valid_combo(label.family, label.variant) || label.variant == Variant::NotGeneric)
    throw ArgumentError("no normal form for label " + label_name(label));
  const std::string name = "normal_form:" + label_name(label);
  bool series_used = !(p.rho_lj.empty() && p.eta_lj.empty() && p.sigma_lj.empty());
  if (series_used && !(label.family == FamilyTag::HyperbolicUmbilic && label.variant == Variant::Center))
    throw ArgumentError("series coefficients only apply to hyperbolic_umbilic/center");
  const Polynomial x = P(kX), y = P(kY), a = P(kA), b = P(kB), c = P(kC);
  const Polynomial zero, one = K(1.0);
  const double s = p.sign_choice;

  switch (label.family) {
    case FamilyTag::Morse:
      switch (label.variant) {
        case Variant::FlowBox: return make_spec(FamilyTag::Morse, {one, zero, zero}, name);
        case Variant::Source: return make_spec(FamilyTag::Morse, {a, b, c}, name);
        case Variant::Saddle1: return make_spec(FamilyTag::Morse, {a, b, -c}, name);
        case Variant::Saddle2: return make_spec(FamilyTag::Morse, {a, -b, -c}, name);
        default: return make_spec(FamilyTag::Morse, {-a, -b, -c}, name);
      }
    case FamilyTag::Fold: {
      if (label.variant == Variant::FlowBox1)
        return make_spec(FamilyTag::Fold, {one, zero, zero}, name);
      if (label.variant == Variant::FlowBox2)
        return make_spec(FamilyTag::Fold, {-one, zero, zero}, name);
      Polynomial cb = c - b;
      Polynomial tail = cb.pow(2) * (K(p.rho) + p.delta * cb);
      Polynomial half = 0.5 * b + 0.5 * c;
      Polynomial ga = label.variant == Variant::Source ? 3.0 * x + half
                      : label.variant == Variant::Sink ? -3.0 * x + half
                                                       : -half;
      return make_spec(FamilyTag::Fold, {ga, K(0.5) - tail, K(0.5) + tail}, name);
    }
    case FamilyTag::Cusp:
      return make_spec(FamilyTag::Cusp, {zero, one, zero}, name, 3,
                       label.variant == Variant::DualFlowBox ? -1 : 1);
    case FamilyTag::Swallowtail:
      return make_spec(FamilyTag::Swallowtail, {zero, zero, one}, name);
    case FamilyTag::HyperbolicUmbilic: {
      if (label.variant == Variant::CenterSaddle) {
        Polynomial phi = (s / 36.0) * a.pow(2) + (p.delta / 216.0) * a.pow(3);
        Polynomial f = phi * (6.0 * x + 6.0 * y + a) - 6.0 * x * y + (1.0 / 6.0) * a.pow(2);
        return make_spec(FamilyTag::HyperbolicUmbilic, {6.0 * phi, -f, -f}, name);
      }
      const Polynomial a6 = (1.0 / 6.0) * a;
      const Polynomial delta_poly =
          (1.0 / 108.0) * a *
          (a.pow(2) + 18.0 * (x.pow(2) + y.pow(2)) + 6.0 * (a * x + a * y));
      Polynomial ga, gb = (1.0 / 6.0) * a.pow(2) - 6.0 * x * y,
                     gc = (-1.0 / 6.0) * a.pow(2) + 6.0 * x * y;
      for (int l = 2; l <= p.k; ++l) {
        Polynomial sum_a;
        for (int j = 0; 2 * j <= l; ++j)
          sum_a += coeff(p.rho_lj, l, j) * a6.pow(l - j) * delta_poly.pow(j);
        ga += 6.0 * sum_a;
        gb += (6.0 * x + a - 6.0 * y) * sum_a;
        gc += (6.0 * y + a - 6.0 * x) * sum_a;
        for (int j = 0; 2 * j + 1 <= l; ++j) {
          int e = l - 1 - j;  // (a/6)^(-1) absorbed into A_{l,j}
          if (e < 0) throw ContractError("center series: negative power of a");
          double eta = coeff(p.eta_lj, l, j), sig = coeff(p.sigma_lj, l, j);
          Polynomial cc = eta * (a6 + x) + sig * (a6 + y);
          Polynomial cbar = eta * (a6 + y) - sig * (a6 + x);
          Polynomial bb = -6.0 * x * cc - a * cbar;
          Polynomial bbar = -1.0 * a * cc - 6.0 * y * cbar;
          Polynomial pref = a6.pow(e) * delta_poly.pow(j);
          gb += pref * bb;
          gc += pref * bbar;
        }
      }
      return make_spec(FamilyTag::HyperbolicUmbilic, {ga, gb, gc}, name);
    }
    case FamilyTag::EllipticUmbilic: {
      Polynomial aa = (1.0 / 9.0) * (3.0 * s * a.pow(2) + p.delta * a.pow(3));
      Polynomial bb = -6.0 * x.pow(2) - 6.0 * y.pow(2) + (2.0 / 3.0) * a.pow(2);
      const double r2 = 1.0 / std::sqrt(2.0);
      return make_spec(FamilyTag::EllipticUmbilic,
                       {aa, r2 * (bb - 2.0 * x * aa), r2 * (bb - 2.0 * y * aa)}, name);
    }
    default:
      break;
  }
  throw ArgumentError("no normal form for label " + label_name(label));
}

CdeSpec takens_fold_instance(Variant v) {
  const Polynomial x = P(kX), b = P(kB), one = K(1.0), zero;
  std::string name = std::string("takens_fold:") + variant_name(v);
  switch (v) {
    case Variant::FlowBox1: return make_spec(FamilyTag::Fold, {one, zero}, name, 2);
    case Variant::FlowBox2: return make_spec(FamilyTag::Fold, {-one, zero}, name, 2);
    case Variant::Source: return make_spec(FamilyTag::Fold, {b + 3.0 * x, one}, name, 2);
    case Variant::Sink: return make_spec(FamilyTag::Fold, {b - 3.0 * x, one}, name, 2);
    case Variant::Saddle: return make_spec(FamilyTag::Fold, {-b, one}, name, 2);
    default: throw ArgumentError("no two-parameter fold form for this variant");
  }
}

Mat linearize_at(const CdeSpec& spec, const ChartPoint& z, double h) {
  const int m = static_cast<int>(z.size());
  Mat out(m, m);
  auto cd = [&](int j, double step) {
    Vec e = Vec::Zero(m);
    e[j] = step;
    return Vec((desingularized_field_generic(spec, z + e) -
                desingularized_field_generic(spec, z - e)) /
               (2 * step));
  };
  for (int j = 0; j < m; ++j) out.col(j) = (4.0 * cd(j, h / 2) - cd(j, h)) / 3.0;
  return out;
}

Mat linearize_origin(const CdeSpec& spec, double h) {
  return linearize_at(spec, ChartPoint::Zero(spec.family.slow_dim), h);
}

SpectrumClass classify_spectrum(const Mat& m, double tol) {
  if (!(tol > 0)) throw ArgumentError("tol must be positive");
  SpectrumClass sc;
  Eigen::EigenSolver<Mat> es(m, false);
  const double band = tol * std::max(m.norm(), 1e-300);
  for (int i = 0; i < m.rows(); ++i) {
    std::complex<double> z = es.eigenvalues()[i];
    sc.eigenvalues.push_back(z);
    if (std::abs(z.real()) <= band) {
      if (std::abs(z.imag()) > band) {
        if (z.imag() > 0) ++sc.n_imag_pair;
      } else {
        ++sc.n_zero;
      }
    } else if (z.real() > 0) {
      ++sc.n_pos;
    } else {
      ++sc.n_neg;
    }
  }
  std::sort(sc.eigenvalues.begin(), sc.eigenvalues.end(),
            [](auto p, auto q) { return p.real() != q.real() ? p.real() < q.real() : p.imag() < q.imag(); });
  return sc;
}

ReducedLinearization reduced_linearization(const CdeSpec& spec, double h) {
  const CatastropheFamily& fam = spec.family;
  const int m = fam.slow_dim;
  std::vector<Vec> dirs;
  for (int i = 0; i < 27; ++i) {
    Vec u(3);
    u << i % 3 - 1, (i / 3) % 3 - 1, i / 9 - 1;
    if (u.isZero()) continue;
    u.normalize();
    if (std::abs(det_projection(fam, h * u)) / (h * h) < 0.05) continue;
    dirs.push_back(u);
  }
  if (m != 3 || dirs.size() < 3) throw ArgumentError("reduced linearization needs an umbilic chart");
  auto y = [&](const Vec& z) {
    return Vec(desingularized_field_generic(spec, z) / det_projection(fam, z));
  };
  Mat u(3, static_cast<long>(dirs.size())), d(3, static_cast<long>(dirs.size()));
  for (size_t i = 0; i < dirs.size(); ++i) {
    u.col(static_cast<long>(i)) = dirs[i];
    d.col(static_cast<long>(i)) = (y(h * dirs[i]) - y(-h * dirs[i])) / (2 * h);
  }
  ReducedLinearization r;
  r.linear = d * u.transpose() * (u * u.transpose()).inverse();
  r.residual = (r.linear * u - d).cwiseAbs().maxCoeff() / (1.0 + r.linear.cwiseAbs().maxCoeff());
  return r;
}

std::vector<EquilibriumInfo> find_equilibria(const CdeSpec& spec, const Vec& lo, const Vec& hi,
                                             int grid, bool parallel) {
  spec.validate();
  if (grid < 2) throw ArgumentError("grid must be >= 2");
  const int m = spec.family.slow_dim;
  if (lo.size() != m || hi.size() != m) throw ArgumentError("box dimension mismatch");
  NewtonProblem np;
  np.f = [&](const Vec& z) { return desingularized_field_generic(spec, z); };
  np.jac = [&](const Vec& z) { return linearize_at(spec, z, 1e-6 * (1.0 + z.norm())); };
  np.ftol = 1e-12;
  np.max_iter = 80;
  std::vector<Vec> roots = parallel ? grid_newton_parallel(np, lo, hi, grid, 1e-6)
                                    : grid_newton_serial(np, lo, hi, grid, 1e-6);
  std::vector<EquilibriumInfo> out;
  for (const Vec& z : roots) {
    bool inside = true;
    for (int i = 0; i < m; ++i)
      if (z[i] < lo[i] - 1e-9 || z[i] > hi[i] + 1e-9) inside = false;
    if (!inside) continue;
    EquilibriumInfo e;
    e.chart = z;
    e.residual = np.f(z).cwiseAbs().maxCoeff();
    e.on_singular = std::abs(det_projection(spec.family, z)) <= 1e-8;
    SpectrumClass sc = classify_spectrum(linearize_at(spec, z), 1e-6);
    e.eigenvalues = sc.eigenvalues;
    std::string type;
    if (sc.n_zero > 0) type = "degenerate";
    else if (sc.n_imag_pair > 0) type = "center";
    else if (sc.n_pos > 0 && sc.n_neg > 0) type = "saddle";
    else {
      bool cplx = false;
      for (auto ev : sc.eigenvalues) cplx = cplx || std::abs(ev.imag()) > 1e-9;
      type = cplx ? "focus" : "node";
    }
    e.kind = (e.on_singular ? "folded_" : "regular_") + type;
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const EquilibriumInfo& p, const EquilibriumInfo& q) {
    for (int i = 0; i < p.chart.size(); ++i)
      if (p.chart[i] != q.chart[i]) return p.chart[i] < q.chart[i];
    return false;
  });
  return out;
}

namespace {

std::string fmt_point(const Vec& z) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < z.size(); ++i) os << (i ? ", " : "") << z[i];
  os << ")";
  return os.str();
}

Variant regular_variant(const SpectrumClass& sc) {
  if (sc.n_zero > 0 || sc.n_imag_pair > 0) return Variant::NotGeneric;
  switch (sc.n_pos) {
    case 3: return Variant::Source;
    case 2: return Variant::Saddle1;
    case 1: return Variant::Saddle2;
    default: return Variant::Sink;
  }
}

Variant umbilic_variant(const SpectrumClass& sc, bool allow_center) {
  if (sc.n_zero == 1 && sc.n_pos == 1 && sc.n_neg == 1) return Variant::CenterSaddle;
  if (allow_center && sc.n_zero == 1 && sc.n_imag_pair == 1) return Variant::Center;
  return Variant::NotGeneric;
}

void transversality(const CdeSpec& spec, const ClassifySettings& s, GenericityReport& rep) {
  const CatastropheFamily& fam = spec.family;
  auto pts = sample_stratum(fam, StratumName::Fold, s.transversality_samples, s.seed, 0.5);
  int ok = 0;
  for (const TotalPoint& q : pts) {
    Mat j = jacobian_projection(fam, chart_of(fam, q));
    Eigen::JacobiSVD<Mat> svd(j, Eigen::ComputeFullU);
    Vec n = svd.matrixU().col(j.rows() - 1);
    Vec x = spec.eval_g(q);
    double xn = x.norm();
    if (xn > 1e-14 && std::abs(n.dot(x)) / xn >= s.transversality_angle) ++ok;
  }
  rep.transversality_samples = static_cast<int>(pts.size());
  rep.transversal_fraction = pts.empty() ? 1.0 : static_cast<double>(ok) / pts.size();
  if (ok < static_cast<int>(pts.size())) {
    std::ostringstream os;
    os << "X is transverse to the catastrophe set at " << ok << " of " << pts.size()
       << " sampled fold points";
    rep.notes.push_back(os.str());
  }
}

}  // namespace

Classification classify_cde(const CdeSpec& spec, const ClassifySettings& s) {
  spec.validate();
  const CatastropheFamily& fam = spec.family;
  const int m = fam.slow_dim;
  Classification out;
  out.label.family = fam.tag;
  GenericityReport& rep = out.report;
  const Vec g0 = spec.g_at_origin();
  const double tol = s.tol;
  auto not_generic = [&](const std::string& why) {
    out.label.variant = Variant::NotGeneric;
    rep.generic = false;
    rep.notes.push_back(why);
  };

  switch (fam.tag) {
    case FamilyTag::Morse: {
      if (g0.cwiseAbs().maxCoeff() > tol) {
        out.label.variant = Variant::FlowBox;
        break;
      }
      rep.spectrum = classify_spectrum(linearize_origin(spec));
      if (m != 3) {
        not_generic("regular classification is defined for three parameters");
        break;
      }
      out.label.variant = regular_variant(rep.spectrum);
      if (out.label.variant == Variant::NotGeneric)
        not_generic("equilibrium at the origin is not hyperbolic");
      break;
    }
    case FamilyTag::Fold: {
      if (std::abs(g0[0]) > tol) {
        double xbar = desingularized_field_generic(spec, ChartPoint::Zero(m))[0];
        out.label.variant = xbar > 0 ? Variant::FlowBox1 : Variant::FlowBox2;
        break;
      }
      rep.spectrum = classify_spectrum(linearize_origin(spec));
      const SpectrumClass& sc = rep.spectrum;
      const int structural = m - 2;
      if (sc.n_zero != structural || sc.n_imag_pair > 0) {
        not_generic("folded equilibrium at the origin is not hyperbolic");
        break;
      }
      out.label.variant = sc.n_pos == 2   ? Variant::Source
                          : sc.n_neg == 2 ? Variant::Sink
                                          : Variant::Saddle;
      break;
    }
    case FamilyTag::Cusp:
      if (std::abs(g0[1]) > tol)
        out.label.variant = fam.sign > 0 ? Variant::FlowBox : Variant::DualFlowBox;
      else
        not_generic("generic condition g_b(0) != 0 fails");
      break;
    case FamilyTag::Swallowtail:
      if (std::abs(g0[2]) > tol)
        out.label.variant = Variant::FlowBox;
      else
        not_generic("generic condition f_c(0) != 0 fails");
      break;
    case FamilyTag::HyperbolicUmbilic:
    case FamilyTag::EllipticUmbilic: {
      const bool hu = fam.tag == FamilyTag::HyperbolicUmbilic;
      if (std::abs(g0[1]) > tol && std::abs(g0[2]) > tol) {
        rep.spectrum = classify_spectrum(linearize_origin(spec));
        out.label.variant = umbilic_variant(rep.spectrum, hu);
        if (out.label.variant == Variant::NotGeneric) not_generic("unexpected spectrum at the origin");
      } else if (g0.cwiseAbs().maxCoeff() <= tol) {
        ReducedLinearization rl = reduced_linearization(spec);
        rep.spectrum = classify_spectrum(rl.linear, 1e-5);
        if (rl.residual > 1e-4) {
          not_generic("X-bar/det is not linearizable at the origin");
          break;
        }
        rep.notes.push_back("X vanishes at the origin; classified by the reduced field X-bar/det");
        out.label.variant = umbilic_variant(rep.spectrum, hu);
        if (out.label.variant == Variant::NotGeneric)
          not_generic("reduced field at the origin is not of center or center-saddle type");
      } else {
        not_generic("generic condition f_b(0) f_c(0) != 0 fails");
      }
      break;
    }
    default:
      throw ArgumentError("classification supports the regular, fold, cusp, swallowtail and "
                          "umbilic families only");
  }

  if (fam.codim() >= 1 && s.transversality_samples > 0) transversality(spec, s, rep);
  if (fam.codim() >= 1 && s.scan_folded) {
    int grid = m == 1 ? 41 : m == 2 ? 21 : 9;
    auto eqs = find_equilibria(spec, Vec::Constant(m, -2.0), Vec::Constant(m, 2.0), grid);
    int degenerate = 0;
    for (const auto& e : eqs) {
      if (!e.on_singular) continue;
      rep.folded.push_back(e);
      if (e.kind == "folded_degenerate") ++degenerate;
      else rep.notes.push_back(e.kind + " singularity at chart point " + fmt_point(e.chart));
    }
    if (degenerate > 0)
      rep.notes.push_back(std::to_string(degenerate) +
                          " degenerate folded equilibria found (non-isolated set)");
  }
  return out;
}

}  // namespace cde
