#include "cde/strata.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "cde/errors.hpp"

namespace cde {

const char* stratum_name(StratumName n) {
  switch (n) {
    case StratumName::Regular: return "regular";
    case StratumName::Fold: return "fold";
    case StratumName::Cusp: return "cusp";
    case StratumName::SwallowtailPoint: return "swallowtail_point";
    case StratumName::UmbilicPoint: return "umbilic_point";
  }
  return "?";
}

StratumName stratum_from_name(const std::string& s) {
  for (StratumName n : {StratumName::Regular, StratumName::Fold, StratumName::Cusp,
                        StratumName::SwallowtailPoint, StratumName::UmbilicPoint})
    if (s == stratum_name(n)) return n;
  throw ArgumentError("unknown stratum '" + s + "'");
}

std::string symbol_string(const std::vector<int>& symbol) {
  std::string out;
  for (size_t i = 0; i < symbol.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(symbol[i]);
  }
  return out;
}

namespace {

bool corank_one(const CatastropheFamily& fam) { return fam.fast_dim == 1; }

void require_dynamic(const CatastropheFamily& fam) {
  switch (fam.tag) {
    case FamilyTag::Morse:
    case FamilyTag::Fold:
    case FamilyTag::Cusp:
    case FamilyTag::Swallowtail:
    case FamilyTag::EllipticUmbilic:
    case FamilyTag::HyperbolicUmbilic:
      return;
    default:
      throw ArgumentError("strata are not supported for family " + family_name(fam.tag));
  }
}

Vec null_vector(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  int i = std::abs(es.eigenvalues()[0]) <= std::abs(es.eigenvalues()[1]) ? 0 : 1;
  return es.eigenvectors().col(i);
}

double third_scale(const CatastropheFamily& fam, const TotalPoint& p) {
  double s = 0.0;
  for (int i = 0; i <= 3; ++i) s = std::max(s, std::abs(fast_partial(fam, p, i, 3 - i)));
  return s;
}

}  // namespace

StratumLabel make_stratum(const CatastropheFamily& fam, StratumName n) {
  StratumLabel l;
  l.name = n;
  if (corank_one(fam)) {
    switch (n) {
      case StratumName::Regular: l.symbol = {1, 0}; break;
      case StratumName::Fold: l.symbol = {1, 1, 0}; break;
      case StratumName::Cusp: l.symbol = {1, 1, 1, 0}; break;
      case StratumName::SwallowtailPoint: l.symbol = {1, 1, 1, 1}; break;
      case StratumName::UmbilicPoint:
        throw ArgumentError("umbilic point stratum needs two fast variables");
    }
  } else {
    switch (n) {
      case StratumName::Regular: l.symbol = {2, 0}; break;
      case StratumName::Fold: l.symbol = {2, 1, 0}; break;
      case StratumName::Cusp: l.symbol = {2, 1, 1, 0}; break;
      case StratumName::UmbilicPoint: l.symbol = {2, 2}; break;
      case StratumName::SwallowtailPoint:
        throw ArgumentError("swallowtail point stratum needs one fast variable");
    }
  }
  return l;
}

std::vector<StratumName> supported_strata(const CatastropheFamily& fam) {
  require_dynamic(fam);
  using S = StratumName;
  switch (fam.tag) {
    case FamilyTag::Morse: return {S::Regular};
    case FamilyTag::Fold: return {S::Regular, S::Fold};
    case FamilyTag::Cusp: return {S::Regular, S::Fold, S::Cusp};
    case FamilyTag::Swallowtail: return {S::Regular, S::Fold, S::Cusp, S::SwallowtailPoint};
    default: return {S::Regular, S::Fold, S::Cusp, S::UmbilicPoint};
  }
}

StratumLabel stratum_of(const CatastropheFamily& fam, const TotalPoint& p, double tol) {
  require_dynamic(fam);
  check_dims(fam, p);
  if (!(tol > 0)) throw ArgumentError("tol must be positive");
  double sc = 1.0 + std::max(p.fast.cwiseAbs().maxCoeff(), p.slow.cwiseAbs().maxCoeff());
  if (grad_fast(fam, p).cwiseAbs().maxCoeff() > tol * std::pow(sc, 5))
    throw PreconditionError("stratum_of: point is not on S_V");
  if (corank_one(fam)) {
    int deg = fiber_degree(fam, 0);
    std::vector<double> d(static_cast<size_t>(deg + 1), 0.0);
    double scale = 0.0;
    for (int k = 2; k <= deg; ++k) {
      d[static_cast<size_t>(k)] = fast_partial(fam, p, k, 0);
      scale = std::max(scale, std::abs(d[static_cast<size_t>(k)]));
    }
    auto zero = [&](int k) { return k > deg || std::abs(d[static_cast<size_t>(k)]) <= tol * scale; };
    if (!zero(2)) return make_stratum(fam, StratumName::Regular);
    if (!zero(3)) return make_stratum(fam, StratumName::Fold);
    if (!zero(4)) return make_stratum(fam, StratumName::Cusp);
    return make_stratum(fam, StratumName::SwallowtailPoint);
  }
  Mat h = hessian_fast(fam, p);
  double scale = std::max(h.cwiseAbs().maxCoeff(), third_scale(fam, p));
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  int nz = 0;
  for (int i = 0; i < 2; ++i)
    if (std::abs(es.eigenvalues()[i]) <= tol * scale) ++nz;
  if (nz == 0) return make_stratum(fam, StratumName::Regular);
  if (nz == 2) return make_stratum(fam, StratumName::UmbilicPoint);
  Vec v = null_vector(h);
  if (std::abs(directional_derivative(fam, p, v, 3)) <= tol * scale)
    return make_stratum(fam, StratumName::Cusp);
  return make_stratum(fam, StratumName::Fold);
}

double stratum_residual(const CatastropheFamily& fam, const TotalPoint& p, StratumName n) {
  double r = grad_fast(fam, p).cwiseAbs().maxCoeff();
  if (n == StratumName::Regular) return r;
  if (corank_one(fam)) {
    int upto = n == StratumName::Fold ? 2 : n == StratumName::Cusp ? 3 : 4;
    for (int k = 2; k <= upto; ++k) r = std::max(r, std::abs(fast_partial(fam, p, k, 0)));
    return r;
  }
  Mat h = hessian_fast(fam, p);
  if (n == StratumName::UmbilicPoint) return std::max(r, h.cwiseAbs().maxCoeff());
  r = std::max(r, std::abs(h.determinant()));
  // With a two-dimensional kernel the point is in the closure of every cusp curve.
  if (n == StratumName::Cusp && h.cwiseAbs().maxCoeff() > 1e-12)
    r = std::max(r, std::abs(directional_derivative(fam, p, null_vector(h), 3)));
  return r;
}

StratumParametrization stratum_parametrization(const CatastropheFamily& fam, StratumName n,
                                               double radius) {
  require_dynamic(fam);
  auto names = supported_strata(fam);
  if (std::find(names.begin(), names.end(), n) == names.end())
    throw ArgumentError(std::string("stratum ") + stratum_name(n) + " does not exist for " +
                        family_name(fam.tag));
  const double r = radius;
  const double margin = 0.05 * r;
  const int m = fam.slow_dim;
  const int pads = (fam.tag == FamilyTag::Morse) ? 0 : m - fam.codim();
  StratumParametrization sp;
  int core = 0;
  // Core parameters first, padded slow coordinates last.
  std::function<TotalPoint(const Vec&)> core_map;
  std::function<bool(const Vec&)> core_ok = [](const Vec&) { return true; };
  const int fdim = fam.fast_dim;
  auto pt = [fdim, m](double x, double y, std::vector<double> slow) {
    TotalPoint p;
    p.fast = Vec::Zero(fdim);
    p.fast[0] = x;
    if (fdim == 2) p.fast[1] = y;
    p.slow = Vec::Zero(m);
    for (size_t k = 0; k < slow.size(); ++k) p.slow[static_cast<long>(k)] = slow[k];
    return p;
  };
  using S = StratumName;
  switch (fam.tag) {
    case FamilyTag::Morse:
      core = m;
      core_map = [=](const Vec& u) {
        TotalPoint p;
        p.fast = Vec::Zero(1);
        p.slow = u;
        return p;
      };
      break;
    case FamilyTag::Fold:
      if (n == S::Regular) {
        core = 1;
        core_map = [=](const Vec& u) { return pt(u[0], 0, {-u[0] * u[0]}); };
        core_ok = [=](const Vec& u) { return std::abs(u[0]) > margin; };
      } else {
        core_map = [=](const Vec&) { return pt(0, 0, {0}); };
      }
      break;
    case FamilyTag::Cusp:
      if (n == S::Regular) {
        core = 2;
        core_map = [=](const Vec& u) {
          double x = u[0], a = u[1];
          return pt(x, 0, {a, -x * x * x - a * x});
        };
        core_ok = [=](const Vec& u) { return std::abs(3 * u[0] * u[0] + u[1]) > margin; };
      } else if (n == S::Fold) {
        core = 1;
        core_map = [=](const Vec& u) {
          double x = u[0];
          return pt(x, 0, {-3 * x * x, 2 * x * x * x});
        };
        core_ok = [=](const Vec& u) { return std::abs(u[0]) > margin; };
      } else {
        core_map = [=](const Vec&) { return pt(0, 0, {0, 0}); };
      }
      break;
    case FamilyTag::Swallowtail:
      if (n == S::Regular) {
        core = 3;
        core_map = [=](const Vec& u) {
          double x = u[0], a = u[1], b = u[2];
          return pt(x, 0, {a, b, -x * x * x * x - a * x * x - b * x});
        };
        core_ok = [=](const Vec& u) {
          double x = u[0];
          return std::abs(4 * x * x * x + 2 * u[1] * x + u[2]) > margin;
        };
      } else if (n == S::Fold) {
        core = 2;
        core_map = [=](const Vec& u) {
          double x = u[0], a = u[1];
          return pt(x, 0, {a, -4 * x * x * x - 2 * a * x, 3 * x * x * x * x + a * x * x});
        };
        core_ok = [=](const Vec& u) { return std::abs(12 * u[0] * u[0] + 2 * u[1]) > margin; };
      } else if (n == S::Cusp) {
        core = 1;
        core_map = [=](const Vec& u) {
          double x = u[0];
          return pt(x, 0, {-6 * x * x, 8 * x * x * x, -3 * x * x * x * x});
        };
        core_ok = [=](const Vec& u) { return std::abs(u[0]) > margin; };
      } else {
        core_map = [=](const Vec&) { return pt(0, 0, {0, 0, 0}); };
      }
      break;
    case FamilyTag::HyperbolicUmbilic: {
      auto hu = [=](double x, double y, double a) {
        return pt(x, y, {a, -3 * x * x - a * y, -3 * y * y - a * x});
      };
      if (n == S::Regular) {
        core = 3;
        core_map = [=](const Vec& u) { return hu(u[0], u[1], u[2]); };
        core_ok = [=](const Vec& u) {
          return std::abs(36 * u[0] * u[1] - u[2] * u[2]) > margin * r;
        };
      } else if (n == S::Fold) {
        core = 2;
        core_map = [=](const Vec& u) {
          double x = u[0], a = u[1];
          return hu(x, a * a / (36 * x), a);
        };
        core_ok = [=](const Vec& u) {
          if (std::abs(u[0]) <= 0.1 * r) return false;
          double y = u[1] * u[1] / (36 * u[0]);
          return std::abs(u[0] - y) > margin;
        };
      } else if (n == S::Cusp) {
        core = 1;
        core_map = [=](const Vec& u) { return hu(u[0], u[0], 6 * u[0]); };
        core_ok = [=](const Vec& u) { return std::abs(u[0]) > margin; };
      } else {
        core_map = [=](const Vec&) { return hu(0, 0, 0); };
      }
      break;
    }
    case FamilyTag::EllipticUmbilic: {
      auto eu = [=](double x, double y, double a) {
        return pt(x, y, {a, -3 * x * x + 3 * y * y - 2 * a * x, 6 * x * y - 2 * a * y});
      };
      constexpr double two_pi = 2.0 * std::numbers::pi;
      if (n == S::Regular) {
        core = 3;
        core_map = [=](const Vec& u) { return eu(u[0], u[1], u[2]); };
        core_ok = [=](const Vec& u) {
          return std::abs(4 * u[2] * u[2] - 36 * (u[0] * u[0] + u[1] * u[1])) > margin * r;
        };
      } else if (n == S::Fold) {
        core = 2;
        // (a, phi) with phi scaled into [-r, r].
        core_map = [=](const Vec& u) {
          double a = u[0], phi = std::numbers::pi * (u[1] / r + 1.0);
          return eu(a / 3 * std::cos(phi), a / 3 * std::sin(phi), a);
        };
        core_ok = [=](const Vec& u) {
          if (std::abs(u[0]) <= margin) return false;
          double phi = std::numbers::pi * (u[1] / r + 1.0);
          for (int k = 0; k <= 3; ++k)
            if (std::abs(phi - k * two_pi / 3) < 0.05) return false;
          return true;
        };
      } else if (n == S::Cusp) {
        core = 1;
        // Three branches at angles 0, 2pi/3, 4pi/3 packed into [-3r, 3r].
        core_map = [=](const Vec& u) {
          double s = u[0] + 3 * r;
          int k = std::clamp(static_cast<int>(std::floor(s / (2 * r))), 0, 2);
          double a = s - (2 * k + 1) * r;
          double phi = k * two_pi / 3;
          return eu(a / 3 * std::cos(phi), a / 3 * std::sin(phi), a);
        };
        core_ok = [=](const Vec& u) {
          double s = u[0] + 3 * r;
          int k = std::clamp(static_cast<int>(std::floor(s / (2 * r))), 0, 2);
          return std::abs(s - (2 * k + 1) * r) > margin;
        };
      } else {
        core_map = [=](const Vec&) { return eu(0, 0, 0); };
      }
      break;
    }
    default:
      break;
  }
  sp.dim = core + pads;
  sp.lo = Vec::Constant(sp.dim, -r);
  sp.hi = Vec::Constant(sp.dim, r);
  if (fam.tag == FamilyTag::EllipticUmbilic && n == S::Cusp) {
    sp.lo[0] = -3 * r;
    sp.hi[0] = 3 * r;
  }
  const int codim = fam.codim();
  sp.map = [=](const Vec& u) {
    TotalPoint p = core_map(u.head(core));
    for (int k = 0; k < pads; ++k) p.slow[codim + k] = u[core + k];
    return p;
  };
  sp.accept = [=](const Vec& u) { return core_ok(u.head(core)); };
  return sp;
}

std::vector<TotalPoint> sample_stratum(const CatastropheFamily& fam, StratumName n, int count,
                                       std::uint64_t seed, double radius) {
  if (count < 0) throw ArgumentError("count must be non-negative");
  StratumParametrization sp = stratum_parametrization(fam, n, radius);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<TotalPoint> out;
  long attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 1000L * (count + 1))
      throw NumericalError("sample_stratum: rejection sampling made no progress");
    Vec u(sp.dim);
    for (int i = 0; i < sp.dim; ++i) u[i] = sp.lo[i] + (sp.hi[i] - sp.lo[i]) * uni(rng);
    if (!sp.accept(u)) continue;
    out.push_back(sp.map(u));
  }
  return out;
}

}  // namespace cde
