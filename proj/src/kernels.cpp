#include "cde/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cde {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::optional<Vec> newton_solve(const NewtonProblem& p, const Vec& seed, const Vec& lo,
                                const Vec& hi) {
  Vec z = seed;
  Vec span = hi - lo;
  for (int it = 0; it < p.max_iter; ++it) {
    Vec r = p.f(z);
    if (!r.allFinite()) return std::nullopt;
    if (r.cwiseAbs().maxCoeff() <= p.ftol) return z;
    Mat j = p.jac(z);
    Eigen::FullPivLU<Mat> lu(j);
    if (!lu.isInvertible()) return std::nullopt;
    Vec dz = lu.solve(r);
    z -= dz;
    for (int i = 0; i < z.size(); ++i)
      if (z[i] < lo[i] - span[i] || z[i] > hi[i] + span[i]) return std::nullopt;
    if (dz.cwiseAbs().maxCoeff() <= 1e-15 * (1.0 + z.cwiseAbs().maxCoeff())) {
      r = p.f(z);
      return r.cwiseAbs().maxCoeff() <= p.ftol ? std::optional<Vec>(z) : std::nullopt;
    }
  }
  Vec r = p.f(z);
  if (r.allFinite() && r.cwiseAbs().maxCoeff() <= p.ftol) return z;
  return std::nullopt;
}

std::vector<Vec> dedup_points(const std::vector<Vec>& pts, double radius) {
  std::vector<Vec> out;
  for (const Vec& p : pts) {
    bool dup = false;
    for (const Vec& q : out)
      if ((p - q).cwiseAbs().maxCoeff() <= radius) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  return out;
}

namespace {

Vec grid_seed(const Vec& lo, const Vec& hi, int grid, std::size_t idx) {
  const int d = static_cast<int>(lo.size());
  Vec s(d);
  for (int k = 0; k < d; ++k) {
    int ik = static_cast<int>(idx % grid);
    idx /= grid;
    s[k] = (grid == 1) ? 0.5 * (lo[k] + hi[k]) : lo[k] + (hi[k] - lo[k]) * ik / (grid - 1);
  }
  return s;
}

std::size_t grid_size(int d, int grid) {
  std::size_t n = 1;
  for (int k = 0; k < d; ++k) n *= static_cast<std::size_t>(grid);
  return n;
}

std::vector<Vec> collect(const std::vector<std::optional<Vec>>& hits, double radius) {
  std::vector<Vec> pts;
  for (const auto& h : hits)
    if (h) pts.push_back(*h);
  return dedup_points(pts, radius);
}

double gap_one(const GapSample& g) {
  Vec gen = desingularized_field_generic(*g.spec, g.chart);
  Vec clo = desingularized_field_closed(*g.spec, g.chart);
  return (clo - gen).cwiseAbs().maxCoeff() / (1.0 + gen.cwiseAbs().maxCoeff());
}

}  // namespace

std::vector<Vec> grid_newton_serial(const NewtonProblem& p, const Vec& lo, const Vec& hi,
                                    int grid, double radius) {
  std::size_t n = grid_size(static_cast<int>(lo.size()), grid);
  auto hits = map_serial<std::optional<Vec>>(
      n, [&](std::size_t i) { return newton_solve(p, grid_seed(lo, hi, grid, i), lo, hi); });
  return collect(hits, radius);
}

std::vector<Vec> grid_newton_parallel(const NewtonProblem& p, const Vec& lo, const Vec& hi,
                                      int grid, double radius) {
  std::size_t n = grid_size(static_cast<int>(lo.size()), grid);
  auto hits = map_parallel<std::optional<Vec>>(
      n, [&](std::size_t i) { return newton_solve(p, grid_seed(lo, hi, grid, i), lo, hi); });
  return collect(hits, radius);
}

std::vector<double> desingularization_gap_serial(const std::vector<GapSample>& s) {
  return map_serial<double>(s.size(), [&](std::size_t i) { return gap_one(s[i]); });
}

std::vector<double> desingularization_gap_parallel(const std::vector<GapSample>& s) {
  return map_parallel<double>(s.size(), [&](std::size_t i) { return gap_one(s[i]); });
}

}  // namespace cde
