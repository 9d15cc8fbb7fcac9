#pragma once

#include <exception>
#include <functional>
#include <optional>
#include <vector>

#include "cde/desingularization.hpp"

namespace cde {

// Run fn(i) for i in [0,n), storing results by index. The parallel variant
// uses OpenMP when available; any exception is rethrown after the loop.
template <class T, class Fn>
std::vector<T> map_serial(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  return out;
}

template <class T, class Fn>
std::vector<T> map_parallel(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  std::exception_ptr err = nullptr;
  const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < nn; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(cde_map_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

int max_threads();

struct NewtonProblem {
  std::function<Vec(const Vec&)> f;
  std::function<Mat(const Vec&)> jac;
  double ftol = 1e-12;
  int max_iter = 60;
};

// Newton from a single seed; nullopt if it fails or leaves 2x the box.
std::optional<Vec> newton_solve(const NewtonProblem& p, const Vec& seed, const Vec& lo,
                                const Vec& hi);

// Newton seeded on a uniform grid (grid points per axis) over [lo,hi].
// Converged roots are returned deduplicated in grid order; the two variants
// give identical output.
std::vector<Vec> grid_newton_serial(const NewtonProblem& p, const Vec& lo, const Vec& hi,
                                    int grid, double dedup_radius = 1e-6);
std::vector<Vec> grid_newton_parallel(const NewtonProblem& p, const Vec& lo, const Vec& hi,
                                      int grid, double dedup_radius = 1e-6);

// Order-preserving deduplication with the given radius (inf norm).
std::vector<Vec> dedup_points(const std::vector<Vec>& pts, double radius);

// Relative gap between closed-form and adjugate desingularized fields,
// |closed - generic|_inf / (1 + |generic|_inf), one entry per pair.
struct GapSample {
  const CdeSpec* spec;
  ChartPoint chart;
};
std::vector<double> desingularization_gap_serial(const std::vector<GapSample>& s);
std::vector<double> desingularization_gap_parallel(const std::vector<GapSample>& s);

}  // namespace cde
