#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "cde/classifier.hpp"
#include "cde/kernels.hpp"
#include "cde/slowfast.hpp"

using namespace cde;

namespace {

NewtonProblem nerve_problem() {
  static const CdeSpec spec = zeeman_nerve().spec;
  NewtonProblem p;
  p.f = [](const Vec& z) { return desingularized_field_generic(spec, z); };
  p.jac = [](const Vec& z) {
    const double h = 1e-7;
    Mat j(z.size(), z.size());
    for (int k = 0; k < z.size(); ++k) {
      Vec up = z, dn = z;
      up[k] += h;
      dn[k] -= h;
      j.col(k) = (desingularized_field_generic(spec, up) - desingularized_field_generic(spec, dn)) /
                 (2 * h);
    }
    return j;
  };
  return p;
}

void BM_GridNewtonSerial(benchmark::State& st) {
  NewtonProblem p = nerve_problem();
  Vec lo = Vec::Constant(2, -2), hi = Vec::Constant(2, 2);
  const int grid = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(grid_newton_serial(p, lo, hi, grid));
}

void BM_GridNewtonParallel(benchmark::State& st) {
  NewtonProblem p = nerve_problem();
  Vec lo = Vec::Constant(2, -2), hi = Vec::Constant(2, 2);
  const int grid = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(grid_newton_parallel(p, lo, hi, grid));
}

struct GapBatch {
  std::vector<CdeSpec> specs;
  std::vector<GapSample> samples;
  explicit GapBatch(int n) {
    for (const char* l : {"swallowtail/flow_box", "hyperbolic_umbilic/center",
                          "elliptic_umbilic/center_saddle"})
      specs.push_back(normal_form_instance(parse_label(l)));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < n; ++i) {
      Vec z(3);
      z << u(rng), u(rng), u(rng);
      samples.push_back({&specs[i % specs.size()], z});
    }
  }
};

void BM_GapSerial(benchmark::State& st) {
  GapBatch b(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(desingularization_gap_serial(b.samples));
}

void BM_GapParallel(benchmark::State& st) {
  GapBatch b(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(desingularization_gap_parallel(b.samples));
}

double work(std::size_t i) {
  double s = 0;
  for (int k = 1; k < 200; ++k) s += std::sin(static_cast<double>(i * k)) / k;
  return s;
}

void BM_MapSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(map_serial<double>(n, work));
}

void BM_MapParallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(map_parallel<double>(n, work));
}

}  // namespace

BENCHMARK(BM_GridNewtonSerial)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridNewtonParallel)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GapSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GapParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MapSerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MapParallel)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
