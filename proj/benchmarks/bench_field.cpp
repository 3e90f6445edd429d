#include <benchmark/benchmark.h>

#include "squidbec/loop_field.hpp"

namespace {

using namespace squidbec;

const LoopGeometry& geom() {
  static const LoopGeometry g(1e-6, 5e-8);
  return g;
}

void BM_EllipticK(benchmark::State& state) {
  double k = 0.0;
  for (auto _ : state) {
    k += 1e-9;
    benchmark::DoNotOptimize(elliptic_K(0.5 + k));
  }
}
BENCHMARK(BM_EllipticK);

void BM_EllipticE(benchmark::State& state) {
  double k = 0.0;
  for (auto _ : state) {
    k += 1e-9;
    benchmark::DoNotOptimize(elliptic_E(0.5 + k));
  }
}
BENCHMARK(BM_EllipticE);

void BM_VectorPotential(benchmark::State& state) {
  const Eigen::Vector3d r(0.7e-6, 0.4e-6, 1.3e-6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vector_potential(r, geom(), 1e-3));
  }
}
BENCHMARK(BM_VectorPotential);

void BM_MagneticField(benchmark::State& state) {
  const Eigen::Vector3d r(0.7e-6, 0.4e-6, 1.3e-6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(magnetic_field(r, geom(), 1e-3));
  }
}
BENCHMARK(BM_MagneticField);

void BM_MagneticFieldNearAxis(benchmark::State& state) {
  const Eigen::Vector3d r(1e-15, 0.0, 50e-6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(magnetic_field(r, geom(), 1e-3));
  }
}
BENCHMARK(BM_MagneticFieldNearAxis);

void BM_FieldFdCurl(benchmark::State& state) {
  const Eigen::Vector3d r(0.7e-6, 0.4e-6, 1.3e-6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(magnetic_field_fd(r, geom(), 1e-3));
  }
}
BENCHMARK(BM_FieldFdCurl);

}  // namespace

BENCHMARK_MAIN();
