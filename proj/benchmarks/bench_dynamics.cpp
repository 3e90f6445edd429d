#include <benchmark/benchmark.h>

#include "squidbec/hybrid_dynamics.hpp"

namespace {

using namespace squidbec;

HybridParams fast_params() {
  HybridParams p;
  p.e_hfs = 2.0 * 3.141592653589793 * 1e8;
  p.omega = 2.0 * 3.141592653589793 * 1e6;
  return p;
}

Eigen::Vector4cd ket01() {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(2) = 1.0;
  return v;
}

// Cost of the closed-form two-block stepper, per integration step.
void BM_EvolveBlocks(benchmark::State& state) {
  const HybridParams p = fast_params();
  const RampSchedule s(1e-7, 3e-7, 2e-8);
  IntegratorOptions opt;
  opt.output_samples = 2;
  const HybridState init(ket01());
  const double t_end = 4e-7;
  long steps = 0;
  for (auto _ : state) {
    auto r = evolve(init, s, p, ket01(), 0.0, t_end, opt);
    benchmark::DoNotOptimize(r.f_opt_final);
    steps += static_cast<long>(t_end / (opt.step_fraction / (2.0 * p.e_hfs)));
  }
  state.SetItemsProcessed(steps);
}
BENCHMARK(BM_EvolveBlocks);

// Same span through the dense 4x4 eigensolver path (zz flag with zero
// coefficient forces it).
void BM_EvolveGeneral(benchmark::State& state) {
  HybridParams p = fast_params();
  p.include_zz = true;
  const RampSchedule s(1e-7, 3e-7, 2e-8);
  IntegratorOptions opt;
  opt.output_samples = 2;
  const HybridState init(ket01());
  for (auto _ : state) {
    auto r = evolve(init, s, p, ket01(), 0.0, 4e-7, opt);
    benchmark::DoNotOptimize(r.f_opt_final);
  }
}
BENCHMARK(BM_EvolveGeneral);

void BM_TransferProtocolFast(benchmark::State& state) {
  const HybridParams p = fast_params();
  IntegratorOptions opt;
  opt.output_samples = 101;
  for (auto _ : state) {
    auto r = transfer_protocol(0.0, 1.0, p, 1e-7, opt);
    benchmark::DoNotOptimize(r.f_opt_final);
  }
}
BENCHMARK(BM_TransferProtocolFast);

void BM_RampWindow(benchmark::State& state) {
  const RampSchedule s(1e-6, 3e-6, 2e-7);
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-9;
    benchmark::DoNotOptimize(ramp_window(t, s));
  }
}
BENCHMARK(BM_RampWindow);

}  // namespace
