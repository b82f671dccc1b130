// Parallel kernels against their serial references.

#include "chiral/sweep.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace chiral;

namespace {

SweepSpec grid_spec() {
    SweepSpec s;
    s.d_grid = {0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
    s.xi_grid = {0.4, 0.8, 1.2, 1.6, 2.0, 2.4};
    s.sizes = {20, 30, 40};
    return s;
}

std::vector<ChainConfig> scan_configs() {
    std::vector<ChainConfig> out;
    for (int i = 1; i <= 64; ++i) {
        ChainConfig c;
        c.n_atoms = 100;
        c.xi = kPi * i / 65.0;
        c.directionality = 0.4;
        out.push_back(c);
    }
    return out;
}

void BM_PhaseDiagramSerial(benchmark::State& st) {
    const SweepSpec s = grid_spec();
    for (auto _ : st) benchmark::DoNotOptimize(compute_phase_diagram_serial(s));
}

void BM_PhaseDiagramParallel(benchmark::State& st) {
    const SweepSpec s = grid_spec();
    for (auto _ : st) benchmark::DoNotOptimize(compute_phase_diagram(s, static_cast<int>(st.range(0))));
}

void BM_ScanSerial(benchmark::State& st) {
    const auto c = scan_configs();
    for (auto _ : st) benchmark::DoNotOptimize(measure_scan_serial(c));
}

void BM_ScanParallel(benchmark::State& st) {
    const auto c = scan_configs();
    for (auto _ : st) benchmark::DoNotOptimize(measure_scan(c, static_cast<int>(st.range(0))));
}

} // namespace

BENCHMARK(BM_PhaseDiagramSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhaseDiagramParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
