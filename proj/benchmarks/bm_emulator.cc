#include <benchmark/benchmark.h>

#include "recore/assembly.hpp"
#include "recore/emulator.hpp"
#include "recore/io.hpp"
#include "recore/resynth.hpp"

using namespace recore;

namespace {

assembly::Program load_mac() {
    return assembly::parse_program(io::read_text_file(std::string(RECORE_ASSET_DIR) + "/mac.s"));
}

void BM_run_mac(benchmark::State& state, resynth::VariantId v) {
    assembly::Program p = resynth::make_variant(load_mac(), v);
    emu::Machine m(p, "main");
    emu::CostModel cost;
    emu::FaultConfig healthy;
    uint64_t retired = 0;
    for (auto _ : state) {
        emu::RunResult r = m.run(m.initial_state(), healthy, cost, 400'000'000);
        benchmark::DoNotOptimize(r.state.exit_code);
        retired += r.retired;
    }
    state.counters["instr/s"] =
        benchmark::Counter(double(retired), benchmark::Counter::kIsRate);
}

void BM_step_throughput(benchmark::State& state) {
    // Straight-line ALU mix, the hot path of every scenario.
    std::string text = "main:\n";
    for (int i = 0; i < 512; ++i) text += " add a0, a0, a1\n xor a1, a1, a0\n";
    text += " ecall\n";
    emu::Machine m(assembly::parse_program(text), "main");
    emu::CostModel cost;
    emu::FaultConfig healthy;
    uint64_t retired = 0;
    for (auto _ : state) {
        emu::RunResult r = m.run(m.initial_state(), healthy, cost, 1'000'000);
        retired += r.retired;
    }
    state.counters["instr/s"] =
        benchmark::Counter(double(retired), benchmark::Counter::kIsRate);
}

}  // namespace

BENCHMARK_CAPTURE(BM_run_mac, v1, resynth::VariantId::V1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_run_mac, v2, resynth::VariantId::V2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_run_mac, v3, resynth::VariantId::V3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_step_throughput)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
