#include <benchmark/benchmark.h>

#include "recore/assembly.hpp"
#include "recore/io.hpp"
#include "recore/resynth.hpp"

using namespace recore;

namespace {

std::string asset_text(const char* name) {
    return io::read_text_file(std::string(RECORE_ASSET_DIR) + "/" + name);
}

void BM_parse_rs(benchmark::State& state) {
    std::string text = asset_text("rs_encode.s");
    for (auto _ : state) {
        auto p = assembly::parse_program(text);
        benchmark::DoNotOptimize(p.items.size());
    }
    state.SetBytesProcessed(int64_t(state.iterations()) * int64_t(text.size()));
}

void BM_print_rs(benchmark::State& state) {
    auto p = assembly::parse_program(asset_text("rs_encode.s"));
    for (auto _ : state) {
        auto text = assembly::print_program(p);
        benchmark::DoNotOptimize(text.size());
    }
}

void BM_variant_v3(benchmark::State& state) {
    auto p = assembly::parse_program(asset_text("rs_encode.s"));
    for (auto _ : state) {
        auto v3 = resynth::make_variant(p, resynth::VariantId::V3);
        benchmark::DoNotOptimize(v3.items.size());
    }
}

}  // namespace

BENCHMARK(BM_parse_rs);
BENCHMARK(BM_print_rs);
BENCHMARK(BM_variant_v3);
