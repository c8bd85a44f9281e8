#include <benchmark/benchmark.h>

#include "recore/tdc.hpp"

using namespace recore::tdc;

namespace {

void BM_sample(benchmark::State& state) {
    TdcConfig cal = calibrate(TdcConfig{}, 200, 7);
    NoiseSource noise(7);
    int acc = 0;
    for (auto _ : state) acc += sample(cal, 25.0, noise).hw;
    benchmark::DoNotOptimize(acc);
    state.counters["samples/s"] =
        benchmark::Counter(double(state.iterations()), benchmark::Counter::kIsRate);
}

void BM_detect_stream(benchmark::State& state) {
    TdcConfig cal = calibrate(TdcConfig{}, 200, 7);
    NoiseSource noise(7);
    Detector det(DetectorConfig{}, cal.taps / 2);
    for (auto _ : state) {
        TdcSample s = sample(cal, 0.0, noise);
        benchmark::DoNotOptimize(det.feed(s));
    }
}

}  // namespace

BENCHMARK(BM_sample);
BENCHMARK(BM_detect_stream);
