#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "recore/assembly.hpp"
#include "recore/resynth.hpp"

namespace recore::bench {

struct BenchResult {
    std::string benchmark;
    resynth::VariantId variant = resynth::VariantId::V1;
    uint64_t code_bytes = 0;
    uint64_t data_bytes = 0;
    uint64_t cycles = 0;
    uint64_t instructions = 0;  // retired
    bool correct = false;
};

struct BenchInput {
    std::string name;
    assembly::Program program;
    std::string entry = "main";
};

// Generates V1..V4 for each benchmark, measures code size and fault-free
// cycles, and verifies every variant against the host oracle. A variant
// producing a wrong value aborts its row with a diagnostic.
std::vector<BenchResult> run_suite(const std::vector<BenchInput>& inputs,
                                   uint64_t max_cycles = 200'000'000);

// Stable column order, byte-identical across runs on the same inputs:
// benchmark,variant,code_bytes,data_bytes,cycles,instructions,correct
std::string to_csv(const std::vector<BenchResult>& results);

}  // namespace recore::bench
