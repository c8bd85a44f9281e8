#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "recore/assembly.hpp"

namespace recore::oracle {

// Host-arithmetic reference results for the shipped benchmarks. Each oracle
// reads the benchmark's input data straight out of the parsed program and
// recomputes the exit value with plain two's-complement host integers, so
// correctness verdicts never depend on the emulated ALU path.
uint32_t mac_expected(const assembly::Program& p);

// Rebuilds GF(256) from the primitive polynomial instead of trusting the
// lookup tables shipped in the assembly, then runs the systematic encoder.
uint32_t rs_encode_expected(const assembly::Program& p);

// Dispatch by benchmark name ("mac", "rs_encode"); nullopt when unknown.
std::optional<uint32_t> expected_exit(std::string_view benchmark, const assembly::Program& p);

}  // namespace recore::oracle
