#include "recore/bench.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "recore/emulator.hpp"
#include "recore/oracle.hpp"

namespace recore::bench {

std::vector<BenchResult> run_suite(const std::vector<BenchInput>& inputs, uint64_t max_cycles) {
    std::vector<BenchResult> out;
    emu::CostModel cost;
    emu::FaultConfig healthy;

    for (const auto& input : inputs) {
        auto oracle = oracle::expected_exit(input.name, input.program);
        if (!oracle)
            throw std::runtime_error("bench: no oracle for benchmark '" + input.name + "'");

        for (int vi = 0; vi < 4; ++vi) {
            auto v = resynth::VariantId(vi);
            assembly::Program p = resynth::make_variant(input.program, v);
            emu::RunResult r = emu::run_program(p, input.entry, healthy, cost, max_cycles);
            if (r.reason != emu::Termination::EcallExit)
                throw std::runtime_error("bench: " + input.name + " " +
                                         std::string(resynth::variant_name(v)) +
                                         " did not complete: " +
                                         (r.reason == emu::Termination::Trap ? r.trap_detail
                                                                             : "cycle limit"));
            BenchResult row;
            row.benchmark = input.name;
            row.variant = v;
            row.data_bytes = assembly::data_size_bytes(p);
            row.code_bytes = assembly::code_size_bytes(p) - row.data_bytes;
            row.cycles = r.cycles;
            row.instructions = r.retired;
            row.correct = r.state.exit_code == *oracle;
            if (!row.correct)
                throw std::runtime_error(
                    "bench: " + input.name + " " + std::string(resynth::variant_name(v)) +
                    " returned " + std::to_string(r.state.exit_code.value_or(0)) +
                    ", oracle says " + std::to_string(*oracle));
            out.push_back(std::move(row));
        }
    }

    std::sort(out.begin(), out.end(), [](const BenchResult& a, const BenchResult& b) {
        if (a.benchmark != b.benchmark) return a.benchmark < b.benchmark;
        return a.variant < b.variant;
    });
    return out;
}

std::string to_csv(const std::vector<BenchResult>& results) {
    if (results.empty()) throw std::runtime_error("bench: refusing to emit an empty result table");
    std::ostringstream out;
    out << "benchmark,variant,code_bytes,data_bytes,cycles,instructions,correct\n";
    for (const auto& r : results) {
        out << r.benchmark << "," << resynth::variant_name(r.variant) << "," << r.code_bytes << ","
            << r.data_bytes << "," << r.cycles << "," << r.instructions << ","
            << (r.correct ? 1 : 0) << "\n";
    }
    return out.str();
}

}  // namespace recore::bench
