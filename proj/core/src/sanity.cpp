#include "recore/sanity.hpp"

#include <array>
#include <sstream>
#include <vector>

#include "recore/assembly.hpp"

namespace recore::orch {
namespace {

struct Vector {
    std::string program;  // result lands in t2; ends with ecall
    uint32_t expected;
    // True for the MUL identity vectors whose +/-1 operands are staged
    // through the shifter; they only run when the shifter itself tested
    // clean, so a shift fault cannot masquerade as a multiplier fault.
    bool needs_shift = false;
};

std::string lui_line(const char* reg, uint32_t value_hi20) {
    std::ostringstream out;
    out << "lui " << reg << ", " << (value_hi20 & 0xFFFFF) << "\n";
    return out.str();
}

// Vectors per unit. Each unit's operand staging may use lui, that unit's own
// instructions, and immediates; the MUL +/-1 vectors additionally lean on
// the shifter, which is the cheapest way to build a small literal without
// touching the adder.
std::vector<Vector> make_vectors(Unit u) {
    std::vector<Vector> v;
    auto prog = [](std::string body) { return body + "ecall\n"; };

    switch (u) {
        case Unit::Mul: {
            auto pair = [&](uint32_t a_hi, uint32_t b_hi) {
                uint32_t a = a_hi << 12, b = b_hi << 12;
                v.push_back({lui_line("t0", a_hi) + lui_line("t1", b_hi) + "mul t2, t0, t1\necall\n",
                             a * b});
            };
            pair(6, 7);
            pair(0, 5);            // zero operand
            pair(0xFFFFF, 2);      // sign-heavy operand
            pair(0x7FFFF, 0x7FFFF);
            pair(1, 1);
            pair(0x12345, 3);
            pair(0xABCDE, 0x54321);
            pair(0x80000, 2);      // top bit falls off the low word
            // x * 1 (unit identity) and x * -1; literals via shifter.
            v.push_back({prog("lui t0, 74565\nlui t1, 1\nsrli t1, t1, 12\nmul t2, t0, t1\n"),
                         74565u << 12, true});
            v.push_back({prog("lui t0, 74565\nlui t1, 1048575\nsrai t1, t1, 12\nmul t2, t0, t1\n"),
                         uint32_t(-(int64_t(74565) << 12)), true});
            break;
        }
        case Unit::Add: {
            // The adder's own vectors may stage operands with addi: a broken
            // adder corrupting its own staging still reports as ADD failure.
            v.push_back({prog("addi t0, zero, 2\naddi t1, zero, 2\nadd t2, t0, t1\n"), 4});
            v.push_back({prog("lui t0, 74565\naddi t2, t0, 0\n"), 74565u << 12});  // identity
            v.push_back({prog("lui t0, 524288\naddi t0, t0, -1\naddi t1, zero, 1\nadd t2, t0, t1\n"),
                         0x80000000u});  // 0x7FFFFFFF + 1
            v.push_back({prog("addi t0, zero, -1\naddi t1, zero, 1\nadd t2, t0, t1\n"), 0});
            v.push_back({prog("addi t0, zero, 5\naddi t1, zero, 7\nsub t2, t0, t1\n"),
                         uint32_t(-2)});
            v.push_back({prog("lui t0, 74565\nsub t2, t0, t0\n"), 0});
            v.push_back({prog("lui t0, 4\naddi t2, t0, -2048\n"), (4u << 12) - 2048});
            v.push_back({prog("addi t0, zero, -1\naddi t1, zero, -1\nadd t2, t0, t1\n"),
                         0xFFFFFFFEu});  // all-ones + all-ones
            break;
        }
        case Unit::Shift: {
            v.push_back({prog("lui t0, 1\nsrli t2, t0, 12\n"), 1});
            v.push_back({prog("lui t0, 74565\nslli t2, t0, 0\n"), 74565u << 12});  // identity
            v.push_back({prog("lui t0, 524288\nsrai t2, t0, 4\n"), 0xF8000000u});
            v.push_back({prog("lui t0, 524288\nslli t2, t0, 1\n"), 0});  // carry out
            v.push_back({prog("lui t0, 1048575\nsrai t0, t0, 12\nsrli t2, t0, 28\n"), 0xF});
            v.push_back({prog("lui t0, 74565\nsrli t2, t0, 31\n"), 0});
            v.push_back({prog("lui t0, 6\nslli t2, t0, 7\n"), 6u << 19});
            v.push_back({prog("lui t0, 1048575\nsrai t2, t0, 31\n"), 0xFFFFFFFFu});
            break;
        }
        case Unit::And: {
            v.push_back({prog("lui t0, 986895\nlui t1, 246723\nand t2, t0, t1\n"),
                         (986895u << 12) & (246723u << 12)});
            v.push_back({prog("lui t0, 74565\nandi t2, t0, -1\n"), 74565u << 12});  // all-ones id
            v.push_back({prog("lui t0, 74565\nandi t2, t0, 0\n"), 0});
            v.push_back({prog("lui t0, 74565\nand t2, t0, t0\n"), 74565u << 12});
            v.push_back({prog("lui t0, 74565\nlui t1, 0\nand t2, t0, t1\n"), 0});
            v.push_back({prog("lui t0, 1048575\nlui t1, 349525\nand t2, t0, t1\n"),
                         (1048575u << 12) & (349525u << 12)});
            v.push_back({prog("lui t0, 699050\nandi t2, t0, 255\n"), (699050u << 12) & 255});
            v.push_back({prog("lui t0, 699050\nlui t1, 349525\nand t2, t0, t1\n"), 0});
            break;
        }
        case Unit::Or: {
            v.push_back({prog("lui t0, 74565\nori t2, t0, 0\n"), 74565u << 12});  // identity
            v.push_back({prog("lui t0, 74565\nori t2, t0, -1\n"), 0xFFFFFFFFu});  // all-ones
            v.push_back({prog("lui t0, 699050\nlui t1, 349525\nor t2, t0, t1\n"),
                         (699050u << 12) | (349525u << 12)});
            v.push_back({prog("lui t0, 74565\nor t2, t0, t0\n"), 74565u << 12});
            v.push_back({prog("lui t0, 0\nlui t1, 0\nor t2, t0, t1\n"), 0});
            v.push_back({prog("lui t0, 986895\nori t2, t0, 240\n"), (986895u << 12) | 240});
            v.push_back({prog("lui t0, 524288\nlui t1, 1\nor t2, t0, t1\n"),
                         (524288u << 12) | (1u << 12)});
            v.push_back({prog("lui t0, 1048575\nori t2, t0, 15\n"), (1048575u << 12) | 15});
            break;
        }
        case Unit::Xor: {
            v.push_back({prog("lui t0, 74565\nxori t2, t0, 0\n"), 74565u << 12});  // identity
            v.push_back({prog("lui t0, 74565\nxori t2, t0, -1\n"), ~(74565u << 12)});  // all-ones
            v.push_back({prog("lui t0, 74565\nxor t2, t0, t0\n"), 0});
            v.push_back({prog("lui t0, 699050\nlui t1, 349525\nxor t2, t0, t1\n"),
                         (699050u << 12) ^ (349525u << 12)});
            v.push_back({prog("lui t0, 0\nxori t2, t0, -1\n"), 0xFFFFFFFFu});
            v.push_back({prog("lui t0, 986895\nxori t2, t0, 255\n"), (986895u << 12) ^ 255});
            v.push_back({prog("lui t0, 524288\nlui t1, 524288\nxor t2, t0, t1\n"), 0});
            v.push_back({prog("lui t0, 1048575\nxori t2, t0, 1365\n"), (1048575u << 12) ^ 1365});
            break;
        }
    }
    return v;
}

// Probes for the hardware ADD path. These avoid add/addi entirely so an
// instruction-path-only ADD fault leaves them green while real adder damage
// (which also breaks comparison and addressing) turns them red.
std::vector<Vector> addressing_probes() {
    std::vector<Vector> v;
    // Equal operands must take the branch.
    v.push_back({"lui t0, 4\n"
                 "beq t0, t0, taken\n"
                 "lui t2, 0\n"
                 "ecall\n"
                 "taken:\n"
                 "lui t2, 1\n"
                 "ecall\n",
                 1u << 12});
    // Unequal operands must fall through.
    v.push_back({"lui t0, 4\n"
                 "beq t0, zero, skipped\n"
                 "lui t2, 1\n"
                 "ecall\n"
                 "skipped:\n"
                 "lui t2, 0\n"
                 "ecall\n",
                 1u << 12});
    // Two distinct bases must stay distinct through address generation.
    v.push_back({"lui t0, 32\n"
                 "lui t1, 33\n"
                 "lui t2, 699050\n"
                 "sw t2, 0(t0)\n"
                 "lui t2, 349525\n"
                 "sw t2, 0(t1)\n"
                 "lw t2, 0(t0)\n"
                 "ecall\n",
                 699050u << 12});
    // Offset addressing round-trip.
    v.push_back({"lui t0, 32\n"
                 "lui t2, 489335\n"
                 "sw t2, 8(t0)\n"
                 "lui t2, 0\n"
                 "lw t2, 8(t0)\n"
                 "ecall\n",
                 489335u << 12});
    return v;
}

struct Runner {
    emu::Machine machine;
    uint32_t expected;
    bool needs_shift;
};

struct Suite {
    std::vector<Runner> runners;
};

Suite build_suite(const std::vector<Vector>& vectors) {
    Suite out;
    for (const auto& vec : vectors)
        out.runners.push_back({emu::Machine(assembly::parse_program("main:\n" + vec.program), "main"),
                               vec.expected, vec.needs_shift});
    return out;
}

const Suite& suite_for(Unit u) {
    static const std::array<Suite, 6> suites = [] {
        std::array<Suite, 6> s;
        for (Unit u : kAllUnits) s[size_t(u)] = build_suite(make_vectors(u));
        return s;
    }();
    return suites[size_t(u)];
}

const Suite& addressing_suite() {
    static const Suite s = build_suite(addressing_probes());
    return s;
}

}  // namespace

bool SanityReport::all_pass() const {
    if (!addressing_ok) return false;
    for (const auto& [u, ok] : unit_pass)
        if (!ok) return false;
    return true;
}

UnitSet SanityReport::failed_units() const {
    UnitSet out;
    for (const auto& [u, ok] : unit_pass)
        if (!ok) out.insert(u);
    return out;
}

std::string SanityReport::summary() const {
    std::ostringstream out;
    for (Unit u : kAllUnits) {
        auto it = unit_pass.find(u);
        out << unit_name(u) << ":" << (it != unit_pass.end() && it->second ? "pass" : "fail")
            << " ";
    }
    out << "addr:" << (addressing_ok ? "ok" : "fail");
    return out.str();
}

SanityReport sanity_check(const emu::FaultConfig& faults) {
    SanityReport rep;
    emu::CostModel cost;

    auto run_one = [&](const Runner& r) -> bool {
        emu::RunResult res = r.machine.run(r.machine.initial_state(), faults, cost, 256);
        rep.cycles_spent += res.cycles;
        if (res.reason != emu::Termination::EcallExit) return false;  // trap counts as failure
        return res.state.regs[7] == r.expected;                       // t2
    };

    auto run_unit = [&](Unit u, bool shift_ok) {
        const Suite& s = suite_for(u);
        int failed = 0, ran = 0;
        for (const auto& runner : s.runners) {
            if (runner.needs_shift && !shift_ok) continue;
            ++ran;
            if (!run_one(runner)) ++failed;
        }
        rep.vectors_run[u] = ran;
        rep.vectors_failed[u] = failed;
        rep.unit_pass[u] = failed == 0;
    };

    // The shifter first: its verdict gates the shift-staged MUL vectors.
    run_unit(Unit::Shift, true);
    for (Unit u : kAllUnits)
        if (u != Unit::Shift) run_unit(u, rep.unit_pass[Unit::Shift]);

    int addr_failed = 0;
    for (const auto& runner : addressing_suite().runners)
        if (!run_one(runner)) ++addr_failed;
    rep.addressing_ok = addr_failed == 0;
    return rep;
}

}  // namespace recore::orch
