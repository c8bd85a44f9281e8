#pragma once

#include <cstdint>
#include <map>

#include "recore/emulator.hpp"
#include "recore/unit.hpp"

namespace recore::orch {

// Result of the software self-test: per-unit golden-vector verdicts plus a
// probe of the hardware ADD path (branch comparison and load/store
// addressing), which the per-unit vectors deliberately avoid.
struct SanityReport {
    std::map<Unit, bool> unit_pass;
    std::map<Unit, int> vectors_run;
    std::map<Unit, int> vectors_failed;
    bool addressing_ok = true;
    uint64_t cycles_spent = 0;

    bool all_pass() const;
    UnitSet failed_units() const;
    std::string summary() const;  // "MUL:fail ADD:pass ... addr:ok"
};

// Runs >= 8 golden vectors per unit as tiny emulated programs under the
// given fault configuration. Operands are staged with lui (and, where a
// literal like 1 or -1 is unavoidable, an immediate-form op or a shift) so
// a fault in one unit does not contaminate another unit's verdict. A trap
// during a unit's vector marks that unit failed.
SanityReport sanity_check(const emu::FaultConfig& faults);

}  // namespace recore::orch
