#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "recore/assembly.hpp"
#include "recore/unit.hpp"

namespace recore::emu {

// ---------------------------------------------------------------------------
// Fault model

enum class FaultKind : uint8_t { Healthy, Disabled, StuckAt, WrongResult };

struct Fault {
    FaultKind kind = FaultKind::Healthy;
    uint8_t bit = 0;        // StuckAt
    uint8_t bit_value = 0;  // StuckAt: forced 0 or 1
    uint32_t xor_mask = 0;  // WrongResult

    static Fault healthy() { return {}; }
    static Fault disabled() { return {FaultKind::Disabled, 0, 0, 0}; }
    static Fault stuck_at(uint8_t bit, uint8_t value) { return {FaultKind::StuckAt, bit, value, 0}; }
    static Fault wrong_result(uint32_t mask) { return {FaultKind::WrongResult, 0, 0, mask}; }

    bool operator==(const Fault&) const = default;
};

// An ADD-unit fault can be confined to the add/addi/sub/auipc instruction
// path (the soft-recovery case) or hit the shared adder hardware as well, in
// which case branch comparison and load/store address generation corrupt too.
enum class AddFaultScope : uint8_t { Full, InstructionOnly };

struct FaultConfig {
    std::array<Fault, 6> faults{};  // indexed by Unit
    AddFaultScope add_scope = AddFaultScope::Full;

    Fault& operator[](Unit u) { return faults[static_cast<size_t>(u)]; }
    const Fault& operator[](Unit u) const { return faults[static_cast<size_t>(u)]; }

    void set(Unit u, Fault f) { faults[static_cast<size_t>(u)] = f; }
    void clear() { *this = FaultConfig{}; }
    bool all_healthy() const;
    UnitSet faulty_units() const;

    bool operator==(const FaultConfig&) const = default;
};

// Line-oriented config, e.g.
//   unit=MUL fault=disabled
//   unit=ADD fault=stuck_at bit=3 value=1 scope=instruction
//   unit=XOR fault=wrong_result mask=0xFF
FaultConfig parse_fault_config(std::string_view text);

// ---------------------------------------------------------------------------
// Cost model

// Default per-class cycle costs. A stand-in, not measured silicon: every
// instruction 1 cycle, mul 5, taken branches and jumps 2, loads/stores 2.
struct CostModel {
    uint32_t base = 1;
    uint32_t mul = 5;
    uint32_t taken_branch = 2;
    uint32_t mem = 2;

    void validate() const;  // throws if any cost < 1
};

// ---------------------------------------------------------------------------
// Machine state

constexpr uint32_t kTextBase = 0x1000;
constexpr uint32_t kDataBase = 0x10000;
constexpr uint32_t kMemoryWindow = 1u << 20;  // 1 MiB
constexpr uint32_t kPageSize = 4096;

// Sparse byte-addressable memory limited to [0, window). Unwritten pages
// read as zero.
class SparseMemory {
public:
    explicit SparseMemory(uint32_t window = kMemoryWindow) : window_(window) {}

    bool in_window(uint32_t addr, uint32_t size) const {
        return addr < window_ && size <= window_ - addr;
    }
    uint8_t load8(uint32_t addr) const;
    uint32_t load32(uint32_t addr) const;
    void store8(uint32_t addr, uint8_t value);
    void store32(uint32_t addr, uint32_t value);
    uint32_t window() const { return window_; }

    bool operator==(const SparseMemory&) const = default;

private:
    using Page = std::array<uint8_t, kPageSize>;
    uint32_t window_;
    std::map<uint32_t, Page> pages_;
};

struct MachineState {
    std::array<uint32_t, 32> regs{};
    uint32_t pc = 0;
    SparseMemory mem;
    uint64_t cycles = 0;
    bool halted = false;
    std::optional<uint32_t> exit_code;
};

struct TrapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// ALU

enum class AluOp : uint8_t { Add, Sub, Sll, Srl, Sra, And, Or, Xor, Mul };

Unit unit_of(AluOp op);

// Hardware side channels (branch comparison, load/store address generation)
// share the ADD unit but can stay healthy when the fault is confined to the
// instruction path.
enum class AluPath : uint8_t { Instruction, Hardware };

uint32_t alu_execute(AluOp op, uint32_t a, uint32_t b, const FaultConfig& faults,
                     AluPath path = AluPath::Instruction);

// ---------------------------------------------------------------------------
// Execution

enum class Termination : uint8_t { EcallExit, CycleLimit, Trap };

struct RunResult {
    MachineState state;
    uint64_t cycles = 0;
    uint64_t retired = 0;
    Termination reason = Termination::EcallExit;
    std::string trap_detail;
};

struct TraceEntry {
    uint64_t cycle;
    uint32_t pc;
    std::string_view mnemonic;
    uint8_t rd;
    uint32_t value;
};
using TraceSink = std::function<void(const TraceEntry&)>;

struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A Program laid out in memory: text at 0x1000, data at 0x10000, sp at the
// top of the window. Immutable once constructed; states derived from it can
// be stepped independently.
class Machine {
public:
    Machine(const assembly::Program& program, std::string_view entry);

    MachineState initial_state() const;

    // Executes one instruction; throws TrapError on misaligned or
    // out-of-window access and on fetch outside the text image.
    void step(MachineState& s, const FaultConfig& faults, const CostModel& cost,
              const TraceSink* trace = nullptr) const;

    RunResult run(MachineState s, const FaultConfig& faults, const CostModel& cost,
                  uint64_t max_cycles, const TraceSink* trace = nullptr) const;

    uint32_t entry_address() const { return entry_; }
    std::optional<uint32_t> label_address(const std::string& label) const;
    uint32_t text_end() const { return kTextBase + 4 * uint32_t(code_.size()); }

private:
    struct Decoded {
        assembly::Instruction ins;
        uint32_t target_addr = 0;  // resolved branch/jal target
    };
    std::vector<Decoded> code_;
    std::vector<uint8_t> data_image_;
    std::map<std::string, uint32_t> label_addrs_;
    uint32_t entry_ = 0;
};

// Convenience: load + run from entry.
RunResult run_program(const assembly::Program& p, std::string_view entry,
                      const FaultConfig& faults, const CostModel& cost, uint64_t max_cycles);

}  // namespace recore::emu
