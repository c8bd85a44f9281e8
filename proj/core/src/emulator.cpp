#include "recore/emulator.hpp"

#include <sstream>

namespace recore::emu {
namespace {

using assembly::Instruction;
using assembly::Mnemonic;

std::string hex32(uint32_t v) {
    std::ostringstream out;
    out << "0x" << std::hex << v;
    return out.str();
}

uint32_t apply_fault(const Fault& f, uint32_t exact) {
    switch (f.kind) {
        case FaultKind::Healthy: return exact;
        case FaultKind::Disabled: return 0;
        case FaultKind::StuckAt: {
            uint32_t mask = 1u << (f.bit & 31);
            return f.bit_value ? (exact | mask) : (exact & ~mask);
        }
        case FaultKind::WrongResult: return exact ^ f.xor_mask;
    }
    return exact;
}

uint32_t exact_alu(AluOp op, uint32_t a, uint32_t b) {
    switch (op) {
        case AluOp::Add: return a + b;
        case AluOp::Sub: return a - b;
        case AluOp::Sll: return a << (b & 31);
        case AluOp::Srl: return a >> (b & 31);
        case AluOp::Sra: return static_cast<uint32_t>(static_cast<int32_t>(a) >> (b & 31));
        case AluOp::And: return a & b;
        case AluOp::Or: return a | b;
        case AluOp::Xor: return a ^ b;
        case AluOp::Mul: return a * b;
    }
    return 0;
}

// a < b, derived from the (possibly faulted) subtraction result the way the
// branch comparator would: sign disagreement decides directly, otherwise the
// sign of the difference does.
bool signed_lt_from_diff(uint32_t a, uint32_t b, uint32_t diff) {
    if ((a ^ b) >> 31) return (a >> 31) != 0;
    return (diff >> 31) != 0;
}

std::string_view first_token(std::string_view s) {
    size_t eq = s.find('=');
    return eq == std::string_view::npos ? s : s.substr(0, eq);
}

}  // namespace

bool FaultConfig::all_healthy() const {
    for (const auto& f : faults)
        if (f.kind != FaultKind::Healthy) return false;
    return true;
}

UnitSet FaultConfig::faulty_units() const {
    UnitSet out;
    for (Unit u : kAllUnits)
        if ((*this)[u].kind != FaultKind::Healthy) out.insert(u);
    return out;
}

FaultConfig parse_fault_config(std::string_view text) {
    FaultConfig cfg;
    size_t pos = 0, line_no = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line =
            eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);

        std::optional<Unit> unit;
        std::string fault_name;
        uint32_t bit = 0, value = 0, mask = 0;
        std::optional<AddFaultScope> scope;
        bool any = false;

        std::istringstream tokens{std::string(line)};
        std::string tok;
        while (tokens >> tok) {
            any = true;
            std::string_view key = first_token(tok);
            size_t eq = tok.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("fault config line " + std::to_string(line_no) +
                                         ": expected key=value, got '" + tok + "'");
            std::string val = tok.substr(eq + 1);
            if (key == "unit") {
                unit = unit_from_name(val);
                if (!unit)
                    throw std::runtime_error("fault config line " + std::to_string(line_no) +
                                             ": unknown unit '" + val + "'");
            } else if (key == "fault") {
                fault_name = val;
            } else if (key == "bit") {
                bit = static_cast<uint32_t>(std::stoul(val, nullptr, 0));
            } else if (key == "value") {
                value = static_cast<uint32_t>(std::stoul(val, nullptr, 0));
            } else if (key == "mask") {
                mask = static_cast<uint32_t>(std::stoul(val, nullptr, 0));
            } else if (key == "scope") {
                if (val == "instruction") scope = AddFaultScope::InstructionOnly;
                else if (val == "full") scope = AddFaultScope::Full;
                else
                    throw std::runtime_error("fault config line " + std::to_string(line_no) +
                                             ": scope must be 'instruction' or 'full'");
            } else {
                throw std::runtime_error("fault config line " + std::to_string(line_no) +
                                         ": unknown key '" + std::string(key) + "'");
            }
        }
        if (!any) continue;
        if (!unit || fault_name.empty())
            throw std::runtime_error("fault config line " + std::to_string(line_no) +
                                     ": needs unit= and fault=");
        Fault f;
        if (fault_name == "healthy") f = Fault::healthy();
        else if (fault_name == "disabled") f = Fault::disabled();
        else if (fault_name == "stuck_at") {
            if (bit > 31 || value > 1)
                throw std::runtime_error("fault config line " + std::to_string(line_no) +
                                         ": stuck_at needs bit=0..31 value=0|1");
            f = Fault::stuck_at(static_cast<uint8_t>(bit), static_cast<uint8_t>(value));
        } else if (fault_name == "wrong_result") {
            f = Fault::wrong_result(mask);
        } else {
            throw std::runtime_error("fault config line " + std::to_string(line_no) +
                                     ": unknown fault '" + fault_name + "'");
        }
        cfg.set(*unit, f);
        if (scope) cfg.add_scope = *scope;
    }
    return cfg;
}

void CostModel::validate() const {
    if (base < 1 || mul < 1 || taken_branch < 1 || mem < 1)
        throw std::runtime_error("cost model: all per-instruction costs must be >= 1");
}

uint8_t SparseMemory::load8(uint32_t addr) const {
    auto it = pages_.find(addr / kPageSize);
    if (it == pages_.end()) return 0;
    return it->second[addr % kPageSize];
}

uint32_t SparseMemory::load32(uint32_t addr) const {
    // Little-endian; callers enforce alignment and window.
    return uint32_t(load8(addr)) | uint32_t(load8(addr + 1)) << 8 |
           uint32_t(load8(addr + 2)) << 16 | uint32_t(load8(addr + 3)) << 24;
}

void SparseMemory::store8(uint32_t addr, uint8_t value) {
    auto [it, inserted] = pages_.try_emplace(addr / kPageSize);
    if (inserted) it->second.fill(0);
    it->second[addr % kPageSize] = value;
}

void SparseMemory::store32(uint32_t addr, uint32_t value) {
    store8(addr, uint8_t(value));
    store8(addr + 1, uint8_t(value >> 8));
    store8(addr + 2, uint8_t(value >> 16));
    store8(addr + 3, uint8_t(value >> 24));
}

Unit unit_of(AluOp op) {
    switch (op) {
        case AluOp::Mul: return Unit::Mul;
        case AluOp::Add: case AluOp::Sub: return Unit::Add;
        case AluOp::Sll: case AluOp::Srl: case AluOp::Sra: return Unit::Shift;
        case AluOp::And: return Unit::And;
        case AluOp::Or: return Unit::Or;
        case AluOp::Xor: return Unit::Xor;
    }
    return Unit::Add;
}

uint32_t alu_execute(AluOp op, uint32_t a, uint32_t b, const FaultConfig& faults, AluPath path) {
    uint32_t exact = exact_alu(op, a, b);
    Unit u = unit_of(op);
    const Fault& f = faults[u];
    if (f.kind == FaultKind::Healthy) return exact;
    if (u == Unit::Add && path == AluPath::Hardware &&
        faults.add_scope == AddFaultScope::InstructionOnly)
        return exact;
    return apply_fault(f, exact);
}

Machine::Machine(const assembly::Program& program, std::string_view entry) {
    using assembly::DataDirective;
    using assembly::Item;
    using assembly::SectionDirective;

    bool in_text = true;
    std::vector<std::string> pending;

    auto bind_pending = [&](uint32_t addr) {
        for (auto& name : pending) label_addrs_[name] = addr;
        pending.clear();
    };

    for (const auto& item : program.items) {
        if (const auto* sec = std::get_if<SectionDirective>(&item)) {
            in_text = sec->section == SectionDirective::Section::Text;
        } else if (const auto* lbl = std::get_if<assembly::Label>(&item)) {
            pending.push_back(lbl->name);
        } else if (const auto* ins = std::get_if<Instruction>(&item)) {
            if (!in_text) throw LoadError("instruction in .data section");
            uint32_t addr = kTextBase + 4 * uint32_t(code_.size());
            bind_pending(addr);
            code_.push_back({*ins, 0});
        } else if (const auto* d = std::get_if<DataDirective>(&item)) {
            if (in_text) throw LoadError("data directive in .text section");
            // .word carries its natural alignment.
            if (d->kind == DataDirective::Kind::Word)
                while (data_image_.size() % 4 != 0) data_image_.push_back(0);
            bind_pending(kDataBase + uint32_t(data_image_.size()));
            switch (d->kind) {
                case DataDirective::Kind::Word:
                    for (uint32_t v : d->values) {
                        data_image_.push_back(uint8_t(v));
                        data_image_.push_back(uint8_t(v >> 8));
                        data_image_.push_back(uint8_t(v >> 16));
                        data_image_.push_back(uint8_t(v >> 24));
                    }
                    break;
                case DataDirective::Kind::Byte:
                    for (uint32_t v : d->values) data_image_.push_back(uint8_t(v));
                    break;
                case DataDirective::Kind::Asciz:
                    for (char c : d->text) data_image_.push_back(uint8_t(c));
                    data_image_.push_back(0);
                    break;
            }
        }
    }
    // Trailing labels bind to the end of text.
    bind_pending(text_end());

    if (text_end() > kDataBase) throw LoadError("program too large: text image overlaps data base");
    if (kDataBase + data_image_.size() > kMemoryWindow)
        throw LoadError("program too large: data image exceeds memory window");

    // Resolve branch/jump targets to text addresses.
    for (auto& dec : code_) {
        if (dec.ins.target.empty()) continue;
        auto it = label_addrs_.find(dec.ins.target);
        if (it == label_addrs_.end())
            throw LoadError("unresolved label '" + dec.ins.target + "'");
        if (it->second < kTextBase || it->second >= text_end())
            throw LoadError("branch target '" + dec.ins.target + "' is not executable");
        dec.target_addr = it->second;
    }

    auto entry_it = label_addrs_.find(std::string(entry));
    if (entry_it == label_addrs_.end())
        throw LoadError("missing entry label '" + std::string(entry) + "'");
    if (entry_it->second < kTextBase || entry_it->second >= text_end())
        throw LoadError("entry label '" + std::string(entry) + "' is not executable");
    entry_ = entry_it->second;
}

MachineState Machine::initial_state() const {
    MachineState s;
    s.pc = entry_;
    s.regs[2] = kMemoryWindow;  // sp at top of window
    for (size_t i = 0; i < data_image_.size(); ++i)
        s.mem.store8(kDataBase + uint32_t(i), data_image_[i]);
    return s;
}

std::optional<uint32_t> Machine::label_address(const std::string& label) const {
    auto it = label_addrs_.find(label);
    if (it == label_addrs_.end()) return std::nullopt;
    return it->second;
}

void Machine::step(MachineState& s, const FaultConfig& faults, const CostModel& cost,
                   const TraceSink* trace) const {
    if (s.halted) throw TrapError("step on halted machine");
    if (s.pc % 4 != 0) throw TrapError("misaligned pc " + hex32(s.pc));
    if (s.pc < kTextBase || s.pc >= text_end())
        throw TrapError("instruction fetch outside text at " + hex32(s.pc));

    const Decoded& dec = code_[(s.pc - kTextBase) / 4];
    const Instruction& ins = dec.ins;
    const uint32_t pc = s.pc;
    uint32_t next_pc = pc + 4;
    uint32_t cycle_cost = cost.base;
    uint32_t written = 0;

    auto reg = [&](uint8_t idx) { return s.regs[idx]; };
    auto set_rd = [&](uint32_t v) {
        s.regs[ins.rd] = v;
        written = v;
    };

    auto mem_addr = [&](uint32_t size) {
        // Address generation shares the ADD unit (hardware path).
        uint32_t addr = alu_execute(AluOp::Add, reg(ins.rs1), uint32_t(ins.imm), faults,
                                    AluPath::Hardware);
        if (!s.mem.in_window(addr, size))
            throw TrapError("out-of-window access at " + hex32(addr));
        if (size == 4 && addr % 4 != 0) throw TrapError("misaligned word access at " + hex32(addr));
        return addr;
    };

    auto branch = [&](bool taken) {
        if (taken) {
            next_pc = dec.target_addr;
            cycle_cost = cost.taken_branch;
        }
    };

    switch (ins.mnemonic) {
        case Mnemonic::Add: set_rd(alu_execute(AluOp::Add, reg(ins.rs1), reg(ins.rs2), faults)); break;
        case Mnemonic::Addi: set_rd(alu_execute(AluOp::Add, reg(ins.rs1), uint32_t(ins.imm), faults)); break;
        case Mnemonic::Sub: set_rd(alu_execute(AluOp::Sub, reg(ins.rs1), reg(ins.rs2), faults)); break;
        case Mnemonic::And: set_rd(alu_execute(AluOp::And, reg(ins.rs1), reg(ins.rs2), faults)); break;
        case Mnemonic::Andi: set_rd(alu_execute(AluOp::And, reg(ins.rs1), uint32_t(ins.imm), faults)); break;
        case Mnemonic::Or: set_rd(alu_execute(AluOp::Or, reg(ins.rs1), reg(ins.rs2), faults)); break;
        case Mnemonic::Ori: set_rd(alu_execute(AluOp::Or, reg(ins.rs1), uint32_t(ins.imm), faults)); break;
        case Mnemonic::Xor: set_rd(alu_execute(AluOp::Xor, reg(ins.rs1), reg(ins.rs2), faults)); break;
        case Mnemonic::Xori: set_rd(alu_execute(AluOp::Xor, reg(ins.rs1), uint32_t(ins.imm), faults)); break;
        case Mnemonic::Sll: set_rd(alu_execute(AluOp::Sll, reg(ins.rs1), reg(ins.rs2), faults)); break;
        case Mnemonic::Slli: set_rd(alu_execute(AluOp::Sll, reg(ins.rs1), uint32_t(ins.imm), faults)); break;
        case Mnemonic::Srl: set_rd(alu_execute(AluOp::Srl, reg(ins.rs1), reg(ins.rs2), faults)); break;
        case Mnemonic::Srli: set_rd(alu_execute(AluOp::Srl, reg(ins.rs1), uint32_t(ins.imm), faults)); break;
        case Mnemonic::Sra: set_rd(alu_execute(AluOp::Sra, reg(ins.rs1), reg(ins.rs2), faults)); break;
        case Mnemonic::Srai: set_rd(alu_execute(AluOp::Sra, reg(ins.rs1), uint32_t(ins.imm), faults)); break;
        case Mnemonic::Mul:
            set_rd(alu_execute(AluOp::Mul, reg(ins.rs1), reg(ins.rs2), faults));
            cycle_cost = cost.mul;
            break;
        case Mnemonic::Lui: set_rd(uint32_t(ins.imm) << 12); break;
        case Mnemonic::Auipc:
            set_rd(alu_execute(AluOp::Add, pc, uint32_t(ins.imm) << 12, faults));
            break;
        case Mnemonic::Lw: {
            uint32_t addr = mem_addr(4);
            set_rd(s.mem.load32(addr));
            cycle_cost = cost.mem;
            break;
        }
        case Mnemonic::Lb: {
            uint32_t addr = mem_addr(1);
            set_rd(uint32_t(int32_t(int8_t(s.mem.load8(addr)))));
            cycle_cost = cost.mem;
            break;
        }
        case Mnemonic::Lbu: {
            uint32_t addr = mem_addr(1);
            set_rd(s.mem.load8(addr));
            cycle_cost = cost.mem;
            break;
        }
        case Mnemonic::Sw: {
            uint32_t addr = mem_addr(4);
            s.mem.store32(addr, reg(ins.rs2));
            cycle_cost = cost.mem;
            break;
        }
        case Mnemonic::Sb: {
            uint32_t addr = mem_addr(1);
            s.mem.store8(addr, uint8_t(reg(ins.rs2)));
            cycle_cost = cost.mem;
            break;
        }
        case Mnemonic::Beq: case Mnemonic::Bne: case Mnemonic::Blt: case Mnemonic::Bge:
        case Mnemonic::Bltu: case Mnemonic::Bgeu: {
            // The comparator works off the ADD unit's subtraction result.
            uint32_t a = reg(ins.rs1), b = reg(ins.rs2);
            uint32_t diff = alu_execute(AluOp::Sub, a, b, faults, AluPath::Hardware);
            bool eq = diff == 0;
            bool lt = signed_lt_from_diff(a, b, diff);
            bool ltu = signed_lt_from_diff(a ^ 0x80000000u, b ^ 0x80000000u, diff);
            switch (ins.mnemonic) {
                case Mnemonic::Beq: branch(eq); break;
                case Mnemonic::Bne: branch(!eq); break;
                case Mnemonic::Blt: branch(lt); break;
                case Mnemonic::Bge: branch(!lt); break;
                case Mnemonic::Bltu: branch(ltu); break;
                case Mnemonic::Bgeu: branch(!ltu); break;
                default: break;
            }
            break;
        }
        case Mnemonic::Jal:
            set_rd(pc + 4);
            next_pc = dec.target_addr;
            cycle_cost = cost.taken_branch;
            break;
        case Mnemonic::Jalr: {
            uint32_t target = (reg(ins.rs1) + uint32_t(ins.imm)) & ~1u;
            if (target % 4 != 0) throw TrapError("misaligned jalr target " + hex32(target));
            set_rd(pc + 4);
            next_pc = target;
            cycle_cost = cost.taken_branch;
            break;
        }
        case Mnemonic::Ecall:
            s.halted = true;
            s.exit_code = reg(10);
            break;
    }

    s.regs[0] = 0;
    s.pc = next_pc;
    s.cycles += cycle_cost;
    if (trace && *trace) {
        bool has_rd = assembly::writes_rd(ins.mnemonic);
        (*trace)({s.cycles, pc, assembly::mnemonic_name(ins.mnemonic),
                  has_rd ? ins.rd : uint8_t(0), has_rd ? s.regs[ins.rd] : 0});
    }
}

RunResult Machine::run(MachineState s, const FaultConfig& faults, const CostModel& cost,
                       uint64_t max_cycles, const TraceSink* trace) const {
    cost.validate();
    if (max_cycles == 0) throw std::invalid_argument("max_cycles must be > 0");
    RunResult result;
    while (!s.halted && s.cycles < max_cycles) {
        try {
            step(s, faults, cost, trace);
        } catch (const TrapError& t) {
            result.state = std::move(s);
            result.cycles = result.state.cycles;
            result.reason = Termination::Trap;
            result.trap_detail = t.what();
            return result;
        }
        ++result.retired;
    }
    result.reason = s.halted ? Termination::EcallExit : Termination::CycleLimit;
    result.state = std::move(s);
    result.cycles = result.state.cycles;
    return result;
}

RunResult run_program(const assembly::Program& p, std::string_view entry,
                      const FaultConfig& faults, const CostModel& cost, uint64_t max_cycles) {
    Machine m(p, entry);
    return m.run(m.initial_state(), faults, cost, max_cycles);
}

}  // namespace recore::emu
