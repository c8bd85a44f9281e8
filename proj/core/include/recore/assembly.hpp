#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace recore::assembly {

// The frozen RV32IM-subset dialect. Pseudo-instructions (li, mv, not, nop,
// j, ret) are expanded at parse time; a Program only ever holds the real
// mnemonics below.
enum class Mnemonic : uint8_t {
    Add, Addi, Sub, And, Andi, Or, Ori, Xor, Xori,
    Sll, Slli, Srl, Srli, Sra, Srai, Mul,
    Lw, Sw, Lb, Lbu, Sb,
    Lui, Auipc,
    Beq, Bne, Blt, Bge, Bltu, Bgeu,
    Jal, Jalr, Ecall,
};

std::string_view mnemonic_name(Mnemonic m);

struct Instruction {
    Mnemonic mnemonic = Mnemonic::Ecall;
    uint8_t rd = 0;
    uint8_t rs1 = 0;
    uint8_t rs2 = 0;
    int32_t imm = 0;
    std::string target;  // label name for branches/jal; empty otherwise

    bool operator==(const Instruction&) const = default;
};

struct Label {
    std::string name;
    bool operator==(const Label&) const = default;
};

struct DataDirective {
    enum class Kind : uint8_t { Word, Byte, Asciz };
    Kind kind = Kind::Word;
    std::vector<uint32_t> values;  // Word: 32-bit values; Byte: 0..255
    std::string text;              // Asciz payload (without the trailing NUL)

    size_t size_bytes() const;
    bool operator==(const DataDirective&) const = default;
};

struct SectionDirective {
    enum class Section : uint8_t { Text, Data };
    Section section = Section::Text;
    bool operator==(const SectionDirective&) const = default;
};

using Item = std::variant<Label, Instruction, DataDirective, SectionDirective>;

struct Program {
    std::vector<Item> items;
    std::map<std::string, size_t> symbols;  // label -> item index

    bool operator==(const Program& o) const { return items == o.items; }
};

struct ParseError : std::runtime_error {
    ParseError(size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line(line) {}
    size_t line;
};

// Parses the one-item-per-line dialect ('#' starts a comment; a label may
// share a line with the item it precedes). Accepts ABI and xN register
// names. Throws ParseError on syntax errors, unknown mnemonics, duplicate
// labels, and unresolved branch targets.
Program parse_program(std::string_view text);

struct PrintOptions {
    // Fold canonical single-instruction patterns (xori rd,rs,-1 -> not;
    // addi rd,rs,0 -> mv; ...) back to pseudo spellings. Folds never change
    // byte accounting; the default prints the expanded form.
    bool fold_pseudos = false;
};

std::string print_program(const Program& p, const PrintOptions& opts = {});

// Register helpers (index <-> ABI name).
std::optional<uint8_t> register_from_name(std::string_view name);
std::string_view register_name(uint8_t index);

size_t instruction_count(const Program& p);
size_t data_size_bytes(const Program& p);

// 4 bytes per (already expanded) instruction plus the data payload.
size_t code_size_bytes(const Program& p);

// True when `m` writes rd / reads rs1 / reads rs2.
bool writes_rd(Mnemonic m);
bool reads_rs1(Mnemonic m);
bool reads_rs2(Mnemonic m);

}  // namespace recore::assembly
