#include "recore/assembly.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <sstream>
#include <unordered_map>

namespace recore::assembly {
namespace {

const std::array<std::string_view, 32> kAbiNames = {
    "zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2",
    "s0",   "s1", "a0", "a1", "a2", "a3", "a4", "a5",
    "a6",   "a7", "s2", "s3", "s4", "s5", "s6", "s7",
    "s8",   "s9", "s10", "s11", "t3", "t4", "t5", "t6"};

enum class Form : uint8_t { R, I, ShiftImm, Load, Store, U, Branch, Jal, Jalr, Ecall };

struct MnemonicInfo {
    Mnemonic m;
    Form form;
};

const std::unordered_map<std::string_view, MnemonicInfo>& mnemonic_table() {
    static const std::unordered_map<std::string_view, MnemonicInfo> table = {
        {"add", {Mnemonic::Add, Form::R}},     {"sub", {Mnemonic::Sub, Form::R}},
        {"and", {Mnemonic::And, Form::R}},     {"or", {Mnemonic::Or, Form::R}},
        {"xor", {Mnemonic::Xor, Form::R}},     {"sll", {Mnemonic::Sll, Form::R}},
        {"srl", {Mnemonic::Srl, Form::R}},     {"sra", {Mnemonic::Sra, Form::R}},
        {"mul", {Mnemonic::Mul, Form::R}},     {"addi", {Mnemonic::Addi, Form::I}},
        {"andi", {Mnemonic::Andi, Form::I}},   {"ori", {Mnemonic::Ori, Form::I}},
        {"xori", {Mnemonic::Xori, Form::I}},   {"slli", {Mnemonic::Slli, Form::ShiftImm}},
        {"srli", {Mnemonic::Srli, Form::ShiftImm}}, {"srai", {Mnemonic::Srai, Form::ShiftImm}},
        {"lw", {Mnemonic::Lw, Form::Load}},    {"lb", {Mnemonic::Lb, Form::Load}},
        {"lbu", {Mnemonic::Lbu, Form::Load}},  {"sw", {Mnemonic::Sw, Form::Store}},
        {"sb", {Mnemonic::Sb, Form::Store}},   {"lui", {Mnemonic::Lui, Form::U}},
        {"auipc", {Mnemonic::Auipc, Form::U}}, {"beq", {Mnemonic::Beq, Form::Branch}},
        {"bne", {Mnemonic::Bne, Form::Branch}}, {"blt", {Mnemonic::Blt, Form::Branch}},
        {"bge", {Mnemonic::Bge, Form::Branch}}, {"bltu", {Mnemonic::Bltu, Form::Branch}},
        {"bgeu", {Mnemonic::Bgeu, Form::Branch}}, {"jal", {Mnemonic::Jal, Form::Jal}},
        {"jalr", {Mnemonic::Jalr, Form::Jalr}}, {"ecall", {Mnemonic::Ecall, Form::Ecall}},
    };
    return table;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_label_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }
bool is_label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$';
}

bool valid_label(std::string_view s) {
    if (s.empty() || !is_label_start(s.front())) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return is_label_char(c); });
}

// Splits an operand list on commas; whitespace around operands is ignored.
std::vector<std::string_view> split_operands(std::string_view s) {
    std::vector<std::string_view> out;
    s = trim(s);
    if (s.empty()) return out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ',') {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

int64_t parse_integer(std::string_view tok, size_t line) {
    tok = trim(tok);
    bool neg = false;
    if (!tok.empty() && (tok.front() == '-' || tok.front() == '+')) {
        neg = tok.front() == '-';
        tok.remove_prefix(1);
    }
    if (tok.empty()) throw ParseError(line, "expected integer");
    int base = 10;
    if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
        base = 16;
        tok.remove_prefix(2);
    }
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value, base);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(line, "bad integer literal");
    if (value > 0xFFFFFFFFull) throw ParseError(line, "integer literal out of 32-bit range");
    int64_t v = static_cast<int64_t>(value);
    return neg ? -v : v;
}

uint8_t parse_register(std::string_view tok, size_t line) {
    auto r = register_from_name(trim(tok));
    if (!r) throw ParseError(line, "unknown register '" + std::string(trim(tok)) + "'");
    return *r;
}

int32_t parse_imm12(std::string_view tok, size_t line) {
    int64_t v = parse_integer(tok, line);
    if (v < -2048 || v > 2047) throw ParseError(line, "immediate out of 12-bit signed range");
    return static_cast<int32_t>(v);
}

// Accepts "imm(reg)".
std::pair<int32_t, uint8_t> parse_mem_operand(std::string_view tok, size_t line) {
    size_t open = tok.find('(');
    size_t close = tok.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        throw ParseError(line, "expected offset(reg) operand");
    std::string_view imm_part = trim(tok.substr(0, open));
    int32_t imm = imm_part.empty() ? 0 : parse_imm12(imm_part, line);
    uint8_t base = parse_register(tok.substr(open + 1, close - open - 1), line);
    return {imm, base};
}

void expect_operands(const std::vector<std::string_view>& ops, size_t n, std::string_view mn,
                     size_t line) {
    if (ops.size() != n)
        throw ParseError(line, "wrong operand count for '" + std::string(mn) + "' (expected " +
                                   std::to_string(n) + ", got " + std::to_string(ops.size()) + ")");
}

Instruction make_r(Mnemonic m, uint8_t rd, uint8_t rs1, uint8_t rs2) {
    Instruction i;
    i.mnemonic = m;
    i.rd = rd;
    i.rs1 = rs1;
    i.rs2 = rs2;
    return i;
}

Instruction make_i(Mnemonic m, uint8_t rd, uint8_t rs1, int32_t imm) {
    Instruction i;
    i.mnemonic = m;
    i.rd = rd;
    i.rs1 = rs1;
    i.imm = imm;
    return i;
}

// Standard two-instruction materialization of a 32-bit constant. Returns
// one instruction when the value fits addi or has empty low bits.
std::vector<Instruction> expand_li(uint8_t rd, int64_t value, size_t line) {
    if (value < INT32_MIN || value > int64_t(UINT32_MAX))
        throw ParseError(line, "li constant out of 32-bit range");
    uint32_t bits = static_cast<uint32_t>(value);
    int32_t sv = static_cast<int32_t>(bits);
    if (sv >= -2048 && sv <= 2047) return {make_i(Mnemonic::Addi, rd, 0, sv)};
    uint32_t hi = (bits + 0x800u) >> 12;
    int32_t lo = static_cast<int32_t>(bits - (hi << 12));
    std::vector<Instruction> out;
    out.push_back(make_i(Mnemonic::Lui, rd, 0, static_cast<int32_t>(hi & 0xFFFFF)));
    if (lo != 0) out.push_back(make_i(Mnemonic::Addi, rd, rd, lo));
    return out;
}

void parse_statement(std::string_view stmt, size_t line, std::vector<Item>& items);

void parse_data_directive(std::string_view head, std::string_view rest, size_t line,
                          std::vector<Item>& items) {
    DataDirective d;
    if (head == ".word" || head == ".byte") {
        d.kind = head == ".word" ? DataDirective::Kind::Word : DataDirective::Kind::Byte;
        auto ops = split_operands(rest);
        if (ops.empty()) throw ParseError(line, std::string(head) + " needs at least one value");
        for (auto op : ops) {
            int64_t v = parse_integer(op, line);
            if (d.kind == DataDirective::Kind::Byte) {
                if (v < -128 || v > 255) throw ParseError(line, ".byte value out of range");
                d.values.push_back(static_cast<uint32_t>(v & 0xFF));
            } else {
                if (v < INT32_MIN) throw ParseError(line, ".word value out of 32-bit range");
                d.values.push_back(static_cast<uint32_t>(v));
            }
        }
    } else {  // .asciz
        std::string_view s = trim(rest);
        if (s.size() < 2 || s.front() != '"' || s.back() != '"')
            throw ParseError(line, ".asciz needs a quoted string");
        s = s.substr(1, s.size() - 2);
        d.kind = DataDirective::Kind::Asciz;
        for (size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (c == '\\') {
                if (++i == s.size()) throw ParseError(line, "dangling escape in string");
                switch (s[i]) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case '0': c = '\0'; break;
                    case '\\': c = '\\'; break;
                    case '"': c = '"'; break;
                    default: throw ParseError(line, "unsupported escape in string");
                }
            }
            d.text.push_back(c);
        }
    }
    items.emplace_back(std::move(d));
}

void parse_instruction(std::string_view mn, std::string_view rest, size_t line,
                       std::vector<Item>& items) {
    auto ops = split_operands(rest);

    // Pseudo-instructions expand here; the Program stores canonical form.
    if (mn == "li") {
        expect_operands(ops, 2, mn, line);
        uint8_t rd = parse_register(ops[0], line);
        for (auto& ins : expand_li(rd, parse_integer(ops[1], line), line)) items.emplace_back(ins);
        return;
    }
    if (mn == "mv") {
        expect_operands(ops, 2, mn, line);
        items.emplace_back(make_i(Mnemonic::Addi, parse_register(ops[0], line),
                                  parse_register(ops[1], line), 0));
        return;
    }
    if (mn == "not") {
        expect_operands(ops, 2, mn, line);
        items.emplace_back(make_i(Mnemonic::Xori, parse_register(ops[0], line),
                                  parse_register(ops[1], line), -1));
        return;
    }
    if (mn == "nop") {
        expect_operands(ops, 0, mn, line);
        items.emplace_back(make_i(Mnemonic::Addi, 0, 0, 0));
        return;
    }
    if (mn == "j") {
        expect_operands(ops, 1, mn, line);
        if (!valid_label(ops[0])) throw ParseError(line, "j needs a label target");
        Instruction i = make_i(Mnemonic::Jal, 0, 0, 0);
        i.target = std::string(ops[0]);
        items.emplace_back(i);
        return;
    }
    if (mn == "ret") {
        expect_operands(ops, 0, mn, line);
        items.emplace_back(make_i(Mnemonic::Jalr, 0, 1, 0));
        return;
    }

    auto it = mnemonic_table().find(mn);
    if (it == mnemonic_table().end())
        throw ParseError(line, "unknown mnemonic '" + std::string(mn) + "'");
    auto [m, form] = it->second;

    switch (form) {
        case Form::R: {
            expect_operands(ops, 3, mn, line);
            items.emplace_back(make_r(m, parse_register(ops[0], line),
                                      parse_register(ops[1], line), parse_register(ops[2], line)));
            return;
        }
        case Form::I: {
            expect_operands(ops, 3, mn, line);
            items.emplace_back(make_i(m, parse_register(ops[0], line),
                                      parse_register(ops[1], line), parse_imm12(ops[2], line)));
            return;
        }
        case Form::ShiftImm: {
            expect_operands(ops, 3, mn, line);
            int64_t sh = parse_integer(ops[2], line);
            if (sh < 0 || sh > 31) throw ParseError(line, "shift amount must be 0..31");
            items.emplace_back(make_i(m, parse_register(ops[0], line),
                                      parse_register(ops[1], line), static_cast<int32_t>(sh)));
            return;
        }
        case Form::Load: {
            expect_operands(ops, 2, mn, line);
            auto [imm, base] = parse_mem_operand(ops[1], line);
            items.emplace_back(make_i(m, parse_register(ops[0], line), base, imm));
            return;
        }
        case Form::Store: {
            expect_operands(ops, 2, mn, line);
            auto [imm, base] = parse_mem_operand(ops[1], line);
            Instruction i;
            i.mnemonic = m;
            i.rs2 = parse_register(ops[0], line);
            i.rs1 = base;
            i.imm = imm;
            items.emplace_back(i);
            return;
        }
        case Form::U: {
            expect_operands(ops, 2, mn, line);
            int64_t imm = parse_integer(ops[1], line);
            if (imm < 0 || imm > 0xFFFFF) throw ParseError(line, "upper immediate must be 0..0xFFFFF");
            items.emplace_back(make_i(m, parse_register(ops[0], line), 0,
                                      static_cast<int32_t>(imm)));
            return;
        }
        case Form::Branch: {
            expect_operands(ops, 3, mn, line);
            if (!valid_label(ops[2])) throw ParseError(line, "branch target must be a label");
            Instruction i;
            i.mnemonic = m;
            i.rs1 = parse_register(ops[0], line);
            i.rs2 = parse_register(ops[1], line);
            i.target = std::string(ops[2]);
            items.emplace_back(i);
            return;
        }
        case Form::Jal: {
            if (ops.size() == 1) {
                if (!valid_label(ops[0])) throw ParseError(line, "jal target must be a label");
                Instruction i = make_i(Mnemonic::Jal, 1, 0, 0);
                i.target = std::string(ops[0]);
                items.emplace_back(i);
            } else {
                expect_operands(ops, 2, mn, line);
                if (!valid_label(ops[1])) throw ParseError(line, "jal target must be a label");
                Instruction i = make_i(Mnemonic::Jal, parse_register(ops[0], line), 0, 0);
                i.target = std::string(ops[1]);
                items.emplace_back(i);
            }
            return;
        }
        case Form::Jalr: {
            if (ops.size() == 1) {
                items.emplace_back(make_i(Mnemonic::Jalr, 1, parse_register(ops[0], line), 0));
            } else {
                expect_operands(ops, 3, mn, line);
                items.emplace_back(make_i(Mnemonic::Jalr, parse_register(ops[0], line),
                                          parse_register(ops[1], line), parse_imm12(ops[2], line)));
            }
            return;
        }
        case Form::Ecall: {
            expect_operands(ops, 0, mn, line);
            Instruction i;
            i.mnemonic = Mnemonic::Ecall;
            items.emplace_back(i);
            return;
        }
    }
    throw ParseError(line, "unhandled instruction form");
}

void parse_statement(std::string_view stmt, size_t line, std::vector<Item>& items) {
    stmt = trim(stmt);
    if (stmt.empty()) return;

    if (stmt.front() == '.') {
        size_t sp = stmt.find_first_of(" \t");
        std::string_view head = sp == std::string_view::npos ? stmt : stmt.substr(0, sp);
        std::string_view rest = sp == std::string_view::npos ? std::string_view{} : stmt.substr(sp);
        if (head == ".text") {
            items.emplace_back(SectionDirective{SectionDirective::Section::Text});
            return;
        }
        if (head == ".data") {
            items.emplace_back(SectionDirective{SectionDirective::Section::Data});
            return;
        }
        if (head == ".word" || head == ".byte" || head == ".asciz") {
            parse_data_directive(head, rest, line, items);
            return;
        }
        throw ParseError(line, "unknown directive '" + std::string(head) + "'");
    }

    size_t sp = stmt.find_first_of(" \t");
    std::string_view head = sp == std::string_view::npos ? stmt : stmt.substr(0, sp);
    std::string_view rest = sp == std::string_view::npos ? std::string_view{} : stmt.substr(sp);
    parse_instruction(head, rest, line, items);
}

std::string format_instruction(const Instruction& i, bool fold) {
    std::ostringstream out;
    auto r = [](uint8_t idx) { return register_name(idx); };
    const Mnemonic m = i.mnemonic;

    if (fold) {
        if (m == Mnemonic::Addi && i.rd == 0 && i.rs1 == 0 && i.imm == 0) return "nop";
        if (m == Mnemonic::Addi && i.imm == 0 && !(i.rd == 0 && i.rs1 == 0)) {
            out << "mv " << r(i.rd) << ", " << r(i.rs1);
            return out.str();
        }
        if (m == Mnemonic::Xori && i.imm == -1) {
            out << "not " << r(i.rd) << ", " << r(i.rs1);
            return out.str();
        }
        if (m == Mnemonic::Jal && i.rd == 0) {
            out << "j " << i.target;
            return out.str();
        }
        if (m == Mnemonic::Jalr && i.rd == 0 && i.rs1 == 1 && i.imm == 0) return "ret";
    }

    out << mnemonic_name(m);
    switch (m) {
        case Mnemonic::Add: case Mnemonic::Sub: case Mnemonic::And: case Mnemonic::Or:
        case Mnemonic::Xor: case Mnemonic::Sll: case Mnemonic::Srl: case Mnemonic::Sra:
        case Mnemonic::Mul:
            out << " " << r(i.rd) << ", " << r(i.rs1) << ", " << r(i.rs2);
            break;
        case Mnemonic::Addi: case Mnemonic::Andi: case Mnemonic::Ori: case Mnemonic::Xori:
        case Mnemonic::Slli: case Mnemonic::Srli: case Mnemonic::Srai:
            out << " " << r(i.rd) << ", " << r(i.rs1) << ", " << i.imm;
            break;
        case Mnemonic::Lw: case Mnemonic::Lb: case Mnemonic::Lbu:
            out << " " << r(i.rd) << ", " << i.imm << "(" << r(i.rs1) << ")";
            break;
        case Mnemonic::Sw: case Mnemonic::Sb:
            out << " " << r(i.rs2) << ", " << i.imm << "(" << r(i.rs1) << ")";
            break;
        case Mnemonic::Lui: case Mnemonic::Auipc:
            out << " " << r(i.rd) << ", " << i.imm;
            break;
        case Mnemonic::Beq: case Mnemonic::Bne: case Mnemonic::Blt: case Mnemonic::Bge:
        case Mnemonic::Bltu: case Mnemonic::Bgeu:
            out << " " << r(i.rs1) << ", " << r(i.rs2) << ", " << i.target;
            break;
        case Mnemonic::Jal:
            out << " " << r(i.rd) << ", " << i.target;
            break;
        case Mnemonic::Jalr:
            out << " " << r(i.rd) << ", " << r(i.rs1) << ", " << i.imm;
            break;
        case Mnemonic::Ecall:
            break;
    }
    return out.str();
}

std::string escape_string(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\0': out += "\\0"; break;
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string_view mnemonic_name(Mnemonic m) {
    switch (m) {
        case Mnemonic::Add: return "add";
        case Mnemonic::Addi: return "addi";
        case Mnemonic::Sub: return "sub";
        case Mnemonic::And: return "and";
        case Mnemonic::Andi: return "andi";
        case Mnemonic::Or: return "or";
        case Mnemonic::Ori: return "ori";
        case Mnemonic::Xor: return "xor";
        case Mnemonic::Xori: return "xori";
        case Mnemonic::Sll: return "sll";
        case Mnemonic::Slli: return "slli";
        case Mnemonic::Srl: return "srl";
        case Mnemonic::Srli: return "srli";
        case Mnemonic::Sra: return "sra";
        case Mnemonic::Srai: return "srai";
        case Mnemonic::Mul: return "mul";
        case Mnemonic::Lw: return "lw";
        case Mnemonic::Sw: return "sw";
        case Mnemonic::Lb: return "lb";
        case Mnemonic::Lbu: return "lbu";
        case Mnemonic::Sb: return "sb";
        case Mnemonic::Lui: return "lui";
        case Mnemonic::Auipc: return "auipc";
        case Mnemonic::Beq: return "beq";
        case Mnemonic::Bne: return "bne";
        case Mnemonic::Blt: return "blt";
        case Mnemonic::Bge: return "bge";
        case Mnemonic::Bltu: return "bltu";
        case Mnemonic::Bgeu: return "bgeu";
        case Mnemonic::Jal: return "jal";
        case Mnemonic::Jalr: return "jalr";
        case Mnemonic::Ecall: return "ecall";
    }
    return "?";
}

size_t DataDirective::size_bytes() const {
    switch (kind) {
        case Kind::Word: return values.size() * 4;
        case Kind::Byte: return values.size();
        case Kind::Asciz: return text.size() + 1;
    }
    return 0;
}

std::optional<uint8_t> register_from_name(std::string_view name) {
    if (name.size() >= 2 && name.front() == 'x') {
        uint32_t idx = 0;
        auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
        if (ec == std::errc() && ptr == name.data() + name.size() && idx < 32)
            return static_cast<uint8_t>(idx);
        return std::nullopt;
    }
    if (name == "fp") return 8;
    for (uint8_t i = 0; i < 32; ++i)
        if (name == kAbiNames[i]) return i;
    return std::nullopt;
}

std::string_view register_name(uint8_t index) { return kAbiNames[index & 31]; }

Program parse_program(std::string_view text) {
    Program p;
    size_t line_no = 0;
    size_t pos = 0;

    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view raw =
            eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::string_view rest = trim(raw);

        // Leading labels, possibly several, possibly followed by an item.
        while (!rest.empty()) {
            size_t colon = rest.find(':');
            if (colon == std::string_view::npos) break;
            std::string_view candidate = trim(rest.substr(0, colon));
            if (!valid_label(candidate)) break;
            std::string name(candidate);
            if (p.symbols.count(name))
                throw ParseError(line_no, "duplicate label '" + name + "'");
            p.symbols[name] = p.items.size();
            p.items.emplace_back(Label{name});
            rest = trim(rest.substr(colon + 1));
        }
        parse_statement(rest, line_no, p.items);
    }

    for (size_t idx = 0; idx < p.items.size(); ++idx) {
        const auto* ins = std::get_if<Instruction>(&p.items[idx]);
        if (!ins || ins->target.empty()) continue;
        if (!p.symbols.count(ins->target))
            throw ParseError(0, "unresolved label '" + ins->target + "'");
    }
    return p;
}

std::string print_program(const Program& p, const PrintOptions& opts) {
    std::ostringstream out;
    for (const auto& item : p.items) {
        if (const auto* lbl = std::get_if<Label>(&item)) {
            out << lbl->name << ":\n";
        } else if (const auto* ins = std::get_if<Instruction>(&item)) {
            out << "    " << format_instruction(*ins, opts.fold_pseudos) << "\n";
        } else if (const auto* sec = std::get_if<SectionDirective>(&item)) {
            out << (sec->section == SectionDirective::Section::Text ? ".text" : ".data") << "\n";
        } else if (const auto* data = std::get_if<DataDirective>(&item)) {
            switch (data->kind) {
                case DataDirective::Kind::Word: {
                    out << "    .word ";
                    for (size_t i = 0; i < data->values.size(); ++i)
                        out << (i ? ", " : "") << static_cast<int32_t>(data->values[i]);
                    out << "\n";
                    break;
                }
                case DataDirective::Kind::Byte: {
                    out << "    .byte ";
                    for (size_t i = 0; i < data->values.size(); ++i)
                        out << (i ? ", " : "") << data->values[i];
                    out << "\n";
                    break;
                }
                case DataDirective::Kind::Asciz:
                    out << "    .asciz \"" << escape_string(data->text) << "\"\n";
                    break;
            }
        }
    }
    return out.str();
}

size_t instruction_count(const Program& p) {
    size_t n = 0;
    for (const auto& item : p.items) n += std::holds_alternative<Instruction>(item) ? 1 : 0;
    return n;
}

size_t data_size_bytes(const Program& p) {
    size_t n = 0;
    for (const auto& item : p.items)
        if (const auto* d = std::get_if<DataDirective>(&item)) n += d->size_bytes();
    return n;
}

size_t code_size_bytes(const Program& p) { return 4 * instruction_count(p) + data_size_bytes(p); }

bool writes_rd(Mnemonic m) {
    switch (m) {
        case Mnemonic::Sw: case Mnemonic::Sb:
        case Mnemonic::Beq: case Mnemonic::Bne: case Mnemonic::Blt:
        case Mnemonic::Bge: case Mnemonic::Bltu: case Mnemonic::Bgeu:
        case Mnemonic::Ecall:
            return false;
        default:
            return true;
    }
}

bool reads_rs1(Mnemonic m) {
    switch (m) {
        case Mnemonic::Lui: case Mnemonic::Auipc: case Mnemonic::Jal: case Mnemonic::Ecall:
            return false;
        default:
            return true;
    }
}

bool reads_rs2(Mnemonic m) {
    switch (m) {
        case Mnemonic::Add: case Mnemonic::Sub: case Mnemonic::And: case Mnemonic::Or:
        case Mnemonic::Xor: case Mnemonic::Sll: case Mnemonic::Srl: case Mnemonic::Sra:
        case Mnemonic::Mul: case Mnemonic::Sw: case Mnemonic::Sb:
        case Mnemonic::Beq: case Mnemonic::Bne: case Mnemonic::Blt: case Mnemonic::Bge:
        case Mnemonic::Bltu: case Mnemonic::Bgeu:
            return true;
        default:
            return false;
    }
}

}  // namespace recore::assembly
