#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <variant>

#include "recore/assembly.hpp"

using namespace recore::assembly;

namespace {

Instruction instr(const std::string& line) {
    Program p = parse_program(line);
    REQUIRE(p.items.size() == 1);
    return std::get<Instruction>(p.items[0]);
}

// Random-but-valid program generator for the round-trip property.
Program random_program(std::mt19937& rng) {
    auto pick = [&](int lo, int hi) { return int(rng() % uint32_t(hi - lo + 1)) + lo; };
    std::ostringstream text;
    text << ".text\n";
    int n_labels = pick(1, 4);
    std::vector<std::string> labels;
    for (int i = 0; i < n_labels; ++i) labels.push_back("lab" + std::to_string(i));

    int n_instr = pick(3, 25);
    int next_label = 0;
    for (int i = 0; i < n_instr; ++i) {
        if (next_label < n_labels && pick(0, 2) == 0) text << labels[size_t(next_label++)] << ":\n";
        switch (pick(0, 9)) {
            case 0: text << "add x" << pick(0, 31) << ", x" << pick(0, 31) << ", x" << pick(0, 31) << "\n"; break;
            case 1: text << "addi x" << pick(0, 31) << ", x" << pick(0, 31) << ", " << pick(-2048, 2047) << "\n"; break;
            case 2: text << "mul t0, t1, t2\n"; break;
            case 3: text << "slli x" << pick(0, 31) << ", x" << pick(0, 31) << ", " << pick(0, 31) << "\n"; break;
            case 4: text << "lw x" << pick(0, 31) << ", " << pick(-2048, 2047) << "(x" << pick(0, 31) << ")\n"; break;
            case 5: text << "sw x" << pick(0, 31) << ", " << pick(-2048, 2047) << "(x" << pick(0, 31) << ")\n"; break;
            case 6: text << "lui x" << pick(0, 31) << ", " << pick(0, 0xFFFFF) << "\n"; break;
            case 7: text << "beq x" << pick(0, 31) << ", x" << pick(0, 31) << ", "
                         << labels[size_t(pick(0, n_labels - 1))] << "\n"; break;
            case 8: text << "xori x" << pick(0, 31) << ", x" << pick(0, 31) << ", -1\n"; break;
            case 9: text << "jal x" << pick(0, 31) << ", " << labels[size_t(pick(0, n_labels - 1))] << "\n"; break;
        }
    }
    while (next_label < n_labels) text << labels[size_t(next_label++)] << ":\n";
    text << "ecall\n.data\n";
    int n_words = pick(1, 6);
    text << "dat0:\n    .word ";
    for (int i = 0; i < n_words; ++i) text << (i ? ", " : "") << int32_t(rng());
    text << "\n    .byte " << pick(0, 255) << ", " << pick(0, 255) << "\n";
    text << "    .asciz \"s" << pick(0, 99) << "\\n\"\n";
    return parse_program(text.str());
}

}  // namespace

TEST_CASE("register operands canonicalize to indices") {
    Instruction i = instr("add t0, t1, t2");
    CHECK(i.mnemonic == Mnemonic::Add);
    CHECK(i.rd == 5);
    CHECK(i.rs1 == 6);
    CHECK(i.rs2 == 7);

    CHECK(instr("add x5, x6, x7") == i);
    CHECK(*register_from_name("zero") == 0);
    CHECK(*register_from_name("fp") == 8);
    CHECK(*register_from_name("s0") == 8);
    CHECK(!register_from_name("x32"));
    CHECK(!register_from_name("q1"));
}

TEST_CASE("label plus branch on one line") {
    Program p = parse_program("loop: bne t2, zero, loop");
    REQUIRE(p.items.size() == 2);
    CHECK(std::get<Label>(p.items[0]).name == "loop");
    const auto& ins = std::get<Instruction>(p.items[1]);
    CHECK(ins.mnemonic == Mnemonic::Bne);
    CHECK(ins.rs1 == 7);
    CHECK(ins.rs2 == 0);
    CHECK(ins.target == "loop");
    CHECK(p.symbols.at("loop") == 0);
}

TEST_CASE("wrong operand count is a parse error") {
    CHECK_THROWS_AS(parse_program("mul t0, t1"), ParseError);
    CHECK_THROWS_AS(parse_program("add t0, t1, t2, t3"), ParseError);
    CHECK_THROWS_AS(parse_program("ecall t0"), ParseError);
}

TEST_CASE("parse errors carry line numbers and categories") {
    try {
        parse_program("nop\nfoo t0, t1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("unknown mnemonic") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_program("a:\na:\n"), ParseError);           // duplicate label
    CHECK_THROWS_AS(parse_program("beq t0, t1, nowhere\n"), ParseError);  // unresolved
    CHECK_THROWS_AS(parse_program("slli t0, t1, 32\n"), ParseError);
    CHECK_THROWS_AS(parse_program("addi t0, t1, 2048\n"), ParseError);
    CHECK_THROWS_AS(parse_program("lui t0, 0x100000\n"), ParseError);
    CHECK_THROWS_AS(parse_program(".align 4\n"), ParseError);
    CHECK_THROWS_AS(parse_program(".data\n.word -4294967295\n"), ParseError);
    CHECK_THROWS_AS(parse_program(".data\n.byte 256\n"), ParseError);
}

TEST_CASE("pseudo-instructions expand at parse time") {
    SUBCASE("li small fits addi") {
        Program p = parse_program("li t0, 42");
        REQUIRE(p.items.size() == 1);
        CHECK(std::get<Instruction>(p.items[0]).mnemonic == Mnemonic::Addi);
        CHECK(code_size_bytes(p) == 4);
    }
    SUBCASE("li wide expands to lui+addi") {
        Program p = parse_program("li t0, 0x12345678");
        REQUIRE(p.items.size() == 2);
        CHECK(std::get<Instruction>(p.items[0]).mnemonic == Mnemonic::Lui);
        CHECK(std::get<Instruction>(p.items[1]).mnemonic == Mnemonic::Addi);
        CHECK(code_size_bytes(p) == 8);
    }
    SUBCASE("li with empty low bits is a bare lui") {
        Program p = parse_program("li t0, 0x12345000");
        REQUIRE(p.items.size() == 1);
        CHECK(std::get<Instruction>(p.items[0]).mnemonic == Mnemonic::Lui);
    }
    SUBCASE("mv, not, nop, j, ret") {
        CHECK(instr("mv t0, t1") == instr("addi t0, t1, 0"));
        CHECK(instr("not t0, t1") == instr("xori t0, t1, -1"));
        CHECK(instr("nop") == instr("addi zero, zero, 0"));
        CHECK(instr("ret") == instr("jalr zero, ra, 0"));
        Program p = parse_program("x:\nj x");
        const auto& j = std::get<Instruction>(p.items[1]);
        CHECK(j.mnemonic == Mnemonic::Jal);
        CHECK(j.rd == 0);
        CHECK(j.target == "x");
    }
}

TEST_CASE("print_program basics") {
    CHECK(print_program(Program{}) == "");
    Program p = parse_program("add t0, t1, t2");
    CHECK(print_program(p) == "    add t0, t1, t2\n");
}

TEST_CASE("round-trip: parse(print(p)) == p") {
    std::mt19937 rng(20240817);
    for (int i = 0; i < 300; ++i) {
        Program p = random_program(rng);
        CAPTURE(i);
        Program again = parse_program(print_program(p));
        CHECK(again == p);

        // Folded printing reparses to the same canonical items too.
        Program folded = parse_program(print_program(p, {.fold_pseudos = true}));
        CHECK(folded == p);
    }
}

TEST_CASE("printing is a fixpoint") {
    std::mt19937 rng(99);
    Program p = random_program(rng);
    std::string once = print_program(p);
    std::string twice = print_program(parse_program(once));
    CHECK(once == twice);
}

TEST_CASE("determinism: identical text, identical program") {
    const char* text = "main:\n  addi t0, zero, 1\n  beq t0, zero, main\n  ecall\n";
    CHECK(parse_program(text) == parse_program(text));
}

TEST_CASE("code_size_bytes") {
    SUBCASE("ten plain instructions") {
        std::string text;
        for (int i = 0; i < 10; ++i) text += "add t0, t1, t2\n";
        CHECK(code_size_bytes(parse_program(text)) == 40);
    }
    SUBCASE("data directives count bytes") {
        Program p = parse_program(".data\n.word 1, 2, 3\n.byte 9\n.asciz \"hi\"\n");
        CHECK(data_size_bytes(p) == 12 + 1 + 3);
        CHECK(code_size_bytes(p) == 16);
    }
    SUBCASE("invariant under label renaming") {
        const char* text = "top:\nadd t0, t1, t2\nbeq t0, zero, top\necall\n";
        std::string renamed = text;
        size_t pos;
        while ((pos = renamed.find("top")) != std::string::npos)
            renamed.replace(pos, 3, "elsewhere");
        CHECK(code_size_bytes(parse_program(text)) == code_size_bytes(parse_program(renamed)));
    }
}

TEST_CASE("comments and blank lines produce no items") {
    Program p = parse_program("# header\n\n   # indented comment\nadd t0, t1, t2 # trailing\n");
    CHECK(p.items.size() == 1);
}
