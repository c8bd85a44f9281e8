#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "recore/assembly.hpp"
#include "recore/unit.hpp"

namespace recore::resynth {

// The four pre-generated program variants. V1 is the untouched source; V2
// removes mul; V3 removes mul and add/addi; V4 removes and/andi.
enum class VariantId : uint8_t { V1 = 0, V2, V3, V4 };

std::string_view variant_name(VariantId v);
std::optional<VariantId> variant_from_name(std::string_view name);

struct TranslateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Registers statically reserved for the rewrite expansions. Source programs
// fed to a pass must not use that pass's registers near rewrite sites; the
// passes verify this and refuse to translate otherwise. The three sets are
// disjoint so the passes compose in any order.
inline constexpr std::array<uint8_t, 3> kMulScratch = {29, 30, 31};  // t4, t5, t6
inline constexpr std::array<uint8_t, 2> kAddScratch = {28, 27};      // t3, s11
inline constexpr std::array<uint8_t, 2> kAndScratch = {25, 26};      // s9, s10

// mul rd,rs1,rs2 -> shift-add loop (multiplicand shifts left, multiplier
// shifts right, LSB decides the accumulate). The loop body retires at most
// 32 times. Output contains no mul.
assembly::Program pass_mul_to_shift_add(const assembly::Program& p,
                                        std::array<uint8_t, 3> scratch = kMulScratch);

// add/addi -> carry-free xor/and ripple loop; the loop body retires at most
// 33 times. Immediates are first materialized through the xor unit, so the
// output contains no add/addi at all. Branch comparison and load/store
// address generation are hardware, not instructions, and stay untouched.
assembly::Program pass_add_to_xor_and(const assembly::Program& p,
                                      std::array<uint8_t, 2> scratch = kAddScratch);

// and/andi -> or/xor complement sequence: rd = ~(~rs1 | ~rs2), inversion by
// xori with -1. Output contains no and/andi.
assembly::Program pass_and_to_demorgan(const assembly::Program& p,
                                       std::array<uint8_t, 2> scratch = kAndScratch);

// CLI pass names: mul2addshift, add2xorand, and2demorgan.
assembly::Program apply_pass(const assembly::Program& p, std::string_view pass_name);
// Comma-separated pass list applied left-to-right.
assembly::Program apply_passes(const assembly::Program& p, std::string_view pass_list);

assembly::Program make_variant(const assembly::Program& v1, VariantId v);

// Units whose mnemonics appear in p, plus ADD, which is always required
// implicitly for address generation and branch comparison.
UnitSet required_units(const assembly::Program& p);
inline UnitSet required_units(VariantId, const assembly::Program& p) { return required_units(p); }

// True when p contains add/addi/sub/auipc, i.e. instructions dispatched to
// the ADD unit (as opposed to the implicit hardware uses).
bool uses_add_instructions(const assembly::Program& p);

// The units each variant's substitutions rely on, independent of program.
UnitSet variant_introduced_units(VariantId v);

// Maps a diagnosed faulty-unit set to the variant that avoids it:
// {} -> V1, MUL -> V2, anything with ADD -> V3, AND -> V4. Returns nullopt
// ("unrecoverable") when no variant's substitutions survive the fault set;
// the orchestrator escalates that to reconfiguration.
std::optional<VariantId> select_variant(UnitSet faulty);

}  // namespace recore::resynth
