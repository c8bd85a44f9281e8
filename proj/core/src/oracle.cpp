#include "recore/oracle.hpp"

#include <array>
#include <stdexcept>
#include <variant>
#include <vector>

namespace recore::oracle {
namespace {

using assembly::DataDirective;
using assembly::Program;

// Collects `count` word values starting at the data directive(s) following
// `label`.
std::vector<uint32_t> words_at(const Program& p, const std::string& label, size_t count) {
    auto it = p.symbols.find(label);
    if (it == p.symbols.end())
        throw std::runtime_error("oracle: benchmark is missing label '" + label + "'");
    std::vector<uint32_t> out;
    for (size_t idx = it->second + 1; idx < p.items.size() && out.size() < count; ++idx) {
        const auto* d = std::get_if<DataDirective>(&p.items[idx]);
        if (!d) break;
        if (d->kind != DataDirective::Kind::Word)
            throw std::runtime_error("oracle: expected .word data after '" + label + "'");
        for (uint32_t v : d->values) {
            out.push_back(v);
            if (out.size() == count) break;
        }
    }
    if (out.size() != count)
        throw std::runtime_error("oracle: label '" + label + "' has fewer than " +
                                 std::to_string(count) + " words");
    return out;
}

constexpr uint32_t kMacRounds = 64;
constexpr uint32_t kMacMask = 0xFFFF;

struct Gf256 {
    std::array<uint8_t, 512> exp{};
    std::array<uint8_t, 256> log{};

    Gf256() {
        uint32_t x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[size_t(i)] = uint8_t(x);
            log[x] = uint8_t(i);
            x <<= 1;
            if (x & 0x100) x ^= 0x11D;
        }
        for (int i = 255; i < 512; ++i) exp[size_t(i)] = exp[size_t(i) - 255];
    }

    uint8_t mul(uint8_t a, uint8_t b) const {
        if (a == 0 || b == 0) return 0;
        return exp[size_t(log[a]) + size_t(log[b])];
    }
};

}  // namespace

uint32_t mac_expected(const Program& p) {
    auto a = words_at(p, "arraya", 32);
    auto b = words_at(p, "arrayb", 32);
    uint32_t acc = 0;
    for (uint32_t round = 0; round < kMacRounds; ++round)
        for (size_t i = 0; i < 32; ++i) acc += (a[i] * b[i]) & kMacMask;
    return acc & 0x7FFFFFFF;
}

uint32_t rs_encode_expected(const Program& p) {
    auto msg = words_at(p, "gmsg", 11);
    static const Gf256 gf;

    // Generator polynomial with roots alpha^0..alpha^3.
    std::array<uint8_t, 5> gen{};
    gen[0] = 1;
    size_t deg = 0;
    for (int i = 0; i < 4; ++i) {
        uint8_t root = gf.exp[size_t(i)];
        std::array<uint8_t, 5> next{};
        for (size_t j = 0; j <= deg; ++j) {
            next[j] = uint8_t(next[j] ^ gf.mul(gen[j], root));
            next[j + 1] = uint8_t(next[j + 1] ^ gen[j]);
        }
        gen = next;
        ++deg;
    }
    // LFSR taps, highest power of the remainder first.
    std::array<uint8_t, 4> taps = {gen[3], gen[2], gen[1], gen[0]};

    std::array<uint8_t, 4> parity{};
    for (uint32_t m : msg) {
        uint8_t fb = uint8_t((m ^ parity[0]) & 0xFF);
        std::array<uint8_t, 4> term{};
        if (fb != 0)
            for (size_t j = 0; j < 4; ++j) term[j] = gf.mul(taps[j], fb);
        parity = {uint8_t(parity[1] ^ term[0]), uint8_t(parity[2] ^ term[1]),
                  uint8_t(parity[3] ^ term[2]), term[3]};
    }
    return uint32_t(parity[0]) << 24 | uint32_t(parity[1]) << 16 | uint32_t(parity[2]) << 8 |
           uint32_t(parity[3]);
}

std::optional<uint32_t> expected_exit(std::string_view benchmark, const Program& p) {
    if (benchmark == "mac") return mac_expected(p);
    if (benchmark == "rs_encode") return rs_encode_expected(p);
    return std::nullopt;
}

}  // namespace recore::oracle
