#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

namespace recore {

// The independently failable execution units of the ALU. Everything the
// emulator, the translator, and the diagnosis report agree on is phrased in
// terms of this set.
enum class Unit : uint8_t { Mul = 0, Add, Shift, And, Or, Xor };

inline constexpr std::array<Unit, 6> kAllUnits = {Unit::Mul, Unit::Add, Unit::Shift,
                                                  Unit::And, Unit::Or,  Unit::Xor};

std::string_view unit_name(Unit u);
std::optional<Unit> unit_from_name(std::string_view name);

// Small value-type set over the six units.
class UnitSet {
public:
    constexpr UnitSet() = default;
    constexpr UnitSet(std::initializer_list<Unit> units) {
        for (Unit u : units) insert(u);
    }

    constexpr void insert(Unit u) { bits_ |= bit(u); }
    constexpr void erase(Unit u) { bits_ &= static_cast<uint8_t>(~bit(u)); }
    constexpr bool contains(Unit u) const { return (bits_ & bit(u)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr size_t size() const {
        size_t n = 0;
        for (Unit u : kAllUnits) n += contains(u) ? 1 : 0;
        return n;
    }

    constexpr UnitSet operator|(UnitSet o) const { return UnitSet(uint8_t(bits_ | o.bits_)); }
    constexpr UnitSet operator&(UnitSet o) const { return UnitSet(uint8_t(bits_ & o.bits_)); }
    constexpr bool disjoint(UnitSet o) const { return (bits_ & o.bits_) == 0; }
    constexpr bool operator==(const UnitSet&) const = default;

    // "MUL,ADD" style, units in canonical order; "{}" for the empty set.
    std::string to_string() const;

private:
    explicit constexpr UnitSet(uint8_t raw) : bits_(raw) {}
    static constexpr uint8_t bit(Unit u) { return uint8_t(1u << static_cast<uint8_t>(u)); }
    uint8_t bits_ = 0;
};

}  // namespace recore
