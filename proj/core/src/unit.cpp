#include "recore/unit.hpp"

namespace recore {

std::string_view unit_name(Unit u) {
    switch (u) {
        case Unit::Mul: return "MUL";
        case Unit::Add: return "ADD";
        case Unit::Shift: return "SHIFT";
        case Unit::And: return "AND";
        case Unit::Or: return "OR";
        case Unit::Xor: return "XOR";
    }
    return "?";
}

std::optional<Unit> unit_from_name(std::string_view name) {
    for (Unit u : kAllUnits)
        if (name == unit_name(u)) return u;
    return std::nullopt;
}

std::string UnitSet::to_string() const {
    if (empty()) return "{}";
    std::string out;
    for (Unit u : kAllUnits) {
        if (!contains(u)) continue;
        if (!out.empty()) out += ",";
        out += unit_name(u);
    }
    return out;
}

}  // namespace recore
