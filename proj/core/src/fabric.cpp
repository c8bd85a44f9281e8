#include "recore/fabric.hpp"

#include <algorithm>
#include <sstream>

namespace recore::fabric {

std::vector<Footprint> default_footprints() {
    return {
        {"rocket_system", 15359, 6350},
        {"rocket_core", 3179, 1557},
        {"alu", 617, 125},
        {"tdc_sensors", 64, 320},
    };
}

std::vector<Footprint> parse_footprints(std::string_view text) {
    std::vector<Footprint> out;
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream row(line);
        Footprint f;
        if (!(row >> f.name)) continue;
        if (!(row >> f.luts >> f.ffs))
            throw FabricError("footprints line " + std::to_string(line_no) +
                              ": expected 'name luts ffs'");
        out.push_back(std::move(f));
    }
    return out;
}

std::string format_footprints(const std::vector<Footprint>& fps) {
    std::ostringstream out;
    for (const auto& f : fps) out << f.name << " " << f.luts << " " << f.ffs << "\n";
    return out.str();
}

Fabric::Fabric(const Options& opts) : opts_(opts) {
    if (opts.width < 1 || opts.height < 1) throw FabricError("fabric: grid must be at least 1x1");
    if (opts.tile_luts == 0 && opts.tile_ffs == 0)
        throw FabricError("fabric: tiles need nonzero capacity");
    tiles_.resize(size_t(opts.width) * size_t(opts.height));
}

uint32_t Fabric::tiles_for(const Footprint& f) const {
    auto ceil_div = [](uint32_t a, uint32_t b) { return b == 0 ? 0 : (a + b - 1) / b; };
    uint32_t need = std::max(ceil_div(f.luts, opts_.tile_luts), ceil_div(f.ffs, opts_.tile_ffs));
    return std::max(need, 1u);
}

bool Fabric::rect_free(const Rect& r) const {
    for (int y = r.y; y < r.y + r.h; ++y)
        for (int x = r.x; x < r.x + r.w; ++x) {
            const Tile& t = tile(x, y);
            if (t.damaged || t.occupant) return false;
        }
    return true;
}

// Smallest area first; within one area single rows first, then taller
// shapes; positions scanned row-major from the origin.
std::optional<Rect> Fabric::find_rect(uint32_t tiles_needed) const {
    for (int area = int(tiles_needed); area <= opts_.width * opts_.height; ++area) {
        for (int h = 1; h <= std::min(area, opts_.height); ++h) {
            if (area % h != 0) continue;
            int w = area / h;
            if (w > opts_.width) continue;
            for (int y = 0; y + h <= opts_.height; ++y)
                for (int x = 0; x + w <= opts_.width; ++x) {
                    Rect r{x, y, w, h};
                    if (rect_free(r)) return r;
                }
        }
    }
    return std::nullopt;
}

void Fabric::occupy(const Rect& r, PlacementId id) {
    for (int y = r.y; y < r.y + r.h; ++y)
        for (int x = r.x; x < r.x + r.w; ++x) tile(x, y).occupant = id;
}

void Fabric::release(const Rect& r) {
    for (int y = r.y; y < r.y + r.h; ++y)
        for (int x = r.x; x < r.x + r.w; ++x) tile(x, y).occupant.reset();
}

std::optional<Placement> Fabric::place(const Footprint& f) {
    auto rect = find_rect(tiles_for(f));
    if (!rect) return std::nullopt;
    PlacementId id = next_id_++;
    occupy(*rect, id);
    live_[id] = {f, *rect};
    return Placement{id, f.name, *rect};
}

std::vector<PlacementId> Fabric::damage(const Rect& region) {
    if (region.x < 0 || region.y < 0 || region.w < 1 || region.h < 1 ||
        region.x + region.w > opts_.width || region.y + region.h > opts_.height)
        throw FabricError("damage region outside grid");
    std::vector<PlacementId> affected;
    for (int y = region.y; y < region.y + region.h; ++y)
        for (int x = region.x; x < region.x + region.w; ++x) tile(x, y).damaged = true;
    for (const auto& [id, entry] : live_)
        if (entry.second.intersects(region)) affected.push_back(id);
    return affected;
}

std::optional<std::pair<Placement, ReconfigCost>> Fabric::relocate(PlacementId id) {
    auto it = live_.find(id);
    if (it == live_.end()) throw FabricError("relocate: unknown placement id");
    const Footprint fp = it->second.first;
    release(it->second.second);
    auto rect = find_rect(tiles_for(fp));
    if (!rect) {
        // The module is gone either way; keep the grid consistent.
        live_.erase(it);
        return std::nullopt;
    }
    occupy(*rect, id);
    it->second.second = *rect;
    ReconfigCost cost{uint32_t(rect->area()), rect->area() * opts_.reconfig_us_per_tile};
    return std::make_pair(Placement{id, fp.name, *rect}, cost);
}

std::optional<Placement> Fabric::find(PlacementId id) const {
    auto it = live_.find(id);
    if (it == live_.end()) return std::nullopt;
    return Placement{id, it->second.first.name, it->second.second};
}

std::optional<Placement> Fabric::find_by_name(const std::string& footprint) const {
    for (const auto& [id, entry] : live_)
        if (entry.first.name == footprint) return Placement{id, entry.first.name, entry.second};
    return std::nullopt;
}

std::vector<Placement> Fabric::placements() const {
    std::vector<Placement> out;
    for (const auto& [id, entry] : live_)
        out.push_back(Placement{id, entry.first.name, entry.second});
    return out;
}

bool Fabric::tile_healthy(int x, int y) const { return !tile(x, y).damaged; }
bool Fabric::tile_occupied(int x, int y) const { return tile(x, y).occupant.has_value(); }

int Fabric::healthy_unoccupied_tiles() const {
    int n = 0;
    for (const Tile& t : tiles_) n += (!t.damaged && !t.occupant) ? 1 : 0;
    return n;
}

bool Fabric::placements_clear_of_damage() const {
    for (const auto& [id, entry] : live_) {
        const Rect& r = entry.second;
        for (int y = r.y; y < r.y + r.h; ++y)
            for (int x = r.x; x < r.x + r.w; ++x)
                if (tile(x, y).damaged) return false;
    }
    return true;
}

}  // namespace recore::fabric
