#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace recore::fabric {

struct Footprint {
    std::string name;
    uint32_t luts = 0;
    uint32_t ffs = 0;

    bool operator==(const Footprint&) const = default;
};

// Published utilization of the soft-core design these scenarios model:
// rocket_system 15359 LUTs / 6350 FFs, rocket_core 3179/1557, alu 617/125,
// tdc_sensors 64/320.
std::vector<Footprint> default_footprints();

// Config file: one `name luts ffs` triple per line, '#' comments.
std::vector<Footprint> parse_footprints(std::string_view text);
std::string format_footprints(const std::vector<Footprint>& fps);

struct Rect {
    int x = 0, y = 0, w = 0, h = 0;

    int area() const { return w * h; }
    bool contains(int px, int py) const {
        return px >= x && px < x + w && py >= y && py < y + h;
    }
    bool intersects(const Rect& o) const {
        return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
    }
    bool operator==(const Rect&) const = default;
};

using PlacementId = uint32_t;

struct Placement {
    PlacementId id = 0;
    std::string footprint;
    Rect rect;

    bool operator==(const Placement&) const = default;
};

struct ReconfigCost {
    uint32_t tiles = 0;
    double time_us = 0.0;
};

struct FabricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A grid of identical tiles. Placements are axis-aligned rectangles of
// healthy, unoccupied tiles whose pooled LUT/FF capacity covers the
// footprint. Placement and relocation use a deterministic smallest-area
// first-fit scan.
class Fabric {
public:
    struct Options {
        int width = 16;
        int height = 12;
        uint32_t tile_luts = 50;
        uint32_t tile_ffs = 100;
        double reconfig_us_per_tile = 1.0;
    };

    explicit Fabric(const Options& opts);

    std::optional<Placement> place(const Footprint& f);

    // Marks the region damaged and reports ids of placements it touches.
    // Their occupancy is retained until relocation.
    std::vector<PlacementId> damage(const Rect& region);

    // Frees the old rectangle (damaged tiles stay damaged), re-places the
    // footprint on healthy spare tiles, and returns the cost of rewriting
    // the new rectangle. nullopt when no healthy region fits.
    std::optional<std::pair<Placement, ReconfigCost>> relocate(PlacementId id);

    std::optional<Placement> find(PlacementId id) const;
    std::optional<Placement> find_by_name(const std::string& footprint) const;
    std::vector<Placement> placements() const;

    bool tile_healthy(int x, int y) const;
    bool tile_occupied(int x, int y) const;
    int healthy_unoccupied_tiles() const;
    // True when no placement covers a damaged tile.
    bool placements_clear_of_damage() const;

    uint32_t tiles_for(const Footprint& f) const;
    const Options& options() const { return opts_; }

private:
    struct Tile {
        bool damaged = false;
        std::optional<PlacementId> occupant;
    };

    Tile& tile(int x, int y) { return tiles_[size_t(y) * size_t(opts_.width) + size_t(x)]; }
    const Tile& tile(int x, int y) const {
        return tiles_[size_t(y) * size_t(opts_.width) + size_t(x)];
    }
    bool rect_free(const Rect& r) const;
    std::optional<Rect> find_rect(uint32_t tiles_needed) const;
    void occupy(const Rect& r, PlacementId id);
    void release(const Rect& r);

    Options opts_;
    std::vector<Tile> tiles_;
    std::map<PlacementId, std::pair<Footprint, Rect>> live_;
    PlacementId next_id_ = 1;
};

}  // namespace recore::fabric
