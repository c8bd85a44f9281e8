#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "recore/fabric.hpp"

using namespace recore::fabric;

namespace {

Fabric grid_40x60() {
    Fabric::Options o;
    o.width = 40;
    o.height = 60;
    return Fabric(o);
}

Footprint fp(const char* name, uint32_t luts, uint32_t ffs) { return {name, luts, ffs}; }

}  // namespace

TEST_CASE("published footprints load exactly") {
    auto fps = default_footprints();
    REQUIRE(fps.size() == 4);
    CHECK(fps[0] == Footprint{"rocket_system", 15359, 6350});
    CHECK(fps[1] == Footprint{"rocket_core", 3179, 1557});
    CHECK(fps[2] == Footprint{"alu", 617, 125});
    CHECK(fps[3] == Footprint{"tdc_sensors", 64, 320});

    // config round-trip
    auto parsed = parse_footprints(format_footprints(fps));
    CHECK(parsed == fps);
    CHECK(parse_footprints("# c\nalu 617 125\n") == std::vector<Footprint>{fps[2]});
    CHECK_THROWS_AS(parse_footprints("alu 617\n"), FabricError);
}

TEST_CASE("tile demand is the max of LUT and FF ceilings") {
    Fabric f = grid_40x60();
    CHECK(f.tiles_for(fp("alu", 617, 125)) == 13);          // ceil(617/50)
    CHECK(f.tiles_for(fp("rocket_core", 3179, 1557)) == 64);  // ceil(3179/50)
    CHECK(f.tiles_for(fp("tdc_sensors", 64, 320)) == 4);      // FF-bound: ceil(320/100)
    CHECK(f.tiles_for(fp("empty", 0, 0)) == 1);               // degenerate minimum
}

TEST_CASE("first-fit placement is deterministic and row-major") {
    Fabric f = grid_40x60();
    auto alu = f.place(fp("alu", 617, 125));
    REQUIRE(alu);
    CHECK(alu->rect == Rect{0, 0, 13, 1});  // 13 tiles fit a single row

    auto core = f.place(fp("rocket_core", 3179, 1557));
    REQUIRE(core);
    CHECK(core->rect.area() == 64);
    CHECK(core->rect == Rect{0, 1, 32, 2});  // first free 64-tile rectangle, row-major

    auto zero = f.place(fp("none", 0, 0));
    REQUIRE(zero);
    CHECK(zero->rect.area() == 1);

    Fabric g = grid_40x60();
    auto again = g.place(fp("alu", 617, 125));
    CHECK(again->rect == alu->rect);  // determinism
}

TEST_CASE("placement fails cleanly when nothing fits") {
    Fabric::Options o;
    o.width = 4;
    o.height = 4;
    Fabric f(o);
    f.damage(Rect{0, 0, 4, 4});
    CHECK(!f.place(fp("alu", 617, 125)));
}

TEST_CASE("damage reports affected placements and is idempotent") {
    Fabric f = grid_40x60();
    auto core = f.place(fp("rocket_core", 3179, 1557));
    REQUIRE(core);

    SUBCASE("disjoint damage affects nothing") {
        auto affected = f.damage(Rect{0, 30, 10, 10});
        CHECK(affected.empty());
        CHECK(f.placements_clear_of_damage());
    }
    SUBCASE("overlapping damage reports the placement id") {
        auto affected = f.damage(Rect{20, 0, 4, 2});
        REQUIRE(affected.size() == 1);
        CHECK(affected[0] == core->id);
        CHECK(!f.placements_clear_of_damage());  // occupancy retained until relocation

        auto again = f.damage(Rect{20, 0, 4, 2});
        CHECK(again == affected);
        CHECK(f.healthy_unoccupied_tiles() == 40 * 60 - 64);  // same tiles, no double count
    }
    SUBCASE("out-of-grid damage is rejected") {
        CHECK_THROWS_AS(f.damage(Rect{38, 58, 5, 5}), FabricError);
    }
}

TEST_CASE("relocation moves off damaged tiles and prices the new rectangle") {
    Fabric f = grid_40x60();
    auto core = f.place(fp("rocket_core", 3179, 1557));
    REQUIRE(core);
    f.damage(core->rect);

    auto moved = f.relocate(core->id);
    REQUIRE(moved);
    const auto& [placement, cost] = *moved;
    CHECK(!placement.rect.intersects(core->rect));  // old tiles are damaged now
    CHECK(cost.tiles == 64);
    CHECK(cost.time_us == doctest::Approx(64.0));  // 1 us per tile by default
    CHECK(f.placements_clear_of_damage());
}

TEST_CASE("relocation without damage may land on the same rectangle") {
    Fabric f = grid_40x60();
    auto alu = f.place(fp("alu", 617, 125));
    REQUIRE(alu);
    auto moved = f.relocate(alu->id);
    REQUIRE(moved);
    CHECK(moved->first.rect == alu->rect);  // freed tiles are healthy and first-fit
    CHECK(moved->second.tiles == 13);
}

TEST_CASE("relocation fails when spare healthy capacity is short") {
    // 10x12 grid: the 64-tile core fits once; after its region is damaged
    // only 56 healthy tiles remain, so relocation must fail.
    Fabric::Options o;
    o.width = 10;
    o.height = 12;
    Fabric f(o);
    auto core = f.place(fp("rocket_core", 3179, 1557));
    REQUIRE(core);
    CHECK(core->rect.area() == 64);
    f.damage(core->rect);
    CHECK(f.healthy_unoccupied_tiles() < 64);
    CHECK(!f.relocate(core->id));
    CHECK_THROWS_AS(f.relocate(999), FabricError);
}

TEST_CASE("healthy capacity never increases across damage events") {
    Fabric f = grid_40x60();
    int prev = f.healthy_unoccupied_tiles();
    for (int i = 0; i < 10; ++i) {
        f.damage(Rect{i * 3, i * 5, 3, 4});
        int now = f.healthy_unoccupied_tiles();
        CHECK(now <= prev);
        prev = now;
    }
}

TEST_CASE("identical event sequences give identical layouts") {
    auto run = [] {
        Fabric f = grid_40x60();
        auto a = f.place(fp("rocket_core", 3179, 1557));
        auto b = f.place(fp("alu", 617, 125));
        f.damage(Rect{0, 0, 20, 2});
        auto ra = f.relocate(a->id);
        return std::make_tuple(a->rect, b->rect, ra->first.rect, ra->second.tiles);
    };
    CHECK(run() == run());
}
