#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "recore/bench.hpp"
#include "recore/io.hpp"

using namespace recore;
using namespace recore::bench;
using resynth::VariantId;

namespace {

std::vector<BenchInput> suite_inputs() {
    std::string dir = RECORE_ASSET_DIR;
    return {
        {"mac", assembly::parse_program(io::read_text_file(dir + "/mac.s")), "main"},
        {"rs_encode", assembly::parse_program(io::read_text_file(dir + "/rs_encode.s")), "main"},
    };
}

using Key = std::pair<std::string, VariantId>;
std::map<Key, BenchResult> by_key(const std::vector<BenchResult>& rows) {
    std::map<Key, BenchResult> out;
    for (const auto& r : rows) out[{r.benchmark, r.variant}] = r;
    return out;
}

}  // namespace

TEST_CASE("suite produces 8 correct rows with the expected ordinal shape") {
    auto rows = run_suite(suite_inputs());
    REQUIRE(rows.size() == 8);
    for (const auto& r : rows) CHECK(r.correct);

    auto m = by_key(rows);
    for (const std::string name : {"mac", "rs_encode"}) {
        CAPTURE(name);
        const auto& v1 = m.at({name, VariantId::V1});
        const auto& v2 = m.at({name, VariantId::V2});
        const auto& v3 = m.at({name, VariantId::V3});
        const auto& v4 = m.at({name, VariantId::V4});

        // cycle ordering: substitution gets progressively more expensive
        CHECK(v3.cycles > v2.cycles);
        CHECK(v2.cycles > v1.cycles);
        CHECK(v4.cycles > v1.cycles);

        // memory: the add+mul rewrite needs far more bytes than mul alone
        uint64_t d2 = v2.code_bytes - v1.code_bytes;
        uint64_t d3 = v3.code_bytes - v1.code_bytes;
        uint64_t d4 = v4.code_bytes - v1.code_bytes;
        CHECK(d2 > 0);
        CHECK(d3 > d2);
        CHECK(d3 >= 5 * d2);
        CHECK(d4 < d3);

        // data segment untouched by any pass
        CHECK(v1.data_bytes == v2.data_bytes);
        CHECK(v1.data_bytes == v3.data_bytes);
        CHECK(v1.data_bytes == v4.data_bytes);
    }

    // mac's two AND sites expand by 12 bytes each under the or/xor rewrite
    const auto& mac1 = m.at({"mac", VariantId::V1});
    const auto& mac4 = m.at({"mac", VariantId::V4});
    CHECK(mac4.code_bytes - mac1.code_bytes <= 64);
}

TEST_CASE("csv emission is stable and refuses empty input") {
    auto rows = run_suite(suite_inputs());
    std::string csv1 = to_csv(rows);
    std::string csv2 = to_csv(run_suite(suite_inputs()));
    CHECK(csv1 == csv2);
    CHECK(csv1.rfind("benchmark,variant,code_bytes,data_bytes,cycles,instructions,correct\n", 0) ==
          0);
    // 8 rows + header + trailing newline
    CHECK(std::count(csv1.begin(), csv1.end(), '\n') == 9);
    CHECK(csv1.find("mac,V1,") != std::string::npos);
    CHECK(csv1.find("rs_encode,V4,") != std::string::npos);

    CHECK_THROWS(to_csv({}));
}
