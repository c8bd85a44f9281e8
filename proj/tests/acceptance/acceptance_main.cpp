// Acceptance suite: runs every system-level criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit code is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "recore/assembly.hpp"
#include "recore/bench.hpp"
#include "recore/emulator.hpp"
#include "recore/io.hpp"
#include "recore/oracle.hpp"
#include "recore/orchestrator.hpp"
#include "recore/resynth.hpp"
#include "recore/tdc.hpp"

using namespace recore;
using Clock = std::chrono::steady_clock;

namespace {

struct Checker {
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

std::string asset(const char* name) { return std::string(RECORE_ASSET_DIR) + "/" + name; }

assembly::Program load_asset(const char* name) {
    return assembly::parse_program(io::read_text_file(asset(name)));
}

uint32_t run_exit(const assembly::Program& p, const emu::FaultConfig& f, Checker& c,
                  const char* what) {
    emu::RunResult r = emu::run_program(p, "main", f, emu::CostModel{}, 400'000'000);
    c.expect(r.reason == emu::Termination::EcallExit,
             std::string(what) + ": did not reach ecall exit");
    return r.state.exit_code.value_or(0);
}

// ---------------------------------------------------------------------- C1
void criterion_translator_equivalence(Checker& c) {
    auto start = Clock::now();
    const uint32_t edges[] = {0, 1, 0xFFFFFFFFu, 0x7FFFFFFFu, 0x80000000u, 0xFFFFFFFFu};

    struct Suite {
        const char* name;
        const char* body;        // operand regs t0, t1; result in a0
        const char* passes;
        std::function<uint32_t(uint32_t, uint32_t)> host;
    };
    const std::vector<Suite> suites = {
        {"mul2addshift", " mul a0, t0, t1\n", "mul2addshift",
         [](uint32_t a, uint32_t b) { return a * b; }},
        {"add2xorand", " add a0, t0, t1\n", "add2xorand",
         [](uint32_t a, uint32_t b) { return a + b; }},
        {"and2demorgan", " and a0, t0, t1\n", "and2demorgan",
         [](uint32_t a, uint32_t b) { return a & b; }},
        {"V3", " mul t2, t0, t1\n add a0, t2, t1\n", "mul2addshift,add2xorand",
         [](uint32_t a, uint32_t b) { return a * b + b; }},
    };

    for (const auto& suite : suites) {
        std::mt19937_64 rng(0xC0FFEE);
        size_t mismatches = 0;
        auto check_pair = [&](uint32_t a, uint32_t b) {
            std::ostringstream text;
            text << "main:\n li t0, " << int32_t(a) << "\n li t1, " << int32_t(b) << "\n"
                 << suite.body << " ecall\n";
            assembly::Program p =
                resynth::apply_passes(assembly::parse_program(text.str()), suite.passes);
            emu::RunResult r = emu::run_program(p, "main", {}, emu::CostModel{}, 2'000'000);
            if (r.reason != emu::Termination::EcallExit ||
                r.state.exit_code != suite.host(a, b))
                ++mismatches;
        };
        for (uint32_t a : edges)
            for (uint32_t b : edges) check_pair(a, b);
        for (int i = 0; i < 10000; ++i) check_pair(uint32_t(rng()), uint32_t(rng()));
        c.expect(mismatches == 0, std::string(suite.name) + ": " + std::to_string(mismatches) +
                                      " mismatches out of 10036 pairs");
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    c.expect(secs < 60.0, "runtime " + std::to_string(secs) + "s exceeds 60s");
}

// ---------------------------------------------------------------------- C2
void criterion_functional_fault_recovery(Checker& c) {
    assembly::Program mac = load_asset("mac.s");
    uint32_t mac_oracle = oracle::mac_expected(mac);

    emu::FaultConfig mul_dead;
    mul_dead.set(Unit::Mul, emu::Fault::disabled());

    uint32_t v1_exit = run_exit(mac, mul_dead, c, "mac V1");
    c.expect(v1_exit != mac_oracle, "mac V1 under dead MUL should miscompute");

    assembly::Program mac_v2 = resynth::make_variant(mac, resynth::VariantId::V2);
    uint32_t v2_exit = run_exit(mac_v2, mul_dead, c, "mac V2");
    c.expect(v2_exit == mac_oracle, "mac V2 under dead MUL must equal the oracle");

    assembly::Program rs = load_asset("rs_encode.s");
    uint32_t rs_oracle = oracle::rs_encode_expected(rs);
    assembly::Program rs_v3 = resynth::make_variant(rs, resynth::VariantId::V3);
    emu::FaultConfig both_dead;
    both_dead.set(Unit::Mul, emu::Fault::disabled());
    both_dead.set(Unit::Add, emu::Fault::disabled());
    both_dead.add_scope = emu::AddFaultScope::InstructionOnly;
    uint32_t v3_exit = run_exit(rs_v3, both_dead, c, "rs V3");
    c.expect(v3_exit == rs_oracle, "rs_encode V3 under dead MUL+ADD must equal the oracle");
}

// ---------------------------------------------------------------------- C3
// Host-side mirrors of the generated loops, scaled per width.
template <typename U>
int shift_add_iterations(U a, U b) {
    int n = 0;
    U prod = 0;
    while (b != 0) {
        if (b & 1) prod = U(prod + a);
        a = U(a << 1);
        b = U(b >> 1);
        ++n;
    }
    (void)prod;
    return n;
}

template <typename U>
int ripple_iterations(U a, U b) {
    int n = 0;
    while (b != 0) {
        U carry = U(a & b);
        a = U(a ^ b);
        b = U(carry << 1);
        ++n;
    }
    (void)a;
    return n;
}

void criterion_termination_bounds(Checker& c) {
    int worst_sa16 = 0, worst_rc16 = 0;
    std::mt19937_64 rng(99);
    std::vector<uint16_t> bs;
    for (int i = 0; i < 1019; ++i) bs.push_back(uint16_t(rng()));
    for (uint16_t e : {0, 1, 0x7FFF, 0x8000, 0xFFFF}) bs.push_back(e);
    for (uint32_t a = 0; a <= 0xFFFF; ++a)
        for (uint16_t b : bs) {
            worst_sa16 = std::max(worst_sa16, shift_add_iterations<uint16_t>(uint16_t(a), b));
            worst_rc16 = std::max(worst_rc16, ripple_iterations<uint16_t>(uint16_t(a), b));
        }
    c.expect(worst_sa16 <= 16, "16-bit shift-add worst " + std::to_string(worst_sa16));
    c.expect(worst_rc16 <= 17, "16-bit ripple worst " + std::to_string(worst_rc16));

    int worst_sa32 = 0, worst_rc32 = 0;
    for (int i = 0; i < 1'000'000; ++i) {
        uint32_t a = uint32_t(rng()), b = uint32_t(rng());
        worst_sa32 = std::max(worst_sa32, shift_add_iterations<uint32_t>(a, b));
        worst_rc32 = std::max(worst_rc32, ripple_iterations<uint32_t>(a, b));
    }
    for (uint32_t a : {0u, 1u, 0x7FFFFFFFu, 0x80000000u, 0xFFFFFFFFu})
        for (uint32_t b : {0u, 1u, 0x7FFFFFFFu, 0x80000000u, 0xFFFFFFFFu}) {
            worst_sa32 = std::max(worst_sa32, shift_add_iterations<uint32_t>(a, b));
            worst_rc32 = std::max(worst_rc32, ripple_iterations<uint32_t>(a, b));
        }
    c.expect(worst_sa32 <= 32, "32-bit shift-add worst " + std::to_string(worst_sa32));
    c.expect(worst_rc32 <= 33, "32-bit ripple worst " + std::to_string(worst_rc32));
}

// ---------------------------------------------------------------------- C4
void criterion_calibration(Checker& c) {
    tdc::TdcConfig quiet;
    quiet.sigma_ps = 0.0;
    tdc::TdcConfig calibrated = tdc::calibrate(quiet, 200, 1);
    tdc::NoiseSource n0(1);
    bool all64 = true;
    for (int i = 0; i < 1000; ++i) all64 &= tdc::sample(calibrated, 0.0, n0).hw == 64;
    c.expect(all64, "noise-free calibrated HW must be exactly 64");

    tdc::TdcConfig noisy;  // default sigma
    tdc::TdcConfig cal2 = tdc::calibrate(noisy, 200, 2);
    tdc::NoiseSource n1(2);
    double acc = 0;
    for (int i = 0; i < 10000; ++i) acc += tdc::sample(cal2, 0.0, n1).hw;
    double mean = acc / 10000.0;
    c.expect(mean >= 63.0 && mean <= 65.0,
             "mean HW over 10k noisy samples = " + std::to_string(mean));
}

// ---------------------------------------------------------------------- C5
void criterion_detection(Checker& c) {
    auto run_detection = [&](uint64_t seed) {
        tdc::TdcConfig cfg;
        tdc::TdcConfig cal = tdc::calibrate(cfg, 200, seed);
        tdc::NoiseSource noise(seed);
        tdc::Detector det(tdc::DetectorConfig{}, cal.taps / 2);
        tdc::DisturbanceTrace trace;
        trace.pulses.push_back({100.0, 160.0, *tdc::preset_dv_mv("radiate"), -1});
        std::vector<tdc::Alert> alerts;
        for (int cyc = 1; cyc <= 400; ++cyc)
            for (int s = 0; s < cal.oversampling; ++s) {
                double t = cyc + double(s) / cal.oversampling;
                tdc::TdcSample smp = tdc::sample(cal, trace.dv_at(t, 0, 0.2), noise);
                smp.t = t;
                if (auto a = det.feed(smp)) alerts.push_back(*a);
            }
        return alerts;
    };

    auto alerts = run_detection(5);
    c.expect(alerts.size() == 1,
             "radiate pulse produced " + std::to_string(alerts.size()) + " alerts, wanted 1");
    if (alerts.size() == 1) {
        // within persistence x oversampling samples of onset at t=100
        double window_cycles = double(tdc::DetectorConfig{}.persistence);
        c.expect(alerts[0].t <= 100.0 + window_cycles,
                 "alert at t=" + std::to_string(alerts[0].t) + " later than onset+persistence");
    }
    auto again = run_detection(5);
    c.expect(again.size() == alerts.size() && (alerts.empty() || again[0].t == alerts[0].t),
             "detection not deterministic under a fixed seed");

    // noise-only: zero alerts over 10k samples
    tdc::TdcConfig cal = tdc::calibrate(tdc::TdcConfig{}, 200, 11);
    tdc::NoiseSource noise(11);
    tdc::Detector det(tdc::DetectorConfig{}, cal.taps / 2);
    int noise_alerts = 0;
    for (int i = 0; i < 10000; ++i) {
        tdc::TdcSample smp = tdc::sample(cal, 0.0, noise);
        smp.t = i;
        if (det.feed(smp)) ++noise_alerts;
    }
    c.expect(noise_alerts == 0,
             std::to_string(noise_alerts) + " false alerts in 10k noise-only samples");
}

// ---------------------------------------------------------------------- C6
void criterion_sensor_locality(Checker& c) {
    tdc::SensorBank::SensorOptions opts;  // two sensors, attenuation 0.2
    tdc::SensorBank bank(opts, 21);
    tdc::DisturbanceTrace trace;
    trace.pulses.push_back({100.0, 150.0, *tdc::preset_dv_mv("radiate"), 0});
    int tdc0 = 0, tdc1 = 0;
    for (int cyc = 1; cyc <= 400; ++cyc)
        for (int s = 0; s < opts.tdc.oversampling; ++s)
            for (const auto& a :
                 bank.sample_all(cyc + double(s) / opts.tdc.oversampling, trace)) {
                if (a.sensor == "tdc0") ++tdc0;
                if (a.sensor == "tdc1") ++tdc1;
            }
    c.expect(tdc0 == 1, "near sensor alerted " + std::to_string(tdc0) + " times, wanted 1");
    c.expect(tdc1 == 0, "far sensor alerted " + std::to_string(tdc1) + " times, wanted 0");
}

// ---------------------------------------------------------------------- C7
void criterion_soft_recovery(Checker& c) {
    auto start = Clock::now();
    orch::ScenarioReport r =
        orch::run_scenario_file(asset("scenarios/soft_mul.json"), RECORE_ASSET_DIR);
    c.expect(r.final_phase == orch::Phase::Recovered, "final phase not RECOVERED");
    c.expect(r.correct && r.exit_value == r.oracle_value, "exit value does not match the oracle");
    c.expect(!r.sanity_reports.empty() &&
                 r.sanity_reports[0].failed_units() == UnitSet{Unit::Mul},
             "sanity must localize exactly {MUL}");
    bool ordered = false;
    size_t i_alert = r.log.size(), i_sanity = r.log.size(), i_swap = r.log.size();
    for (size_t i = 0; i < r.log.size(); ++i) {
        if (r.log[i].event == "alert" && i_alert == r.log.size()) i_alert = i;
        if (r.log[i].event == "sanity" && i_sanity == r.log.size()) i_sanity = i;
        if (r.log[i].event == "variant_switch" && i_swap == r.log.size()) i_swap = i;
    }
    ordered = i_alert < i_sanity && i_sanity < i_swap && i_swap < r.log.size();
    c.expect(ordered, "log must show alert -> sanity -> variant_switch");
    bool swapped_v2 = false;
    for (const auto& e : r.log)
        if (e.event == "variant_switch" && e.detail == "V2") swapped_v2 = true;
    c.expect(swapped_v2, "variant switch must pick V2");
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    c.expect(secs < 10.0, "runtime " + std::to_string(secs) + "s exceeds 10s");
}

// ---------------------------------------------------------------------- C8
void criterion_hard_recovery(Checker& c) {
    orch::ScenarioReport r =
        orch::run_scenario_file(asset("scenarios/hard_damage.json"), RECORE_ASSET_DIR);
    c.expect(r.final_phase == orch::Phase::Recovered, "damage scenario must finish RECOVERED");
    c.expect(r.correct, "exit after relocation must match the oracle");
    c.expect(r.relocations.size() == 1, "expected exactly one relocation");
    if (!r.relocations.empty()) {
        fabric::Rect damaged{0, 0, 16, 4};  // the scenario's damage region
        c.expect(!r.relocations[0].to.intersects(damaged),
                 "new placement overlaps the damaged region");
        c.expect(r.relocations[0].tiles == 64, "core footprint must need 64 tiles");
    }
    bool invariant_violated = false;
    for (const auto& e : r.log)
        if (e.event == "invariant_violation") invariant_violated = true;
    c.expect(!invariant_violated, "placement overlapped damage after the scenario");

    orch::ScenarioReport tight =
        orch::run_scenario_file(asset("scenarios/hard_damage_tight.json"), RECORE_ASSET_DIR);
    c.expect(tight.final_phase == orch::Phase::Failed,
             "short spare capacity must end in FAILED");
    c.expect(tight.failure_reason.find("no-fit") != std::string::npos,
             "failure must be the relocation no-fit");
}

// ---------------------------------------------------------------------- C9
void criterion_overhead_ordinals(Checker& c) {
    std::vector<bench::BenchInput> inputs = {
        {"mac", load_asset("mac.s"), "main"},
        {"rs_encode", load_asset("rs_encode.s"), "main"},
    };
    auto rows = bench::run_suite(inputs);
    auto find = [&](const std::string& b, resynth::VariantId v) -> const bench::BenchResult& {
        for (const auto& r : rows)
            if (r.benchmark == b && r.variant == v) return r;
        throw std::logic_error("row missing");
    };
    for (const std::string name : {"mac", "rs_encode"}) {
        const auto& v1 = find(name, resynth::VariantId::V1);
        const auto& v2 = find(name, resynth::VariantId::V2);
        const auto& v3 = find(name, resynth::VariantId::V3);
        const auto& v4 = find(name, resynth::VariantId::V4);
        c.expect(v3.cycles > v2.cycles && v2.cycles > v1.cycles,
                 name + ": cycles must order V3 > V2 > V1");
        c.expect(v4.cycles > v1.cycles, name + ": cycles must order V4 > V1");
        uint64_t d2 = v2.code_bytes - v1.code_bytes;
        uint64_t d3 = v3.code_bytes - v1.code_bytes;
        c.expect(d2 > 0 && d3 >= 5 * d2,
                 name + ": memory delta(V3)=" + std::to_string(d3) +
                     " must be at least 5x delta(V2)=" + std::to_string(d2));
    }
}

// --------------------------------------------------------------------- C10
void criterion_determinism(Checker& c) {
    auto r1 = orch::run_scenario_file(asset("scenarios/hard_damage.json"), RECORE_ASSET_DIR);
    auto r2 = orch::run_scenario_file(asset("scenarios/hard_damage.json"), RECORE_ASSET_DIR);
    c.expect(orch::report_to_json(r1) == orch::report_to_json(r2),
             "scenario reports differ across identical runs");
    c.expect(orch::report_log_csv(r1) == orch::report_log_csv(r2),
             "scenario logs differ across identical runs");

    std::vector<bench::BenchInput> inputs = {{"mac", load_asset("mac.s"), "main"}};
    c.expect(bench::to_csv(bench::run_suite(inputs)) == bench::to_csv(bench::run_suite(inputs)),
             "bench CSVs differ across identical runs");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<void(Checker&)> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "translator equivalence (10k pairs + edges, exact)", criterion_translator_equivalence},
        {2, "functional fault recovery (mac V1/V2, rs V3)", criterion_functional_fault_recovery},
        {3, "termination bounds (16-bit sweep, 1M 32-bit trials)", criterion_termination_bounds},
        {4, "sensor calibration (exact 64; noisy mean in [63,65])", criterion_calibration},
        {5, "detection (one alert per pulse, zero false positives)", criterion_detection},
        {6, "sensor locality (scoped pulse, near sensor only)", criterion_sensor_locality},
        {7, "end-to-end soft recovery (MUL -> V2)", criterion_soft_recovery},
        {8, "end-to-end hard recovery (relocation, no-fit)", criterion_hard_recovery},
        {9, "overhead ordinals (cycles V3>V2>V1, V4>V1; mem 5x)", criterion_overhead_ordinals},
        {10, "determinism (byte-identical reports and CSVs)", criterion_determinism},
    };

    int failed = 0;
    for (const auto& crit : criteria) {
        Checker c;
        try {
            crit.body(c);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        if (c.failures.empty()) {
            std::printf("PASS  criterion %2d: %s\n", crit.id, crit.title);
        } else {
            ++failed;
            std::printf("FAIL  criterion %2d: %s\n", crit.id, crit.title);
            for (const auto& f : c.failures) std::printf("      - %s\n", f.c_str());
        }
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed;
}
