#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "recore/emulator.hpp"
#include "recore/fabric.hpp"
#include "recore/resynth.hpp"
#include "recore/sanity.hpp"
#include "recore/tdc.hpp"

namespace recore::orch {

enum class Phase : uint8_t {
    Running,
    Alert,
    Diagnosing,
    SoftRecovery,
    HardRecovery,
    Recovered,
    Failed,
};

std::string_view phase_name(Phase p);

// The recovery state machine's edge relation. Terminal failures (cycle
// budget, relocation no-fit, undetected crash) may enter Failed from any
// active phase.
bool legal_transition(Phase from, Phase to);

struct TimedUnitFault {
    uint64_t cycle = 0;
    Unit unit = Unit::Mul;
    emu::Fault fault;
    std::optional<emu::AddFaultScope> add_scope;  // only meaningful for ADD
};

struct TimedDamage {
    uint64_t cycle = 0;
    fabric::Rect rect;
};

struct FabricSetup {
    fabric::Fabric::Options grid;
    std::vector<fabric::Footprint> footprints;  // empty -> default table
    std::string core_footprint = "rocket_core";
};

struct Scenario {
    std::string benchmark;  // asset name: "mac", "rs_encode"
    std::string entry = "main";
    tdc::DisturbanceTrace trace;
    std::vector<TimedUnitFault> unit_faults;
    std::vector<TimedDamage> damage;
    uint64_t noise_seed = 1;
    uint64_t max_cycles = 50'000'000;
    FabricSetup fabric;
    tdc::SensorBank::SensorOptions sensors;
    // The sensor-controller <-> housekeeping link is in-process; each message
    // costs this many core cycles of recovery latency.
    uint64_t channel_latency_cycles = 0;
    double cycles_per_us = 200.0;  // reconfiguration time -> cycles

    void validate() const;  // events must be time-ordered
};

struct LogEvent {
    uint64_t cycle = 0;
    std::string event;
    std::string detail;
};

struct RelocationRecord {
    std::string footprint;
    fabric::Rect from;
    fabric::Rect to;
    uint32_t tiles = 0;
    double time_us = 0.0;
};

struct ScenarioReport {
    std::string benchmark;
    Phase final_phase = Phase::Running;
    bool correct = false;
    std::optional<uint32_t> exit_value;
    uint32_t oracle_value = 0;
    uint64_t total_cycles = 0;  // wall cycles including recovery overhead
    uint64_t benchmark_cycles = 0;
    uint64_t sanity_cycles = 0;
    uint64_t channel_cycles = 0;
    uint64_t reconfig_cycles = 0;
    std::vector<tdc::Alert> alerts;
    std::vector<SanityReport> sanity_reports;
    std::vector<std::string> variant_history;  // starts at V1, appended per swap
    std::vector<RelocationRecord> relocations;
    std::string failure_reason;
    std::vector<LogEvent> log;
};

// JSON round-trip for the external scenario format and the report, plus the
// flat `cycle,event,detail` log (see scenario files under assets/scenarios).
Scenario scenario_from_json(const std::string& json_text);
std::string report_to_json(const ScenarioReport& r);
std::string report_log_csv(const ScenarioReport& r);

// Drives one scenario end to end: the emulator steps, sensors sample at the
// oversampling rate on the same cycle timeline, scheduled faults and fabric
// damage land at their cycles, and alerts walk the state machine through
// diagnosis and software or hardware recovery.
class Orchestrator {
public:
    Orchestrator(Scenario scenario, assembly::Program v1_program);

    ScenarioReport run_scenario();

    // The three state-machine entry points, exposed for direct testing.
    // on_alert: RUNNING -> ALERT -> DIAGNOSING (snapshots the machine and
    // runs the sanity check); recover_decision: DIAGNOSING -> SOFT/HARD
    // recovery or back to RUNNING on a clean report.
    void on_alert(const tdc::Alert& alert);
    void recover_decision(const SanityReport& rep);

    Phase phase() const { return phase_; }
    const emu::MachineState& machine_state() const { return state_; }
    const std::optional<emu::MachineState>& snapshot() const { return snapshot_; }
    resynth::VariantId variant() const { return variant_; }
    UnitSet known_faulty() const { return known_faulty_; }
    uint64_t now() const { return now_; }

private:
    void set_phase(Phase to, const std::string& detail = "");
    void log(uint64_t cycle, std::string event, std::string detail);
    void apply_due_events();
    void advance_time(uint64_t delta);
    void channel_message(const std::string& what);
    void soft_recovery(resynth::VariantId v);
    void hard_recovery();
    void restart(resynth::VariantId v);
    bool finish_completion();  // true when the scenario is over
    void fail(const std::string& reason);
    const emu::Machine& machine() const;

    Scenario scn_;
    std::array<assembly::Program, 4> programs_;
    std::array<std::unique_ptr<emu::Machine>, 4> machines_;
    uint32_t oracle_value_ = 0;

    emu::FaultConfig live_faults_;
    emu::CostModel cost_;
    Phase phase_ = Phase::Running;
    resynth::VariantId variant_ = resynth::VariantId::V1;
    UnitSet known_faulty_;
    emu::MachineState state_;
    std::optional<emu::MachineState> snapshot_;
    bool trapped_ = false;

    tdc::SensorBank bank_;
    fabric::Fabric fabric_;
    fabric::PlacementId core_pid_ = 0;
    std::vector<fabric::PlacementId> affected_placements_;

    uint64_t now_ = 0;
    uint64_t sampled_through_ = 0;
    uint64_t benchmark_cycles_ = 0;
    uint64_t sanity_cycles_ = 0;
    uint64_t channel_cycles_ = 0;
    uint64_t reconfig_cycles_ = 0;

    size_t next_fault_ = 0;
    size_t next_damage_ = 0;
    std::deque<tdc::Alert> pending_alerts_;
    bool any_alert_ever_ = false;

    ScenarioReport report_;
};

// Loads the benchmark source from `asset_dir` and runs the scenario.
ScenarioReport run_scenario_file(const std::string& scenario_path, const std::string& asset_dir);

}  // namespace recore::orch
