#include "recore/orchestrator.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "recore/io.hpp"
#include "recore/oracle.hpp"

namespace recore::io {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << contents;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace recore::io

namespace recore::orch {

using resynth::VariantId;

std::string_view phase_name(Phase p) {
    switch (p) {
        case Phase::Running: return "RUNNING";
        case Phase::Alert: return "ALERT";
        case Phase::Diagnosing: return "DIAGNOSING";
        case Phase::SoftRecovery: return "SOFT_RECOVERY";
        case Phase::HardRecovery: return "HARD_RECOVERY";
        case Phase::Recovered: return "RECOVERED";
        case Phase::Failed: return "FAILED";
    }
    return "?";
}

bool legal_transition(Phase from, Phase to) {
    switch (from) {
        case Phase::Running:
            return to == Phase::Alert || to == Phase::Failed;
        case Phase::Alert:
            return to == Phase::Diagnosing;
        case Phase::Diagnosing:
            return to == Phase::SoftRecovery || to == Phase::HardRecovery || to == Phase::Running;
        case Phase::SoftRecovery:
            return to == Phase::Recovered || to == Phase::HardRecovery || to == Phase::Failed;
        case Phase::HardRecovery:
            return to == Phase::Recovered || to == Phase::Failed;
        case Phase::Recovered:
            return to == Phase::Running;
        case Phase::Failed:
            return false;
    }
    return false;
}

void Scenario::validate() const {
    trace.validate();
    for (size_t i = 1; i < unit_faults.size(); ++i)
        if (unit_faults[i].cycle < unit_faults[i - 1].cycle)
            throw std::invalid_argument("scenario: unit_faults must be time-ordered");
    for (size_t i = 1; i < damage.size(); ++i)
        if (damage[i].cycle < damage[i - 1].cycle)
            throw std::invalid_argument("scenario: damage events must be time-ordered");
    if (max_cycles == 0) throw std::invalid_argument("scenario: max_cycles must be positive");
}

namespace {

std::string rect_str(const fabric::Rect& r) {
    std::ostringstream out;
    out << r.x << "," << r.y << "," << r.w << "x" << r.h;
    return out.str();
}

std::string_view fault_kind_name(emu::FaultKind k) {
    switch (k) {
        case emu::FaultKind::Healthy: return "healthy";
        case emu::FaultKind::Disabled: return "disabled";
        case emu::FaultKind::StuckAt: return "stuck_at";
        case emu::FaultKind::WrongResult: return "wrong_result";
    }
    return "?";
}

}  // namespace

Orchestrator::Orchestrator(Scenario scenario, assembly::Program v1_program)
    : scn_(std::move(scenario)),
      bank_(scn_.sensors, scn_.noise_seed),
      fabric_(scn_.fabric.grid) {
    scn_.validate();

    programs_[0] = std::move(v1_program);
    for (int v = 1; v < 4; ++v)
        programs_[size_t(v)] = resynth::make_variant(programs_[0], VariantId(v));
    for (int v = 0; v < 4; ++v)
        machines_[size_t(v)] = std::make_unique<emu::Machine>(programs_[size_t(v)], scn_.entry);

    auto oracle = oracle::expected_exit(scn_.benchmark, programs_[0]);
    if (!oracle)
        throw std::invalid_argument("scenario: no oracle for benchmark '" + scn_.benchmark + "'");
    oracle_value_ = *oracle;

    // Place the core on the fabric; damage events target its region.
    const auto& fps = scn_.fabric.footprints.empty() ? fabric::default_footprints()
                                                     : scn_.fabric.footprints;
    const fabric::Footprint* core_fp = nullptr;
    for (const auto& f : fps)
        if (f.name == scn_.fabric.core_footprint) core_fp = &f;
    if (!core_fp)
        throw std::invalid_argument("scenario: footprint '" + scn_.fabric.core_footprint +
                                    "' not defined");
    auto placed = fabric_.place(*core_fp);
    if (!placed) throw std::invalid_argument("scenario: core footprint does not fit the grid");
    core_pid_ = placed->id;

    state_ = machines_[0]->initial_state();
    report_.benchmark = scn_.benchmark;
    report_.oracle_value = oracle_value_;
    report_.variant_history.push_back(std::string(resynth::variant_name(variant_)));
    log(0, "start",
        scn_.benchmark + " entry=" + scn_.entry + " core@" + rect_str(placed->rect));
}

const emu::Machine& Orchestrator::machine() const {
    return *machines_[size_t(variant_)];
}

void Orchestrator::log(uint64_t cycle, std::string event, std::string detail) {
    report_.log.push_back({cycle, std::move(event), std::move(detail)});
}

void Orchestrator::set_phase(Phase to, const std::string& detail) {
    if (!legal_transition(phase_, to))
        throw std::logic_error(std::string("illegal phase transition ") +
                               std::string(phase_name(phase_)) + " -> " +
                               std::string(phase_name(to)));
    log(now_, "phase",
        std::string(phase_name(phase_)) + "->" + std::string(phase_name(to)) +
            (detail.empty() ? "" : " " + detail));
    phase_ = to;
}

void Orchestrator::apply_due_events() {
    while (next_fault_ < scn_.unit_faults.size() && scn_.unit_faults[next_fault_].cycle <= now_) {
        const TimedUnitFault& ev = scn_.unit_faults[next_fault_++];
        live_faults_.set(ev.unit, ev.fault);
        if (ev.unit == Unit::Add && ev.add_scope) live_faults_.add_scope = *ev.add_scope;
        std::ostringstream detail;
        detail << unit_name(ev.unit) << " " << fault_kind_name(ev.fault.kind);
        if (ev.unit == Unit::Add)
            detail << " scope="
                   << (live_faults_.add_scope == emu::AddFaultScope::InstructionOnly ? "instruction"
                                                                                     : "full");
        log(ev.cycle, "fault_injected", detail.str());
    }
    while (next_damage_ < scn_.damage.size() && scn_.damage[next_damage_].cycle <= now_) {
        const TimedDamage& ev = scn_.damage[next_damage_++];
        auto affected = fabric_.damage(ev.rect);
        for (auto id : affected)
            if (std::find(affected_placements_.begin(), affected_placements_.end(), id) ==
                affected_placements_.end())
                affected_placements_.push_back(id);
        std::ostringstream detail;
        detail << "rect=" << rect_str(ev.rect) << " affected=" << affected.size();
        log(ev.cycle, "damage", detail.str());
    }
}

void Orchestrator::advance_time(uint64_t delta) {
    now_ += delta;
    while (sampled_through_ < now_) {
        ++sampled_through_;
        for (int s = 0; s < bank_.oversampling(); ++s) {
            double t = double(sampled_through_) + double(s) / double(bank_.oversampling());
            for (const auto& alert : bank_.sample_all(t, scn_.trace)) {
                pending_alerts_.push_back(alert);
                any_alert_ever_ = true;
                report_.alerts.push_back(alert);
                std::ostringstream detail;
                detail << alert.sensor << " t=" << alert.t << " peak=" << alert.peak_deviation;
                log(sampled_through_, "alert", detail.str());
            }
        }
    }
}

void Orchestrator::channel_message(const std::string& what) {
    channel_cycles_ += scn_.channel_latency_cycles;
    advance_time(scn_.channel_latency_cycles);
    log(now_, "mcu_msg", what);
}

void Orchestrator::on_alert(const tdc::Alert& alert) {
    if (phase_ != Phase::Running)
        throw std::logic_error("on_alert outside RUNNING");
    set_phase(Phase::Alert, alert.sensor);
    log(now_, "nmi", "core interrupted at pc=" + std::to_string(state_.pc));
    snapshot_ = state_;
    set_phase(Phase::Diagnosing);
    channel_message("sensor tags -> housekeeping: " + alert.sensor);

    SanityReport rep = sanity_check(live_faults_);
    sanity_cycles_ += rep.cycles_spent;
    advance_time(rep.cycles_spent);
    report_.sanity_reports.push_back(rep);
    log(now_, "sanity", rep.summary());
    channel_message("sanity results -> housekeeping");
    recover_decision(rep);
}

void Orchestrator::recover_decision(const SanityReport& rep) {
    if (phase_ != Phase::Diagnosing)
        throw std::logic_error("recover_decision outside DIAGNOSING");

    UnitSet faulty = rep.failed_units();
    if (faulty.empty() && rep.addressing_ok) {
        if (trapped_) {
            fail("trap persisted after a clean diagnosis");
            return;
        }
        log(now_, "near_miss", "clean sanity report; resuming snapshot");
        state_ = *snapshot_;
        set_phase(Phase::Running, "resume");
        return;
    }

    known_faulty_ = faulty;
    auto selected = resynth::select_variant(faulty);
    bool soft_ok = false;
    if (selected && rep.addressing_ok) {
        const auto& candidate = programs_[size_t(*selected)];
        UnitSet blocking = resynth::required_units(candidate) & faulty;
        // The implicit ADD requirement is about the hardware path; when the
        // probes show that path healthy and the variant itself has no
        // add-mapped instructions, ADD does not block software recovery.
        if (blocking == UnitSet{Unit::Add} && !resynth::uses_add_instructions(candidate))
            blocking = UnitSet{};
        soft_ok = blocking.empty();
    }

    if (soft_ok) soft_recovery(*selected);
    else hard_recovery();
}

void Orchestrator::restart(VariantId v) {
    variant_ = v;
    trapped_ = false;
    state_ = machines_[size_t(v)]->initial_state();
    log(now_, "restart", std::string("entry with ") + std::string(resynth::variant_name(v)));
}

void Orchestrator::soft_recovery(VariantId v) {
    set_phase(Phase::SoftRecovery, std::string(resynth::variant_name(v)));
    channel_message(std::string("switch variant -> ") + std::string(resynth::variant_name(v)));
    report_.variant_history.push_back(std::string(resynth::variant_name(v)));
    log(now_, "variant_switch", std::string(resynth::variant_name(v)));
    restart(v);
}

void Orchestrator::hard_recovery() {
    set_phase(Phase::HardRecovery, "faulty=" + known_faulty_.to_string());
    channel_message("reconfiguration command");

    std::vector<fabric::PlacementId> to_move = affected_placements_;
    if (std::find(to_move.begin(), to_move.end(), core_pid_) == to_move.end())
        to_move.push_back(core_pid_);
    std::sort(to_move.begin(), to_move.end());

    for (auto pid : to_move) {
        auto before = fabric_.find(pid);
        if (!before) continue;
        auto moved = fabric_.relocate(pid);
        if (!moved) {
            fail("relocation no-fit for '" + before->footprint + "'");
            return;
        }
        const auto& [placement, cost] = *moved;
        report_.relocations.push_back(
            {placement.footprint, before->rect, placement.rect, cost.tiles, cost.time_us});
        uint64_t cycles = uint64_t(cost.time_us * scn_.cycles_per_us);
        reconfig_cycles_ += cycles;
        advance_time(cycles);
        std::ostringstream detail;
        detail << placement.footprint << " " << rect_str(before->rect) << " -> "
               << rect_str(placement.rect) << " tiles=" << cost.tiles << " us=" << cost.time_us;
        log(now_, "relocation", detail.str());
    }
    affected_placements_.clear();

    // New silicon: the faulted units are gone with the old region.
    live_faults_.clear();
    known_faulty_ = UnitSet{};
    log(now_, "reconfig_done", "unit faults cleared");
    report_.variant_history.push_back(std::string(resynth::variant_name(VariantId::V1)));
    restart(VariantId::V1);
}

void Orchestrator::fail(const std::string& reason) {
    report_.failure_reason = reason;
    set_phase(Phase::Failed, reason);
    log(now_, "failed", reason);
}

bool Orchestrator::finish_completion() {
    uint32_t exit_value = state_.exit_code.value_or(0);
    bool correct = exit_value == oracle_value_;
    report_.exit_value = exit_value;
    std::ostringstream detail;
    detail << "exit=" << exit_value << " oracle=" << oracle_value_
           << (correct ? " correct" : " WRONG");
    log(now_, "complete", detail.str());

    switch (phase_) {
        case Phase::Running:
            report_.correct = correct;
            return true;
        case Phase::SoftRecovery:
            if (correct) {
                set_phase(Phase::Recovered, "software recovery verified");
                report_.correct = true;
                return true;
            }
            log(now_, "escalate", "soft recovery produced a wrong result");
            hard_recovery();
            return phase_ == Phase::Failed;
        case Phase::HardRecovery:
            if (correct) {
                set_phase(Phase::Recovered, "reconfiguration verified");
                report_.correct = true;
            } else {
                fail("wrong result after reconfiguration");
            }
            return true;
        default:
            throw std::logic_error("completion in unexpected phase");
    }
}

ScenarioReport Orchestrator::run_scenario() {
    while (true) {
        apply_due_events();

        if (!pending_alerts_.empty() && phase_ == Phase::Running) {
            // Coalesce everything queued so far into one diagnosis pass.
            size_t n = pending_alerts_.size();
            tdc::Alert first = pending_alerts_.front();
            pending_alerts_.clear();
            if (n > 1) log(now_, "coalesce", std::to_string(n) + " alerts, one diagnosis");
            on_alert(first);
            if (phase_ == Phase::Failed) break;
            continue;
        }

        if (state_.halted) {
            if (finish_completion()) break;
            continue;
        }

        if (now_ >= scn_.max_cycles) {
            fail("cycle budget exhausted (" + std::to_string(scn_.max_cycles) + ")");
            break;
        }

        uint64_t before = state_.cycles;
        try {
            machine().step(state_, live_faults_, cost_);
            benchmark_cycles_ += state_.cycles - before;
            advance_time(state_.cycles - before);
        } catch (const emu::TrapError& trap) {
            benchmark_cycles_ += state_.cycles - before;
            advance_time(state_.cycles - before);
            trapped_ = true;
            log(now_, "trap", trap.what());
            // Allow one extra sampling window so an in-flight disturbance can
            // still raise its alert before the crash is ruled undetected.
            advance_time(1);
            if (pending_alerts_.empty() && !any_alert_ever_) {
                fail("undetected crash: " + std::string(trap.what()));
                break;
            }
            if (pending_alerts_.empty()) {
                // The crash itself reaches the housekeeping side (dead UART
                // heartbeat); the earlier alert already satisfied detection.
                pending_alerts_.push_back(tdc::Alert{double(now_), "watchdog", 0});
                log(now_, "watchdog", "core unresponsive after trap");
            }
            if (phase_ != Phase::Running) {
                // Trap while re-running a recovery: escalate or fail.
                if (phase_ == Phase::SoftRecovery) {
                    log(now_, "escalate", "trap during software recovery");
                    pending_alerts_.clear();
                    hard_recovery();
                    if (phase_ == Phase::Failed) break;
                } else {
                    fail("trap during hardware recovery");
                    break;
                }
            }
        }
    }

    report_.final_phase = phase_;
    report_.total_cycles = now_;
    report_.benchmark_cycles = benchmark_cycles_;
    report_.sanity_cycles = sanity_cycles_;
    report_.channel_cycles = channel_cycles_;
    report_.reconfig_cycles = reconfig_cycles_;
    if (!fabric_.placements_clear_of_damage())
        log(now_, "invariant_violation", "placement overlaps damaged tile");
    return report_;
}

ScenarioReport run_scenario_file(const std::string& scenario_path, const std::string& asset_dir) {
    Scenario scn = scenario_from_json(io::read_text_file(scenario_path));
    assembly::Program v1 =
        assembly::parse_program(io::read_text_file(asset_dir + "/" + scn.benchmark + ".s"));
    Orchestrator orch(std::move(scn), std::move(v1));
    return orch.run_scenario();
}

}  // namespace recore::orch
