// recore: assemble-level fault-recovery workbench.
//
// Subcommands: translate (instruction substitution passes), run (emulate a
// program under a fault configuration), sense (TDC sensor bank over a
// disturbance trace), fabric (placement / damage / relocation on the tile
// grid), orchestrate (full detect-diagnose-recover scenario), bench (variant
// overhead table).

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "recore/bench.hpp"
#include "recore/emulator.hpp"
#include "recore/fabric.hpp"
#include "recore/io.hpp"
#include "recore/oracle.hpp"
#include "recore/orchestrator.hpp"
#include "recore/resynth.hpp"
#include "recore/tdc.hpp"

namespace {

using namespace recore;

// Exit-code categories, one per error class.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kAsmError = 2,
    kTranslateError = 3,
    kExecutionError = 4,
    kSenseError = 5,
    kFabricError = 6,
    kScenarioError = 7,
    kIoError = 8,
};

struct GlobalOpts {
    uint64_t seed = 1;
    bool seed_set = false;
    std::string out;
    std::string assets = "assets";
};

void emit(const GlobalOpts& g, const std::string& fallback_path, const std::string& contents) {
    std::string path = g.out.empty() ? fallback_path : g.out;
    if (path.empty() || path == "-") std::fputs(contents.c_str(), stdout);
    else io::write_text_file(path, contents);
}

int cmd_translate(const GlobalOpts& g, const std::string& in, const std::string& passes,
                  const std::string& variant) {
    assembly::Program p = assembly::parse_program(io::read_text_file(in));
    assembly::Program out;
    if (!variant.empty()) {
        auto v = resynth::variant_from_name(variant);
        if (!v) throw resynth::TranslateError("unknown variant '" + variant + "'");
        out = resynth::make_variant(p, *v);
    } else {
        out = resynth::apply_passes(p, passes);
    }
    emit(g, "", assembly::print_program(out));
    return kOk;
}

int cmd_run(const GlobalOpts& g, const std::string& program_path, const std::string& entry,
            const std::string& faults_path, uint64_t max_cycles, const std::string& trace_path) {
    assembly::Program p = assembly::parse_program(io::read_text_file(program_path));
    emu::FaultConfig faults;
    if (!faults_path.empty()) faults = emu::parse_fault_config(io::read_text_file(faults_path));

    emu::Machine m(p, entry);
    std::ostringstream trace_csv;
    trace_csv << "cycle,pc,mnemonic,rd,value\n";
    emu::TraceSink sink = [&](const emu::TraceEntry& e) {
        trace_csv << e.cycle << "," << e.pc << "," << e.mnemonic << "," << int(e.rd) << ","
                  << e.value << "\n";
    };
    emu::RunResult r = m.run(m.initial_state(), faults, emu::CostModel{}, max_cycles,
                             trace_path.empty() ? nullptr : &sink);
    if (!trace_path.empty()) io::write_text_file(trace_path, trace_csv.str());

    std::ostringstream summary;
    summary << "reason=";
    switch (r.reason) {
        case emu::Termination::EcallExit: summary << "exit code=" << *r.state.exit_code; break;
        case emu::Termination::CycleLimit: summary << "cycle-limit"; break;
        case emu::Termination::Trap: summary << "trap detail=" << r.trap_detail; break;
    }
    summary << " cycles=" << r.cycles << " retired=" << r.retired << "\n";
    emit(g, "-", summary.str());
    return r.reason == emu::Termination::EcallExit ? kOk : kExecutionError;
}

int cmd_sense(const GlobalOpts& g, const std::string& trace_path, uint64_t cycles,
              const std::string& alerts_path, int sensors, double attenuation) {
    tdc::DisturbanceTrace trace;
    if (!trace_path.empty()) trace = tdc::parse_trace_csv(io::read_text_file(trace_path));

    tdc::SensorBank::SensorOptions opts;
    opts.count = sensors;
    opts.attenuation = attenuation;
    tdc::SensorBank bank(opts, g.seed);

    std::ostringstream samples;
    samples << "t,sensor,hw\n";
    std::vector<tdc::Alert> alerts;
    char tbuf[32];
    for (uint64_t c = 1; c <= cycles; ++c) {
        for (int s = 0; s < opts.tdc.oversampling; ++s) {
            double t = double(c) + double(s) / opts.tdc.oversampling;
            auto batch = bank.sample_all(t, trace, [&](int sensor, const tdc::TdcSample& smp) {
                std::snprintf(tbuf, sizeof tbuf, "%.4f", smp.t);
                samples << tbuf << "," << sensor << "," << smp.hw << "\n";
            });
            alerts.insert(alerts.end(), batch.begin(), batch.end());
        }
    }
    emit(g, "samples.csv", samples.str());

    std::ostringstream alert_csv;
    alert_csv << "t,sensor,peak\n";
    for (const auto& a : alerts) {
        std::snprintf(tbuf, sizeof tbuf, "%.4f", a.t);
        alert_csv << tbuf << "," << a.sensor << "," << a.peak_deviation << "\n";
    }
    if (!alerts_path.empty()) io::write_text_file(alerts_path, alert_csv.str());
    std::fprintf(stderr, "sense: %llu cycles, %zu alerts\n",
                 (unsigned long long)cycles, alerts.size());
    return kOk;
}

int cmd_fabric(const GlobalOpts& g, const std::string& grid, uint32_t tile_luts, uint32_t tile_ffs,
               const std::string& footprints_path, const std::vector<std::string>& place,
               const std::vector<std::string>& damage, const std::vector<std::string>& relocate) {
    fabric::Fabric::Options opts;
    opts.tile_luts = tile_luts;
    opts.tile_ffs = tile_ffs;
    if (std::sscanf(grid.c_str(), "%dx%d", &opts.width, &opts.height) != 2)
        throw fabric::FabricError("grid must look like 40x60");

    auto footprints = footprints_path.empty()
                          ? fabric::default_footprints()
                          : fabric::parse_footprints(io::read_text_file(footprints_path));
    auto find_fp = [&](const std::string& name) -> const fabric::Footprint& {
        for (const auto& f : footprints)
            if (f.name == name) return f;
        throw fabric::FabricError("unknown footprint '" + name + "'");
    };

    fabric::Fabric fab(opts);
    std::ostringstream out;
    std::map<std::string, fabric::PlacementId> ids;

    for (const auto& name : place) {
        auto placed = fab.place(find_fp(name));
        if (!placed) throw fabric::FabricError("no-fit placing '" + name + "'");
        ids[name] = placed->id;
        out << "place " << name << " at " << placed->rect.x << "," << placed->rect.y << " "
            << placed->rect.w << "x" << placed->rect.h << "\n";
    }
    for (const auto& spec : damage) {
        fabric::Rect r;
        if (std::sscanf(spec.c_str(), "%d,%d,%d,%d", &r.x, &r.y, &r.w, &r.h) != 4)
            throw fabric::FabricError("damage must look like x,y,w,h");
        auto affected = fab.damage(r);
        out << "damage " << spec << " affects " << affected.size() << " placement(s)\n";
    }
    for (const auto& name : relocate) {
        auto it = ids.find(name);
        if (it == ids.end()) throw fabric::FabricError("'" + name + "' was never placed");
        auto moved = fab.relocate(it->second);
        if (!moved) {
            out << "relocate " << name << ": no-fit (unrecoverable)\n";
            emit(g, "-", out.str());
            return kFabricError;
        }
        out << "relocate " << name << " to " << moved->first.rect.x << "," << moved->first.rect.y
            << " cost " << moved->second.tiles << " tiles " << moved->second.time_us << " us\n";
    }
    out << "healthy unoccupied tiles: " << fab.healthy_unoccupied_tiles() << "\n";
    emit(g, "-", out.str());
    return kOk;
}

int cmd_orchestrate(const GlobalOpts& g, const std::string& scenario_path,
                    const std::string& log_path) {
    orch::Scenario scn = orch::scenario_from_json(io::read_text_file(scenario_path));
    if (g.seed_set) scn.noise_seed = g.seed;
    assembly::Program v1 =
        assembly::parse_program(io::read_text_file(g.assets + "/" + scn.benchmark + ".s"));
    orch::Orchestrator orchestrator(std::move(scn), std::move(v1));
    orch::ScenarioReport report = orchestrator.run_scenario();

    emit(g, "report.json", orch::report_to_json(report));
    if (!log_path.empty()) io::write_text_file(log_path, orch::report_log_csv(report));
    std::fprintf(stderr, "orchestrate: %s %s\n", std::string(phase_name(report.final_phase)).c_str(),
                 report.correct ? "correct" : "incorrect");
    return kOk;
}

int cmd_bench(const GlobalOpts& g, const std::string& benchmarks) {
    std::vector<bench::BenchInput> inputs;
    std::istringstream list(benchmarks);
    std::string name;
    while (std::getline(list, name, ',')) {
        if (name.empty()) continue;
        inputs.push_back({name,
                          assembly::parse_program(io::read_text_file(g.assets + "/" + name + ".s")),
                          "main"});
    }
    auto rows = bench::run_suite(inputs);
    emit(g, "bench.csv", bench::to_csv(rows));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"soft-processor fault detection, resynthesis, and recovery workbench"};
    app.require_subcommand(1);
    app.fallthrough();  // --seed/--out/--assets are accepted after the subcommand too

    GlobalOpts g;
    app.add_option("--seed", g.seed, "global RNG seed")->each([&](const std::string&) {
        g.seed_set = true;
    });
    app.add_option("--out", g.out, "output path ('-' for stdout)");
    app.add_option("--assets", g.assets, "benchmark asset directory")
        ->envname("RECORE_ASSETS");

    auto* translate = app.add_subcommand("translate", "apply substitution passes to a program");
    std::string t_in, t_passes, t_variant;
    translate->add_option("--in", t_in, "input .s file")->required();
    translate->add_option("--passes", t_passes,
                          "comma list: mul2addshift,add2xorand,and2demorgan");
    translate->add_option("--variant", t_variant, "V1..V4 instead of an explicit pass list");

    auto* run = app.add_subcommand("run", "emulate a program under a fault configuration");
    std::string r_program, r_entry = "main", r_faults, r_trace;
    uint64_t r_max_cycles = 100'000'000;
    run->add_option("--program", r_program, "program .s file")->required();
    run->add_option("--entry", r_entry, "entry label");
    run->add_option("--faults", r_faults, "fault config file (unit=... fault=...)");
    run->add_option("--max-cycles", r_max_cycles, "cycle budget");
    run->add_option("--trace", r_trace, "write a cycle,pc,mnemonic,rd,value CSV");

    auto* sense = app.add_subcommand("sense", "sample the TDC bank over a disturbance trace");
    std::string s_trace, s_alerts;
    uint64_t s_cycles = 1000;
    int s_sensors = 2;
    double s_atten = 0.2;
    sense->add_option("--trace", s_trace, "disturbance CSV (t_start,t_end,dv_mv,scope)");
    sense->add_option("--cycles", s_cycles, "core cycles to sample");
    sense->add_option("--alerts", s_alerts, "write alerts CSV here");
    sense->add_option("--sensors", s_sensors, "sensor count");
    sense->add_option("--attenuation", s_atten, "amplitude seen by out-of-scope sensors");

    auto* fab = app.add_subcommand("fabric", "tile-grid placement, damage, relocation");
    std::string f_grid = "16x12", f_footprints;
    uint32_t f_tile_luts = 50, f_tile_ffs = 100;
    std::vector<std::string> f_place, f_damage, f_relocate;
    fab->add_option("--grid", f_grid, "grid WxH in tiles");
    fab->add_option("--tile-luts", f_tile_luts, "LUTs per tile");
    fab->add_option("--tile-ffs", f_tile_ffs, "FFs per tile");
    fab->add_option("--footprints", f_footprints, "footprint config file");
    fab->add_option("--place", f_place, "footprint name to place (repeatable)");
    fab->add_option("--damage", f_damage, "damage rect x,y,w,h (repeatable)");
    fab->add_option("--relocate", f_relocate, "placement to relocate (repeatable)");

    auto* orchestrate = app.add_subcommand("orchestrate", "run a scenario end to end");
    std::string o_scenario, o_log;
    orchestrate->add_option("--scenario", o_scenario, "scenario JSON")->required();
    orchestrate->add_option("--log", o_log, "write the cycle,event,detail CSV here");

    auto* benchcmd = app.add_subcommand("bench", "variant overhead table across benchmarks");
    std::string b_list = "mac,rs_encode";
    benchcmd->add_option("--benchmarks", b_list, "comma-separated benchmark names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (translate->parsed()) return cmd_translate(g, t_in, t_passes, t_variant);
        if (run->parsed()) return cmd_run(g, r_program, r_entry, r_faults, r_max_cycles, r_trace);
        if (sense->parsed()) return cmd_sense(g, s_trace, s_cycles, s_alerts, s_sensors, s_atten);
        if (fab->parsed())
            return cmd_fabric(g, f_grid, f_tile_luts, f_tile_ffs, f_footprints, f_place, f_damage,
                              f_relocate);
        if (orchestrate->parsed()) return cmd_orchestrate(g, o_scenario, o_log);
        if (benchcmd->parsed()) return cmd_bench(g, b_list);
    } catch (const assembly::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kAsmError;
    } catch (const resynth::TranslateError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kTranslateError;
    } catch (const emu::LoadError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExecutionError;
    } catch (const tdc::CalibrationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kSenseError;
    } catch (const fabric::FabricError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFabricError;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: scenario: %s\n", e.what());
        return kScenarioError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIoError;
    }
    return kUsage;
}
