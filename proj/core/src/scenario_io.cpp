#include <sstream>

#include <json.hpp>

#include "recore/orchestrator.hpp"

namespace recore::orch {
namespace {

using Json = nlohmann::ordered_json;

uint32_t parse_word(const Json& j, const char* what) {
    if (j.is_number_unsigned() || j.is_number_integer()) return uint32_t(int64_t(j));
    if (j.is_string()) return uint32_t(std::stoul(j.get<std::string>(), nullptr, 0));
    throw std::runtime_error(std::string("scenario: ") + what + " must be a number or hex string");
}

emu::Fault parse_fault(const Json& j) {
    std::string kind = j.at("fault").get<std::string>();
    if (kind == "healthy") return emu::Fault::healthy();
    if (kind == "disabled") return emu::Fault::disabled();
    if (kind == "stuck_at") {
        uint32_t bit = j.at("bit").get<uint32_t>();
        uint32_t value = j.at("value").get<uint32_t>();
        if (bit > 31 || value > 1)
            throw std::runtime_error("scenario: stuck_at needs bit 0..31, value 0|1");
        return emu::Fault::stuck_at(uint8_t(bit), uint8_t(value));
    }
    if (kind == "wrong_result") return emu::Fault::wrong_result(parse_word(j.at("mask"), "mask"));
    throw std::runtime_error("scenario: unknown fault kind '" + kind + "'");
}

tdc::Pulse parse_pulse(const Json& j) {
    tdc::Pulse p;
    p.t_start_cycles = j.at("t_start").get<double>();
    p.t_end_cycles = j.at("t_end").get<double>();
    if (j.contains("preset")) {
        auto dv = tdc::preset_dv_mv(j.at("preset").get<std::string>());
        if (!dv)
            throw std::runtime_error("scenario: unknown preset '" +
                                     j.at("preset").get<std::string>() + "'");
        p.dv_mv = *dv;
    } else {
        p.dv_mv = j.at("dv_mv").get<double>();
    }
    if (j.contains("sensor_scope")) {
        const Json& s = j.at("sensor_scope");
        if (s.is_string()) {
            if (s.get<std::string>() != "global")
                throw std::runtime_error("scenario: sensor_scope must be an index or \"global\"");
            p.sensor_scope = -1;
        } else {
            p.sensor_scope = s.get<int>();
        }
    }
    return p;
}

}  // namespace

Scenario scenario_from_json(const std::string& json_text) {
    Json j = Json::parse(json_text);
    Scenario s;
    s.benchmark = j.at("benchmark").get<std::string>();
    s.entry = j.value("entry", std::string("main"));
    s.max_cycles = j.value("max_cycles", uint64_t(50'000'000));

    if (j.contains("seeds")) {
        const Json& seeds = j.at("seeds");
        if (seeds.is_number()) s.noise_seed = seeds.get<uint64_t>();
        else s.noise_seed = seeds.value("noise", uint64_t(1));
    }

    for (const Json& p : j.value("trace", Json::array())) s.trace.pulses.push_back(parse_pulse(p));
    s.trace.noise_seed = s.noise_seed;

    for (const Json& f : j.value("unit_faults", Json::array())) {
        TimedUnitFault ev;
        ev.cycle = f.at("cycle").get<uint64_t>();
        auto unit = unit_from_name(f.at("unit").get<std::string>());
        if (!unit)
            throw std::runtime_error("scenario: unknown unit '" +
                                     f.at("unit").get<std::string>() + "'");
        ev.unit = *unit;
        ev.fault = parse_fault(f);
        if (f.contains("scope")) {
            std::string scope = f.at("scope").get<std::string>();
            if (scope == "instruction") ev.add_scope = emu::AddFaultScope::InstructionOnly;
            else if (scope == "full") ev.add_scope = emu::AddFaultScope::Full;
            else throw std::runtime_error("scenario: scope must be 'instruction' or 'full'");
        }
        s.unit_faults.push_back(ev);
    }

    for (const Json& d : j.value("damage", Json::array())) {
        TimedDamage ev;
        ev.cycle = d.at("cycle").get<uint64_t>();
        const Json& r = d.at("rect");
        ev.rect = fabric::Rect{r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<int>(),
                               r.at(3).get<int>()};
        s.damage.push_back(ev);
    }

    if (j.contains("fabric")) {
        const Json& f = j.at("fabric");
        if (f.contains("grid")) {
            s.fabric.grid.width = f.at("grid").at(0).get<int>();
            s.fabric.grid.height = f.at("grid").at(1).get<int>();
        }
        s.fabric.grid.tile_luts = f.value("tile_luts", s.fabric.grid.tile_luts);
        s.fabric.grid.tile_ffs = f.value("tile_ffs", s.fabric.grid.tile_ffs);
        s.fabric.grid.reconfig_us_per_tile =
            f.value("reconfig_us_per_tile", s.fabric.grid.reconfig_us_per_tile);
        s.fabric.core_footprint = f.value("core_footprint", s.fabric.core_footprint);
        if (f.contains("footprints")) {
            for (const Json& fp : f.at("footprints"))
                s.fabric.footprints.push_back({fp.at("name").get<std::string>(),
                                               fp.at("luts").get<uint32_t>(),
                                               fp.at("ffs").get<uint32_t>()});
        }
    }

    if (j.contains("sensors")) {
        const Json& d = j.at("sensors");
        s.sensors.count = d.value("count", s.sensors.count);
        s.sensors.attenuation = d.value("attenuation", s.sensors.attenuation);
        s.sensors.detector.threshold = d.value("threshold", s.sensors.detector.threshold);
        s.sensors.detector.persistence = d.value("persistence", s.sensors.detector.persistence);
        s.sensors.tdc.oversampling = d.value("oversampling", s.sensors.tdc.oversampling);
        s.sensors.tdc.sigma_ps = d.value("sigma_ps", s.sensors.tdc.sigma_ps);
    }

    s.channel_latency_cycles = j.value("channel_latency_cycles", uint64_t(0));
    s.cycles_per_us = j.value("cycles_per_us", 200.0);
    s.validate();
    return s;
}

std::string report_to_json(const ScenarioReport& r) {
    Json j;
    j["benchmark"] = r.benchmark;
    j["final_phase"] = std::string(phase_name(r.final_phase));
    j["correct"] = r.correct;
    if (r.exit_value) j["exit_value"] = *r.exit_value;
    else j["exit_value"] = nullptr;
    j["oracle_value"] = r.oracle_value;
    j["total_cycles"] = r.total_cycles;
    j["benchmark_cycles"] = r.benchmark_cycles;
    j["overhead"] = Json{{"sanity_cycles", r.sanity_cycles},
                         {"channel_cycles", r.channel_cycles},
                         {"reconfig_cycles", r.reconfig_cycles}};
    j["variant_history"] = r.variant_history;
    Json alerts = Json::array();
    for (const auto& a : r.alerts)
        alerts.push_back(Json{{"t", a.t}, {"sensor", a.sensor}, {"peak", a.peak_deviation}});
    j["alerts"] = alerts;
    Json sanity = Json::array();
    for (const auto& rep : r.sanity_reports) {
        Json units;
        for (const auto& [u, ok] : rep.unit_pass)
            units[std::string(unit_name(u))] = ok ? "pass" : "fail";
        sanity.push_back(Json{{"units", units},
                              {"addressing_ok", rep.addressing_ok},
                              {"cycles", rep.cycles_spent}});
    }
    j["sanity_reports"] = sanity;
    Json relocs = Json::array();
    for (const auto& rec : r.relocations)
        relocs.push_back(Json{{"footprint", rec.footprint},
                              {"from", {rec.from.x, rec.from.y, rec.from.w, rec.from.h}},
                              {"to", {rec.to.x, rec.to.y, rec.to.w, rec.to.h}},
                              {"tiles", rec.tiles},
                              {"time_us", rec.time_us}});
    j["relocations"] = relocs;
    if (!r.failure_reason.empty()) j["failure_reason"] = r.failure_reason;
    j["events"] = r.log.size();
    return j.dump(2) + "\n";
}

std::string report_log_csv(const ScenarioReport& r) {
    std::ostringstream out;
    out << "cycle,event,detail\n";
    for (const auto& e : r.log) {
        std::string detail = e.detail;
        for (char& c : detail)
            if (c == ',') c = ';';
        out << e.cycle << "," << e.event << "," << detail << "\n";
    }
    return out.str();
}

}  // namespace recore::orch
