#pragma once

/// @file mission_io.hpp
/// @brief Mission file reader and telemetry writers.
///
/// Mission files use the sectioned key-value format:
///
///     [world]       ambient_C = 25            (or ambient_K)
///     [robot]       start_m = 0
///     [zone.<n>]    name, x_min_m, x_max_m, temperature_C (or temperature_K), uv_on
///     [alarm.<id>]  when = "<field> <op> <value> [and ...]", message, hazard
///     [script]      one command per line: move_to <m> | dwell <s> |
///                   await_uv_dose <fraction> | self_destruct
///
/// Any other section is a run-config overlay (see run_config.hpp).
/// Alarm sections add to the default rule set; an id equal to a default
/// rule name replaces that rule.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "transient/errors.hpp"
#include "transient/ini.hpp"
#include "transient/mission.hpp"
#include "transient/text.hpp"

namespace transient::mission {

struct MissionFile {
    World world;
    MissionScript script;
    double start_position = 0.0;
    std::vector<AlarmRule> alarms = default_alarm_rules();
    ini::Document overlay;  ///< config sections embedded in the mission file
};

inline Command parse_command(std::string_view line, std::size_t line_no) {
    std::vector<std::string_view> tok;
    for (auto t : text::split(line, ' '))
        if (!text::trim(t).empty()) tok.push_back(text::trim(t));
    const auto arg = [&](const char* what) {
        if (tok.size() != 2) throw ParseError(std::string(tok[0]) + " takes exactly one argument (" + what + ")", line_no);
        const auto v = text::parse_double(tok[1]);
        if (!v) throw ParseError(std::string(tok[0]) + ": '" + std::string(tok[1]) + "' is not a number", line_no);
        return *v;
    };
    if (tok.empty()) throw ParseError("empty command", line_no);
    if (tok[0] == "move_to") return MoveTo{arg("metres")};
    if (tok[0] == "dwell") return Dwell{arg("seconds")};
    if (tok[0] == "await_uv_dose") return AwaitUvDose{arg("photolyzed fraction")};
    if (tok[0] == "self_destruct") {
        if (tok.size() != 1) throw ParseError("self_destruct takes no arguments", line_no);
        return SelfDestruct{};
    }
    throw ParseError("unknown command '" + std::string(tok[0]) + "'", line_no);
}

inline MissionFile parse_mission(const ini::Document& doc, const std::string& context = "mission") {
    MissionFile mf;
    for (const auto& sec : doc.sections()) {
        ini::SectionReader r(&sec, context);
        if (sec.name == "world") {
            double ambient_C = std::numeric_limits<double>::quiet_NaN();
            double ambient_K = std::numeric_limits<double>::quiet_NaN();
            r.read("ambient_C", ambient_C);
            r.read("ambient_K", ambient_K);
            if (!std::isnan(ambient_C) && !std::isnan(ambient_K))
                throw ConfigError(context + ": give ambient_C or ambient_K, not both");
            if (!std::isnan(ambient_C)) mf.world.ambient_temperature_K = ambient_C + kelvin_offset;
            if (!std::isnan(ambient_K)) mf.world.ambient_temperature_K = ambient_K;
        } else if (sec.name == "robot") {
            r.read("start_m", mf.start_position);
        } else if (sec.name.rfind("zone.", 0) == 0) {
            Zone z;
            z.name = sec.name.substr(5);
            double t_C = std::numeric_limits<double>::quiet_NaN();
            double t_K = std::numeric_limits<double>::quiet_NaN();
            r.read("name", z.name);
            r.read("x_min_m", z.x_min);
            r.read("x_max_m", z.x_max);
            r.read("temperature_C", t_C);
            r.read("temperature_K", t_K);
            r.read("uv_on", z.uv_on);
            if (std::isnan(t_C) == std::isnan(t_K))
                throw ConfigError(context + ": zone '" + z.name + "' needs exactly one of temperature_C / temperature_K");
            z.temperature_K = std::isnan(t_K) ? t_C + kelvin_offset : t_K;
            if (!sec.find("x_min_m") || !sec.find("x_max_m"))
                throw ConfigError(context + ": zone '" + z.name + "' needs x_min_m and x_max_m");
            mf.world.zones.push_back(z);
        } else if (sec.name.rfind("alarm.", 0) == 0) {
            std::string when, message;
            bool hazard = false;
            r.read("when", when);
            r.read("message", message);
            r.read("hazard", hazard);
            auto rule = parse_alarm_rule(sec.name.substr(6), when, message, hazard);
            const auto it = std::find_if(mf.alarms.begin(), mf.alarms.end(),
                                         [&](const AlarmRule& a) { return a.name == rule.name; });
            if (it != mf.alarms.end()) *it = std::move(rule);
            else mf.alarms.push_back(std::move(rule));
        } else if (sec.name == "script") {
            for (const auto& l : sec.lines) mf.script.commands.push_back(parse_command(l.text, l.line));
        } else {
            mf.overlay.section(sec.name) = sec;
            continue;
        }
        r.finish();
    }
    std::sort(mf.world.zones.begin(), mf.world.zones.end(),
              [](const Zone& a, const Zone& b) { return a.x_min < b.x_min; });
    mf.world.validate();
    for (const auto& z : mf.world.zones) {
        const double c = z.temperature_K - kelvin_offset;
        if (c < sensors::temp_band_min_C || c > sensors::temp_band_max_C)
            throw ConfigError(context + ": zone '" + z.name + "' is outside the temperature sensor band");
    }
    const double amb = mf.world.ambient_temperature_K - kelvin_offset;
    if (amb < sensors::temp_band_min_C || amb > sensors::temp_band_max_C)
        throw ConfigError(context + ": ambient temperature is outside the temperature sensor band");
    if (!mf.world.contains(mf.start_position)) throw ConfigError(context + ": robot start is outside the world");
    mf.script.validate(mf.world, mf.start_position);
    return mf;
}

inline MissionFile read_mission_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read mission file '" + path.string() + "'");
    try {
        return parse_mission(ini::Document::parse(in), path.filename().string());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    }
}

// ---------------------------------------------------------------------------
// Telemetry

inline nlohmann::ordered_json to_json(const TelemetryRecord& r) {
    nlohmann::ordered_json j;
    j["t"] = r.t;
    j["position"] = r.position;
    j["alpha"] = r.alpha;
    j["hf_fraction"] = r.hf_fraction;
    j["zone"] = r.zone;
    j["temp_resistance_ohm"] = r.temp_resistance_ohm;
    j["temp_C"] = r.temp_C ? nlohmann::ordered_json(*r.temp_C) : nlohmann::ordered_json(nullptr);
    j["capacitance_pF"] = r.capacitance_pF ? nlohmann::ordered_json(*r.capacitance_pF) : nlohmann::ordered_json(nullptr);
    j["photocurrent_A"] = r.photocurrent_A;
    auto events = nlohmann::ordered_json::array();
    for (const auto& e : r.events) events.push_back({{"kind", e.kind}, {"message", e.message}});
    j["events"] = std::move(events);
    return j;
}

inline nlohmann::ordered_json to_json(const RunHeader& h) {
    return {{"dt_s", h.dt},
            {"seed", h.seed},
            {"mobility_threshold", h.mobility_threshold},
            {"alpha_degrade", h.alpha_degrade},
            {"alpha_fail", h.alpha_fail},
            {"full_decomposition_alpha", h.full_decomposition_alpha},
            {"thermal_lag_s", h.thermal_lag},
            {"trigger_saturation", h.trigger_saturation},
            {"k_photo_per_s", h.k_photo},
            {"alarms", h.alarms}};
}

/// One JSON object per step.
inline void write_telemetry_jsonl(std::ostream& out, const std::vector<TelemetryRecord>& records) {
    for (const auto& r : records) out << to_json(r).dump() << '\n';
}

/// Flattened event stream: one line per event with its timestamp.
inline void write_events_jsonl(std::ostream& out, const std::vector<TelemetryRecord>& records) {
    for (const auto& r : records)
        for (const auto& e : r.events) {
            nlohmann::ordered_json j;
            j["t"] = r.t;
            j["position"] = r.position;
            j["kind"] = e.kind;
            j["message"] = e.message;
            out << j.dump() << '\n';
        }
}

inline constexpr const char* telemetry_csv_header = "t,position,alpha,temp_C,capacitance_pF,photocurrent_A";

/// Plot-ready columns; unavailable readings are written as `nan`.
inline void write_telemetry_csv(std::ostream& out, const std::vector<TelemetryRecord>& records) {
    const auto opt = [](const std::optional<double>& v) {
        return v ? text::format_double(*v) : std::string("nan");
    };
    out << telemetry_csv_header << '\n';
    for (const auto& r : records)
        out << text::format_double(r.t) << ',' << text::format_double(r.position) << ','
            << text::format_double(r.alpha) << ',' << opt(r.temp_C) << ',' << opt(r.capacitance_pF) << ','
            << text::format_double(r.photocurrent_A) << '\n';
}

}  // namespace transient::mission
