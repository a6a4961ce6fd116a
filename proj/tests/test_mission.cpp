#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "transient/mission.hpp"
#include "transient/mission_io.hpp"

using namespace transient;
using namespace transient::mission;

namespace {

const std::filesystem::path presets{TRANSIENT_PRESET_DIR};

World single_zone(double temperature_K, bool uv, double length = 1.0) {
    return World{{{"Z", 0.0, length, temperature_K, uv}}, 298.15};
}

RobotState parked(const MissionSpecs& specs, double x = 0.5) { return RobotState::at(x, specs); }

std::vector<TelemetryRecord> park(const World& w, RobotState& r, const MissionSpecs& specs, double dt, int steps,
                                  std::uint64_t seed = 0) {
    std::vector<TelemetryRecord> out;
    for (int i = 0; i < steps; ++i) {
        auto res = step(w, r, specs, dt, std::nullopt, seed);
        r = res.robot;
        out.push_back(res.record);
    }
    return out;
}

std::vector<std::string> kinds(const RunResult& r) {
    std::vector<std::string> out;
    for (const auto& rec : r.records)
        for (const auto& e : rec.events) out.push_back(e.kind == "alarm" ? e.kind + ":" + e.message : e.kind);
    return out;
}

std::string dump(const std::vector<TelemetryRecord>& records) {
    std::ostringstream s;
    write_telemetry_jsonl(s, records);
    return s.str();
}

RunResult run_file(const std::filesystem::path& p, double dt = 1.0, std::uint64_t seed = 0) {
    const auto mf = read_mission_file(p);
    MissionSpecs specs;
    specs.alarms = mf.alarms;
    return run(mf.world, mf.script, RobotState::at(mf.start_position, specs), specs, dt, seed);
}

}  // namespace

TEST(World, ZoneLookupUsesLeftClosedFirstZoneAndLeftTieBreak) {
    World w{{{"A", 0.0, 1.0, 300.0, false}, {"B", 1.0, 2.0, 300.0, false}, {"C", 2.5, 3.0, 300.0, true}}, 298.15};
    EXPECT_NO_THROW(w.validate());
    EXPECT_EQ(w.zone_index_at(0.0), 0u);
    EXPECT_EQ(w.zone_index_at(1.0), 0u);
    EXPECT_EQ(w.zone_index_at(1.0000001), 1u);
    EXPECT_EQ(w.zone_index_at(2.2), std::nullopt);
    EXPECT_EQ(w.zone_index_at(2.5), std::nullopt);
    EXPECT_EQ(w.zone_index_at(3.0), 2u);
    EXPECT_FALSE(w.contains(3.01));
}

TEST(World, ValidationRejectsOverlapsAndEmptyWorlds) {
    EXPECT_THROW(World{}.validate(), ConfigError);
    World w{{{"A", 0.0, 1.0, 300.0, false}, {"B", 0.9, 2.0, 300.0, false}}, 298.15};
    EXPECT_THROW(w.validate(), ConfigError);
    World inverted{{{"A", 1.0, 0.5, 300.0, false}}, 298.15};
    EXPECT_THROW(inverted.validate(), ConfigError);
}

TEST(Step, NoUvMeansNoDecompositionAtAnyTemperature) {
    const MissionSpecs specs;
    for (double T : {253.15, 333.15, 393.15, 473.15}) {
        auto r = parked(specs);
        for (const auto& rec : park(single_zone(T, false), r, specs, 10.0, 2000)) {
            EXPECT_EQ(rec.alpha, 0.0);
            EXPECT_EQ(rec.hf_fraction, 0.0);
        }
    }
}

TEST(Step, SaturatedTriggerMatchesIsothermalClosedForm) {
    MissionSpecs specs;
    auto r = parked(specs);
    r.hf_fraction = 1.0;
    const double k = 0.1703 * std::exp(-18090.0 / (8.314 * 393.15));
    for (const auto& rec : park(single_zone(393.15, true), r, specs, 1.0, 6000))
        ASSERT_NEAR(rec.alpha, -std::expm1(-k * rec.t), 1e-6) << "t=" << rec.t;
}

TEST(Step, FailedSensorsReportClamps) {
    MissionSpecs specs;
    auto r = parked(specs);
    r.alpha = 0.75;
    auto res = step(single_zone(393.15, true), r, specs, 1.0);
    EXPECT_EQ(res.record.temp_resistance_ohm, 1e6);
    EXPECT_FALSE(res.record.temp_C.has_value());
    EXPECT_EQ(res.record.photocurrent_A, 0.0);
    EXPECT_FALSE(res.record.capacitance_pF.has_value());
    EXPECT_TRUE(res.record.has_event("sensor-failed"));
    EXPECT_FALSE(res.robot.operational);
}

TEST(Step, FirstStepReportsZoneTemperatureAndUv) {
    const MissionSpecs specs;
    auto res = step(single_zone(298.15, true), parked(specs), specs, 1.0);
    EXPECT_TRUE(res.record.has_event("zone-enter"));
    EXPECT_TRUE(res.record.has_event("temp-report"));
    EXPECT_TRUE(res.record.has_event("uv-detected"));
    ASSERT_TRUE(res.record.temp_C.has_value());
    EXPECT_NEAR(*res.record.temp_C, 25.0, 1e-9);
    EXPECT_EQ(res.record.photocurrent_A, -5e-8);
    // Edge-triggered: a second step in the same zone is quiet.
    auto again = step(single_zone(298.15, true), res.robot, specs, 1.0);
    EXPECT_TRUE(again.record.events.empty());
}

TEST(Step, OutsideWorldIsAFault) {
    const MissionSpecs specs;
    EXPECT_THROW(step(single_zone(300.0, false), parked(specs, 1.5), specs, 1.0), SimulationFault);
    EXPECT_THROW(step(single_zone(300.0, false), parked(specs), specs, 0.0), DomainError);
}

TEST(Step, ThermalLagRelaxesBodyTemperature) {
    MissionSpecs specs;
    specs.thermal_lag = 100.0;
    World two{{{"cool", 0.0, 0.5, 298.15, false}, {"hot", 0.5, 1.0, 393.15, false}}, 298.15};
    auto r = parked(specs, 0.25);
    r = step(two, r, specs, 1.0).robot;
    EXPECT_EQ(r.body_temperature_K, 298.15);
    r.gait.position = 0.75;
    r = step(two, r, specs, 100.0).robot;
    EXPECT_NEAR(r.body_temperature_K, 393.15 - 95.0 * std::exp(-1.0), 1e-9);
}

TEST(Step, PiecewiseConstantConditionsAreStepSizeInvariant) {
    const MissionSpecs specs;
    const auto uv_cool = single_zone(298.15, true);
    const auto dark_hot = single_zone(393.15, false);
    auto final_alpha = [&](double dt) {
        auto r = parked(specs);
        park(uv_cool, r, specs, dt, static_cast<int>(std::lround(1800.0 / dt)));
        park(dark_hot, r, specs, dt, static_cast<int>(std::lround(3600.0 / dt)));
        return r.alpha;
    };
    const double a1 = final_alpha(2.0), a2 = final_alpha(1.0), a3 = final_alpha(0.5);
    EXPECT_LT(std::abs(a1 - a2), 1e-6);
    EXPECT_LT(std::abs(a2 - a3), 1e-6);
    EXPECT_GT(a2, 0.8);
}

TEST(Alarms, DefaultRules) {
    const auto rules = default_alarm_rules();
    TelemetryRecord uv;
    uv.temp_C = 25.0;
    uv.photocurrent_A = -5e-8;
    EXPECT_EQ(evaluate_alarms(rules, uv), std::vector<std::string>{"UV detected"});
    TelemetryRecord benign;
    benign.temp_C = 25.0;
    EXPECT_TRUE(evaluate_alarms(rules, benign).empty());
    TelemetryRecord hot;
    hot.hf_fraction = 1.0;
    hot.temp_C = 120.0;
    const auto msgs = evaluate_alarms(rules, hot);
    ASSERT_EQ(msgs.size(), 1u);
    EXPECT_NE(msgs[0].find("accelerated decomposition risk"), std::string::npos);
    // An unavailable reading never satisfies a condition.
    hot.temp_C.reset();
    EXPECT_TRUE(evaluate_alarms(rules, hot).empty());
}

TEST(Alarms, MalformedRulesAreConfigErrors) {
    EXPECT_THROW(parse_alarm_rule("x", "", "m"), ConfigError);
    EXPECT_THROW(parse_alarm_rule("x", "alpha > 0.5", ""), ConfigError);
    EXPECT_THROW(parse_alarm_rule("x", "speed > 1", "m"), ConfigError);
    EXPECT_THROW(parse_alarm_rule("x", "alpha == 1", "m"), ConfigError);
    EXPECT_THROW(parse_alarm_rule("x", "alpha > high", "m"), ConfigError);
    EXPECT_THROW(parse_alarm_rule("x", "alpha > 0.1 or t > 5", "m"), ConfigError);
    EXPECT_THROW(parse_alarm_rule("x", "alpha > 0.1 and", "m"), ConfigError);
    EXPECT_NO_THROW(parse_alarm_rule("x", "alpha > 0.1 and t <= 5", "m"));
}

TEST(Run, ReferenceScenarioEventOrder) {
    const auto r = run_file(presets / "fig6.mission");
    const auto k = kinds(r);
    const std::vector<std::string> expected{
        "temp-report", "uv-detected", "alarm:accelerated_decomposition: accelerated decomposition risk: escape the zone", "escape",
        "self-destruct", "fully-decomposed"};
    auto it = k.begin();
    for (const auto& e : expected) {
        it = std::find(it, k.end(), e);
        ASSERT_NE(it, k.end()) << "missing or out of order: " << e;
        ++it;
    }
    EXPECT_EQ(r.terminal_event, "fully-decomposed");
    EXPECT_GE(r.final_state.alpha, 0.99);
}

TEST(Run, ReferenceScenarioFinalZoneTimeMatchesKinetics) {
    // Decomposition time in the last zone, predicted in closed form from the
    // conversion on entry; the trigger is saturated long before.
    const auto r = run_file(presets / "fig6.mission");
    const auto entry = std::find_if(r.records.begin(), r.records.end(), [](const TelemetryRecord& rec) {
        return rec.zone == "Zone4";
    });
    ASSERT_NE(entry, r.records.end());
    const double alpha_in = (entry - 1)->alpha;
    const double t_in = (entry - 1)->t;
    const double k = 0.1703 * std::exp(-18090.0 / (8.314 * 393.15));
    const double predicted = std::log((1.0 - alpha_in) / 0.01) / k;
    EXPECT_NEAR(r.simulated_time() - t_in, predicted, 1.0);
}

TEST(Run, BenignDwellChangesOnlyTheClock) {
    const auto mf = read_mission_file(presets / "benign.mission");
    const MissionSpecs specs;
    const auto r0 = RobotState::at(mf.start_position, specs);
    const auto r = run(mf.world, mf.script, r0, specs, 1.0, 0);
    const auto& f = r.final_state;
    EXPECT_EQ(f.position(), r0.position());
    EXPECT_EQ(f.alpha, r0.alpha);
    EXPECT_EQ(f.hf_fraction, r0.hf_fraction);
    EXPECT_EQ(f.operational, r0.operational);
    for (std::size_t i = 0; i < sensor_count; ++i) EXPECT_EQ(f.sensor_health[i].status, r0.sensor_health[i].status);
    EXPECT_EQ(f.clock, 600.0);
    EXPECT_EQ(r.terminal_event, "script-complete");
}

TEST(Run, DeterministicReplay) {
    for (std::uint64_t seed : {0ull, 7ull, 123456789ull}) {
        const auto a = run_file(presets / "fig6.mission", 1.0, seed);
        const auto b = run_file(presets / "fig6.mission", 1.0, seed);
        EXPECT_EQ(dump(a.records), dump(b.records));
    }
    // The seed reaches only the degraded-sensor noise.
    const auto s0 = run_file(presets / "fig6.mission", 1.0, 0);
    const auto s1 = run_file(presets / "fig6.mission", 1.0, 1);
    EXPECT_NE(dump(s0.records), dump(s1.records));
    EXPECT_EQ(s0.final_state.alpha, s1.final_state.alpha);
}

TEST(Run, MonotoneStateAndExactClock) {
    for (double dt : {0.5, 1.0, 2.0}) {
        const auto r = run_file(presets / "fig6.mission", dt);
        double t = 0.0, a = 0.0, hf = 0.0;
        std::optional<double> frozen;
        for (const auto& rec : r.records) {
            EXPECT_EQ(rec.t, t + dt);
            t = rec.t;
            EXPECT_GE(rec.alpha, a);
            EXPECT_GE(rec.hf_fraction, hf);
            EXPECT_LE(rec.hf_fraction, 1.0);
            a = rec.alpha;
            hf = rec.hf_fraction;
            if (frozen) {
                EXPECT_EQ(rec.position, *frozen);
            }
            if (rec.has_event("mobility-lost")) frozen = rec.position;
        }
        EXPECT_TRUE(frozen.has_value());
        EXPECT_EQ(static_cast<double>(r.records.size()) * dt, r.simulated_time());
    }
}

TEST(Run, NoUvExposureLeavesRobotIntact) {
    auto mf = read_mission_file(presets / "fig6.mission");
    mf.script.commands = {MoveTo{0.15}, Dwell{3600.0}};
    const MissionSpecs specs;
    const auto r = run(mf.world, mf.script, RobotState::at(0.0, specs), specs, 1.0, 0);
    EXPECT_EQ(r.final_state.alpha, 0.0);
    for (const auto& h : r.final_state.sensor_health) EXPECT_EQ(h.status, sensors::HealthStatus::operational);
    for (const auto& rec : r.records) EXPECT_FALSE(rec.has_event("uv-detected"));
}

TEST(Run, ImmobilizedRobotIsStranded) {
    World w{{{"trap", 0.0, 0.2, 393.15, true}, {"goal", 0.8, 1.0, 298.15, false}}, 298.15};
    const MissionSpecs specs;
    MissionScript s{{MoveTo{0.1}, Dwell{2000.0}, MoveTo{0.9}}};
    const auto r = run(w, s, RobotState::at(0.0, specs), specs, 1.0, 0);
    EXPECT_EQ(r.terminal_event, "stranded");
    EXPECT_TRUE(r.records.back().has_event("stranded"));
    EXPECT_LT(r.final_state.position(), 0.9);
}

TEST(Run, AwaitUvDoseStopsAtFraction) {
    const World w = single_zone(298.15, true);
    const MissionSpecs specs;
    const auto r = run(w, MissionScript{{AwaitUvDose{0.5}}}, RobotState::at(0.5, specs), specs, 1.0, 0);
    EXPECT_GE(r.final_state.hf_fraction, 0.5);
    EXPECT_NEAR(r.simulated_time(), std::ceil(std::log(2.0) / specs.k_photo), 1.0);
    const auto dark = run(single_zone(298.15, false), MissionScript{{AwaitUvDose{0.5}}},
                          RobotState::at(0.5, specs), specs, 100.0, 0);
    EXPECT_EQ(dark.terminal_event, "timeout");
}

TEST(Script, ValidationRejectsBadTargets) {
    const World w = single_zone(298.15, false);
    EXPECT_THROW(MissionScript{}.validate(w, 0.0), ConfigError);
    EXPECT_THROW((MissionScript{{MoveTo{1.5}}}).validate(w, 0.0), ConfigError);
    EXPECT_THROW((MissionScript{{MoveTo{0.5}, MoveTo{0.2}}}).validate(w, 0.0), ConfigError);
    EXPECT_THROW((MissionScript{{Dwell{0.0}}}).validate(w, 0.0), ConfigError);
    EXPECT_THROW((MissionScript{{AwaitUvDose{1.0}}}).validate(w, 0.0), ConfigError);
}

TEST(MissionFile, ParsesSectionsAndOverridesAlarms) {
    const auto doc = ini::Document::parse_string(R"(
[world]
ambient_K = 300
[zone.b]
x_min_m = 1
x_max_m = 2
temperature_C = 50
[zone.a]
name = First
x_min_m = 0
x_max_m = 1
temperature_K = 310
uv_on = true
[alarm.uv_detected]
when = abs_photocurrent_A > 1e-8
message = lamp on
[alarm.hot]
when = temp_C >= 45
message = hot
hazard = true
[simulation]
dt = 2
[script]
move_to 1.5
self_destruct
)");
    const auto mf = parse_mission(doc);
    ASSERT_EQ(mf.world.zones.size(), 2u);
    EXPECT_EQ(mf.world.zones[0].name, "First");
    EXPECT_EQ(mf.world.zones[1].name, "b");
    EXPECT_NEAR(mf.world.zones[1].temperature_K, 323.15, 1e-12);
    EXPECT_EQ(mf.world.ambient_temperature_K, 300.0);
    ASSERT_EQ(mf.alarms.size(), 3u);
    EXPECT_EQ(mf.alarms[0].message, "lamp on");
    EXPECT_TRUE(mf.alarms[2].hazard);
    EXPECT_EQ(mf.script.commands.size(), 2u);
    EXPECT_TRUE(mf.overlay.find("simulation"));
}

TEST(MissionFile, ErrorsAreReported) {
    const std::string zone = "[zone.1]\nx_min_m = 0\nx_max_m = 1\ntemperature_C = 25\n";
    EXPECT_THROW(parse_mission(ini::Document::parse_string(zone + "[script]\nfly 3\n")), ParseError);
    EXPECT_THROW(parse_mission(ini::Document::parse_string(zone + "[script]\ndwell\n")), ParseError);
    EXPECT_THROW(parse_mission(ini::Document::parse_string(zone + "color = red\n[script]\ndwell 1\n")),
                 ConfigError);
    EXPECT_THROW(parse_mission(ini::Document::parse_string(zone)), ConfigError);
    EXPECT_THROW(parse_mission(ini::Document::parse_string(
                     "[zone.1]\nx_min_m = 0\nx_max_m = 1\ntemperature_C = 250\n[script]\ndwell 1\n")),
                 ConfigError);
    try {
        parse_mission(ini::Document::parse_string(zone + "[script]\ndwell 5\nmove_to far\n"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 7u);
    }
}

TEST(Telemetry, CsvHasFixedHeaderAndNanForUnavailable) {
    MissionSpecs specs;
    auto r = parked(specs);
    r.alpha = 0.8;
    const auto rec = step(single_zone(393.15, true), r, specs, 1.0).record;
    std::ostringstream s;
    write_telemetry_csv(s, {rec});
    std::string header, row;
    std::istringstream in(s.str());
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "t,position,alpha,temp_C,capacitance_pF,photocurrent_A");
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 5);
    EXPECT_NE(row.find(",nan,nan,"), std::string::npos);
    const auto j = to_json(rec);
    EXPECT_TRUE(j["temp_C"].is_null());
    EXPECT_EQ(j["temp_resistance_ohm"].get<double>(), 1e6);
}
