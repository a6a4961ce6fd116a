#pragma once

/// @file mission.hpp
/// @brief Deterministic lifecycle simulation of the sensor-laden gaiting
/// robot moving through heat and UV zones until it self-destructs.
///
/// Each step samples the zone under the robot's centre, advances photolysis
/// and decomposition exactly over the step, moves the gait toward the current
/// target and reads all three sensors through their degradation model. There
/// is no ambient randomness: the only noise source is derived from the run
/// seed and the step index.

#include <algorithm>
#include <cstdio>
#include <type_traits>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "transient/errors.hpp"
#include "transient/kinetics.hpp"
#include "transient/mechanics.hpp"
#include "transient/sensors.hpp"
#include "transient/text.hpp"

namespace transient::mission {

inline constexpr double kelvin_offset = 273.15;

struct Zone {
    std::string name;
    double x_min = 0.0;  ///< m
    double x_max = 0.0;  ///< m
    double temperature_K = 298.15;
    bool uv_on = false;
};

/// Ordered, non-overlapping zones on a line. Gaps between zones are at the
/// ambient temperature without UV.
struct World {
    std::vector<Zone> zones;
    double ambient_temperature_K = 298.15;

    double x_min() const { return zones.front().x_min; }
    double x_max() const { return zones.back().x_max; }

    void validate() const {
        if (zones.empty()) throw ConfigError("world has no zones");
        if (!(ambient_temperature_K > 0.0)) throw ConfigError("ambient temperature must be positive kelvin");
        for (std::size_t i = 0; i < zones.size(); ++i) {
            const auto& z = zones[i];
            if (!(z.x_min < z.x_max)) throw ConfigError("zone '" + z.name + "' needs x_min < x_max");
            if (!(z.temperature_K > 0.0)) throw ConfigError("zone '" + z.name + "' needs a positive temperature");
            if (i > 0 && z.x_min < zones[i - 1].x_max)
                throw ConfigError("zone '" + z.name + "' overlaps or precedes '" + zones[i - 1].name + "'");
        }
    }

    bool contains(double x) const { return x >= x_min() && x <= x_max(); }

    /// Zone under point x. Intervals are (x_min, x_max], except the first
    /// zone which also owns its left edge, so a shared boundary belongs to
    /// the zone on its left.
    std::optional<std::size_t> zone_index_at(double x) const {
        for (std::size_t i = 0; i < zones.size(); ++i) {
            const auto& z = zones[i];
            const bool left_ok = i == 0 ? x >= z.x_min : x > z.x_min;
            if (left_ok && x <= z.x_max) return i;
        }
        return std::nullopt;
    }
};

// ---------------------------------------------------------------------------
// Telemetry and alarms

struct Event {
    std::string kind;
    std::string message;
};

struct TelemetryRecord {
    double t = 0.0;
    double position = 0.0;
    double alpha = 0.0;
    double hf_fraction = 0.0;
    std::string zone;  ///< empty between zones
    double temp_resistance_ohm = 0.0;
    std::optional<double> temp_C;         ///< unavailable once the sensor fails
    std::optional<double> capacitance_pF; ///< unavailable once the sensor fails
    double photocurrent_A = 0.0;
    std::vector<Event> events;

    bool has_event(std::string_view kind) const {
        return std::any_of(events.begin(), events.end(), [&](const Event& e) { return e.kind == kind; });
    }
};

enum class Field { t, position, alpha, hf_fraction, temp_C, temp_resistance_ohm, capacitance_pF, photocurrent_A,
                   abs_photocurrent_A };

inline std::optional<Field> field_from_name(std::string_view s) {
    if (s == "t") return Field::t;
    if (s == "position") return Field::position;
    if (s == "alpha") return Field::alpha;
    if (s == "hf_fraction") return Field::hf_fraction;
    if (s == "temp_C") return Field::temp_C;
    if (s == "temp_resistance_ohm") return Field::temp_resistance_ohm;
    if (s == "capacitance_pF") return Field::capacitance_pF;
    if (s == "photocurrent_A") return Field::photocurrent_A;
    if (s == "abs_photocurrent_A") return Field::abs_photocurrent_A;
    return std::nullopt;
}

inline std::optional<double> field_value(const TelemetryRecord& r, Field f) {
    switch (f) {
        case Field::t: return r.t;
        case Field::position: return r.position;
        case Field::alpha: return r.alpha;
        case Field::hf_fraction: return r.hf_fraction;
        case Field::temp_C: return r.temp_C;
        case Field::temp_resistance_ohm: return r.temp_resistance_ohm;
        case Field::capacitance_pF: return r.capacitance_pF;
        case Field::photocurrent_A: return r.photocurrent_A;
        case Field::abs_photocurrent_A: return std::abs(r.photocurrent_A);
    }
    return std::nullopt;
}

enum class Comparison { lt, le, gt, ge };

struct Condition {
    Field field = Field::t;
    Comparison op = Comparison::gt;
    double threshold = 0.0;

    /// An unavailable reading never satisfies a condition.
    bool holds(const TelemetryRecord& r) const {
        const auto v = field_value(r, field);
        if (!v) return false;
        switch (op) {
            case Comparison::lt: return *v < threshold;
            case Comparison::le: return *v <= threshold;
            case Comparison::gt: return *v > threshold;
            case Comparison::ge: return *v >= threshold;
        }
        return false;
    }
};

/// Fires when every condition holds. Hazard alarms mark the current zone as
/// one to escape; leaving it afterwards emits an "escape" event.
struct AlarmRule {
    std::string name;
    std::string message;
    std::vector<Condition> all_of;
    bool hazard = false;
    std::string expression;  ///< source text, echoed in run headers

    bool fires(const TelemetryRecord& r) const {
        return std::all_of(all_of.begin(), all_of.end(), [&](const Condition& c) { return c.holds(r); });
    }
};

/// Parses "field op value [and field op value ...]" with op in < <= > >=.
inline AlarmRule parse_alarm_rule(std::string name, std::string_view expression, std::string message,
                                  bool hazard = false) {
    AlarmRule rule;
    rule.name = std::move(name);
    rule.message = std::move(message);
    rule.hazard = hazard;
    rule.expression = std::string(text::trim(expression));
    if (rule.expression.empty()) throw ConfigError("alarm '" + rule.name + "' has an empty condition");
    if (rule.message.empty()) throw ConfigError("alarm '" + rule.name + "' has no message");

    std::vector<std::string_view> tokens;
    for (auto tok : text::split(rule.expression, ' '))
        if (!text::trim(tok).empty()) tokens.push_back(text::trim(tok));
    std::size_t i = 0;
    while (true) {
        if (i + 3 > tokens.size()) throw ConfigError("alarm '" + rule.name + "': incomplete condition");
        Condition c;
        const auto f = field_from_name(tokens[i]);
        if (!f) throw ConfigError("alarm '" + rule.name + "': unknown field '" + std::string(tokens[i]) + "'");
        c.field = *f;
        const auto op = tokens[i + 1];
        if (op == "<") c.op = Comparison::lt;
        else if (op == "<=") c.op = Comparison::le;
        else if (op == ">") c.op = Comparison::gt;
        else if (op == ">=") c.op = Comparison::ge;
        else throw ConfigError("alarm '" + rule.name + "': unknown comparison '" + std::string(op) + "'");
        const auto v = text::parse_double(tokens[i + 2]);
        if (!v) throw ConfigError("alarm '" + rule.name + "': bad threshold '" + std::string(tokens[i + 2]) + "'");
        c.threshold = *v;
        rule.all_of.push_back(c);
        i += 3;
        if (i == tokens.size()) break;
        if (tokens[i] != "and") throw ConfigError("alarm '" + rule.name + "': expected 'and'");
        ++i;
    }
    return rule;
}

inline constexpr double default_dose_threshold = 0.5;

inline std::vector<AlarmRule> default_alarm_rules() {
    return {
        parse_alarm_rule("uv_detected", "abs_photocurrent_A > 1e-9", "UV detected"),
        parse_alarm_rule("accelerated_decomposition", "hf_fraction >= 0.5 and temp_C >= 100",
                         "accelerated decomposition risk: escape the zone", true),
    };
}

inline std::vector<std::string> evaluate_alarms(const std::vector<AlarmRule>& rules, const TelemetryRecord& record) {
    std::vector<std::string> out;
    for (const auto& r : rules)
        if (r.fires(record)) out.push_back(r.message);
    return out;
}

// ---------------------------------------------------------------------------
// Robot and step

struct MissionSpecs {
    kinetics::ArrheniusParams kinetics = kinetics::ecoflex_reference_params();
    double k_photo = kinetics::default_photolysis_rate();
    kinetics::TriggerCoupling coupling{};
    double reaction_order = 1.0;

    mechanics::ActuatorSpec actuator{};
    sensors::TempSensorSpec temp_sensor = sensors::temp_sensor_tcr_main();
    sensors::StrainSensorSpec strain_sensor{};
    sensors::PhotodiodeSpec photodiode{};
    sensors::SensorHealth health{};
    double photodiode_bias = -2.0;  ///< V

    double mobility_threshold = 0.2;
    double thermal_lag = 0.0;  ///< s, first-order body temperature lag; 0 = none
    double full_decomposition_alpha = 0.99;
    double uv_detect_current = 1e-9;  ///< A
    double max_wait = 86400.0;        ///< s, cap for open-ended commands
    std::vector<AlarmRule> alarms = default_alarm_rules();

    void validate() const {
        kinetics.validate();
        coupling.validate();
        actuator.validate();
        temp_sensor.validate();
        strain_sensor.validate();
        photodiode.validate();
        health.validate();
        if (!(k_photo >= 0.0)) throw ConfigError("photolysis rate must be non-negative");
        if (!(reaction_order >= 0.0)) throw ConfigError("reaction order must be non-negative");
        if (!(mobility_threshold > 0.0 && mobility_threshold <= 1.0))
            throw ConfigError("mobility threshold must lie in (0, 1]");
        if (!(thermal_lag >= 0.0)) throw ConfigError("thermal lag must be non-negative");
        if (!(full_decomposition_alpha > 0.0 && full_decomposition_alpha < 1.0))
            throw ConfigError("full-decomposition threshold must lie in (0, 1)");
        if (!(max_wait > 0.0)) throw ConfigError("max wait must be positive");
        if (std::abs(photodiode_bias) > photodiode.bias_limit) throw ConfigError("photodiode bias outside band");
        if (actuator.angle_at_reference > strain_sensor.angle_full && actuator.angle_table.empty())
            throw ConfigError("actuator bends beyond the strain sensor calibration");
    }
};

inline constexpr std::size_t sensor_count = 3;
inline constexpr std::array<sensors::SensorKind, sensor_count> sensor_kinds{
    sensors::SensorKind::strain, sensors::SensorKind::temp, sensors::SensorKind::photo};

struct RobotState {
    double alpha = 0.0;
    double hf_fraction = 0.0;
    mechanics::GaitState gait{};
    std::array<sensors::SensorHealth, sensor_count> sensor_health{};
    bool operational = true;
    double clock = 0.0;  ///< s
    std::uint64_t steps = 0;
    /// Body temperature; NaN until the first step adopts the local zone value.
    double body_temperature_K = std::numeric_limits<double>::quiet_NaN();

    // Edge-detection state for events.
    std::optional<std::size_t> zone;
    bool inside_world = false;
    bool uv_latched = false;
    std::vector<bool> alarm_latched;
    bool hazard_in_zone = false;
    bool fully_decomposed = false;

    double position() const { return gait.position; }

    static RobotState at(double position, const MissionSpecs& specs) {
        RobotState r;
        r.gait.position = position;
        r.sensor_health.fill(specs.health);
        return r;
    }
};

struct StepResult {
    RobotState robot;
    TelemetryRecord record;
};

namespace detail {
inline std::uint64_t noise_seed(std::uint64_t seed, std::uint64_t step, sensors::SensorKind kind) {
    return sensors::detail::splitmix64(seed ^ sensors::detail::splitmix64(step * sensor_count +
                                                                          static_cast<std::uint64_t>(kind)));
}

inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}
}  // namespace detail

/// Advances the robot by one step of length `dt`, walking toward `target`
/// (metres) when one is given and the robot can still move.
inline StepResult step(const World& world, const RobotState& robot, const MissionSpecs& specs, double dt,
                       std::optional<double> target = std::nullopt, std::uint64_t seed = 0) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be positive");
    if (!world.contains(robot.position()))
        throw SimulationFault("robot at x = " + text::format_double(robot.position()) + " m is outside the world");

    StepResult out{robot, {}};
    RobotState& next = out.robot;
    TelemetryRecord& rec = out.record;
    if (next.alarm_latched.size() != specs.alarms.size()) next.alarm_latched.assign(specs.alarms.size(), false);

    // Zone transitions at the sampling point.
    const auto zone = world.zone_index_at(robot.position());
    const bool entered = !robot.inside_world || zone != robot.zone;
    if (entered) {
        if (robot.inside_world && robot.zone) {
            rec.events.push_back({"zone-exit", world.zones[*robot.zone].name});
            if (robot.hazard_in_zone)
                rec.events.push_back({"escape", "left hazardous zone " + world.zones[*robot.zone].name});
        }
        next.hazard_in_zone = false;
        if (zone) rec.events.push_back({"zone-enter", world.zones[*zone].name});
        next.zone = zone;
        next.inside_world = true;
    }
    const double env_T = zone ? world.zones[*zone].temperature_K : world.ambient_temperature_K;
    const bool uv = zone ? world.zones[*zone].uv_on : false;

    if (std::isnan(next.body_temperature_K) || specs.thermal_lag <= 0.0)
        next.body_temperature_K = env_T;
    else
        next.body_temperature_K = env_T + (next.body_temperature_K - env_T) * std::exp(-dt / specs.thermal_lag);

    // Photolysis and decomposition, exact over the step.
    const double k = kinetics::arrhenius_rate(specs.kinetics, next.body_temperature_K).per_second();
    const auto trig = kinetics::advance_trigger(robot.hf_fraction, uv, specs.k_photo, specs.coupling, dt);
    next.hf_fraction = std::max(robot.hf_fraction, trig.hf_fraction);
    next.alpha = kinetics::advance_conversion(robot.alpha, k, trig.gate_integral, specs.reaction_order);

    if (next.operational && next.alpha >= specs.mobility_threshold) {
        next.operational = false;
        rec.events.push_back({"mobility-lost", "alpha " + detail::format_fixed(next.alpha, 4) +
                                                   " reached mobility threshold " +
                                                   detail::format_fixed(specs.mobility_threshold, 4)});
    }

    // Locomotion toward the target, stopping exactly on it.
    if (target && next.operational && robot.position() < *target) {
        const double speed = specs.actuator.speed();
        const double remaining = *target - robot.position();
        const double moving = std::min(dt, remaining / speed);
        next.gait = mechanics::gait_advance(robot.gait, specs.actuator, moving, 1.0);
        if (moving < dt || next.gait.position > *target) next.gait.position = *target;
    }

    // Sensors.
    const double body_C = next.body_temperature_K - kelvin_offset;
    const double raw_R = sensors::temp_resistance(specs.temp_sensor, body_C);
    const double raw_C = sensors::strain_capacitance(specs.strain_sensor, next.gait.current_angle);
    const double raw_I = sensors::photodiode_current(specs.photodiode, specs.photodiode_bias, uv);
    const kinetics::Conversion alpha_now(next.alpha);
    std::array<std::optional<double>, sensor_count> raw{raw_C, raw_R, raw_I};
    std::array<std::optional<double>, sensor_count> reading{};
    for (std::size_t i = 0; i < sensor_count; ++i) {
        auto& health = next.sensor_health[i];
        const auto status = health.status_at(next.alpha);
        if (status != health.status) {
            health.status = status;
            rec.events.push_back({std::string("sensor-") + std::string(sensors::to_string(status)),
                                  std::string(sensors::to_string(sensor_kinds[i])) + " sensor " +
                                      std::string(sensors::to_string(status))});
        }
        reading[i] = sensors::apply_degradation(raw[i], sensor_kinds[i], alpha_now, health,
                                                detail::noise_seed(seed, robot.steps, sensor_kinds[i]),
                                                specs.temp_sensor.fail_resistance);
    }

    next.clock = robot.clock + dt;
    next.steps = robot.steps + 1;

    rec.t = next.clock;
    rec.position = next.position();
    rec.alpha = next.alpha;
    rec.hf_fraction = next.hf_fraction;
    rec.zone = zone ? world.zones[*zone].name : std::string{};
    rec.capacitance_pF = reading[0];
    rec.temp_resistance_ohm = *reading[1];
    if (rec.temp_resistance_ohm < specs.temp_sensor.fail_resistance)
        rec.temp_C = sensors::read_temperature(specs.temp_sensor, rec.temp_resistance_ohm);
    rec.photocurrent_A = *reading[2];

    if (entered && zone) {
        rec.events.push_back({"temp-report", world.zones[*zone].name + ": " +
                                                 (rec.temp_C ? detail::format_fixed(*rec.temp_C, 2) + " degC"
                                                             : std::string("sensor unavailable"))});
    }

    const bool uv_seen = std::abs(rec.photocurrent_A) > specs.uv_detect_current;
    if (uv_seen && !robot.uv_latched)
        rec.events.push_back({"uv-detected", "photocurrent " + text::format_double(rec.photocurrent_A) + " A"});
    next.uv_latched = uv_seen;

    for (std::size_t i = 0; i < specs.alarms.size(); ++i) {
        const auto& rule = specs.alarms[i];
        const bool fires = rule.fires(rec);
        if (fires && !next.alarm_latched[i]) {
            rec.events.push_back({"alarm", rule.name + ": " + rule.message});
        }
        if (fires && rule.hazard && zone) next.hazard_in_zone = true;
        next.alarm_latched[i] = fires;
    }

    if (!next.fully_decomposed && next.alpha >= specs.full_decomposition_alpha) {
        next.fully_decomposed = true;
        rec.events.push_back({"fully-decomposed", "alpha " + detail::format_fixed(next.alpha, 4)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scripts

struct MoveTo {
    double x = 0.0;
};
struct Dwell {
    double duration = 0.0;
};
struct AwaitUvDose {
    double fraction = 0.0;
};
struct SelfDestruct {};

using Command = std::variant<MoveTo, Dwell, AwaitUvDose, SelfDestruct>;

inline std::string describe(const Command& c) {
    return std::visit(
        [](const auto& cmd) -> std::string {
            using T = std::decay_t<decltype(cmd)>;
            if constexpr (std::is_same_v<T, MoveTo>) return "move_to " + text::format_double(cmd.x);
            else if constexpr (std::is_same_v<T, Dwell>) return "dwell " + text::format_double(cmd.duration);
            else if constexpr (std::is_same_v<T, AwaitUvDose>) return "await_uv_dose " + text::format_double(cmd.fraction);
            else return "self_destruct";
        },
        c);
}

struct MissionScript {
    std::vector<Command> commands;

    /// Targets must stay inside the world and never point backwards: the
    /// gait only walks forward.
    void validate(const World& world, double start_position) const {
        if (commands.empty()) throw ConfigError("mission script has no commands");
        double x = start_position;
        for (const auto& c : commands) {
            if (const auto* m = std::get_if<MoveTo>(&c)) {
                if (!world.contains(m->x))
                    throw ConfigError("move_to " + text::format_double(m->x) + " is outside the world");
                if (m->x < x) throw ConfigError("move_to " + text::format_double(m->x) + " would walk backwards");
                x = m->x;
            } else if (const auto* d = std::get_if<Dwell>(&c)) {
                if (!(d->duration > 0.0)) throw ConfigError("dwell duration must be positive");
            } else if (const auto* a = std::get_if<AwaitUvDose>(&c)) {
                if (!(a->fraction > 0.0 && a->fraction < 1.0))
                    throw ConfigError("await_uv_dose fraction must lie in (0, 1)");
            }
        }
    }
};

struct RunHeader {
    double dt = 1.0;
    std::uint64_t seed = 0;
    double mobility_threshold = 0.2;
    double alpha_degrade = 0.3;
    double alpha_fail = 0.7;
    double full_decomposition_alpha = 0.99;
    double thermal_lag = 0.0;
    double trigger_saturation = 0.95;
    double k_photo = 0.0;
    std::vector<std::string> alarms;
};

struct RunResult {
    RunHeader header;
    std::vector<TelemetryRecord> records;
    RobotState final_state;
    std::string terminal_event;  ///< fully-decomposed, script-complete, stranded or timeout

    double simulated_time() const { return records.empty() ? 0.0 : records.back().t; }
};

/// Executes the script command by command until it ends or the robot is
/// fully decomposed.
inline RunResult run(const World& world, const MissionScript& script, const RobotState& robot0,
                     const MissionSpecs& specs, double dt, std::uint64_t seed) {
    world.validate();
    specs.validate();
    script.validate(world, robot0.position());
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");

    RunResult result;
    result.header = {dt, seed, specs.mobility_threshold, specs.health.alpha_degrade, specs.health.alpha_fail,
                     specs.full_decomposition_alpha, specs.thermal_lag, specs.coupling.saturation, specs.k_photo, {}};
    for (const auto& a : specs.alarms) result.header.alarms.push_back(a.name + ": " + a.expression);

    RobotState robot = robot0;
    if (robot.alarm_latched.size() != specs.alarms.size()) robot.alarm_latched.assign(specs.alarms.size(), false);
    std::vector<Event> pending;
    const auto max_steps = static_cast<std::uint64_t>(std::ceil(specs.max_wait / dt));

    auto advance = [&](std::optional<double> target) {
        auto [next, rec] = step(world, robot, specs, dt, target, seed);
        if (!pending.empty()) {
            rec.events.insert(rec.events.begin(), pending.begin(), pending.end());
            pending.clear();
        }
        robot = std::move(next);
        result.records.push_back(std::move(rec));
        return robot.fully_decomposed;
    };
    auto terminate = [&](std::string kind, std::string message) {
        if (result.records.empty()) advance(std::nullopt);
        result.records.back().events.push_back({kind, std::move(message)});
        result.terminal_event = std::move(kind);
    };

    for (const auto& command : script.commands) {
        bool done = false;
        if (const auto* m = std::get_if<MoveTo>(&command)) {
            while (robot.position() < m->x) {
                if (!robot.operational) {
                    terminate("stranded", "immobilized at x = " + text::format_double(robot.position()) +
                                              " m before reaching " + text::format_double(m->x) + " m");
                    break;
                }
                if ((done = advance(m->x))) break;
            }
        } else if (const auto* d = std::get_if<Dwell>(&command)) {
            const auto n = static_cast<std::uint64_t>(std::ceil(d->duration / dt - 1e-9));
            for (std::uint64_t i = 0; i < n && !done; ++i) done = advance(std::nullopt);
        } else if (const auto* a = std::get_if<AwaitUvDose>(&command)) {
            std::uint64_t i = 0;
            while (robot.hf_fraction < a->fraction && !done) {
                if (i++ == max_steps) {
                    terminate("timeout", "UV dose " + text::format_double(a->fraction) + " not reached");
                    break;
                }
                done = advance(std::nullopt);
            }
        } else {
            pending.push_back({"self-destruct", "self-destruct sequence started"});
            std::uint64_t i = 0;
            while (!done) {
                if (i++ == max_steps) {
                    terminate("timeout", "decomposition incomplete after max wait");
                    break;
                }
                done = advance(std::nullopt);
            }
        }
        if (done) {
            result.terminal_event = "fully-decomposed";
            break;
        }
        if (!result.terminal_event.empty()) break;
    }
    if (result.terminal_event.empty()) terminate("script-complete", "all commands executed");
    result.final_state = robot;
    return result;
}

}  // namespace transient::mission
