#pragma once

/// @file mechanics.hpp
/// @brief Lumped material and pneumatic gait models for the composite robot.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "transient/errors.hpp"

namespace transient::mechanics {

/// Tensile description of one composite formulation. Strains are
/// dimensionless (4.0 == 400%).
struct MaterialSpec {
    std::string name;
    double modulus = 0.0;  ///< Pa
    double elastic_limit_strain = 0.0;
    double fracture_strain = 0.0;
    double fracture_stress = 0.0;  ///< Pa, as measured; not used by the stress law
    double poisson = 0.0;
    double density = 0.0;  ///< kg/m^3
    double dpi_wt_percent = 0.0;

    void validate() const {
        if (!(modulus > 0.0)) throw DomainError("material '" + name + "': modulus must be positive");
        if (!(elastic_limit_strain > 0.0 && elastic_limit_strain < fracture_strain))
            throw DomainError("material '" + name + "': need 0 < elastic limit < fracture strain");
        if (!(poisson >= 0.0 && poisson < 0.5))
            throw DomainError("material '" + name + "': Poisson ratio must lie in [0, 0.5)");
        if (!(density > 0.0)) throw DomainError("material '" + name + "': density must be positive");
    }
};

// Ecoflex 00-30 with DPI-HFP filler. Modulus and elastic limit are shared
// across loadings; only the fracture point moves with filler content.
inline MaterialSpec ecoflex_material(double wt_percent, double fracture_strain, double fracture_stress) {
    MaterialSpec m;
    m.name = "ecoflex_" + std::to_string(static_cast<int>(wt_percent)) + "wt";
    m.modulus = 40.02e3;
    m.elastic_limit_strain = 4.0;
    m.fracture_strain = fracture_strain;
    m.fracture_stress = fracture_stress;
    m.poisson = 0.43;
    m.density = 1070.0;
    m.dpi_wt_percent = wt_percent;
    return m;
}
inline MaterialSpec ecoflex_0wt() { return ecoflex_material(0.0, 6.8372, 0.4251e6); }
inline MaterialSpec ecoflex_10wt() { return ecoflex_material(10.0, 5.7167, 0.1453e6); }
inline MaterialSpec ecoflex_20wt() { return ecoflex_material(20.0, 4.9334, 0.1897e6); }

inline std::vector<MaterialSpec> material_presets() { return {ecoflex_0wt(), ecoflex_10wt(), ecoflex_20wt()}; }

struct StressPoint {
    double stress = 0.0;  ///< Pa
    bool post_elastic = false;
};

inline bool fracture_check(const MaterialSpec& material, double strain) {
    if (!(strain >= 0.0)) throw DomainError("strain must be non-negative");
    return strain > material.fracture_strain;
}

/// Linear elastic law, continued (and flagged) past the elastic limit up to fracture.
inline StressPoint stress_at_strain(const MaterialSpec& material, double strain) {
    if (fracture_check(material, strain)) throw FractureError(material.name, strain);
    return {material.modulus * strain, strain > material.elastic_limit_strain};
}

/// Pneumatic bending actuator and its gait kinematics.
///
/// The pressure-to-angle and pressure-to-strain maps are linear through a
/// calibration point (reference_pressure, angle/strain at reference). A
/// non-empty `angle_table` of (pressure kPa, angle deg) pairs with pressure
/// >= 0 replaces the linear angle map with piecewise-linear interpolation,
/// extended as an odd function to negative pressure.
struct ActuatorSpec {
    double reference_pressure = 12.0;    ///< kPa
    double angle_at_reference = 35.0;    ///< degrees
    double strain_at_reference = 0.8356; ///< peak channel-wall strain
    double max_pressure = 12.0;          ///< kPa
    double stride_per_cycle = 0.025;     ///< m
    double cycle_period = 1.0;           ///< s
    std::vector<std::pair<double, double>> angle_table;

    double angle_per_pressure() const { return angle_at_reference / reference_pressure; }
    double strain_per_pressure() const { return strain_at_reference / reference_pressure; }
    double speed() const { return stride_per_cycle / cycle_period; }

    void validate() const {
        if (!(reference_pressure > 0.0 && angle_at_reference > 0.0 && strain_at_reference > 0.0 &&
              max_pressure > 0.0 && stride_per_cycle > 0.0 && cycle_period > 0.0))
            throw DomainError("actuator calibration values must all be positive");
        for (std::size_t i = 0; i < angle_table.size(); ++i) {
            if (angle_table[i].first < 0.0) throw DomainError("angle table pressures must be non-negative");
            if (i > 0 && !(angle_table[i].first > angle_table[i - 1].first &&
                           angle_table[i].second >= angle_table[i - 1].second))
                throw DomainError("angle table must be strictly increasing in pressure and monotone in angle");
        }
    }

    void validate_against(const MaterialSpec& wall) const {
        validate();
        if (!(max_pressure * strain_per_pressure() < wall.fracture_strain))
            throw DomainError("actuator peak strain exceeds the fracture strain of '" + wall.name + "'");
    }
};

namespace detail {
inline void check_pressure(const ActuatorSpec& a, double pressure) {
    if (!std::isfinite(pressure) || std::abs(pressure) > a.max_pressure)
        throw ActuationError("pressure " + std::to_string(pressure) + " kPa exceeds the rated " +
                             std::to_string(a.max_pressure) + " kPa");
}

inline double table_angle(const std::vector<std::pair<double, double>>& table, double p) {
    if (p <= table.front().first) {
        // Line through the origin and the first entry.
        return table.front().first > 0.0 ? table.front().second * (p / table.front().first) : table.front().second;
    }
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (p <= table[i].first) {
            const auto& [p0, a0] = table[i - 1];
            const auto& [p1, a1] = table[i];
            return a0 + (a1 - a0) * ((p - p0) / (p1 - p0));
        }
    }
    return table.back().second;
}
}  // namespace detail

/// Signed bending angle; flexion is positive.
inline double bend_angle(const ActuatorSpec& actuator, double pressure) {
    detail::check_pressure(actuator, pressure);
    if (!actuator.angle_table.empty()) {
        const double mag = detail::table_angle(actuator.angle_table, std::abs(pressure));
        return pressure < 0.0 ? -mag : mag;
    }
    return actuator.angle_at_reference * (pressure / actuator.reference_pressure);
}

inline double max_channel_strain(const ActuatorSpec& actuator, double pressure) {
    detail::check_pressure(actuator, pressure);
    return actuator.strain_at_reference * (std::abs(pressure) / actuator.reference_pressure);
}

enum class GaitPhase { extended, flexed };

struct GaitState {
    double position = 0.0;       ///< m
    GaitPhase phase = GaitPhase::extended;
    long long cycle_count = 0;
    double current_angle = 0.0;  ///< degrees
    double cycle_progress = 0.0; ///< accumulated actuation, in cycles
};

/// Advances the gait by `elapsed` seconds at fractional `mobility`.
///
/// Inlet pressure follows max_pressure * sin(2 pi * cycle_phase); the first
/// half of each cycle is flexion. Immobilized robots (mobility 0) hold pose.
inline GaitState gait_advance(const GaitState& state, const ActuatorSpec& actuator, double elapsed,
                              double mobility) {
    if (!(elapsed >= 0.0)) throw DomainError("elapsed time must be non-negative");
    if (!(mobility >= 0.0 && mobility <= 1.0)) throw DomainError("mobility must lie in [0, 1]");
    GaitState next = state;
    if (mobility == 0.0 || elapsed == 0.0) return next;
    next.position = state.position + actuator.speed() * mobility * elapsed;
    next.cycle_progress = state.cycle_progress + mobility * elapsed / actuator.cycle_period;
    const double whole = std::floor(next.cycle_progress);
    const double within = next.cycle_progress - whole;
    next.cycle_count = static_cast<long long>(whole);
    next.phase = within < 0.5 ? GaitPhase::flexed : GaitPhase::extended;
    const double pressure =
        std::clamp(actuator.max_pressure * std::sin(2.0 * std::numbers::pi * within), -actuator.max_pressure,
                   actuator.max_pressure);
    next.current_angle = bend_angle(actuator, pressure);
    return next;
}

}  // namespace transient::mechanics
