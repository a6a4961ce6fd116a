#pragma once

/// @file sensors.hpp
/// @brief Forward models of the embedded strain, temperature and UV sensors,
/// and how each one fails as the host elastomer decomposes.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "transient/errors.hpp"
#include "transient/kinetics.hpp"

namespace transient::sensors {

inline constexpr double temp_band_min_C = -20.0;
inline constexpr double temp_band_max_C = 200.0;
inline constexpr double default_fail_resistance = 1e6;

/// Linear resistive thermometer, R = r0 + slope (T - t_ref).
struct TempSensorSpec {
    double r0 = 10.0;     ///< ohm at t_ref
    double slope = 0.002; ///< ohm per degC
    double t_ref = 25.0;  ///< degC
    double fail_resistance = default_fail_resistance;

    void validate() const {
        if (!(r0 > 0.0)) throw DomainError("temperature sensor r0 must be positive");
        if (!(slope > 0.0)) throw DomainError("temperature sensor slope must be positive");
        if (!(fail_resistance >= 1e6)) throw DomainError("failure resistance must be at least 1e6 ohm");
    }
};

/// 2 mOhm/degC, the TCR quoted for the Cu trace in running text.
inline TempSensorSpec temp_sensor_tcr_main() { return {10.0, 0.002, 25.0, default_fail_resistance}; }
/// 0.2 Ohm/degC, the coefficient printed with the R-T calibration plot.
inline TempSensorSpec temp_sensor_tcr_caption() { return {10.0, 0.2, 25.0, default_fail_resistance}; }

struct StrainSensorSpec {
    double c0 = 5.0;          ///< pF at rest
    double swing = 1.0;       ///< pF across a full walking cycle
    double angle_full = 35.0; ///< degrees

    void validate() const {
        if (!(c0 > 0.0 && swing > 0.0 && angle_full > 0.0))
            throw DomainError("strain sensor calibration values must be positive");
    }
};

/// PIN photodiode under 365 nm illumination, described by its I-V anchors.
struct PhotodiodeSpec {
    double photo_current_reverse = -5e-8; ///< A at -2 V
    double photo_current_forward = 3.4e-8; ///< A at +2 V
    double dark_current = 0.0;             ///< A
    double bias_limit = 2.0;               ///< V

    void validate() const {
        if (!(photo_current_reverse < 0.0 && 0.0 < photo_current_forward))
            throw DomainError("photodiode anchors need reverse < 0 < forward current");
        if (!(std::abs(dark_current) <= 1e-10)) throw DomainError("dark current must not exceed 1e-10 A");
    }
};

enum class HealthStatus { operational, degraded, failed };

inline std::string_view to_string(HealthStatus s) {
    switch (s) {
        case HealthStatus::operational: return "operational";
        case HealthStatus::degraded: return "degraded";
        case HealthStatus::failed: return "failed";
    }
    return "unknown";
}

struct SensorHealth {
    HealthStatus status = HealthStatus::operational;
    double alpha_degrade = 0.3;
    double alpha_fail = 0.7;
    double erratic_amplitude = 0.1;  ///< relative peak perturbation while degraded

    void validate() const {
        if (!(0.0 < alpha_degrade && alpha_degrade < alpha_fail && alpha_fail <= 1.0))
            throw DomainError("sensor health thresholds need 0 < degrade < fail <= 1");
        if (!(erratic_amplitude >= 0.0)) throw DomainError("erratic amplitude must be non-negative");
    }

    HealthStatus status_at(double alpha) const {
        if (alpha >= alpha_fail) return HealthStatus::failed;
        if (alpha >= alpha_degrade) return HealthStatus::degraded;
        return HealthStatus::operational;
    }
};

enum class SensorKind { strain, temp, photo };

inline std::string_view to_string(SensorKind k) {
    switch (k) {
        case SensorKind::strain: return "strain";
        case SensorKind::temp: return "temp";
        case SensorKind::photo: return "photo";
    }
    return "unknown";
}

inline double temp_resistance(const TempSensorSpec& spec, double temperature_C) {
    if (!(temperature_C >= temp_band_min_C && temperature_C <= temp_band_max_C))
        throw ValidityError("temperature " + std::to_string(temperature_C) + " degC is outside the sensor band");
    return spec.r0 + spec.slope * (temperature_C - spec.t_ref);
}

inline double read_temperature(const TempSensorSpec& spec, double resistance) {
    if (resistance >= spec.fail_resistance)
        throw SensorFailedError("temperature sensor open circuit (" + std::to_string(resistance) + " ohm)");
    if (!(resistance > 0.0)) throw DomainError("resistance must be positive");
    return spec.t_ref + (resistance - spec.r0) / spec.slope;
}

inline double strain_capacitance(const StrainSensorSpec& spec, double bending_angle) {
    const double mag = std::abs(bending_angle);
    if (!(mag <= spec.angle_full))
        throw ValidityError("bending angle " + std::to_string(bending_angle) + " deg is beyond calibration");
    return spec.c0 + spec.swing * (mag / spec.angle_full);
}

/// Piecewise-linear through (-limit, reverse), (0, 0), (+limit, forward) when lit.
inline double photodiode_current(const PhotodiodeSpec& spec, double bias, bool uv_on) {
    if (!(std::abs(bias) <= spec.bias_limit))
        throw ValidityError("bias " + std::to_string(bias) + " V is outside the calibrated band");
    if (!uv_on) return spec.dark_current;
    if (bias < 0.0) return spec.photo_current_reverse * (bias / -spec.bias_limit);
    return spec.photo_current_forward * (bias / spec.bias_limit);
}

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}
/// Uniform in [-1, 1), a pure function of the seed.
inline double signed_unit(std::uint64_t seed) {
    return static_cast<double>(splitmix64(seed) >> 11) * 0x1.0p-52 - 1.0;
}
}  // namespace detail

/// Maps a healthy reading onto what a decomposing sensor reports.
///
/// Below alpha_degrade the reading passes through untouched. In the degraded
/// band the strain capacitance wanders by up to +/- erratic_amplitude
/// (relative), driven only by `noise_seed`. At alpha_fail and beyond the
/// temperature trace reads open circuit, the photodiode reads 0 A and the
/// capacitance is unavailable.
inline std::optional<double> apply_degradation(std::optional<double> raw, SensorKind kind,
                                               kinetics::Conversion alpha, const SensorHealth& health,
                                               std::uint64_t noise_seed,
                                               double fail_resistance = default_fail_resistance) {
    const auto status = health.status_at(alpha.value());
    if (status == HealthStatus::operational) return raw;
    if (status == HealthStatus::failed) {
        switch (kind) {
            case SensorKind::temp: return fail_resistance;
            case SensorKind::photo: return 0.0;
            case SensorKind::strain: return std::nullopt;
        }
    }
    if (kind == SensorKind::strain && raw)
        return *raw * (1.0 + health.erratic_amplitude * detail::signed_unit(noise_seed));
    return raw;
}

}  // namespace transient::sensors
