#pragma once

/// @file kinetics.hpp
/// @brief Photolysis, phase-conversion and Arrhenius rate laws for
/// UV-triggered fluoride decomposition of silicone composites.
///
/// Everything here is a pure function of its inputs. Units are SI
/// throughout (s, K, J, mol, W); activation energies may be supplied in
/// kJ/mol through ArrheniusParams::from_kj_per_mol.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "transient/errors.hpp"

namespace transient::kinetics {

inline constexpr double gas_constant = 8.314;  ///< J/(mol K)

namespace detail {
inline void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}
inline bool finite(double x) { return std::isfinite(x); }
}  // namespace detail

/// Pre-exponential factor and activation energy of k(T) = A exp(-Ea / (R T)).
struct ArrheniusParams {
    double pre_exponential = 0.0;    ///< 1/s
    double activation_energy = 0.0;  ///< J/mol

    static ArrheniusParams from_kj_per_mol(double pre_exponential, double activation_energy_kj) {
        ArrheniusParams p{pre_exponential, activation_energy_kj * 1000.0};
        p.validate();
        return p;
    }

    void validate() const {
        detail::require(detail::finite(pre_exponential) && pre_exponential > 0.0,
                        "Arrhenius pre-exponential factor must be positive");
        detail::require(detail::finite(activation_energy) && activation_energy >= 0.0,
                        "activation energy must be non-negative");
    }

    double activation_energy_kj() const { return activation_energy / 1000.0; }
};

/// Kinetic parameters of DPI-HFP/Ecoflex 00-30 measured by photo-DSC.
inline ArrheniusParams ecoflex_reference_params() {
    return ArrheniusParams::from_kj_per_mol(0.1703, 18.09);
}

/// First-order rate constant in 1/s; zero only for an untriggered system.
class RateConstant {
public:
    constexpr RateConstant() = default;
    explicit RateConstant(double per_second) : k_(per_second) {
        detail::require(detail::finite(per_second) && per_second >= 0.0,
                        "rate constant must be finite and non-negative");
    }
    double per_second() const noexcept { return k_; }

private:
    double k_ = 0.0;
};

/// Extent of phase conversion, 0 (solid) to 1 (liquid).
class Conversion {
public:
    constexpr Conversion() = default;
    explicit Conversion(double alpha) : alpha_(alpha) {
        detail::require(alpha >= 0.0 && alpha <= 1.0, "conversion must lie in [0, 1]");
    }
    double value() const noexcept { return alpha_; }

private:
    double alpha_ = 0.0;
};

/// Photo-fluoride generator bookkeeping. `hf` is the current HF concentration.
struct PhotolysisState {
    double dpi_initial = 1.0;  ///< mol/m^3
    double hf = 0.0;           ///< mol/m^3
    double k_photo = 0.0;      ///< 1/s under UV

    void validate() const {
        detail::require(dpi_initial > 0.0 && detail::finite(dpi_initial),
                        "initial DPI-HFP concentration must be positive");
        detail::require(hf >= 0.0 && hf <= dpi_initial, "HF concentration must lie in [0, [DPI-HFP]0]");
        detail::require(k_photo >= 0.0 && detail::finite(k_photo),
                        "photolysis rate constant must be non-negative");
    }

    double hf_fraction() const { return hf / dpi_initial; }
};

/// Photolysis rate constant that converts 95% of the generator in 30 min of UV.
inline double default_photolysis_rate() { return -std::log(0.05) / 1800.0; }

/// Photolyzed fraction reached after `uv_seconds` of UV at `k_photo`, from zero.
inline double photolyzed_fraction(double k_photo, double uv_seconds) {
    return -std::expm1(-k_photo * uv_seconds);
}

struct ExposureSegment {
    double duration = 0.0;     ///< s
    double temperature = 0.0;  ///< K
    bool uv_on = false;
};

/// Piecewise-constant time/temperature/UV history.
struct ExposureSchedule {
    std::vector<ExposureSegment> segments;

    void validate() const {
        if (segments.empty()) throw DomainError("exposure schedule is empty");
        for (const auto& s : segments) {
            if (!(s.duration > 0.0) || !detail::finite(s.duration))
                throw DomainError("exposure segment duration must be positive");
            if (!(s.temperature > 0.0) || !detail::finite(s.temperature))
                throw DomainError("exposure segment temperature must be positive kelvin");
        }
    }

    double total_duration() const {
        double t = 0.0;
        for (const auto& s : segments) t += s.duration;
        return t;
    }

    double min_duration() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& s : segments) m = std::min(m, s.duration);
        return m;
    }
};

inline RateConstant arrhenius_rate(const ArrheniusParams& params, double temperature) {
    if (!(temperature > 0.0) || !detail::finite(temperature))
        throw DomainError("Arrhenius rate requires a positive absolute temperature");
    params.validate();
    return RateConstant(params.pre_exponential *
                        std::exp(-params.activation_energy / (gas_constant * temperature)));
}

/// alpha = 1 - exp(-k t) for an isothermal, fully triggered hold.
inline Conversion isothermal_conversion(RateConstant k, double t) {
    if (!(t >= 0.0)) throw DomainError("elapsed time must be non-negative");
    return Conversion(-std::expm1(-k.per_second() * t));
}

inline double time_to_conversion(RateConstant k, Conversion target) {
    if (target.value() >= 1.0) throw UnreachableTargetError("full conversion is reached only asymptotically");
    if (k.per_second() <= 0.0) throw UnreachableTargetError("untriggered system never converts");
    return -std::log1p(-target.value()) / k.per_second();
}

/// d(alpha)/dt = k (1 - alpha)^n.
inline double conversion_rate(RateConstant k, Conversion alpha, double order = 1.0) {
    detail::require(order >= 0.0 && detail::finite(order), "reaction order must be non-negative");
    const double remaining = 1.0 - alpha.value();
    if (remaining <= 0.0) return 0.0;
    return k.per_second() * std::pow(remaining, order);
}

/// HF concentration after `uv_time` seconds of UV, starting from `state.hf`.
inline double hf_concentration(const PhotolysisState& state, double uv_time) {
    state.validate();
    if (!(uv_time >= 0.0)) throw DomainError("UV exposure time must be non-negative");
    const double remaining = state.dpi_initial - state.hf;
    const double hf = state.hf + remaining * -std::expm1(-state.k_photo * uv_time);
    return std::min(hf, state.dpi_initial);
}

/// Isothermal DSC signal: q(t) = k dH_total exp(-k t).
inline double dsc_heat_flow(RateConstant k, double total_enthalpy, double t) {
    if (!(t >= 0.0)) throw DomainError("time must be non-negative");
    if (!(total_enthalpy > 0.0)) throw DomainError("total enthalpy must be positive");
    return k.per_second() * total_enthalpy * std::exp(-k.per_second() * t);
}

inline Conversion conversion_from_heat(double partial_enthalpy, double total_enthalpy) {
    if (!(total_enthalpy > 0.0)) throw DomainError("total enthalpy must be positive");
    if (!(partial_enthalpy >= 0.0) || partial_enthalpy > total_enthalpy)
        throw DomainError("partial enthalpy must lie in [0, total]");
    return Conversion(partial_enthalpy / total_enthalpy);
}

/// How accumulated photolysis gates the thermal decomposition rate.
///
/// g(hf) = min(1, hf / saturation). `forced` pins g to 1 regardless of dose,
/// which reproduces a sample that was fully triggered before the record began.
struct TriggerCoupling {
    double saturation = 0.95;
    bool forced = false;

    static TriggerCoupling fully_triggered() { return {0.95, true}; }

    void validate() const {
        detail::require(saturation > 0.0 && saturation <= 1.0, "trigger saturation must lie in (0, 1]");
    }

    double gate(double hf_fraction) const {
        if (forced) return 1.0;
        return std::min(1.0, hf_fraction / saturation);
    }
};

/// Result of advancing the photolysis/decomposition pair over one interval of
/// constant temperature and UV state.
struct TriggerStep {
    double hf_fraction = 0.0;
    double gate_integral = 0.0;  ///< integral of g over the interval, s
};

/// Advances the photolyzed fraction over `h` seconds and integrates the gate
/// in closed form. The kink of min(1, .) is located analytically, so the
/// result is exact for any step length.
inline TriggerStep advance_trigger(double hf0, bool uv_on, double k_photo, const TriggerCoupling& coupling,
                                   double h) {
    if (coupling.forced) {
        const double hf = uv_on ? 1.0 - (1.0 - hf0) * std::exp(-k_photo * h) : hf0;
        return {std::clamp(hf, hf0, 1.0), h};
    }
    const double sat = coupling.saturation;
    if (!uv_on || k_photo <= 0.0) return {hf0, coupling.gate(hf0) * h};

    const double hf1 = std::clamp(1.0 - (1.0 - hf0) * std::exp(-k_photo * h), hf0, 1.0);
    // Time at which hf reaches the saturation level, if within reach.
    double unsaturated = h;
    if (hf0 >= sat) {
        unsaturated = 0.0;
    } else if (sat < 1.0) {
        unsaturated = std::min(h, std::log((1.0 - hf0) / (1.0 - sat)) / k_photo);
    }
    // Integral of hf(s) = 1 - (1 - hf0) exp(-kp s) over [0, unsaturated].
    const double hf_integral =
        unsaturated - (1.0 - hf0) * -std::expm1(-k_photo * unsaturated) / k_photo;
    return {hf1, hf_integral / sat + (h - unsaturated)};
}

/// Exact conversion update for d(alpha)/dt = k g (1 - alpha)^n with k constant
/// and `gate_integral` = integral of g over the interval.
inline double advance_conversion(double alpha0, double k, double gate_integral, double order = 1.0) {
    if (alpha0 >= 1.0) return 1.0;
    const double dose = k * gate_integral;
    if (dose <= 0.0) return alpha0;
    double alpha;
    if (order == 1.0) {
        alpha = 1.0 - (1.0 - alpha0) * std::exp(-dose);
    } else {
        const double p = 1.0 - order;
        const double u = std::pow(1.0 - alpha0, p) - p * dose;
        if (order < 1.0 && u <= 0.0) return 1.0;
        alpha = 1.0 - std::pow(u, 1.0 / p);
    }
    return std::clamp(alpha, alpha0, 1.0);
}

struct ConversionSample {
    double t = 0.0;
    double alpha = 0.0;
    double hf_fraction = 0.0;
};

struct IntegrationOptions {
    TriggerCoupling coupling{};
    double order = 1.0;
};

/// Forward prediction of conversion under an arbitrary exposure schedule.
///
/// Each segment is walked in steps of `dt` (the last step of a segment is
/// shortened to land on its end). The returned series starts at t = 0 and
/// has one sample per step.
inline std::vector<ConversionSample> integrate_conversion(const ExposureSchedule& schedule,
                                                          const ArrheniusParams& params,
                                                          const PhotolysisState& photolysis, double dt,
                                                          const IntegrationOptions& options = {}) {
    schedule.validate();
    params.validate();
    photolysis.validate();
    options.coupling.validate();
    detail::require(options.order >= 0.0, "reaction order must be non-negative");
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (dt > schedule.min_duration() * (1.0 + 1e-12))
        throw DomainError("time step exceeds the shortest schedule segment");

    std::vector<ConversionSample> series;
    double alpha = 0.0;
    double hf = photolysis.hf_fraction();
    series.push_back({0.0, alpha, hf});

    double segment_start = 0.0;
    for (const auto& seg : schedule.segments) {
        const double k = arrhenius_rate(params, seg.temperature).per_second();
        double elapsed = 0.0;
        for (std::size_t j = 1; elapsed < seg.duration; ++j) {
            double next = static_cast<double>(j) * dt;
            // Absorb a sliver that is only rounding noise into this step.
            if (seg.duration - next < dt * 1e-9) next = seg.duration;
            const double h = next - elapsed;
            const auto trig = advance_trigger(hf, seg.uv_on, photolysis.k_photo, options.coupling, h);
            alpha = advance_conversion(alpha, k, trig.gate_integral, options.order);
            hf = trig.hf_fraction;
            elapsed = next;
            series.push_back({segment_start + elapsed, alpha, hf});
        }
        segment_start += seg.duration;
    }
    return series;
}

}  // namespace transient::kinetics
