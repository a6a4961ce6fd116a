#pragma once

/// @file dscfit.hpp
/// @brief Isothermal photo-DSC analysis: enthalpy integration, conversion
/// profiles, first-order rate-constant fitting and Arrhenius regression.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "transient/errors.hpp"
#include "transient/kinetics.hpp"

namespace transient::dscfit {

inline constexpr std::size_t min_trace_samples = 8;

/// One isothermal heat-flow record. Exothermic heat flow is positive.
struct DscTrace {
    std::vector<double> time_s;
    std::vector<double> heat_flow_W;
    double temperature_K = 298.15;
    bool uv_on = true;
    std::string label;

    std::size_t size() const { return time_s.size(); }

    void validate() const {
        if (time_s.size() != heat_flow_W.size())
            throw DomainError("DSC trace time and heat-flow columns differ in length");
        if (time_s.size() < min_trace_samples)
            throw DomainError("DSC trace needs at least " + std::to_string(min_trace_samples) + " samples");
        for (std::size_t i = 0; i < time_s.size(); ++i) {
            if (!std::isfinite(time_s[i]) || !std::isfinite(heat_flow_W[i]))
                throw DomainError("DSC trace contains non-finite samples");
            if (i > 0 && !(time_s[i] > time_s[i - 1]))
                throw DomainError("DSC trace times must be strictly increasing");
        }
        if (!(temperature_K > 0.0)) throw DomainError("DSC hold temperature must be positive kelvin");
    }
};

struct FitResult {
    double k = 0.0;               ///< 1/s
    double total_enthalpy = 0.0;  ///< J
    double residual_rms = 0.0;    ///< W
    int iterations = 0;
    bool converged = false;
    std::string diagnostic;
    std::vector<double> objective_history;  ///< sum of squares after each accepted step
};

struct ArrheniusPoint {
    double temperature_K = 0.0;
    double k = 0.0;
};

struct ArrheniusFit {
    kinetics::ArrheniusParams params;
    double r_squared = 0.0;
    std::vector<ArrheniusPoint> points;
};

/// Baseline estimate: median of the trailing `window_fraction` of samples,
/// taken as the post-reaction plateau. A zero fraction disables subtraction.
struct BaselineOptions {
    double window_fraction = 0.05;
};

struct FitOptions {
    BaselineOptions baseline{};
    int max_iterations = 200;
    double step_tolerance = 1e-9;
    double initial_damping = 1e-3;
    double min_damping = 1e-12;
    double max_damping = 1e8;
};

inline double median(std::vector<double> v) {
    if (v.empty()) throw DomainError("median of empty set");
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    double m = *mid;
    if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
    return m;
}

inline double baseline_level(const DscTrace& trace, const BaselineOptions& opts = {}) {
    if (opts.window_fraction <= 0.0) return 0.0;
    if (opts.window_fraction > 1.0) throw DomainError("baseline window fraction must be at most 1");
    const auto n = trace.heat_flow_W.size();
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(opts.window_fraction * static_cast<double>(n))));
    return median({trace.heat_flow_W.end() - static_cast<std::ptrdiff_t>(count), trace.heat_flow_W.end()});
}

/// Cumulative trapezoidal enthalpy of (flow - baseline), starting at 0.
inline std::vector<double> cumulative_enthalpy(std::span<const double> time, std::span<const double> flow,
                                               double baseline = 0.0) {
    if (time.size() != flow.size() || time.size() < 2)
        throw DomainError("enthalpy integration needs matching columns with at least two samples");
    std::vector<double> out(time.size(), 0.0);
    for (std::size_t i = 1; i < time.size(); ++i)
        out[i] = out[i - 1] + 0.5 * ((flow[i] - baseline) + (flow[i - 1] - baseline)) * (time[i] - time[i - 1]);
    return out;
}

/// Trapezoidal integral of (flow - baseline) over the record.
inline double trapezoid_enthalpy(std::span<const double> time, std::span<const double> flow,
                                 double baseline = 0.0) {
    return cumulative_enthalpy(time, flow, baseline).back();
}

inline double total_enthalpy(const DscTrace& trace, const BaselineOptions& opts = {}) {
    trace.validate();
    const double h = trapezoid_enthalpy(trace.time_s, trace.heat_flow_W, baseline_level(trace, opts));
    if (!(h > 0.0)) throw ZeroEnthalpyError("trace '" + trace.label + "' releases no net heat");
    return h;
}

struct ConversionPoint {
    double t = 0.0;
    double alpha = 0.0;
};

/// alpha(t) = dH_t / dH_total from the cumulative integral of the trace.
///
/// Noise can make the raw cumulative ratio dip or overshoot; the profile is
/// clamped to [0, 1], made nondecreasing by a running maximum, and pinned to
/// exactly 1 at the last sample.
inline std::vector<ConversionPoint> conversion_profile(const DscTrace& trace, const BaselineOptions& opts = {}) {
    const double total = total_enthalpy(trace, opts);
    const auto cumulative = cumulative_enthalpy(trace.time_s, trace.heat_flow_W, baseline_level(trace, opts));
    std::vector<ConversionPoint> out(trace.size());
    double running = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        running = std::max(running, std::clamp(cumulative[i] / total, 0.0, 1.0));
        out[i] = {trace.time_s[i], running};
    }
    out.back().alpha = 1.0;
    return out;
}

namespace detail {

inline double sum_squares(const DscTrace& trace, double k, double h) {
    double s = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double r = trace.heat_flow_W[i] - k * h * std::exp(-k * trace.time_s[i]);
        s += r * r;
    }
    return s;
}

/// k0 = 1/t63 where the cumulative enthalpy first reaches 1 - 1/e.
inline double initial_rate(const DscTrace& trace, const BaselineOptions& opts) {
    const auto profile = conversion_profile(trace, opts);
    const double level = 1.0 - std::exp(-1.0);
    for (std::size_t i = 1; i < profile.size(); ++i) {
        if (profile[i].alpha >= level) {
            // Interpolate inside the crossing interval.
            const auto& a = profile[i - 1];
            const auto& b = profile[i];
            const double f = b.alpha > a.alpha ? (level - a.alpha) / (b.alpha - a.alpha) : 1.0;
            const double t63 = (a.t + f * (b.t - a.t)) - trace.time_s.front();
            if (t63 > 0.0) return 1.0 / t63;
            break;
        }
    }
    return 1.0 / (trace.time_s.back() - trace.time_s.front());
}

}  // namespace detail

/// Damped Gauss-Newton (Levenberg-Marquardt) fit of q(t) = k dH exp(-k t).
///
/// Both k and dH are free; the integrated enthalpy only seeds dH. The
/// normal equations are 2x2 and solved directly with Marquardt diagonal
/// scaling. Steps that do not lower the sum of squares, or that would make a
/// parameter non-positive, are rejected and the damping raised tenfold.
inline FitResult fit_rate_constant(const DscTrace& trace, const FitOptions& opts = {}) {
    trace.validate();
    if (!trace.uv_on)
        throw DomainError("trace '" + trace.label + "' was recorded without UV; there is no reaction to fit");

    FitResult result;
    double h = total_enthalpy(trace, opts.baseline);
    double k = detail::initial_rate(trace, opts.baseline);
    double sse = detail::sum_squares(trace, k, h);
    double lambda = opts.initial_damping;
    result.objective_history.push_back(sse);

    int it = 0;
    while (it < opts.max_iterations) {
        ++it;
        // J^T J and J^T r for residual r_i = q_i - m_i.
        double a11 = 0.0, a12 = 0.0, a22 = 0.0, g1 = 0.0, g2 = 0.0;
        for (std::size_t i = 0; i < trace.size(); ++i) {
            const double t = trace.time_s[i];
            const double e = std::exp(-k * t);
            const double m = k * h * e;
            const double dk = h * e * (1.0 - k * t);
            const double dh = k * e;
            const double r = trace.heat_flow_W[i] - m;
            a11 += dk * dk;
            a12 += dk * dh;
            a22 += dh * dh;
            g1 += dk * r;
            g2 += dh * r;
        }
        const double m11 = a11 * (1.0 + lambda);
        const double m22 = a22 * (1.0 + lambda);
        const double det = m11 * m22 - a12 * a12;
        if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
            result.diagnostic = "singular normal equations";
            break;
        }
        const double step_k = (g1 * m22 - a12 * g2) / det;
        const double step_h = (m11 * g2 - a12 * g1) / det;
        const double trial_k = k + step_k;
        const double trial_h = h + step_h;
        const double rel_step = std::max(std::abs(step_k / k), std::abs(step_h / h));

        const bool admissible = trial_k > 0.0 && trial_h > 0.0 && std::isfinite(trial_k) && std::isfinite(trial_h);
        const double trial_sse = admissible ? detail::sum_squares(trace, trial_k, trial_h)
                                            : std::numeric_limits<double>::infinity();
        if (trial_sse <= sse) {
            k = trial_k;
            h = trial_h;
            sse = trial_sse;
            result.objective_history.push_back(sse);
            lambda = std::max(lambda / 10.0, opts.min_damping);
            if (rel_step < opts.step_tolerance) {
                result.converged = true;
                break;
            }
        } else {
            if (rel_step < opts.step_tolerance) {
                // No representable improvement remains at this point.
                result.converged = true;
                break;
            }
            if (lambda >= opts.max_damping) {
                result.diagnostic = "damping saturated without reducing the objective";
                break;
            }
            lambda = std::min(lambda * 10.0, opts.max_damping);
        }
    }
    result.iterations = it;
    result.k = k;
    result.total_enthalpy = h;
    result.residual_rms = std::sqrt(sse / static_cast<double>(trace.size()));
    if (!result.converged && result.diagnostic.empty())
        result.diagnostic = "iteration cap of " + std::to_string(opts.max_iterations) + " reached";
    return result;
}

/// Ordinary least squares of ln k against 1/T.
inline ArrheniusFit fit_arrhenius(std::span<const ArrheniusPoint> points) {
    if (points.size() < 2) throw DomainError("Arrhenius regression needs at least two points");
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& p : points) {
        if (!(p.k > 0.0) || !std::isfinite(p.k)) throw DomainError("Arrhenius regression needs positive rate constants");
        if (!(p.temperature_K > 0.0)) throw DomainError("Arrhenius regression needs positive temperatures");
        mean_x += 1.0 / p.temperature_K;
        mean_y += std::log(p.k);
    }
    const auto n = static_cast<double>(points.size());
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : points) {
        const double dx = 1.0 / p.temperature_K - mean_x;
        const double dy = std::log(p.k) - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw DomainError("Arrhenius regression needs at least two distinct temperatures");
    const double slope = sxy / sxx;
    const double intercept = mean_y - slope * mean_x;
    const double activation = -slope * kinetics::gas_constant;
    if (activation < 0.0)
        throw DomainError("rate constants decrease with temperature; activation energy would be negative");

    double ss_res = 0.0;
    for (const auto& p : points) {
        const double r = std::log(p.k) - (intercept + slope / p.temperature_K);
        ss_res += r * r;
    }
    ArrheniusFit fit;
    fit.params = {std::exp(intercept), activation};
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    fit.points.assign(points.begin(), points.end());
    return fit;
}

struct Sampling {
    double dt = 1.0;     ///< s
    double t_end = 0.0;  ///< s, inclusive when on the grid
};

struct SynthOptions {
    double noise_fraction = 0.0;  ///< Gaussian sigma relative to the peak k dH
    std::uint64_t seed = 0;
    double temperature_K = 298.15;
    bool uv_on = true;
    std::string label = "synthetic";
};

/// Samples k dH exp(-k t) on [0, t_end] with seeded Gaussian noise.
inline DscTrace synthesize_trace(double k, double total_enthalpy, const Sampling& sampling,
                                 const SynthOptions& opts = {}) {
    if (!(k > 0.0)) throw DomainError("synthetic trace needs a positive rate constant");
    if (!(total_enthalpy > 0.0)) throw DomainError("synthetic trace needs a positive enthalpy");
    if (!(sampling.dt > 0.0)) throw DomainError("sampling interval must be positive");
    if (!(sampling.t_end >= 10.0 * sampling.dt)) throw DomainError("record must span at least ten samples");
    if (!(opts.noise_fraction >= 0.0)) throw DomainError("noise fraction must be non-negative");

    DscTrace trace;
    trace.temperature_K = opts.temperature_K;
    trace.uv_on = opts.uv_on;
    trace.label = opts.label;
    const auto count = static_cast<std::size_t>(std::floor(sampling.t_end / sampling.dt * (1.0 + 1e-12))) + 1;
    trace.time_s.reserve(count);
    trace.heat_flow_W.reserve(count);

    const double peak = k * total_enthalpy;
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const kinetics::RateConstant rate(k);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) * sampling.dt;
        double q = kinetics::dsc_heat_flow(rate, total_enthalpy, t);
        if (opts.noise_fraction > 0.0) q += opts.noise_fraction * peak * noise(rng);
        trace.time_s.push_back(t);
        trace.heat_flow_W.push_back(q);
    }
    return trace;
}

}  // namespace transient::dscfit
