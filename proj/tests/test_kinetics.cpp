#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "transient/kinetics.hpp"

using namespace transient;
using namespace transient::kinetics;

namespace {

// Independent oracles. Long-double direct evaluation of the Arrhenius law and
// closed forms, and a fine-step RK4 integration of the coupled
// photolysis/decomposition ODE that shares no code with the exact stepper.

long double oracle_k(long double A, long double Ea, long double T) {
    return A * std::exp(-Ea / (8.314L * T));
}

struct OdeState {
    double hf;
    double alpha;
};

OdeState rk4_oracle(const ExposureSchedule& s, const ArrheniusParams& p, double k_photo, double sat, double order,
                    double h) {
    OdeState y{0.0, 0.0};
    auto deriv = [&](const OdeState& st, double k, bool uv) {
        const double g = std::min(1.0, st.hf / sat);
        return OdeState{uv ? k_photo * (1.0 - st.hf) : 0.0,
                        k * g * std::pow(std::max(0.0, 1.0 - st.alpha), order)};
    };
    for (const auto& seg : s.segments) {
        const double k = static_cast<double>(oracle_k(p.pre_exponential, p.activation_energy, seg.temperature));
        const auto n = static_cast<long>(std::llround(seg.duration / h));
        const double hh = seg.duration / static_cast<double>(n);
        for (long i = 0; i < n; ++i) {
            const auto k1 = deriv(y, k, seg.uv_on);
            const auto k2 = deriv({y.hf + 0.5 * hh * k1.hf, y.alpha + 0.5 * hh * k1.alpha}, k, seg.uv_on);
            const auto k3 = deriv({y.hf + 0.5 * hh * k2.hf, y.alpha + 0.5 * hh * k2.alpha}, k, seg.uv_on);
            const auto k4 = deriv({y.hf + hh * k3.hf, y.alpha + hh * k3.alpha}, k, seg.uv_on);
            y.hf += hh / 6.0 * (k1.hf + 2 * k2.hf + 2 * k3.hf + k4.hf);
            y.alpha += hh / 6.0 * (k1.alpha + 2 * k2.alpha + 2 * k3.alpha + k4.alpha);
        }
    }
    return y;
}

double closed_form_alpha(const ExposureSchedule& s, const ArrheniusParams& p) {
    long double dose = 0.0L;
    for (const auto& seg : s.segments) dose += oracle_k(p.pre_exponential, p.activation_energy, seg.temperature) * seg.duration;
    return static_cast<double>(1.0L - std::exp(-dose));
}

const ArrheniusParams ref = ecoflex_reference_params();
const PhotolysisState fresh{1.0, 0.0, default_photolysis_rate()};

IntegrationOptions forced() {
    IntegrationOptions o;
    o.coupling = TriggerCoupling::fully_triggered();
    return o;
}

}  // namespace

TEST(ArrheniusRate, MatchesHighPrecisionOracle) {
    EXPECT_NEAR(arrhenius_rate(ref, 393.15).per_second(), static_cast<double>(oracle_k(0.1703L, 18090.0L, 393.15L)),
                1e-18);
    EXPECT_NEAR(arrhenius_rate(ref, 393.15).per_second(), 6.724450574000486e-4, 1e-15);
    EXPECT_NEAR(arrhenius_rate(ref, 298.15).per_second(), 1.152941887657200e-4, 1e-15);
    // Rounded values carried through the rest of the examples.
    EXPECT_NEAR(arrhenius_rate(ref, 393.15).per_second(), 6.73e-4, 1e-6);
    EXPECT_NEAR(arrhenius_rate(ref, 298.15).per_second(), 1.153e-4, 1e-7);
}

TEST(ArrheniusRate, ZeroActivationEnergyGivesPrefactor) {
    EXPECT_EQ(arrhenius_rate({0.1703, 0.0}, 300.0).per_second(), 0.1703);
}

TEST(ArrheniusRate, RejectsNonPositiveTemperature) {
    EXPECT_THROW(arrhenius_rate(ref, 0.0), DomainError);
    EXPECT_THROW(arrhenius_rate(ref, -5.0), DomainError);
    EXPECT_THROW(arrhenius_rate({0.0, 1.0}, 300.0), DomainError);
    EXPECT_THROW(arrhenius_rate({1.0, -1.0}, 300.0), DomainError);
}

TEST(ArrheniusRate, StrictlyIncreasingAndLogLinearInInverseT) {
    double prev = 0.0;
    for (double T = 200.0; T <= 600.0; T += 7.3) {
        const double k = arrhenius_rate(ref, T).per_second();
        EXPECT_GT(k, prev);
        prev = k;
        const double predicted = std::log(ref.pre_exponential) - ref.activation_energy / (gas_constant * T);
        EXPECT_NEAR(std::log(k), predicted, 1e-13);
    }
}

TEST(ArrheniusParams, KilojouleInterfaceConvertsOnce) {
    const auto p = ArrheniusParams::from_kj_per_mol(0.1703, 18.09);
    EXPECT_DOUBLE_EQ(p.activation_energy, 18090.0);
    EXPECT_DOUBLE_EQ(p.activation_energy_kj(), 18.09);
}

TEST(IsothermalConversion, Examples) {
    EXPECT_EQ(isothermal_conversion(RateConstant(0.37), 0.0).value(), 0.0);
    EXPECT_NEAR(isothermal_conversion(RateConstant(6.73e-4), 4454.0).value(), 0.95009040449, 1e-10);
    EXPECT_NEAR(isothermal_conversion(RateConstant(1.153e-4), 15000.0).value(), 0.8226269257, 1e-9);
    EXPECT_THROW(isothermal_conversion(RateConstant(1e-3), -1.0), DomainError);
}

TEST(TimeToConversion, Examples) {
    EXPECT_EQ(time_to_conversion(RateConstant(0.2), Conversion(0.0)), 0.0);
    EXPECT_NEAR(time_to_conversion(RateConstant(6.73e-4), Conversion(0.95)), 4451.310956, 1e-5);
    EXPECT_NEAR(time_to_conversion(RateConstant(1e-3), Conversion(0.5)), 693.1471805599453, 1e-9);
    EXPECT_THROW(time_to_conversion(RateConstant(1e-3), Conversion(1.0)), UnreachableTargetError);
    EXPECT_THROW(time_to_conversion(RateConstant(0.0), Conversion(0.5)), UnreachableTargetError);
}

TEST(TimeToConversion, InverseOfIsothermalConversionProperty) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> log_k(std::log(1e-6), std::log(1.0));
    std::uniform_real_distribution<double> a(0.0, 0.999);
    for (int i = 0; i < 2000; ++i) {
        const RateConstant k(std::exp(log_k(rng)));
        const Conversion target(a(rng));
        const double t = time_to_conversion(k, target);
        const double back = isothermal_conversion(k, t).value();
        EXPECT_NEAR(back, target.value(), 1e-10 * std::max(target.value(), 1e-300) + 1e-300);
        if (target.value() > 0.0) {
            EXPECT_NEAR(time_to_conversion(k, isothermal_conversion(k, t)), t, 1e-10 * t);
        }
    }
}

TEST(ConversionRate, Examples) {
    EXPECT_EQ(conversion_rate(RateConstant(0.01), Conversion(1.0), 1.0), 0.0);
    EXPECT_EQ(conversion_rate(RateConstant(0.01), Conversion(0.0), 1.0), 0.01);
    EXPECT_DOUBLE_EQ(conversion_rate(RateConstant(0.01), Conversion(0.5), 2.0), 0.0025);
    EXPECT_THROW(conversion_rate(RateConstant(0.01), Conversion(0.5), -1.0), DomainError);
    EXPECT_THROW(Conversion(1.5), DomainError);
}

TEST(HfConcentration, Examples) {
    const PhotolysisState s{2.0, 0.0, 1e-3};
    EXPECT_EQ(hf_concentration(s, 0.0), 0.0);
    EXPECT_NEAR(hf_concentration(s, std::log(2.0) / 1e-3), 1.0, 1e-12);
    EXPECT_NEAR(hf_concentration(s, 693.1), 1.0, 1e-4);
    EXPECT_NEAR(hf_concentration(s, 1e7), 2.0, 2.0 * 1e-9);
}

TEST(HfConcentration, BoundedAndConcave) {
    const PhotolysisState s{1.5, 0.0, 2.3e-3};
    double prev = -1.0, prev_slope = std::numeric_limits<double>::infinity();
    for (double t = 0.0; t <= 5000.0; t += 10.0) {
        const double hf = hf_concentration(s, t);
        EXPECT_LE(hf, s.dpi_initial);
        if (prev >= 0.0) {
            const double slope = hf - prev;
            EXPECT_LE(slope, prev_slope + 1e-15);
            prev_slope = slope;
        }
        prev = hf;
    }
}

TEST(HfConcentration, DefaultPhotolysisRateGivesNinetyFivePercentInThirtyMinutes) {
    EXPECT_NEAR(default_photolysis_rate(), 1.664e-3, 1e-6);
    EXPECT_NEAR(photolyzed_fraction(default_photolysis_rate(), 1800.0), 0.95, 1e-14);
}

TEST(DscHeatFlow, Examples) {
    EXPECT_DOUBLE_EQ(dsc_heat_flow(RateConstant(1e-3), 10.0, 0.0), 0.01);
    EXPECT_NEAR(dsc_heat_flow(RateConstant(1e-3), 10.0, 693.1), 0.005, 1e-6);
    EXPECT_THROW(dsc_heat_flow(RateConstant(1e-3), 0.0, 1.0), DomainError);
}

// Composite Simpson quadrature of the heat-flow model; closed-form total dH.
double simpson(double k, double h_total, double t_end, int n) {
    const double step = t_end / n;
    double s = dsc_heat_flow(RateConstant(k), h_total, 0.0) + dsc_heat_flow(RateConstant(k), h_total, t_end);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * dsc_heat_flow(RateConstant(k), h_total, i * step);
    return s * step / 3.0;
}

TEST(DscHeatFlow, IntegratesToTotalEnthalpy) {
    EXPECT_NEAR(simpson(1e-3, 10.0, 20.0 / 1e-3, 20000), 10.0, 10.0 * 1e-6);
    for (double k : {1e-5, 3e-4, 1e-2, 0.5}) EXPECT_NEAR(simpson(k, 7.0, 30.0 / k, 30000), 7.0, 7.0 * 1e-5);
}

TEST(ConversionFromHeat, Examples) {
    EXPECT_EQ(conversion_from_heat(0.0, 10.0).value(), 0.0);
    EXPECT_EQ(conversion_from_heat(10.0, 10.0).value(), 1.0);
    EXPECT_EQ(conversion_from_heat(2.5, 10.0).value(), 0.25);
    EXPECT_THROW(conversion_from_heat(11.0, 10.0), DomainError);
    EXPECT_THROW(conversion_from_heat(1.0, 0.0), DomainError);
}

TEST(AdvanceTrigger, GateIntegralMatchesQuadrature) {
    const TriggerCoupling c{0.95, false};
    const double kp = default_photolysis_rate();
    for (double hf0 : {0.0, 0.3, 0.94, 0.96}) {
        for (double h : {1.0, 250.0, 3000.0}) {
            const auto step = advance_trigger(hf0, true, kp, c, h);
            // Midpoint quadrature of g(hf(s)) with the closed-form hf(s).
            const int n = 200000;
            double q = 0.0;
            for (int i = 0; i < n; ++i) {
                const double s = (i + 0.5) * h / n;
                q += std::min(1.0, (1.0 - (1.0 - hf0) * std::exp(-kp * s)) / 0.95);
            }
            q *= h / n;
            EXPECT_NEAR(step.gate_integral, q, 1e-6 * h) << "hf0=" << hf0 << " h=" << h;
            EXPECT_NEAR(step.hf_fraction, 1.0 - (1.0 - hf0) * std::exp(-kp * h), 1e-15);
        }
    }
}

TEST(IntegrateConversion, NoUvMeansNoConversion) {
    const ExposureSchedule s{{{10000.0, 393.15, false}}};
    for (const auto& p : integrate_conversion(s, ref, fresh, 1.0)) {
        EXPECT_EQ(p.alpha, 0.0);
        EXPECT_EQ(p.hf_fraction, 0.0);
    }
}

TEST(IntegrateConversion, ForcedSingleSegmentMatchesAnalytic) {
    const ExposureSchedule s{{{4454.0, 393.15, true}}};
    const auto series = integrate_conversion(s, ref, fresh, 1.0, forced());
    EXPECT_NEAR(series.back().alpha, closed_form_alpha(s, ref), 1e-12);
    EXPECT_NEAR(series.back().alpha, 0.95, 1e-3);
    EXPECT_EQ(series.size(), 4455u);
    EXPECT_DOUBLE_EQ(series.back().t, 4454.0);
}

TEST(IntegrateConversion, ForcedTwoSegmentsMatchAnalytic) {
    const ExposureSchedule s{{{1000.0, 353.15, true}, {2000.0, 413.15, false}}};
    const auto series = integrate_conversion(s, ref, fresh, 0.5, forced());
    EXPECT_NEAR(series.back().alpha, 0.8796497079503563, 1e-12);
}

TEST(IntegrateConversion, CoupledDoseMatchesRk4Oracle) {
    const ExposureSchedule s{{{900.0, 298.15, true}, {600.0, 393.15, true}, {3000.0, 393.15, false}}};
    const auto series = integrate_conversion(s, ref, fresh, 5.0);
    const auto oracle = rk4_oracle(s, ref, fresh.k_photo, 0.95, 1.0, 0.05);
    EXPECT_NEAR(series.back().alpha, oracle.alpha, 1e-7);
    EXPECT_NEAR(series.back().hf_fraction, oracle.hf, 1e-9);
}

TEST(IntegrateConversion, NonUnitOrderMatchesRk4Oracle) {
    // Short enough that the zero-order case stays below full conversion.
    const ExposureSchedule s{{{600.0, 393.15, true}, {400.0, 413.15, false}}};
    for (double order : {0.0, 0.5, 2.0}) {
        IntegrationOptions o;
        o.order = order;
        const auto series = integrate_conversion(s, ref, fresh, 10.0, o);
        const auto oracle = rk4_oracle(s, ref, fresh.k_photo, 0.95, order, 0.05);
        EXPECT_NEAR(series.back().alpha, oracle.alpha, 1e-6) << "n=" << order;
    }
}

TEST(IntegrateConversion, RandomSchedulesMatchClosedFormAndStayMonotone) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> nseg(1, 6);
    std::uniform_real_distribution<double> dur(50.0, 3000.0), temp(280.0, 440.0);
    std::bernoulli_distribution uv(0.5);
    for (int trial = 0; trial < 50; ++trial) {
        ExposureSchedule s;
        for (int i = nseg(rng); i > 0; --i) s.segments.push_back({dur(rng), temp(rng), uv(rng)});
        const auto series = integrate_conversion(s, ref, fresh, 7.0 < s.min_duration() ? 7.0 : s.min_duration(),
                                                 forced());
        EXPECT_NEAR(series.back().alpha, closed_form_alpha(s, ref), 1e-6);
        for (std::size_t i = 1; i < series.size(); ++i) {
            EXPECT_GE(series[i].alpha, series[i - 1].alpha);
            EXPECT_GE(series[i].alpha, 0.0);
            EXPECT_LE(series[i].alpha, 1.0);
            EXPECT_GT(series[i].t, series[i - 1].t);
        }
        EXPECT_NEAR(series.back().t, s.total_duration(), 1e-9);
    }
}

TEST(IntegrateConversion, StepHalvingIsInvariant) {
    const ExposureSchedule s{{{1800.0, 298.15, true}, {3600.0, 393.15, false}}};
    const double coarse = integrate_conversion(s, ref, fresh, 4.0).back().alpha;
    const double fine = integrate_conversion(s, ref, fresh, 2.0).back().alpha;
    EXPECT_NEAR(coarse, fine, 1e-12);
}

TEST(IntegrateConversion, RejectsInvalidInputs) {
    EXPECT_THROW(integrate_conversion({}, ref, fresh, 1.0), DomainError);
    EXPECT_THROW(integrate_conversion({{{0.0, 300.0, true}}}, ref, fresh, 1.0), DomainError);
    EXPECT_THROW(integrate_conversion({{{10.0, -3.0, true}}}, ref, fresh, 1.0), DomainError);
    EXPECT_THROW(integrate_conversion({{{10.0, 300.0, true}}}, ref, fresh, 11.0), DomainError);
    EXPECT_THROW(integrate_conversion({{{10.0, 300.0, true}}}, ref, fresh, 0.0), DomainError);
}
