#pragma once

/// @file run_config.hpp
/// @brief Resolved tool configuration: kinetics, materials, actuator and
/// sensor calibrations, and simulation settings.
///
/// Recognised sections and keys:
///
///     [presets]         load = a.ini, b.ini   (resolved in the preset dir)
///     [kinetics]        A_per_s, Ea_kJ_per_mol, k_photo_per_s, hf_saturation, order
///     [material.<name>] modulus_Pa, elastic_limit_strain, fracture_strain,
///                       fracture_stress_Pa, poisson, density_kg_m3, dpi_wt_percent
///     [actuator]        reference_pressure_kPa, angle_at_reference_deg,
///                       strain_at_reference, max_pressure_kPa, stride_per_cycle_m,
///                       cycle_period_s, angle_table = "p:deg, p:deg, ..."
///     [sensor.temp]     preset = tcr_main | tcr_caption, r0_ohm, slope_ohm_per_C,
///                       t_ref_C, fail_resistance_ohm
///     [sensor.strain]   c0_pF, swing_pF, angle_full_deg
///     [sensor.photo]    reverse_A, forward_A, dark_A, bias_V
///     [sensor.health]   alpha_degrade, alpha_fail, erratic_amplitude
///     [simulation]      dt_s, seed, material, mobility_threshold, thermal_lag_s,
///                       full_decomposition_alpha, max_wait_s, uv_detect_A

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "transient/errors.hpp"
#include "transient/ini.hpp"
#include "transient/kinetics.hpp"
#include "transient/mechanics.hpp"
#include "transient/mission.hpp"
#include "transient/sensors.hpp"
#include "transient/text.hpp"

namespace transient::config {

struct RunConfig {
    kinetics::ArrheniusParams kinetics = kinetics::ecoflex_reference_params();
    double k_photo = kinetics::default_photolysis_rate();
    double hf_saturation = 0.95;
    double reaction_order = 1.0;

    std::map<std::string, mechanics::MaterialSpec> materials = [] {
        std::map<std::string, mechanics::MaterialSpec> m;
        for (auto& spec : mechanics::material_presets()) m.emplace(spec.name, spec);
        return m;
    }();
    std::string material = "ecoflex_20wt";

    mechanics::ActuatorSpec actuator{};
    std::string temp_preset = "tcr_main";
    sensors::TempSensorSpec temp_sensor = sensors::temp_sensor_tcr_main();
    sensors::StrainSensorSpec strain_sensor{};
    sensors::PhotodiodeSpec photodiode{};
    double photodiode_bias = -2.0;
    sensors::SensorHealth health{};

    double dt = 1.0;
    std::uint64_t seed = 0;
    double mobility_threshold = 0.2;
    double thermal_lag = 0.0;
    double full_decomposition_alpha = 0.99;
    double max_wait = 86400.0;
    double uv_detect_current = 1e-9;

    const mechanics::MaterialSpec& selected_material() const {
        const auto it = materials.find(material);
        if (it == materials.end()) throw ConfigError("unknown material preset '" + material + "'");
        return it->second;
    }

    void validate() const {
        kinetics.validate();
        for (const auto& [name, m] : materials) m.validate();
        actuator.validate_against(selected_material());
        to_specs().validate();
    }

    mission::MissionSpecs to_specs() const {
        mission::MissionSpecs s;
        s.kinetics = kinetics;
        s.k_photo = k_photo;
        s.coupling.saturation = hf_saturation;
        s.reaction_order = reaction_order;
        s.actuator = actuator;
        s.temp_sensor = temp_sensor;
        s.strain_sensor = strain_sensor;
        s.photodiode = photodiode;
        s.photodiode_bias = photodiode_bias;
        s.health = health;
        s.mobility_threshold = mobility_threshold;
        s.thermal_lag = thermal_lag;
        s.full_decomposition_alpha = full_decomposition_alpha;
        s.max_wait = max_wait;
        s.uv_detect_current = uv_detect_current;
        return s;
    }

    /// Full resolved configuration; feeding it back reproduces this config.
    ini::Document to_document() const {
        using text::format_double;
        ini::Document d;
        auto& k = d.section("kinetics");
        k.set("A_per_s", format_double(kinetics.pre_exponential));
        k.set("Ea_kJ_per_mol", format_double(kinetics.activation_energy_kj()));
        k.set("k_photo_per_s", format_double(k_photo));
        k.set("hf_saturation", format_double(hf_saturation));
        k.set("order", format_double(reaction_order));
        for (const auto& [name, m] : materials) {
            auto& s = d.section("material." + name);
            s.set("modulus_Pa", format_double(m.modulus));
            s.set("elastic_limit_strain", format_double(m.elastic_limit_strain));
            s.set("fracture_strain", format_double(m.fracture_strain));
            s.set("fracture_stress_Pa", format_double(m.fracture_stress));
            s.set("poisson", format_double(m.poisson));
            s.set("density_kg_m3", format_double(m.density));
            s.set("dpi_wt_percent", format_double(m.dpi_wt_percent));
        }
        auto& a = d.section("actuator");
        a.set("reference_pressure_kPa", format_double(actuator.reference_pressure));
        a.set("angle_at_reference_deg", format_double(actuator.angle_at_reference));
        a.set("strain_at_reference", format_double(actuator.strain_at_reference));
        a.set("max_pressure_kPa", format_double(actuator.max_pressure));
        a.set("stride_per_cycle_m", format_double(actuator.stride_per_cycle));
        a.set("cycle_period_s", format_double(actuator.cycle_period));
        if (!actuator.angle_table.empty()) {
            std::string table;
            for (const auto& [p, deg] : actuator.angle_table) {
                if (!table.empty()) table += ", ";
                table += format_double(p) + ":" + format_double(deg);
            }
            a.set("angle_table", table);
        }
        auto& t = d.section("sensor.temp");
        t.set("r0_ohm", format_double(temp_sensor.r0));
        t.set("slope_ohm_per_C", format_double(temp_sensor.slope));
        t.set("t_ref_C", format_double(temp_sensor.t_ref));
        t.set("fail_resistance_ohm", format_double(temp_sensor.fail_resistance));
        auto& st = d.section("sensor.strain");
        st.set("c0_pF", format_double(strain_sensor.c0));
        st.set("swing_pF", format_double(strain_sensor.swing));
        st.set("angle_full_deg", format_double(strain_sensor.angle_full));
        auto& p = d.section("sensor.photo");
        p.set("reverse_A", format_double(photodiode.photo_current_reverse));
        p.set("forward_A", format_double(photodiode.photo_current_forward));
        p.set("dark_A", format_double(photodiode.dark_current));
        p.set("bias_V", format_double(photodiode_bias));
        auto& h = d.section("sensor.health");
        h.set("alpha_degrade", format_double(health.alpha_degrade));
        h.set("alpha_fail", format_double(health.alpha_fail));
        h.set("erratic_amplitude", format_double(health.erratic_amplitude));
        auto& sim = d.section("simulation");
        sim.set("dt_s", format_double(dt));
        sim.set("seed", std::to_string(seed));
        sim.set("material", material);
        sim.set("mobility_threshold", format_double(mobility_threshold));
        sim.set("thermal_lag_s", format_double(thermal_lag));
        sim.set("full_decomposition_alpha", format_double(full_decomposition_alpha));
        sim.set("max_wait_s", format_double(max_wait));
        sim.set("uv_detect_A", format_double(uv_detect_current));
        return d;
    }
};

/// Sections that belong to mission files rather than the run config.
inline bool is_mission_section(const std::string& name) {
    return name == "world" || name == "robot" || name == "script" || name.rfind("zone.", 0) == 0 ||
           name.rfind("alarm.", 0) == 0;
}

inline std::vector<std::pair<double, double>> parse_angle_table(const std::string& s) {
    std::vector<std::pair<double, double>> out;
    for (auto item : text::split(s, ',')) {
        item = text::trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) throw ConfigError("angle_table entries must be 'pressure:angle'");
        const auto p = text::parse_double(item.substr(0, colon));
        const auto a = text::parse_double(item.substr(colon + 1));
        if (!p || !a) throw ConfigError("angle_table entry '" + std::string(item) + "' is not numeric");
        out.emplace_back(*p, *a);
    }
    return out;
}

/// Applies every config section of `doc` on top of `cfg`. Unknown sections
/// or keys are rejected so typos cannot silently fall back to defaults.
inline void apply(RunConfig& cfg, const ini::Document& doc, const std::string& context = "config") {
    for (const auto& sec : doc.sections()) {
        if (is_mission_section(sec.name) || sec.name == "presets") continue;
        ini::SectionReader r(&sec, context);
        if (sec.name == "kinetics") {
            double ea_kj = cfg.kinetics.activation_energy_kj();
            r.read("A_per_s", cfg.kinetics.pre_exponential);
            r.read("Ea_kJ_per_mol", ea_kj);
            cfg.kinetics.activation_energy = ea_kj * 1000.0;
            r.read("k_photo_per_s", cfg.k_photo);
            r.read("hf_saturation", cfg.hf_saturation);
            r.read("order", cfg.reaction_order);
        } else if (sec.name.rfind("material.", 0) == 0) {
            const auto name = sec.name.substr(9);
            auto& m = cfg.materials[name];
            m.name = name;
            r.read("modulus_Pa", m.modulus);
            r.read("elastic_limit_strain", m.elastic_limit_strain);
            r.read("fracture_strain", m.fracture_strain);
            r.read("fracture_stress_Pa", m.fracture_stress);
            r.read("poisson", m.poisson);
            r.read("density_kg_m3", m.density);
            r.read("dpi_wt_percent", m.dpi_wt_percent);
        } else if (sec.name == "actuator") {
            auto& a = cfg.actuator;
            r.read("reference_pressure_kPa", a.reference_pressure);
            r.read("angle_at_reference_deg", a.angle_at_reference);
            r.read("strain_at_reference", a.strain_at_reference);
            r.read("max_pressure_kPa", a.max_pressure);
            r.read("stride_per_cycle_m", a.stride_per_cycle);
            r.read("cycle_period_s", a.cycle_period);
            if (auto table = r.get("angle_table")) a.angle_table = parse_angle_table(*table);
        } else if (sec.name == "sensor.temp") {
            if (auto preset = r.get("preset")) {
                if (*preset == "tcr_main") cfg.temp_sensor = sensors::temp_sensor_tcr_main();
                else if (*preset == "tcr_caption") cfg.temp_sensor = sensors::temp_sensor_tcr_caption();
                else throw ConfigError(context + ": unknown temperature sensor preset '" + *preset + "'");
                cfg.temp_preset = *preset;
            }
            r.read("r0_ohm", cfg.temp_sensor.r0);
            r.read("slope_ohm_per_C", cfg.temp_sensor.slope);
            r.read("t_ref_C", cfg.temp_sensor.t_ref);
            r.read("fail_resistance_ohm", cfg.temp_sensor.fail_resistance);
        } else if (sec.name == "sensor.strain") {
            r.read("c0_pF", cfg.strain_sensor.c0);
            r.read("swing_pF", cfg.strain_sensor.swing);
            r.read("angle_full_deg", cfg.strain_sensor.angle_full);
        } else if (sec.name == "sensor.photo") {
            r.read("reverse_A", cfg.photodiode.photo_current_reverse);
            r.read("forward_A", cfg.photodiode.photo_current_forward);
            r.read("dark_A", cfg.photodiode.dark_current);
            r.read("bias_V", cfg.photodiode_bias);
        } else if (sec.name == "sensor.health") {
            r.read("alpha_degrade", cfg.health.alpha_degrade);
            r.read("alpha_fail", cfg.health.alpha_fail);
            r.read("erratic_amplitude", cfg.health.erratic_amplitude);
        } else if (sec.name == "simulation") {
            r.read("dt_s", cfg.dt);
            r.read("seed", cfg.seed);
            r.read("material", cfg.material);
            r.read("mobility_threshold", cfg.mobility_threshold);
            r.read("thermal_lag_s", cfg.thermal_lag);
            r.read("full_decomposition_alpha", cfg.full_decomposition_alpha);
            r.read("max_wait_s", cfg.max_wait);
            r.read("uv_detect_A", cfg.uv_detect_current);
        } else {
            throw ConfigError(context + ": unknown section [" + sec.name + "]");
        }
        r.finish();
    }
}

inline ini::Document read_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read '" + path.string() + "'");
    try {
        return ini::Document::parse(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    }
}

/// Expands `[presets] load = ...` into a merged document, presets first.
inline ini::Document expand_presets(const ini::Document& doc, const std::filesystem::path& preset_dir) {
    ini::Document merged;
    if (const auto* p = doc.find("presets")) {
        ini::SectionReader r(p, "presets");
        if (auto list = r.get("load")) {
            for (auto name : text::split(*list, ',')) {
                name = text::trim(name);
                if (name.empty()) continue;
                merged.merge(read_document(preset_dir / std::string(name)));
            }
        }
        r.finish();
    }
    merged.merge(doc);
    return merged;
}

}  // namespace transient::config
