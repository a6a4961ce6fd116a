#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "transient/dsc_csv.hpp"
#include "transient/dscfit.hpp"
#include "transient/errors.hpp"
#include "transient/kinetics.hpp"
#include "transient/mission.hpp"
#include "transient/mission_io.hpp"
#include "transient/run_config.hpp"
#include "transient/text.hpp"

#ifndef TRANSIENT_PRESET_DIR
#define TRANSIENT_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace transient::cli {

namespace {

class IoError : public Error {
public:
    using Error::Error;
};

/// Raised for conditions that map to exit code 3.
class InsufficientData : public Error {
public:
    using Error::Error;
};

struct GlobalOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    std::optional<double> dt;
};

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

/// Writes next to the destination and renames over it.
void write_atomic(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write '" + path.string() + "'");
        f << content;
        f.flush();
        if (!f) throw IoError("write to '" + path.string() + "' failed");
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move '" + tmp.string() + "' into place");
    }
}

json document_to_json(const ini::Document& doc) {
    json j = json::object();
    for (const auto& s : doc.sections()) {
        json sec = json::object();
        for (const auto& e : s.entries) {
            if (const auto v = text::parse_double(e.value); v && e.key != "seed") sec[e.key] = *v;
            else sec[e.key] = e.value;
        }
        if (!s.lines.empty()) {
            auto lines = json::array();
            for (const auto& l : s.lines) lines.push_back(l.text);
            sec["lines"] = std::move(lines);
        }
        j[s.name] = std::move(sec);
    }
    return j;
}

/// Config precedence: built-in defaults < `overlay` (mission file) <
/// --config file (with its [presets] list) < command-line flags.
void require_readable(const fs::path& path, const char* what) {
    if (!std::ifstream(path)) throw IoError(std::string("cannot read ") + what + " '" + path.string() + "'");
}

config::RunConfig resolve_config(const GlobalOptions& g, const ini::Document* overlay = nullptr) {
    config::RunConfig cfg;
    if (overlay) config::apply(cfg, config::expand_presets(*overlay, preset_dir()), "mission");
    if (!g.config.empty()) {
        require_readable(g.config, "config file");
        const auto doc = config::expand_presets(config::read_document(g.config), preset_dir());
        config::apply(cfg, doc, g.config);
    }
    if (g.seed) cfg.seed = *g.seed;
    if (g.dt) cfg.dt = *g.dt;
    cfg.validate();
    return cfg;
}

json summary_header(const std::string& command, const config::RunConfig& cfg) {
    json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["command"] = command;
    j["generated_at"] = utc_timestamp();
    j["config"] = document_to_json(cfg.to_document());
    return j;
}

void write_summary(const fs::path& out_dir, json summary, const config::RunConfig& cfg) {
    write_atomic(out_dir / "summary.json", summary.dump(2) + "\n");
    write_atomic(out_dir / "resolved_config.ini", cfg.to_document().to_string());
}

std::string fmt(double v) { return text::format_double(v); }

/// Resolves a file argument, falling back to the preset directory for bare names.
fs::path locate(const std::string& arg, const char* extension = nullptr) {
    const fs::path p(arg);
    if (fs::exists(p) || p.has_parent_path()) return p;
    if (const auto in_presets = preset_dir() / p; fs::exists(in_presets)) return in_presets;
    if (extension) {
        if (auto with_ext = preset_dir() / p; fs::exists(with_ext.replace_extension(extension))) return with_ext;
    }
    return p;
}

// ---------------------------------------------------------------------------
// fit-dsc

struct FitRow {
    std::string file;
    dscfit::DscTrace trace;
    std::optional<dscfit::FitResult> fit;
    std::string error;
};

int cmd_fit_dsc(const GlobalOptions& g, const std::vector<std::string>& paths, double baseline_window,
                int max_iterations, std::ostream& out) {
    const auto cfg = resolve_config(g);
    std::vector<FitRow> rows;
    for (const auto& p : paths) {
        std::ifstream in(p);
        if (!in) throw IoError("cannot read trace '" + p + "'");
        try {
            rows.push_back({p, dscfit::read_trace_csv(in, fs::path(p).stem().string()), std::nullopt, {}});
        } catch (const ParseError& e) {
            throw ParseError(p + ": " + e.what(), e.line());
        }
    }

    dscfit::FitOptions opts;
    opts.baseline.window_fraction = baseline_window;
    opts.max_iterations = max_iterations;
    // Per-trace fits are independent; run them concurrently, keep input order.
    std::vector<std::future<void>> jobs;
    for (auto& row : rows) {
        jobs.push_back(std::async(std::launch::async, [&row, &opts] {
            try {
                row.fit = dscfit::fit_rate_constant(row.trace, opts);
            } catch (const Error& e) {
                row.error = e.what();
            }
        }));
    }
    for (auto& j : jobs) j.get();

    std::ostringstream csv;
    csv << "label,file,temperature_K,uv_on,k_per_s,total_enthalpy_J,residual_rms_W,iterations,converged,error\n";
    auto table = json::array();
    bool all_ok = true;
    for (const auto& row : rows) {
        const bool ok = row.fit && row.fit->converged;
        all_ok = all_ok && ok;
        json rj;
        rj["label"] = row.trace.label;
        rj["file"] = row.file;
        rj["temperature_K"] = row.trace.temperature_K;
        rj["uv_on"] = row.trace.uv_on;
        if (row.fit) {
            rj["k_per_s"] = row.fit->k;
            rj["total_enthalpy_J"] = row.fit->total_enthalpy;
            rj["residual_rms_W"] = row.fit->residual_rms;
            rj["iterations"] = row.fit->iterations;
            rj["converged"] = row.fit->converged;
            rj["diagnostic"] = row.fit->diagnostic;
        } else {
            rj["converged"] = false;
            rj["error"] = row.error;
        }
        table.push_back(rj);
        std::string err = row.fit ? row.fit->diagnostic : row.error;
        std::replace(err.begin(), err.end(), ',', ';');
        csv << row.trace.label << ',' << row.file << ',' << fmt(row.trace.temperature_K) << ','
            << text::bool_text(row.trace.uv_on) << ',' << (row.fit ? fmt(row.fit->k) : "nan") << ','
            << (row.fit ? fmt(row.fit->total_enthalpy) : "nan") << ','
            << (row.fit ? fmt(row.fit->residual_rms) : "nan") << ',' << (row.fit ? row.fit->iterations : 0) << ','
            << text::bool_text(ok) << ',' << err << '\n';
        out << row.trace.label << ": "
            << (row.fit ? "k = " + fmt(row.fit->k) + " 1/s" + (ok ? "" : " (not converged)") : "error: " + row.error)
            << '\n';
    }

    const fs::path dir(g.out);
    write_atomic(dir / "fit_results.csv", csv.str());
    auto summary = summary_header("fit-dsc", cfg);
    summary["options"] = {{"baseline_window_fraction", baseline_window}, {"max_iterations", max_iterations}};
    summary["fits"] = table;
    summary["all_converged"] = all_ok;
    write_summary(dir, summary, cfg);
    return all_ok ? exit_ok : exit_insufficient_data;
}

// ---------------------------------------------------------------------------
// arrhenius

std::vector<dscfit::ArrheniusPoint> read_fit_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read fit table '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    std::vector<dscfit::ArrheniusPoint> points;
    long col_T = -1, col_k = -1, col_conv = -1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = text::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto cols = text::split(body, ',');
        if (header.empty()) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                header.emplace_back(text::trim(cols[i]));
                if (header.back() == "temperature_K") col_T = static_cast<long>(i);
                if (header.back() == "k_per_s") col_k = static_cast<long>(i);
                if (header.back() == "converged") col_conv = static_cast<long>(i);
            }
            if (col_T < 0 || col_k < 0) throw ParseError(path + ": header needs temperature_K and k_per_s", line_no);
            continue;
        }
        if (cols.size() != header.size()) throw ParseError(path + ": column count differs from header", line_no);
        if (col_conv >= 0) {
            const auto c = text::parse_bool(cols[static_cast<std::size_t>(col_conv)]);
            if (!c) throw ParseError(path + ": bad converged flag", line_no);
            if (!*c) continue;
        }
        const auto T = text::parse_double(cols[static_cast<std::size_t>(col_T)]);
        const auto k = text::parse_double(cols[static_cast<std::size_t>(col_k)]);
        if (!T) throw ParseError(path + ": bad temperature", line_no);
        if (!k || !std::isfinite(*k) || *k <= 0.0) continue;
        points.push_back({*T, *k});
    }
    if (header.empty()) throw ParseError(path + ": empty fit table", line_no);
    return points;
}

int cmd_arrhenius(const GlobalOptions& g, const std::string& table_path, std::ostream& out) {
    const auto cfg = resolve_config(g);
    const auto points = read_fit_table(table_path);
    if (points.size() < 2) throw InsufficientData("need at least two converged fits, found " + std::to_string(points.size()));
    dscfit::ArrheniusFit fit;
    try {
        fit = dscfit::fit_arrhenius(points);
    } catch (const DomainError& e) {
        throw InsufficientData(e.what());
    }

    std::ostringstream csv;
    csv << "inv_temperature_per_K,ln_k,fitted_ln_k,temperature_K,k_per_s\n";
    const double ln_a = std::log(fit.params.pre_exponential);
    auto pts = json::array();
    for (const auto& p : fit.points) {
        const double x = 1.0 / p.temperature_K;
        csv << fmt(x) << ',' << fmt(std::log(p.k)) << ','
            << fmt(ln_a - fit.params.activation_energy / kinetics::gas_constant * x) << ',' << fmt(p.temperature_K)
            << ',' << fmt(p.k) << '\n';
        pts.push_back({{"temperature_K", p.temperature_K}, {"k_per_s", p.k}});
    }
    const fs::path dir(g.out);
    write_atomic(dir / "arrhenius_plot.csv", csv.str());
    auto summary = summary_header("arrhenius", cfg);
    summary["input"] = table_path;
    summary["A_per_s"] = fit.params.pre_exponential;
    summary["Ea_J_per_mol"] = fit.params.activation_energy;
    summary["Ea_kJ_per_mol"] = fit.params.activation_energy_kj();
    summary["r_squared"] = fit.r_squared;
    summary["points"] = pts;
    write_summary(dir, summary, cfg);
    out << "A = " << fmt(fit.params.pre_exponential) << " 1/s, Ea = " << fmt(fit.params.activation_energy_kj())
        << " kJ/mol, r^2 = " << fmt(fit.r_squared) << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------------------
// predict

/// Schedule CSV: header `duration_s,temperature_K,uv_on` (or temperature_C).
kinetics::ExposureSchedule read_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read schedule '" + path + "'");
    kinetics::ExposureSchedule s;
    std::string line;
    std::size_t line_no = 0;
    bool header = false, celsius = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = text::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto cols = text::split(body, ',');
        if (cols.size() != 3) throw ParseError(path + ": expected three columns", line_no);
        if (!header) {
            if (text::trim(cols[0]) != "duration_s" || text::trim(cols[2]) != "uv_on")
                throw ParseError(path + ": expected header duration_s,temperature_K,uv_on", line_no);
            const auto tcol = text::trim(cols[1]);
            if (tcol == "temperature_C") celsius = true;
            else if (tcol != "temperature_K") throw ParseError(path + ": unknown temperature column", line_no);
            header = true;
            continue;
        }
        const auto d = text::parse_double(cols[0]);
        const auto t = text::parse_double(cols[1]);
        const auto uv = text::parse_bool(cols[2]);
        if (!d || !t || !uv) throw ParseError(path + ": malformed schedule row", line_no);
        s.segments.push_back({*d, celsius ? *t + mission::kelvin_offset : *t, *uv});
    }
    if (!header) throw ParseError(path + ": missing header", line_no);
    return s;
}

std::optional<double> first_crossing(const std::vector<kinetics::ConversionSample>& series, double target) {
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i].alpha >= target) {
            const auto& a = series[i - 1];
            const auto& b = series[i];
            if (a.alpha >= target) return a.t;
            return a.t + (b.t - a.t) * (target - a.alpha) / (b.alpha - a.alpha);
        }
    }
    if (!series.empty() && series.front().alpha >= target) return series.front().t;
    return std::nullopt;
}

int cmd_predict(const GlobalOptions& g, const std::string& schedule_path, std::optional<double> a_override,
                std::optional<double> ea_kj_override, bool fully_triggered, double initial_hf, std::ostream& out) {
    auto gg = g;
    const bool dt_given = g.dt.has_value();
    gg.dt.reset();
    auto cfg = resolve_config(gg);
    if (a_override) cfg.kinetics.pre_exponential = *a_override;
    if (ea_kj_override) cfg.kinetics.activation_energy = *ea_kj_override * 1000.0;
    cfg.kinetics.validate();

    const auto schedule = read_schedule(locate(schedule_path).string());
    schedule.validate();
    const double dt = dt_given ? *g.dt : std::min(cfg.dt, schedule.min_duration());
    cfg.dt = dt;

    kinetics::PhotolysisState photo{1.0, initial_hf, cfg.k_photo};
    kinetics::IntegrationOptions opts;
    opts.coupling = {cfg.hf_saturation, fully_triggered};
    opts.order = cfg.reaction_order;
    const auto series = kinetics::integrate_conversion(schedule, cfg.kinetics, photo, dt, opts);

    std::ostringstream csv;
    csv << "t,alpha,hf_fraction\n";
    for (const auto& s : series) csv << fmt(s.t) << ',' << fmt(s.alpha) << ',' << fmt(s.hf_fraction) << '\n';
    const fs::path dir(g.out);
    write_atomic(dir / "conversion.csv", csv.str());

    auto summary = summary_header("predict", cfg);
    summary["schedule"] = schedule_path;
    summary["options"] = {{"fully_triggered", fully_triggered}, {"initial_hf_fraction", initial_hf}, {"dt_s", dt}};
    json targets = json::object();
    for (double target : {0.5, 0.9, 0.95, 0.99}) {
        const auto t = first_crossing(series, target);
        targets[fmt(target)] = t ? json(*t) : json(nullptr);
        out << "t(alpha=" << fmt(target) << ") = " << (t ? fmt(*t) + " s" : std::string("not reached")) << '\n';
    }
    summary["time_to_alpha_s"] = targets;
    summary["final_alpha"] = series.back().alpha;
    summary["final_hf_fraction"] = series.back().hf_fraction;
    write_summary(dir, summary, cfg);
    return exit_ok;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const GlobalOptions& g, const std::string& mission_arg, std::ostream& out) {
    const auto path = locate(mission_arg, ".mission");
    require_readable(path, "mission file");
    const auto mf = mission::read_mission_file(path);
    const auto cfg = resolve_config(g, &mf.overlay);
    auto specs = cfg.to_specs();
    specs.alarms = mf.alarms;
    const auto robot0 = mission::RobotState::at(mf.start_position, specs);
    const auto result = mission::run(mf.world, mf.script, robot0, specs, cfg.dt, cfg.seed);

    std::ostringstream jsonl, events, csv;
    mission::write_telemetry_jsonl(jsonl, result.records);
    mission::write_events_jsonl(events, result.records);
    mission::write_telemetry_csv(csv, result.records);
    const fs::path dir(g.out);
    write_atomic(dir / "telemetry.jsonl", jsonl.str());
    write_atomic(dir / "events.jsonl", events.str());
    write_atomic(dir / "telemetry.csv", csv.str());

    auto summary = summary_header("simulate", cfg);
    summary["mission"] = path.string();
    summary["run_header"] = mission::to_json(result.header);
    summary["steps"] = result.records.size();
    summary["simulated_time_s"] = result.simulated_time();
    summary["terminal_event"] = result.terminal_event;
    const auto& fs_ = result.final_state;
    summary["final_state"] = {{"position", fs_.position()},
                              {"alpha", fs_.alpha},
                              {"hf_fraction", fs_.hf_fraction},
                              {"operational", fs_.operational},
                              {"clock_s", fs_.clock}};
    auto ev = json::array();
    for (const auto& r : result.records)
        for (const auto& e : r.events) ev.push_back({{"t", r.t}, {"kind", e.kind}, {"message", e.message}});
    summary["events"] = ev;
    write_summary(dir, summary, cfg);

    out << "terminal event: " << result.terminal_event << " at t = " << fmt(result.simulated_time())
        << " s, alpha = " << fmt(fs_.alpha) << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
    std::optional<double> k;
    std::vector<double> temperatures_C;
    double enthalpy = 10.0;
    std::optional<double> t_end;
    double noise = 0.0;
    double temperature_C = 25.0;
    bool no_uv = false;
    std::string label;
    std::string file;
};

int cmd_synth(const GlobalOptions& g, const SynthArgs& a, std::ostream& out) {
    auto gg = g;
    gg.dt.reset();
    auto cfg = resolve_config(gg);
    if (a.k && !a.temperatures_C.empty()) throw DomainError("give either --k or --temperatures-C, not both");

    struct Job {
        double k;
        double temperature_K;
        std::string label;
        fs::path file;
    };
    std::vector<Job> jobs;
    const fs::path dir(g.out);
    if (!a.temperatures_C.empty()) {
        for (double c : a.temperatures_C) {
            const double T = c + mission::kelvin_offset;
            const auto name = "synth_" + fmt(c) + "C";
            jobs.push_back({kinetics::arrhenius_rate(cfg.kinetics, T).per_second(), T, name, dir / (name + ".csv")});
        }
    } else {
        const double T = a.temperature_C + mission::kelvin_offset;
        const double k = a.k ? *a.k : kinetics::arrhenius_rate(cfg.kinetics, T).per_second();
        const auto label = a.label.empty() ? std::string("synthetic") : a.label;
        jobs.push_back({k, T, label, a.file.empty() ? dir / (label + ".csv") : fs::path(a.file)});
    }

    auto files = json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& j = jobs[i];
        const double t_end = a.t_end ? *a.t_end : 10.0 / j.k;
        const double dt = g.dt ? *g.dt : t_end / 1000.0;
        dscfit::SynthOptions so;
        so.noise_fraction = a.noise;
        so.seed = cfg.seed + i;
        so.temperature_K = j.temperature_K;
        so.uv_on = !a.no_uv;
        so.label = j.label;
        const auto trace = dscfit::synthesize_trace(j.k, a.enthalpy, {dt, t_end}, so);
        std::ostringstream s;
        dscfit::write_trace_csv(s, trace);
        write_atomic(j.file, s.str());
        files.push_back({{"file", j.file.string()},
                         {"label", j.label},
                         {"k_per_s", j.k},
                         {"temperature_K", j.temperature_K},
                         {"total_enthalpy_J", a.enthalpy},
                         {"dt_s", dt},
                         {"t_end_s", t_end},
                         {"noise_fraction", a.noise},
                         {"seed", so.seed}});
        out << "wrote " << j.file.string() << " (k = " << fmt(j.k) << " 1/s)\n";
    }
    if (a.file.empty()) {
        auto summary = summary_header("synth", cfg);
        summary["traces"] = files;
        write_summary(dir, summary, cfg);
    }
    return exit_ok;
}

}  // namespace

fs::path preset_dir() {
    if (const char* env = std::getenv("TRANSIENT_KINETICS_PRESETS"); env && *env) return env;
    return TRANSIENT_PRESET_DIR;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decomposition kinetics and lifecycle simulation for UV-triggered transient silicones",
                 tool_name};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    GlobalOptions g;
    std::uint64_t seed = 0;
    double dt = 0.0;
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (u64)");
    auto* dt_opt = app.add_option("--dt", dt, "Time step / sampling interval [s]")->check(CLI::PositiveNumber);
    app.add_option("--config", g.config, "Config file (sectioned key = value)");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();

    std::vector<std::string> traces;
    double baseline_window = 0.05;
    int max_iterations = 200;
    auto* fit = app.add_subcommand("fit-dsc", "Fit first-order rate constants to isothermal DSC traces");
    fit->add_option("traces", traces, "DSC trace CSV files")->required();
    fit->add_option("--baseline-window", baseline_window, "Trailing fraction used as baseline (0 disables)")
        ->capture_default_str();
    fit->add_option("--max-iterations", max_iterations)->capture_default_str();

    std::string table;
    auto* arr = app.add_subcommand("arrhenius", "Regress Arrhenius parameters from a fit table");
    arr->add_option("fit_table", table, "fit_results.csv from fit-dsc")->required();

    std::string schedule;
    double a_param = 0.0, ea_param = 0.0, initial_hf = 0.0;
    bool fully_triggered = false;
    auto* pred = app.add_subcommand("predict", "Predict conversion under a time/temperature/UV schedule");
    pred->add_option("--schedule", schedule, "Schedule CSV (duration_s,temperature_K,uv_on)")->required();
    auto* a_opt = pred->add_option("--A", a_param, "Pre-exponential factor [1/s]");
    auto* ea_opt = pred->add_option("--Ea-kJ", ea_param, "Activation energy [kJ/mol]");
    pred->add_flag("--fully-triggered", fully_triggered, "Treat the sample as fully photolyzed (g = 1)");
    pred->add_option("--initial-hf", initial_hf, "Initial photolyzed fraction")->check(CLI::Range(0.0, 1.0));

    std::string mission_path;
    auto* sim = app.add_subcommand("simulate", "Replay a mission script");
    sim->add_option("mission", mission_path, "Mission file (or a bundled preset name)")->required();

    SynthArgs sa;
    double k_arg = 0.0, t_end = 0.0;
    auto* syn = app.add_subcommand("synth", "Write synthetic DSC traces");
    auto* k_opt = syn->add_option("--k", k_arg, "Rate constant [1/s]");
    syn->add_option("--temperatures-C", sa.temperatures_C, "Generate one trace per hold temperature")->delimiter(',');
    syn->add_option("--enthalpy", sa.enthalpy, "Total enthalpy [J]")->capture_default_str();
    auto* tend_opt = syn->add_option("--t-end", t_end, "Record length [s] (default 10/k)");
    syn->add_option("--noise", sa.noise, "Gaussian noise sigma relative to peak")->capture_default_str();
    syn->add_option("--temperature-C", sa.temperature_C, "Hold temperature [degC]")->capture_default_str();
    syn->add_flag("--no-uv", sa.no_uv, "Mark the trace as recorded without UV");
    syn->add_option("--label", sa.label);
    syn->add_option("--file", sa.file, "Output file (default <out>/<label>.csv)");

    std::vector<std::string> argv_store{tool_name};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input_error;
    }
    if (*seed_opt) g.seed = seed;
    if (*dt_opt) g.dt = dt;

    try {
        if (*fit) return cmd_fit_dsc(g, traces, baseline_window, max_iterations, out);
        if (*arr) return cmd_arrhenius(g, table, out);
        if (*pred)
            return cmd_predict(g, schedule, *a_opt ? std::optional(a_param) : std::nullopt,
                               *ea_opt ? std::optional(ea_param) : std::nullopt, fully_triggered, initial_hf, out);
        if (*sim) return cmd_simulate(g, mission_path, out);
        if (*syn) {
            if (*k_opt) sa.k = k_arg;
            if (*tend_opt) sa.t_end = t_end;
            return cmd_synth(g, sa, out);
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_io_error;
    } catch (const InsufficientData& e) {
        err << "error: " << e.what() << '\n';
        return exit_insufficient_data;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_io_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    return exit_input_error;
}

}  // namespace transient::cli
