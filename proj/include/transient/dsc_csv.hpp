#pragma once

/// @file dsc_csv.hpp
/// @brief DSC trace CSV format.
///
///     # temperature_K=393.15
///     # uv_on=true
///     # label=ecoflex-120C
///     time_s,heat_flow_W
///     0,0.0121
///     ...
///
/// Comment lines may appear anywhere; unknown `key=value` comments are ignored.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "transient/dscfit.hpp"
#include "transient/errors.hpp"
#include "transient/text.hpp"

namespace transient::dscfit {

inline DscTrace read_trace_csv(std::istream& in, const std::string& default_label = {}) {
    DscTrace trace;
    trace.label = default_label;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = text::trim(line);
        if (body.empty()) continue;
        if (body.front() == '#') {
            const auto meta = text::trim(body.substr(1));
            const auto eq = meta.find('=');
            if (eq == std::string_view::npos) continue;
            const auto key = text::trim(meta.substr(0, eq));
            const auto value = text::trim(meta.substr(eq + 1));
            if (key == "temperature_K") {
                const auto v = text::parse_double(value);
                if (!v || !(*v > 0.0)) throw ParseError("invalid temperature_K metadata", line_no);
                trace.temperature_K = *v;
            } else if (key == "uv_on") {
                const auto v = text::parse_bool(value);
                if (!v) throw ParseError("invalid uv_on metadata", line_no);
                trace.uv_on = *v;
            } else if (key == "label") {
                trace.label = std::string(value);
            }
            continue;
        }
        if (!header_seen) {
            const auto cols = text::split(body, ',');
            if (cols.size() != 2 || text::trim(cols[0]) != "time_s" || text::trim(cols[1]) != "heat_flow_W")
                throw ParseError("expected header 'time_s,heat_flow_W'", line_no);
            header_seen = true;
            continue;
        }
        const auto cols = text::split(body, ',');
        if (cols.size() != 2) throw ParseError("expected two columns", line_no);
        const auto t = text::parse_double(cols[0]);
        const auto q = text::parse_double(cols[1]);
        if (!t || !q) throw ParseError("non-numeric sample", line_no);
        if (!trace.time_s.empty() && !(*t > trace.time_s.back()))
            throw ParseError("time_s must be strictly increasing", line_no);
        trace.time_s.push_back(*t);
        trace.heat_flow_W.push_back(*q);
    }
    if (!header_seen) throw ParseError("missing 'time_s,heat_flow_W' header", line_no);
    if (trace.size() < min_trace_samples)
        throw ParseError("trace has " + std::to_string(trace.size()) + " samples; at least " +
                             std::to_string(min_trace_samples) + " required",
                         line_no);
    return trace;
}

inline DscTrace read_trace_csv_string(const std::string& s, const std::string& default_label = {}) {
    std::istringstream in(s);
    return read_trace_csv(in, default_label);
}

inline void write_trace_csv(std::ostream& out, const DscTrace& trace) {
    out << "# temperature_K=" << text::format_double(trace.temperature_K) << '\n';
    out << "# uv_on=" << text::bool_text(trace.uv_on) << '\n';
    if (!trace.label.empty()) out << "# label=" << trace.label << '\n';
    out << "time_s,heat_flow_W\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << text::format_double(trace.time_s[i]) << ',' << text::format_double(trace.heat_flow_W[i]) << '\n';
}

}  // namespace transient::dscfit
