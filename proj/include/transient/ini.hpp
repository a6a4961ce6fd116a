#pragma once

/// @file ini.hpp
/// @brief Sectioned key-value text used by calibration, config and mission files.
///
///     # comment
///     [section.name]
///     key = value        # trailing comment
///
/// Sections listed in `raw_sections` (e.g. `script`) keep their non-comment
/// lines verbatim and in order instead of splitting them into keys.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "transient/errors.hpp"
#include "transient/text.hpp"

namespace transient::ini {

struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

struct RawLine {
    std::string text;
    std::size_t line = 0;
};

struct Section {
    std::string name;
    std::vector<Entry> entries;
    std::vector<RawLine> lines;

    const Entry* find(std::string_view key) const {
        for (const auto& e : entries)
            if (e.key == key) return &e;
        return nullptr;
    }

    void set(const std::string& key, const std::string& value) {
        for (auto& e : entries)
            if (e.key == key) {
                e.value = value;
                return;
            }
        entries.push_back({key, value, 0});
    }
};

class Document {
public:
    static Document parse(std::istream& in, const std::set<std::string>& raw_sections = {"script"}) {
        Document doc;
        std::string line;
        std::size_t line_no = 0;
        Section* current = nullptr;
        while (std::getline(in, line)) {
            ++line_no;
            auto body = text::trim(line);
            if (body.empty() || body.front() == '#' || body.front() == ';') continue;
            body = strip_comment(body);
            if (body.front() == '[') {
                if (body.back() != ']') throw ParseError("unterminated section header", line_no);
                const auto name = text::trim(body.substr(1, body.size() - 2));
                if (name.empty()) throw ParseError("empty section name", line_no);
                if (doc.find(name)) throw ParseError("duplicate section [" + std::string(name) + "]", line_no);
                doc.sections_.push_back({std::string(name), {}, {}});
                current = &doc.sections_.back();
                continue;
            }
            if (!current) throw ParseError("content before the first section header", line_no);
            if (raw_sections.count(current->name)) {
                current->lines.push_back({std::string(body), line_no});
                continue;
            }
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
            const auto key = text::trim(body.substr(0, eq));
            if (key.empty()) throw ParseError("empty key", line_no);
            if (current->find(key))
                throw ParseError("duplicate key '" + std::string(key) + "' in [" + current->name + "]", line_no);
            current->entries.push_back({std::string(key), std::string(text::trim(body.substr(eq + 1))), line_no});
        }
        return doc;
    }

    static Document parse_string(const std::string& s, const std::set<std::string>& raw_sections = {"script"}) {
        std::istringstream in(s);
        return parse(in, raw_sections);
    }

    const Section* find(std::string_view name) const {
        for (const auto& s : sections_)
            if (s.name == name) return &s;
        return nullptr;
    }

    Section& section(const std::string& name) {
        for (auto& s : sections_)
            if (s.name == name) return s;
        sections_.push_back({name, {}, {}});
        return sections_.back();
    }

    const std::vector<Section>& sections() const { return sections_; }

    /// Sections whose name starts with `prefix` followed by a dot.
    std::vector<const Section*> with_prefix(std::string_view prefix) const {
        std::vector<const Section*> out;
        for (const auto& s : sections_)
            if (s.name.size() > prefix.size() + 1 && std::string_view(s.name).substr(0, prefix.size()) == prefix &&
                s.name[prefix.size()] == '.')
                out.push_back(&s);
        return out;
    }

    /// Overlays `other`: its keys replace ours, raw lines replace wholesale.
    void merge(const Document& other) {
        for (const auto& s : other.sections_) {
            auto& mine = section(s.name);
            for (const auto& e : s.entries) mine.set(e.key, e.value);
            if (!s.lines.empty()) mine.lines = s.lines;
        }
    }

    void write(std::ostream& out) const {
        bool first = true;
        for (const auto& s : sections_) {
            if (!first) out << '\n';
            first = false;
            out << '[' << s.name << "]\n";
            for (const auto& e : s.entries) out << e.key << " = " << e.value << '\n';
            for (const auto& l : s.lines) out << l.text << '\n';
        }
    }

    std::string to_string() const {
        std::ostringstream out;
        write(out);
        return out.str();
    }

private:
    static std::string_view strip_comment(std::string_view body) {
        for (std::size_t i = 1; i < body.size(); ++i)
            if ((body[i] == '#' || body[i] == ';') && (body[i - 1] == ' ' || body[i - 1] == '\t'))
                return text::trim(body.substr(0, i));
        return body;
    }

    std::vector<Section> sections_;
};

/// Typed reads from one section that reject keys nobody asked for.
class SectionReader {
public:
    SectionReader(const Section* section, std::string context)
        : section_(section), context_(std::move(context)) {}

    bool present() const { return section_ != nullptr; }

    void read(std::string_view key, double& target) {
        if (const auto* e = entry(key)) {
            const auto v = text::parse_double(e->value);
            if (!v) throw ConfigError(where(*e) + ": '" + std::string(key) + "' is not a number");
            target = *v;
        }
    }

    void read(std::string_view key, bool& target) {
        if (const auto* e = entry(key)) {
            const auto v = text::parse_bool(e->value);
            if (!v) throw ConfigError(where(*e) + ": '" + std::string(key) + "' is not a boolean");
            target = *v;
        }
    }

    void read(std::string_view key, std::string& target) {
        if (const auto* e = entry(key)) target = e->value;
    }

    void read(std::string_view key, std::uint64_t& target) {
        if (const auto* e = entry(key)) {
            std::uint64_t v = 0;
            const auto s = text::trim(e->value);
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
                throw ConfigError(where(*e) + ": '" + std::string(key) + "' is not an unsigned 64-bit integer");
            target = v;
        }
    }

    std::optional<std::string> get(std::string_view key) {
        if (const auto* e = entry(key)) return e->value;
        return std::nullopt;
    }

    /// Throws on any key that was never read.
    void finish() const {
        if (!section_) return;
        for (const auto& e : section_->entries)
            if (!used_.count(e.key)) throw ConfigError(where(e) + ": unknown key '" + e.key + "'");
    }

private:
    const Entry* entry(std::string_view key) {
        if (!section_) return nullptr;
        used_.insert(std::string(key));
        return section_->find(key);
    }

    std::string where(const Entry& e) const {
        return context_ + " [" + section_->name + "]" + (e.line ? " line " + std::to_string(e.line) : "");
    }

    const Section* section_;
    std::string context_;
    std::set<std::string> used_;
};

}  // namespace transient::ini
