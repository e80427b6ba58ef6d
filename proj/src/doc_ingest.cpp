// SPDX-License-Identifier: Apache-2.0
#include "assertforge/doc_ingest.hpp"

#include "assertforge/fsio.hpp"
#include "assertforge/text.hpp"
#include "assertforge/waveform.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <set>

namespace assertforge::ingest {

const char* to_string(SectionKind k) {
    switch (k) {
        case SectionKind::Introduction: return "introduction";
        case SectionKind::IoPorts: return "io_ports";
        case SectionKind::Registers: return "registers";
        case SectionKind::Operation: return "operation";
        case SectionKind::Architecture: return "architecture";
        case SectionKind::Usage: return "usage";
        case SectionKind::Waveform: return "waveform";
        case SectionKind::Other: return "other";
    }
    return "?";
}

// ---- heading classification ----

static std::vector<std::string> heading_words(const std::string& title) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : title) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += (char)std::tolower(static_cast<unsigned char>(c));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// "port" matches the word "Ports": the heading word must start with the
// keyword word. Multi-word keywords match consecutive heading words.
static bool keyword_hits(const std::vector<std::string>& words, const std::string& keyword) {
    auto kw = heading_words(keyword);
    if (kw.empty() || kw.size() > words.size()) return false;
    for (size_t i = 0; i + kw.size() <= words.size(); ++i) {
        bool all = true;
        for (size_t j = 0; j < kw.size() && all; ++j)
            all = words[i + j].rfind(kw[j], 0) == 0;
        if (all) return true;
    }
    return false;
}

SectionKind classify_heading(const std::string& title) {
    static const std::vector<std::pair<SectionKind, std::vector<std::string>>> kTable = {
        {SectionKind::Introduction, {"introduction", "overview", "features"}},
        {SectionKind::IoPorts, {"io", "port", "interface"}},
        {SectionKind::Registers, {"register"}},
        {SectionKind::Operation, {"operation", "protocol", "behavior"}},
        {SectionKind::Architecture, {"architecture", "block diagram"}},
        {SectionKind::Usage, {"usage", "example"}},
        {SectionKind::Waveform, {"waveform", "timing"}},
    };
    auto words = heading_words(title);
    for (const auto& [kind, keywords] : kTable)
        for (const auto& kw : keywords)
            if (keyword_hits(words, kw)) return kind;
    return SectionKind::Other;
}

// ---- section splitting ----

static bool is_atx_heading(const std::string& line) {
    return !line.empty() && line[0] == '#';
}

// Plain-text fallback: a line in ALL CAPS with <= 8 words. Needs at least
// one uppercase letter and no lowercase ones.
static bool is_caps_heading(const std::string& line) {
    bool has_upper = false;
    for (char c : line) {
        if (std::islower(static_cast<unsigned char>(c))) return false;
        if (std::isupper(static_cast<unsigned char>(c))) has_upper = true;
    }
    if (!has_upper) return false;
    int words = 0;
    bool in_word = false;
    for (char c : line) {
        bool w = !std::isspace(static_cast<unsigned char>(c));
        if (w && !in_word) ++words;
        in_word = w;
    }
    return words >= 1 && words <= 8;
}

static std::string heading_title(const std::string& line) {
    size_t i = 0;
    while (i < line.size() && line[i] == '#') ++i;
    return text::trim(line.substr(i));
}

std::vector<Section> split_sections(const std::string& body) {
    // cut into raw lines, keeping the line terminators
    std::vector<std::string> raw;
    std::string cur;
    for (char c : body) {
        cur += c;
        if (c == '\n') {
            raw.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) raw.push_back(std::move(cur));

    auto bare = [](const std::string& line_raw) {
        std::string line = line_raw;
        while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
        return line;
    };

    // ALL-CAPS cuts are a fallback for plain-text bundles: once a document
    // uses ATX headings, only those delimit sections.
    bool has_atx = false;
    for (const auto& line_raw : raw)
        if (is_atx_heading(bare(line_raw))) { has_atx = true; break; }

    std::vector<Section> out;
    Section pre;  // content before the first heading
    Section* open = nullptr;
    for (const auto& line_raw : raw) {
        std::string line = bare(line_raw);
        bool cut = has_atx ? is_atx_heading(line) : is_caps_heading(line);
        if (cut) {
            Section s;
            s.title = is_atx_heading(line) ? heading_title(line) : text::trim(line);
            s.kind = classify_heading(s.title);
            s.heading_raw = line_raw;
            out.push_back(std::move(s));
            open = &out.back();
        } else if (open) {
            open->body += line_raw;
        } else {
            pre.body += line_raw;
        }
    }
    if (!pre.body.empty() || out.empty()) out.insert(out.begin(), std::move(pre));
    return out;
}

// ---- signals.json ----

std::vector<SignalDefinition> parse_signals(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedSignals("$", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw MalformedSignals("$", "expected a top-level array");
    std::vector<SignalDefinition> out;
    std::set<std::string> seen;
    for (size_t i = 0; i < j.size(); ++i) {
        const auto& row = j[i];
        std::string at = "[" + std::to_string(i) + "]";
        if (!row.is_object()) throw MalformedSignals(at, "expected an object");
        SignalDefinition d;
        if (!row.contains("name") || !row["name"].is_string())
            throw MalformedSignals(at + ".name", "expected a string");
        d.name = row["name"].get<std::string>();
        if (!text::is_identifier(d.name))
            throw MalformedSignals(at + ".name", "\"" + d.name + "\" is not an identifier");
        if (!row.contains("width") || !row["width"].is_number_integer())
            throw MalformedSignals(at + ".width", "expected an integer");
        d.width = row["width"].get<int>();
        if (d.width < 1) throw MalformedSignals(at + ".width", "must be >= 1");
        if (!row.contains("kind") || !row["kind"].is_string())
            throw MalformedSignals(at + ".kind", "expected a string");
        auto kind = signal_kind_from(row["kind"].get<std::string>());
        if (!kind)
            throw MalformedSignals(at + ".kind",
                                   "unknown kind \"" + row["kind"].get<std::string>() + "\"");
        d.kind = *kind;
        if (!row.contains("hierarchy") || !row["hierarchy"].is_string())
            throw MalformedSignals(at + ".hierarchy", "expected a string");
        auto hier = hierarchy_from(row["hierarchy"].get<std::string>());
        if (!hier)
            throw MalformedSignals(at + ".hierarchy", "unknown hierarchy \"" +
                                                          row["hierarchy"].get<std::string>() +
                                                          "\"");
        d.hierarchy = *hier;
        if (!seen.insert(d.name).second) throw DuplicateSignal(d.name);
        out.push_back(std::move(d));
    }
    return out;
}

std::string signals_to_json(const std::vector<SignalDefinition>& defs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& d : defs) {
        nlohmann::ordered_json row;
        row["name"] = d.name;
        row["width"] = d.width;
        row["kind"] = to_string(d.kind);
        row["hierarchy"] = to_string(d.hierarchy);
        arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
}

// ---- bundle ----

Bundle load_bundle(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    Bundle b;

    fs::path spec = dir / "spec.md";
    if (!fs::is_regular_file(spec)) spec = dir / "spec.txt";
    if (!fs::is_regular_file(spec))
        throw MissingFile((dir / "spec.md").string() + " (or spec.txt)");
    b.doc.source_path = spec;
    b.doc.sections = split_sections(fsio::read_file(spec));

    fs::path sigs = dir / "signals.json";
    if (!fs::is_regular_file(sigs)) throw MissingFile(sigs.string());
    b.signals = parse_signals(fsio::read_file(sigs));

    fs::path wdir = dir / "waveforms";
    if (fs::is_directory(wdir)) {
        for (const auto& p : fsio::list_files(wdir, {".json"})) {
            WaveformAttachment a;
            a.id = p.stem().string();
            a.kind = WaveformAttachment::Kind::TimingJson;
            a.payload = fsio::read_file_bytes(p);
            auto d = wave::parse_timing(std::string(a.payload.begin(), a.payload.end()));
            wave::check_signals(d, b.signals);
            for (const auto& lane : d.signals) a.referenced_signals.push_back(lane.name);
            b.doc.waveforms.push_back(std::move(a));
        }
        for (const auto& p : fsio::list_files(wdir, {".png", ".jpg"})) {
            WaveformAttachment a;
            a.id = p.stem().string();
            a.kind = WaveformAttachment::Kind::ImageOpaque;
            a.payload = fsio::read_file_bytes(p);
            b.doc.waveforms.push_back(std::move(a));
        }
    }
    return b;
}

} // namespace assertforge::ingest
