// SPDX-License-Identifier: Apache-2.0
#include "assertforge/waveform.hpp"

#include "assertforge/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <set>

namespace assertforge::wave {

const Lane* TimingDiagram::find(const std::string& name) const {
    for (const auto& l : signals)
        if (l.name == name) return &l;
    return nullptr;
}

// ---- diagram ----

static std::vector<Symbol> parse_wave(const std::string& w, const std::string& name) {
    std::vector<Symbol> out;
    size_t i = 0;
    while (i < w.size()) {
        char c = w[i];
        Symbol s;
        switch (c) {
        case '0': s.kind = Symbol::Kind::Zero; ++i; break;
        case '1': s.kind = Symbol::Kind::One; ++i; break;
        case 'x': s.kind = Symbol::Kind::X; ++i; break;
        case 'z': s.kind = Symbol::Kind::Z; ++i; break;
        case '.': s.kind = Symbol::Kind::Hold; ++i; break;
        case '=': {
            size_t start = i + 1, j = start;
            while (j < w.size() && std::isdigit(static_cast<unsigned char>(w[j]))) ++j;
            if (j == start || j == w.size() || w[j] != ';')
                throw MalformedTiming("signal \"" + name + "\": bus token must be \"=<int>;\"");
            s.kind = Symbol::Kind::Bus;
            s.bus = std::stoull(w.substr(start, j - start));
            i = j + 1;
            break;
        }
        default:
            throw MalformedTiming("signal \"" + name + "\": bad wave symbol '" +
                                  std::string(1, c) + "'");
        }
        out.push_back(s);
    }
    return out;
}

TimingDiagram parse_timing(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedTiming(e.what());
    }
    if (!j.is_object()) throw MalformedTiming("expected a top-level object");
    if (!j.contains("cycles") || !j["cycles"].is_number_integer())
        throw MalformedTiming("\"cycles\" must be an integer");
    TimingDiagram d;
    d.cycles = j["cycles"].get<int>();
    if (d.cycles <= 0) throw MalformedTiming("\"cycles\" must be positive");
    if (!j.contains("signals") || !j["signals"].is_array())
        throw MalformedTiming("\"signals\" must be an array");
    std::set<std::string> seen;
    for (const auto& row : j["signals"]) {
        if (!row.is_object() || !row.contains("name") || !row["name"].is_string() ||
            !row.contains("wave") || !row["wave"].is_string())
            throw MalformedTiming("each signal needs \"name\" and \"wave\" strings");
        Lane l;
        l.name = row["name"].get<std::string>();
        if (!text::is_identifier(l.name))
            throw MalformedTiming("signal name \"" + l.name + "\" is not an identifier");
        if (!seen.insert(l.name).second)
            throw MalformedTiming("duplicate signal \"" + l.name + "\"");
        l.symbols = parse_wave(row["wave"].get<std::string>(), l.name);
        if ((int)l.symbols.size() != d.cycles)
            throw MalformedTiming("signal \"" + l.name + "\": wave has " +
                                  std::to_string(l.symbols.size()) + " symbols, expected " +
                                  std::to_string(d.cycles));
        d.signals.push_back(std::move(l));
    }
    return d;
}

std::vector<Symbol> expand_lane(const std::vector<Symbol>& lane) {
    if (lane.empty() || lane.front().kind == Symbol::Kind::Hold) throw LeadingHold();
    std::vector<Symbol> out;
    out.reserve(lane.size());
    for (const auto& s : lane)
        out.push_back(s.kind == Symbol::Kind::Hold ? out.back() : s);
    return out;
}

void check_signals(const TimingDiagram& d, const std::vector<SignalDefinition>& defs) {
    for (const auto& l : d.signals)
        if (!find_signal(defs, l.name))
            throw Error("timing diagram lane \"" + l.name + "\" is not a declared signal");
}

// ---- templates ----

std::vector<BehaviorTemplate> builtin_templates() {
    return {
        {"response-latency", "When {{SIG}} is asserted, {{SIG2}} becomes valid within {{N}} cycles"},
        {"stability", "{{SIG}} remains stable for {{N}} cycles"},
        {"edge-cause", "A rising edge on {{SIG}} causes {{SIG2}} to change in the next cycle"},
        {"mutual-exclusion", "{{SIG}} and {{SIG2}} are never asserted in the same cycle"},
        {"value-hold", "{{SIG}} holds value {{VAL}} while {{SIG2}} is high"},
    };
}

static bool known_slot(const std::string& s) {
    return s == "SIG" || s == "SIG2" || s == "N" || s == "VAL";
}

// Complete {{...}} occurrences, in order.
static std::vector<std::string> slots_of(const std::string& pattern) {
    std::vector<std::string> out;
    size_t i = 0;
    while ((i = pattern.find("{{", i)) != std::string::npos) {
        size_t e = pattern.find("}}", i + 2);
        if (e == std::string::npos) break;
        out.push_back(pattern.substr(i + 2, e - i - 2));
        i = e + 2;
    }
    return out;
}

static std::string strip_bullet(std::string s) {
    s = text::trim(s);
    if (s.size() >= 2 && (s[0] == '-' || s[0] == '*') && s[1] == ' ') return text::trim(s.substr(2));
    size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) return text::trim(s.substr(i + 1));
    return s;
}

ParsedTemplates parse_templates(const std::string& response) {
    ParsedTemplates out;
    int n = 0;
    for (const auto& raw : text::split_lines(response)) {
        std::string line = strip_bullet(raw);
        if (line.size() >= 2 && line.front() == '"' && line.back() == '"')
            line = text::trim(line.substr(1, line.size() - 2));
        auto slots = slots_of(line);
        if (slots.empty()) continue;  // prose
        std::string bad;
        for (const auto& s : slots)
            if (!known_slot(s)) { bad = s; break; }
        if (!bad.empty()) {
            out.warnings.push_back("dropped template with undefined slot {{" + bad + "}}: " + line);
            continue;
        }
        out.templates.push_back({"t" + std::to_string(++n), line});
    }
    if (out.templates.empty()) throw NoTemplates();
    if (out.templates.size() < 3)
        out.warnings.push_back("fewer than 3 templates parsed; keeping what we have");
    return out;
}

// ---- local describer ----

RuleKind classify_template(const BehaviorTemplate& t) {
    std::set<std::string> s;
    for (const auto& name : slots_of(t.pattern)) s.insert(name);
    if (s == std::set<std::string>{"SIG", "SIG2", "N"}) return RuleKind::Latency;
    if (s == std::set<std::string>{"SIG", "N"}) return RuleKind::Stability;
    if (s == std::set<std::string>{"SIG", "SIG2", "VAL"}) return RuleKind::ValueHold;
    if (s == std::set<std::string>{"SIG", "SIG2"}) {
        std::string low = text::lower(t.pattern);
        if (low.find("never") != std::string::npos) return RuleKind::Mutex;
        if (low.find("edge") != std::string::npos || low.find("change") != std::string::npos)
            return RuleKind::EdgeCause;
    }
    return RuleKind::Unknown;
}

namespace {

// Concrete (hold-expanded) per-cycle view of a lane.
struct Conc {
    std::string name;
    std::vector<Symbol> v;

    bool one(int t) const { return v[t].kind == Symbol::Kind::One; }
    bool known(int t) const {
        auto k = v[t].kind;
        return k == Symbol::Kind::Zero || k == Symbol::Kind::One || k == Symbol::Kind::Bus;
    }
    // "valid": actively driven to a meaningful value — 1 for bit lanes, any
    // bus value for buses. Idle-low / x / z are not valid.
    bool valid(int t) const {
        return v[t].kind == Symbol::Kind::One || v[t].kind == Symbol::Kind::Bus;
    }
    bool same(int a, int b) const {
        return v[a].kind == v[b].kind && v[a].bus == v[b].bus;
    }
    // Assertion event: becomes 1 after not-1 (or is 1 at cycle 0).
    bool event(int t) const { return one(t) && (t == 0 || !one(t - 1)); }
    std::string value_str(int t) const {
        switch (v[t].kind) {
        case Symbol::Kind::Zero: return "0";
        case Symbol::Kind::One: return "1";
        case Symbol::Kind::Bus: return std::to_string(v[t].bus);
        default: return "x";
        }
    }
};

BehaviorDescription make_desc(const BehaviorTemplate& t,
                              std::vector<std::string> sigs,
                              std::vector<std::pair<std::string, std::string>> params) {
    BehaviorDescription d;
    d.template_id = t.id;
    d.text = text::substitute(t.pattern, params);
    d.involved_signals = std::move(sigs);
    for (auto& [k, v] : params) d.parameters[k] = v;
    return d;
}

} // namespace

std::vector<BehaviorDescription> describe_waveform(const TimingDiagram& d,
                                                   const std::vector<BehaviorTemplate>& templates) {
    std::vector<Conc> lanes;
    for (const auto& l : d.signals) lanes.push_back({l.name, expand_lane(l.symbols)});
    const int n = (int)lanes.size();
    const int cyc = d.cycles;

    std::vector<BehaviorDescription> out;
    for (const auto& t : templates) {
        switch (classify_template(t)) {
        case RuleKind::Latency:
            // Every assertion of SIG must see SIG2 valid within some shared
            // bound; N is the tightest such bound (max over events of the
            // first responding cycle).
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    int worst = 0, events = 0;
                    bool ok = true;
                    for (int c = 0; c < cyc && ok; ++c) {
                        if (!lanes[i].event(c)) continue;
                        ++events;
                        int hit = 0;
                        for (int q = c + 1; q < cyc; ++q)
                            if (lanes[j].valid(q)) { hit = q - c; break; }
                        if (hit == 0) ok = false;
                        else worst = std::max(worst, hit);
                    }
                    if (ok && events > 0)
                        out.push_back(make_desc(t, {lanes[i].name, lanes[j].name},
                                                {{"SIG", lanes[i].name},
                                                 {"SIG2", lanes[j].name},
                                                 {"N", std::to_string(worst)}}));
                }
            }
            break;
        case RuleKind::Stability:
            for (int i = 0; i < n; ++i) {
                bool constant = lanes[i].known(0);
                for (int c = 1; c < cyc && constant; ++c)
                    constant = lanes[i].same(0, c);
                if (constant)
                    out.push_back(make_desc(t, {lanes[i].name},
                                            {{"SIG", lanes[i].name},
                                             {"N", std::to_string(cyc)}}));
            }
            break;
        case RuleKind::EdgeCause:
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    int edges = 0;
                    bool ok = true;
                    for (int c = 1; c < cyc && ok; ++c) {
                        if (!(lanes[i].one(c) && lanes[i].v[c - 1].kind == Symbol::Kind::Zero))
                            continue;
                        ++edges;
                        ok = c + 1 < cyc && lanes[j].known(c) && lanes[j].known(c + 1) &&
                             !lanes[j].same(c, c + 1);
                    }
                    if (ok && edges > 0)
                        out.push_back(make_desc(t, {lanes[i].name, lanes[j].name},
                                                {{"SIG", lanes[i].name},
                                                 {"SIG2", lanes[j].name}}));
                }
            }
            break;
        case RuleKind::Mutex:
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    bool i_on = false, j_on = false, overlap = false;
                    for (int c = 0; c < cyc; ++c) {
                        if (lanes[i].one(c)) i_on = true;
                        if (lanes[j].one(c)) j_on = true;
                        if (lanes[i].one(c) && lanes[j].one(c)) overlap = true;
                    }
                    if (i_on && j_on && !overlap)
                        out.push_back(make_desc(t, {lanes[i].name, lanes[j].name},
                                                {{"SIG", lanes[i].name},
                                                 {"SIG2", lanes[j].name}}));
                }
            }
            break;
        case RuleKind::ValueHold:
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    int first = -1;
                    bool ok = true;
                    for (int c = 0; c < cyc && ok; ++c) {
                        if (!lanes[j].one(c)) continue;
                        if (!lanes[i].known(c)) ok = false;
                        else if (first < 0) first = c;
                        else ok = lanes[i].same(first, c);
                    }
                    if (ok && first >= 0)
                        out.push_back(make_desc(t, {lanes[i].name, lanes[j].name},
                                                {{"SIG", lanes[i].name},
                                                 {"VAL", lanes[i].value_str(first)},
                                                 {"SIG2", lanes[j].name}}));
                }
            }
            break;
        case RuleKind::Unknown:
            break;  // advisory template, no local rule
        }
    }
    for (const auto& desc : out)
        for (const auto& s : desc.involved_signals)
            if (!d.find(s)) throw InvalidSignalRef(s);
    return out;
}

// ---- model-path parsing & serialization ----

static std::vector<BehaviorDescription> descs_from(const nlohmann::json& j,
                                                   const TimingDiagram* d) {
    if (!j.is_array()) throw DescriptionUnparseable("expected a top-level array");
    std::vector<BehaviorDescription> out;
    for (const auto& row : j) {
        if (!row.is_object()) throw DescriptionUnparseable("each entry must be an object");
        BehaviorDescription b;
        if (!row.contains("template_id") || !row["template_id"].is_string())
            throw DescriptionUnparseable("missing \"template_id\"");
        b.template_id = row["template_id"].get<std::string>();
        if (!row.contains("text") || !row["text"].is_string() ||
            row["text"].get<std::string>().empty())
            throw DescriptionUnparseable("missing \"text\"");
        b.text = row["text"].get<std::string>();
        if (!row.contains("signals") || !row["signals"].is_array() || row["signals"].empty())
            throw DescriptionUnparseable("\"signals\" must be a non-empty array");
        for (const auto& s : row["signals"]) {
            if (!s.is_string()) throw DescriptionUnparseable("\"signals\" entries must be strings");
            b.involved_signals.push_back(s.get<std::string>());
        }
        if (row.contains("parameters")) {
            if (!row["parameters"].is_object())
                throw DescriptionUnparseable("\"parameters\" must be an object");
            for (const auto& [k, v] : row["parameters"].items()) {
                if (!v.is_string()) throw DescriptionUnparseable("parameter values must be strings");
                b.parameters[k] = v.get<std::string>();
            }
        }
        if (d)
            for (const auto& s : b.involved_signals)
                if (!d->find(s)) throw InvalidSignalRef(s);
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<BehaviorDescription> parse_descriptions(const std::string& response,
                                                    const TimingDiagram& d) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(response);
    } catch (const nlohmann::json::exception& e) {
        throw DescriptionUnparseable(e.what());
    }
    return descs_from(j, &d);
}

std::string diagram_to_text(const TimingDiagram& d) {
    std::string out = "cycles: " + std::to_string(d.cycles) + "\n";
    for (const auto& l : d.signals) {
        out += l.name + ": ";
        for (const auto& s : l.symbols) {
            switch (s.kind) {
            case Symbol::Kind::Zero: out += '0'; break;
            case Symbol::Kind::One: out += '1'; break;
            case Symbol::Kind::X: out += 'x'; break;
            case Symbol::Kind::Z: out += 'z'; break;
            case Symbol::Kind::Hold: out += '.'; break;
            case Symbol::Kind::Bus: out += "=" + std::to_string(s.bus) + ";"; break;
            }
        }
        out += '\n';
    }
    return out;
}

std::string descriptions_to_json(const std::vector<BehaviorDescription>& ds) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& b : ds) {
        nlohmann::ordered_json row;
        row["template_id"] = b.template_id;
        row["text"] = b.text;
        row["signals"] = b.involved_signals;
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        for (const auto& [k, v] : b.parameters) params[k] = v;
        row["parameters"] = std::move(params);
        arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
}

std::vector<BehaviorDescription> descriptions_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DescriptionUnparseable(e.what());
    }
    return descs_from(j, nullptr);
}

} // namespace assertforge::wave
