// SPDX-License-Identifier: Apache-2.0
#include "assertforge/nl_analyzer.hpp"

#include "assertforge/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <optional>
#include <set>
#include <thread>

namespace assertforge::nl {

// ---- validation ----

std::vector<std::string> validate_spec(const SignalSpec& spec,
                                       const std::vector<SignalDefinition>& defs) {
    std::vector<std::string> out;
    const SignalDefinition* self = find_signal(defs, spec.name);
    if (!self) out.push_back("unknown signal " + spec.name);
    if (self && spec.width > 0 && spec.width != self->width)
        out.push_back("width mismatch " + std::to_string(spec.width) + "≠" +
                      std::to_string(self->width));
    for (const auto& s : spec.interconnection_signals) {
        if (!text::is_identifier(s)) {
            out.push_back("bad identifier " + s);
        } else if (s == spec.name) {
            out.push_back("self-interconnection");
        } else if (!find_signal(defs, s)) {
            out.push_back("unknown signal " + s);
        }
    }
    return out;
}

static bool is_fatal(const std::string& violation) {
    return violation.rfind("width mismatch", 0) != 0;
}

// ---- request & response ----

llm::ChatRequest build_extraction_request(const ingest::SpecDocument& doc,
                                          const std::string& signal_name,
                                          const std::string& prompt_template) {
    llm::ChatRequest req;
    req.system_instruction =
        text::substitute(prompt_template, {{"SIGNAL_NAME", signal_name}});
    std::string user;
    for (const auto& s : doc.sections) user += s.heading_raw + s.body;
    user += "\nTarget signal: " + signal_name + "\n";
    req.messages.push_back(llm::ChatMessage::user(std::move(user)));
    return req;
}

SignalSpec parse_extraction(const std::string& response) {
    nlohmann::json j;
    bool parsed = false;
    try {
        j = nlohmann::json::parse(response);
        parsed = true;
    } catch (const nlohmann::json::exception&) {}
    if (!parsed) {
        // models like to fence their JSON; take the outermost braces
        auto a = response.find('{');
        auto b = response.rfind('}');
        if (a == std::string::npos || b == std::string::npos || b < a)
            throw ExtractionUnparseable("no JSON object found", response);
        try {
            j = nlohmann::json::parse(response.substr(a, b - a + 1));
        } catch (const nlohmann::json::exception& e) {
            throw ExtractionUnparseable(e.what(), response);
        }
    }
    if (!j.is_object()) throw ExtractionUnparseable("expected a JSON object", response);

    auto need_str = [&](const nlohmann::json& obj, const char* key) {
        if (!obj.contains(key) || !obj[key].is_string())
            throw ExtractionUnparseable(std::string("missing \"") + key + "\"", response);
        return obj[key].get<std::string>();
    };
    SignalSpec s;
    s.name = need_str(j, "name");
    if (!j.contains("definition") || !j["definition"].is_object())
        throw ExtractionUnparseable("missing \"definition\"", response);
    const auto& def = j["definition"];
    if (!def.contains("width") || !def["width"].is_number_integer())
        throw ExtractionUnparseable("missing \"definition.width\"", response);
    s.width = def["width"].get<int>();
    s.signal_type = need_str(def, "signal_type");
    s.direction = need_str(def, "direction");
    s.functionality = need_str(j, "functionality");
    s.interconnection = need_str(j, "interconnection");
    s.additional = need_str(j, "additional");
    if (!j.contains("interconnection_signals") || !j["interconnection_signals"].is_array())
        throw ExtractionUnparseable("missing \"interconnection_signals\"", response);
    for (const auto& e : j["interconnection_signals"]) {
        if (!e.is_string())
            throw ExtractionUnparseable("interconnection_signals entries must be strings",
                                        response);
        s.interconnection_signals.push_back(e.get<std::string>());
    }
    return s;
}

// ---- local rule-based path ----

namespace {

std::vector<std::string> paragraphs_of(const std::string& body) {
    std::vector<std::string> out;
    std::string cur;
    for (const auto& line : text::split_lines(body)) {
        if (text::trim(line).empty()) {
            if (!text::trim(cur).empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += line;
            cur += '\n';
        }
    }
    if (!text::trim(cur).empty()) out.push_back(cur);
    return out;
}

bool token_in(const std::vector<std::string>& tokens, const std::set<std::string>& set) {
    for (const auto& t : tokens)
        if (set.count(t)) return true;
    return false;
}

std::string classify_signal_type(const SignalDefinition& def) {
    static const std::set<std::string> kClock{"clk", "clock", "ck"};
    static const std::set<std::string> kReset{"rst", "reset", "arst", "nrst", "rstn", "resetn"};
    static const std::set<std::string> kCtrlIo{"cyc", "stb", "we",   "en",   "sel",  "cs",
                                               "cmd", "ctrl", "mode", "start", "stop"};
    static const std::set<std::string> kCtrlReg{"cr", "ctr", "ctrl", "cmd", "con", "control"};
    auto toks = text::name_tokens(def.name);
    if (token_in(toks, kClock)) return "clock";
    if (token_in(toks, kReset)) return "reset";
    const auto& ctrl = def.hierarchy == Hierarchy::ArchRegister ? kCtrlReg : kCtrlIo;
    if (token_in(toks, ctrl)) return "control";
    return "data";
}

std::string direction_of(const SignalDefinition& def) {
    switch (def.kind) {
        case SignalKind::Input: return "input";
        case SignalKind::Output: return "output";
        case SignalKind::Inout: return "inout";
        case SignalKind::Reg:
        case SignalKind::Wire: return "internal";
    }
    return "internal";
}

// first "<digits> bit(s)" mention, if any
int width_in_text(const std::string& paragraph) {
    auto low = text::lower(paragraph);
    for (size_t i = 0; i < low.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(low[i]))) continue;
        if (i > 0 && (std::isalnum(static_cast<unsigned char>(low[i - 1])) || low[i - 1] == '_'))
            continue;
        size_t j = i;
        while (j < low.size() && std::isdigit(static_cast<unsigned char>(low[j]))) ++j;
        size_t k = j;
        while (k < low.size() && (low[k] == ' ' || low[k] == '-')) ++k;
        if (low.compare(k, 3, "bit") == 0) return std::stoi(low.substr(i, j - i));
        i = j;
    }
    return 0;
}

SignalSpec local_extract(const ingest::SpecDocument& doc, const SignalDefinition& sig,
                         const std::vector<SignalDefinition>& defs) {
    // prefer the port/register entry paragraph (the one opening with the
    // name), then any port/register mention, then any mention at all
    auto entry_for = [&](const std::string& p) {
        auto t = text::trim(p);
        if (t.rfind(sig.name, 0) != 0) return false;
        char c = t.size() > sig.name.size() ? t[sig.name.size()] : ' ';
        return !(std::isalnum((unsigned char)c) || c == '_');
    };
    std::string primary;
    for (int pass = 0; pass < 3 && primary.empty(); ++pass) {
        for (const auto& sec : doc.sections) {
            bool scoped = sec.kind == ingest::SectionKind::IoPorts ||
                          sec.kind == ingest::SectionKind::Registers;
            if (pass < 2 && !scoped) continue;
            for (const auto& p : paragraphs_of(sec.body)) {
                if (pass == 0 ? entry_for(p) : text::contains_word(p, sig.name)) {
                    primary = p;
                    break;
                }
            }
            if (!primary.empty()) break;
        }
    }

    SignalSpec s;
    s.name = sig.name;
    s.signal_type = classify_signal_type(sig);
    s.direction = direction_of(sig);
    int w = width_in_text(primary);
    s.width = w > 0 ? w : sig.width;
    s.functionality = text::canonicalize_ws(primary);
    for (const auto& d : defs)
        if (d.name != sig.name && text::contains_word(primary, d.name))
            s.interconnection_signals.push_back(d.name);
    if (!s.interconnection_signals.empty()) {
        std::string list;
        for (const auto& n : s.interconnection_signals) list += (list.empty() ? "" : ", ") + n;
        s.interconnection = "Interacts with " + list + ".";
    }
    return s;
}

} // namespace

// ---- extraction ----

SignalSpec extract_signal_spec(const Extractor& ex, const ingest::SpecDocument& doc,
                               const SignalDefinition& sig,
                               const std::vector<SignalDefinition>& defs) {
    bool described = false;
    for (const auto& sec : doc.sections)
        if (text::contains_word(sec.body, sig.name)) { described = true; break; }
    if (!described) {
        SignalSpec s;
        s.name = sig.name;
        s.width = sig.width;
        s.signal_type = classify_signal_type(sig);
        s.direction = direction_of(sig);
        s.not_described = true;
        return s;
    }

    SignalSpec s;
    if (ex.gateway) {
        auto req = build_extraction_request(doc, sig.name, ex.prompt_template);
        auto res = ex.gateway->complete(req);
        s = parse_extraction(res.content);
        if (s.name != sig.name)
            throw ValidationFailed({"name mismatch: response describes " + s.name +
                                    ", requested " + sig.name});
    } else {
        s = local_extract(doc, sig, defs);
    }

    auto violations = validate_spec(s, defs);
    bool fatal = std::any_of(violations.begin(), violations.end(), is_fatal);
    if (fatal) throw ValidationFailed(violations);
    for (const auto& v : violations) {
        s.warnings.push_back(v);  // width disagreement: flag it, let signals.json win
        s.width = sig.width;
    }
    return s;
}

ExtractAllResult extract_all(const Extractor& ex, const ingest::SpecDocument& doc,
                             const std::vector<SignalDefinition>& defs) {
    const int n = (int)defs.size();
    std::vector<std::optional<SignalSpec>> specs(n);
    std::vector<std::optional<std::string>> errors(n);

    int cap = ex.gateway ? ex.gateway->config().max_in_flight : 4;
    int workers = std::max(1, std::min(cap, n));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                specs[i] = extract_signal_spec(ex, doc, defs[i], defs);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (workers <= 1 || n <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    ExtractAllResult out;
    for (int i = 0; i < n; ++i) {
        if (specs[i]) out.specs.push_back(std::move(*specs[i]));
        if (errors[i]) out.errors.push_back({defs[i].name, *errors[i]});
    }
    return out;
}

// ---- artifact serialization ----

std::string specs_to_json(const std::vector<SignalSpec>& specs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : specs) {
        nlohmann::ordered_json row;
        row["name"] = s.name;
        row["definition"] = {{"width", s.width},
                             {"signal_type", s.signal_type},
                             {"direction", s.direction}};
        row["functionality"] = s.functionality;
        row["interconnection"] = s.interconnection;
        row["additional"] = s.additional;
        row["interconnection_signals"] = s.interconnection_signals;
        if (s.not_described) row["not_described"] = true;
        if (!s.warnings.empty()) row["warnings"] = s.warnings;
        arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
}

std::vector<SignalSpec> specs_from_json(const std::string& content) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(content);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("signal_specs.json: invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw Error("signal_specs.json: expected a top-level array");
    std::vector<SignalSpec> out;
    for (const auto& row : j) {
        auto s = parse_extraction(row.dump());
        if (row.contains("not_described")) s.not_described = row["not_described"].get<bool>();
        if (row.contains("warnings"))
            for (const auto& w : row["warnings"]) s.warnings.push_back(w.get<std::string>());
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace assertforge::nl
