// SPDX-License-Identifier: Apache-2.0
#include "assertforge/sva_generator.hpp"

#include "assertforge/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstring>
#include <thread>

namespace assertforge::gen {

const char* to_string(Category c) {
    switch (c) {
        case Category::Width: return "width";
        case Category::Connectivity: return "connectivity";
        case Category::Function: return "function";
    }
    return "?";
}

std::string resolve_clock(const std::vector<nl::SignalSpec>& specs) {
    std::vector<std::string> clocks;
    for (const auto& s : specs)
        if (s.signal_type == "clock") clocks.push_back(s.name);
    if (clocks.empty()) throw ClockUnresolved("no clock-typed signal");
    if (clocks.size() == 1) return clocks[0];
    for (const char* exact : {"clk", "wb_clk_i"})
        if (std::count(clocks.begin(), clocks.end(), exact)) return exact;
    std::vector<std::string> suffixed;
    for (const auto& c : clocks)
        if (c.size() > 4 && c.compare(c.size() - 4, 4, "_clk") == 0) suffixed.push_back(c);
    if (suffixed.size() == 1) return suffixed[0];
    std::string all;
    for (const auto& c : clocks) all += (all.empty() ? "" : ", ") + c;
    throw ClockUnresolved("multiple clock signals: " + all);
}

GenerationPlan plan(const std::vector<nl::SignalSpec>& specs,
                    const std::vector<SignalDefinition>& defs,
                    const std::vector<wave::BehaviorDescription>& behaviors) {
    GenerationPlan p;
    p.clock = resolve_clock(specs);
    for (const auto& s : specs) {
        const auto* def = find_signal(defs, s.name);
        if (!def) throw Error("spec for undeclared signal " + s.name);
        PlanItem item;
        item.signal = s.name;
        item.signal_type = s.signal_type;
        item.source = to_string(def->hierarchy);
        if (def->hierarchy == Hierarchy::IoPort) {
            item.categories = s.signal_type == "control"
                                  ? std::vector<Category>{Category::Width, Category::Connectivity}
                                  : std::vector<Category>{Category::Width};
        } else if (s.signal_type == "control") {
            item.categories = {Category::Width, Category::Connectivity, Category::Function};
        } else {
            item.categories = {Category::Width, Category::Function};
        }
        p.items.push_back(std::move(item));
    }
    p.behavior_count = (int)behaviors.size();
    return p;
}

// ---- prompt assembly ----

namespace {

const char* kSystem =
    "You are a hardware verification engineer writing SystemVerilog Assertions. "
    "Reply only with fenced code blocks of assert property statements.";

std::string spec_record_json(const nl::SignalSpec& s) {
    nlohmann::ordered_json row;
    row["name"] = s.name;
    row["definition"] = {{"width", s.width},
                         {"signal_type", s.signal_type},
                         {"direction", s.direction}};
    row["functionality"] = s.functionality;
    row["interconnection"] = s.interconnection;
    row["additional"] = s.additional;
    row["interconnection_signals"] = s.interconnection_signals;
    return row.dump(2);
}

std::string rag_chunks(const Generator& g, const std::string& query) {
    if (!g.index) return "";
    auto hits = knowledge::retrieve(*g.index, query, knowledge::kDefaultTopK);
    std::string out;
    for (const auto& h : hits) {
        if (!out.empty()) out += "\n---\n";
        out += g.index->chunks[h.chunk_id].text;
    }
    return out;
}

std::string rag_query(Category cat, const std::string& signal_type,
                      const std::string& functionality) {
    return std::string("SVA ") + to_string(cat) + " assertion for " + signal_type + " signal " +
           functionality;
}

llm::ChatRequest make_request(const std::string& tmpl,
                              const std::vector<std::pair<std::string, std::string>>& slots) {
    llm::ChatRequest req;
    req.system_instruction = kSystem;
    req.messages.push_back(llm::ChatMessage::user(text::substitute(tmpl, slots)));
    return req;
}

} // namespace

llm::ChatRequest build_width_request(const Generator& g, const nl::SignalSpec& spec) {
    auto rag = rag_chunks(g, rag_query(Category::Width, spec.signal_type, spec.functionality));
    return make_request(g.width_prompt,
                        {{"SPEC_JSON", spec_record_json(spec)}, {"RAG_CHUNKS", rag}});
}

llm::ChatRequest build_connectivity_request(const Generator& g, const nl::SignalSpec& spec) {
    auto rag =
        rag_chunks(g, rag_query(Category::Connectivity, spec.signal_type, spec.functionality));
    return make_request(g.conn_prompt, {{"SPEC_JSON", spec_record_json(spec)},
                                        {"ARCHITECTURE", g.architecture},
                                        {"RAG_CHUNKS", rag}});
}

llm::ChatRequest build_function_request(const Generator& g, const nl::SignalSpec& spec) {
    auto rag = rag_chunks(g, rag_query(Category::Function, spec.signal_type, spec.functionality));
    return make_request(g.func_prompt, {{"BEHAVIOR", spec.functionality},
                                        {"SPEC_JSON", spec_record_json(spec)},
                                        {"ARCHITECTURE", g.architecture},
                                        {"RAG_CHUNKS", rag}});
}

llm::ChatRequest build_function_request(const Generator& g, const wave::BehaviorDescription& b) {
    auto rag = rag_chunks(g, rag_query(Category::Function, "waveform", b.text));
    return make_request(g.func_prompt, {{"BEHAVIOR", b.text},
                                        {"SPEC_JSON", ""},
                                        {"ARCHITECTURE", g.architecture},
                                        {"RAG_CHUNKS", rag}});
}

// ---- response parsing ----

namespace {

std::string strip_line_comments(const std::string& s) {
    std::string out;
    for (size_t i = 0; i < s.size();) {
        if (s[i] == '/' && i + 1 < s.size() && s[i + 1] == '/') {
            while (i < s.size() && s[i] != '\n') ++i;
        } else {
            out += s[i++];
        }
    }
    return out;
}

std::vector<std::string> fence_bodies(const std::string& text) {
    std::vector<std::string> bodies;
    std::string cur;
    bool in_fence = false;
    for (const auto& line : text::split_lines(text)) {
        if (text::trim(line).rfind("```", 0) == 0) {
            if (in_fence) bodies.push_back(cur);
            cur.clear();
            in_fence = !in_fence;
            continue;
        }
        if (in_fence) cur += line + "\n";
    }
    return bodies;
}

bool word_at(const std::string& s, size_t i, const char* w) {
    size_t n = std::strlen(w);
    if (s.compare(i, n, w) != 0) return false;
    auto wordch = [](char c) { return std::isalnum((unsigned char)c) || c == '_' || c == '$'; };
    if (i > 0 && wordch(s[i - 1])) return false;
    return i + n >= s.size() || !wordch(s[i + n]);
}

} // namespace

std::vector<std::string> parse_response_blocks(const std::string& text) {
    std::vector<std::string> stmts;
    for (const auto& raw : fence_bodies(text)) {
        auto body = strip_line_comments(raw);
        int depth = 0;
        size_t start = std::string::npos;
        for (size_t i = 0; i < body.size(); ++i) {
            char c = body[i];
            if (c == '(' || c == '[' || c == '{') ++depth;
            if (c == ')' || c == ']' || c == '}') --depth;
            if (start == std::string::npos && depth == 0 && word_at(body, i, "assert"))
                start = i;
            if (start != std::string::npos && c == ';' && depth == 0) {
                stmts.push_back(std::string(text::trim(body.substr(start, i - start + 1))));
                start = std::string::npos;
            }
        }
    }
    return stmts;
}

// ---- assembly of one assertion record ----

namespace {

bool category_holds(Category cat, const sva::PropertyAst& ast, const std::string& target,
                    const std::vector<SignalDefinition>& defs) {
    if (cat == Category::Width) {
        auto bits = sva::bits_arg_signals(ast);
        std::vector<std::string> design;
        for (const auto& b : bits)
            if (find_signal(defs, b)) design.push_back(b);
        return design.size() == 1 && (target.empty() || design[0] == target);
    }
    if (cat == Category::Connectivity) {
        int refs = 0;
        for (const auto& r : sva::referenced_signals(ast))
            if (find_signal(defs, r)) ++refs;
        return refs >= 2;
    }
    return true;
}

GeneratedAssertion finalize(const Generator& g, std::string text, Category cat,
                            const std::string& signal, const std::string& signal_type,
                            const std::string& source) {
    GeneratedAssertion ga;
    ga.rec = {signal, signal_type, to_string(cat), source, std::move(text)};
    try {
        auto ast = sva::parse_sva(ga.rec.text);
        if (category_holds(cat, ast, signal, g.defs)) {
            ga.ast = std::move(ast);
            ga.status = GeneratedAssertion::Status::Parsed;
        } else {
            ga.status = GeneratedAssertion::Status::SyntaxErr;
            ga.reason = "category mismatch";
        }
    } catch (const Error& e) {
        ga.status = GeneratedAssertion::Status::SyntaxErr;
        ga.reason = e.what();
    }
    return ga;
}

std::string source_of(const Generator& g, const nl::SignalSpec& spec) {
    const auto* def = find_signal(g.defs, spec.name);
    return def ? to_string(def->hierarchy) : "io_port";
}

std::vector<std::string> complete_blocks(const Generator& g, const llm::ChatRequest& req) {
    auto resp = g.gateway->complete(req);
    auto blocks = parse_response_blocks(resp.content);
    if (blocks.empty()) throw GenerationUnparseable(resp.content);
    return blocks;
}

} // namespace

GeneratedAssertion generate_width(const Generator& g, const nl::SignalSpec& spec) {
    if (spec.width <= 0) throw Error("width unknown for " + spec.name);
    auto src = source_of(g, spec);
    if (!g.gateway) {
        auto text = "assert property (@(posedge " + g.clock + ") ($bits(" + spec.name +
                    ") == " + std::to_string(spec.width) + "));";
        return finalize(g, text, Category::Width, spec.name, spec.signal_type, src);
    }
    auto blocks = complete_blocks(g, build_width_request(g, spec));
    return finalize(g, blocks[0], Category::Width, spec.name, spec.signal_type, src);
}

std::vector<GeneratedAssertion> generate_connectivity(const Generator& g,
                                                      const nl::SignalSpec& spec) {
    if (spec.interconnection_signals.empty()) throw EmptyInterconnection(spec.name);
    auto src = source_of(g, spec);
    std::vector<GeneratedAssertion> out;
    if (!g.gateway) {
        auto en = spec.width == 1 ? spec.name : "(" + spec.name + " != 0)";
        for (const auto& p : spec.interconnection_signals) {
            auto text = "assert property (@(posedge " + g.clock + ") " + en + " |-> ##1 " + p +
                        " == $past(" + p + "));";
            out.push_back(finalize(g, text, Category::Connectivity, spec.name, spec.signal_type,
                                   src));
        }
        return out;
    }
    for (const auto& b : complete_blocks(g, build_connectivity_request(g, spec)))
        out.push_back(finalize(g, b, Category::Connectivity, spec.name, spec.signal_type, src));
    return out;
}

std::vector<GeneratedAssertion> generate_function(const Generator& g, const nl::SignalSpec& spec,
                                                  std::vector<std::string>* warnings) {
    auto warn = [&](const std::string& w) {
        if (warnings) warnings->push_back(w);
    };
    if (text::trim(spec.functionality).empty()) {
        warn("function " + spec.name + ": nothing described");
        return {};
    }
    auto src = source_of(g, spec);
    if (!g.gateway) {
        warn("function " + spec.name + ": no deterministic local form for prose, skipped");
        return {};
    }
    std::vector<GeneratedAssertion> out;
    for (const auto& b : complete_blocks(g, build_function_request(g, spec)))
        out.push_back(finalize(g, b, Category::Function, spec.name, spec.signal_type, src));
    return out;
}

namespace {

wave::RuleKind rule_of(const wave::BehaviorDescription& b) {
    static const std::map<std::string, wave::RuleKind> kBuiltin = {
        {"response-latency", wave::RuleKind::Latency},
        {"stability", wave::RuleKind::Stability},
        {"edge-cause", wave::RuleKind::EdgeCause},
        {"mutual-exclusion", wave::RuleKind::Mutex},
        {"value-hold", wave::RuleKind::ValueHold},
    };
    if (auto it = kBuiltin.find(b.template_id); it != kBuiltin.end()) return it->second;
    // Third-party template ids: classify by the parameter signature, the
    // same way templates themselves are classified.
    wave::BehaviorTemplate t;
    t.id = b.template_id;
    t.pattern = b.text;
    for (const auto& [k, v] : b.parameters) t.pattern += " {{" + k + "}}";
    return wave::classify_template(t);
}

} // namespace

std::vector<GeneratedAssertion> generate_function(const Generator& g,
                                                  const wave::BehaviorDescription& b,
                                                  std::vector<std::string>* warnings) {
    auto warn = [&](const std::string& w) {
        if (warnings) warnings->push_back(w);
    };
    if (!g.gateway) {
        auto param = [&](const char* k) -> std::string {
            auto it = b.parameters.find(k);
            return it == b.parameters.end() ? "" : it->second;
        };
        std::string sig = param("SIG"), sig2 = param("SIG2"), n = param("N"), val = param("VAL");
        std::string body;
        switch (rule_of(b)) {
            case wave::RuleKind::Latency:
                if (sig.empty() || sig2.empty() || n.empty()) break;
                body = sig + " |-> ##[1:" + n + "] " + sig2;
                break;
            case wave::RuleKind::Stability:
                if (sig.empty()) break;
                body = "##1 $stable(" + sig + ")";
                break;
            case wave::RuleKind::EdgeCause:
                if (sig.empty() || sig2.empty()) break;
                body = "$rose(" + sig + ") |-> ##1 !$stable(" + sig2 + ")";
                break;
            case wave::RuleKind::Mutex:
                if (sig.empty() || sig2.empty()) break;
                body = "!(" + sig + " && " + sig2 + ")";
                break;
            case wave::RuleKind::ValueHold:
                if (sig.empty() || sig2.empty() || val.empty()) break;
                body = sig2 + " |-> " + sig + " == " + val;
                break;
            case wave::RuleKind::Unknown:
                warn("behavior " + b.template_id + ": no canonical form, skipped");
                return {};
        }
        if (body.empty()) {
            warn("behavior " + b.template_id + ": parameters incomplete, skipped");
            return {};
        }
        auto text = "assert property (@(posedge " + g.clock + ") " + body + ");";
        return {finalize(g, text, Category::Function, "", "", "waveform")};
    }
    std::vector<GeneratedAssertion> out;
    for (const auto& blk : complete_blocks(g, build_function_request(g, b)))
        out.push_back(finalize(g, blk, Category::Function, "", "", "waveform"));
    return out;
}

GenerationResult generate_all(const Generator& g, const GenerationPlan& p,
                              const std::vector<nl::SignalSpec>& specs,
                              const std::vector<wave::BehaviorDescription>& behaviors) {
    if (p.items.size() != specs.size()) throw Error("plan does not match spec list");
    struct Task {
        const nl::SignalSpec* spec = nullptr;  // null for a behavior task
        Category cat = Category::Function;
        const wave::BehaviorDescription* behavior = nullptr;
    };
    std::vector<Task> tasks;
    for (size_t i = 0; i < p.items.size(); ++i) {
        if (p.items[i].signal != specs[i].name) throw Error("plan does not match spec list");
        for (auto cat : p.items[i].categories) tasks.push_back({&specs[i], cat, nullptr});
    }
    for (const auto& b : behaviors) tasks.push_back({nullptr, Category::Function, &b});

    std::vector<std::vector<GeneratedAssertion>> slots(tasks.size());
    std::vector<std::vector<std::string>> warn_slots(tasks.size());
    std::vector<std::vector<std::string>> err_slots(tasks.size());

    auto run_task = [&](size_t i) {
        const auto& t = tasks[i];
        auto label = t.spec ? std::string(to_string(t.cat)) + " " + t.spec->name
                            : "behavior " + t.behavior->template_id;
        try {
            if (!t.spec)
                slots[i] = generate_function(g, *t.behavior, &warn_slots[i]);
            else if (t.cat == Category::Width)
                slots[i] = {generate_width(g, *t.spec)};
            else if (t.cat == Category::Connectivity)
                slots[i] = generate_connectivity(g, *t.spec);
            else
                slots[i] = generate_function(g, *t.spec, &warn_slots[i]);
        } catch (const llm::ReplayMiss& e) {
            err_slots[i].push_back(label + ": " + e.what());
        } catch (const llm::BackendUnreachable& e) {
            err_slots[i].push_back(label + ": " + e.what());
        } catch (const llm::RateLimited& e) {
            err_slots[i].push_back(label + ": " + e.what());
        } catch (const llm::ImageUnsupported& e) {
            err_slots[i].push_back(label + ": " + e.what());
        } catch (const ConfigError& e) {
            err_slots[i].push_back(label + ": " + e.what());
        } catch (const Error& e) {
            warn_slots[i].push_back(label + ": " + e.what());
        }
    };

    if (g.gateway && tasks.size() > 1) {
        int cap = std::max(1, g.gateway->config().max_in_flight);
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                run_task(i);
        };
        std::vector<std::thread> pool;
        size_t workers = std::min<size_t>((size_t)cap, tasks.size());
        for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    } else {
        for (size_t i = 0; i < tasks.size(); ++i) run_task(i);
    }

    GenerationResult r;
    for (size_t i = 0; i < tasks.size(); ++i) {
        for (auto& ga : slots[i]) r.assertions.push_back(std::move(ga));
        for (auto& w : warn_slots[i]) r.warnings.push_back(std::move(w));
        for (auto& e : err_slots[i]) r.errors.push_back(std::move(e));
    }
    return r;
}

std::vector<AssertionRecord> records_of(const GenerationResult& r) {
    std::vector<AssertionRecord> out;
    out.reserve(r.assertions.size());
    for (const auto& ga : r.assertions) out.push_back(ga.rec);
    return out;
}

} // namespace assertforge::gen
