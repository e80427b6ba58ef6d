// SPDX-License-Identifier: Apache-2.0
#include "assertforge/pipeline.hpp"

#include <cstdlib>
#include <filesystem>
#include <memory>

#include <nlohmann/json.hpp>

#include "assertforge/fsio.hpp"
#include "assertforge/knowledge.hpp"
#include "assertforge/rtl.hpp"
#include "assertforge/text.hpp"

namespace fs = std::filesystem;

namespace assertforge::pipe {

const char* to_string(Mode m) {
    switch (m) {
    case Mode::Live: return "live";
    case Mode::Record: return "record";
    case Mode::Replay: return "replay";
    case Mode::Local: return "local-fallback";
    }
    return "?";
}

std::optional<Mode> mode_from(const std::string& s) {
    if (s == "live") return Mode::Live;
    if (s == "record") return Mode::Record;
    if (s == "replay") return Mode::Replay;
    if (s == "local-fallback" || s == "local") return Mode::Local;
    return std::nullopt;
}

void finalize_config(PipelineConfig& cfg) {
    if (cfg.bundle_dir.empty()) throw ConfigError("bundle directory is required");
    if (!fs::is_directory(cfg.bundle_dir))
        throw ConfigError("bundle directory not found: " + cfg.bundle_dir);
    if (cfg.rtl_path.empty()) cfg.rtl_path = cfg.bundle_dir + "/rtl.v";
    if (cfg.transcript_dir.empty()) cfg.transcript_dir = cfg.bundle_dir + "/transcripts";
    if (cfg.output_dir.empty()) cfg.output_dir = "out";
    if (cfg.prompts_dir.empty()) cfg.prompts_dir = "prompts";
    if (cfg.mode == Mode::Replay && !fs::is_directory(cfg.transcript_dir))
        throw ConfigError("replay mode needs a transcript directory: " + cfg.transcript_dir);
    if (cfg.mode == Mode::Live || cfg.mode == Mode::Record) {
        const char* url = std::getenv("ASSERTFORGE_LLM_URL");
        if (!url || !*url)
            throw ConfigError(std::string(to_string(cfg.mode)) +
                              " mode needs ASSERTFORGE_LLM_URL");
    }
}

static llm::GatewayMode gateway_mode(Mode m) {
    switch (m) {
    case Mode::Live: return llm::GatewayMode::Live;
    case Mode::Record: return llm::GatewayMode::Record;
    default: return llm::GatewayMode::Replay;
    }
}

static std::string load_prompt(const std::string& dir, const std::string& name) {
    fs::path p = fs::path(dir) / name;
    if (!fs::is_regular_file(p)) throw ConfigError("missing prompt file: " + p.string());
    return fsio::read_file(p);
}

static const char* kWaveSystem =
    "You are a hardware verification engineer analyzing timing diagrams. "
    "Follow the reply format exactly.";

llm::ChatRequest build_template_request(const std::string& prompt_template,
                                        const wave::TimingDiagram& d) {
    llm::ChatRequest req;
    req.system_instruction = kWaveSystem;
    llm::ChatMessage m;
    m.text = text::substitute(prompt_template, {{"DIAGRAM", wave::diagram_to_text(d)}});
    req.messages.push_back(std::move(m));
    req.temperature = 0.0;
    return req;
}

static std::string render_templates(const std::vector<wave::BehaviorTemplate>& ts) {
    std::string out;
    for (const auto& t : ts) out += "- " + t.id + ": " + t.pattern + "\n";
    return out;
}

llm::ChatRequest build_describe_request(const std::string& prompt_template,
                                        const std::vector<wave::BehaviorTemplate>& templates,
                                        const wave::TimingDiagram& d) {
    llm::ChatRequest req;
    req.system_instruction = kWaveSystem;
    llm::ChatMessage m;
    m.text = text::substitute(prompt_template, {{"TEMPLATES", render_templates(templates)},
                                                {"DIAGRAM", wave::diagram_to_text(d)}});
    req.messages.push_back(std::move(m));
    req.temperature = 0.0;
    return req;
}

llm::ChatRequest build_image_describe_request(const std::string& prompt_template,
                                              const ingest::WaveformAttachment& att) {
    llm::ChatRequest req;
    req.system_instruction = kWaveSystem;
    llm::ChatMessage img;
    img.image = att.payload;
    img.image_mime = att.id.size() > 4 && att.id.substr(att.id.size() - 4) == ".jpg"
                         ? "image/jpeg"
                         : "image/png";
    req.messages.push_back(std::move(img));
    llm::ChatMessage m;
    m.text = text::substitute(prompt_template,
                              {{"TEMPLATES", render_templates(wave::builtin_templates())},
                               {"DIAGRAM", "(attached waveform image " + att.id + ")"}});
    req.messages.push_back(std::move(m));
    req.temperature = 0.0;
    return req;
}

static std::string architecture_body(const ingest::SpecDocument& doc) {
    for (const auto& sec : doc.sections)
        if (sec.kind == ingest::SectionKind::Architecture) return sec.body;
    return "";
}

// Behaviors from one attachment. Transport failures land in errors, quality
// failures (unparseable reply, unknown signals) in warnings.
static void collect_behaviors(const ingest::WaveformAttachment& att, const llm::Gateway* gw,
                              const std::string& tmpl_prompt, const std::string& desc_prompt,
                              const std::vector<SignalDefinition>& defs,
                              std::vector<wave::BehaviorDescription>& behaviors, StageLog& log) {
    const std::string where = "waveform " + att.id + ": ";
    try {
        std::vector<wave::BehaviorDescription> descs;
        if (att.kind == ingest::WaveformAttachment::Kind::TimingJson) {
            auto d = wave::parse_timing(std::string(att.payload.begin(), att.payload.end()));
            if (!gw) {
                descs = wave::describe_waveform(d, wave::builtin_templates());
            } else {
                auto r1 = gw->complete(build_template_request(tmpl_prompt, d));
                auto pt = wave::parse_templates(r1.content);
                for (const auto& w : pt.warnings) log.warnings.push_back(where + w);
                auto r2 = gw->complete(build_describe_request(desc_prompt, pt.templates, d));
                descs = wave::parse_descriptions(r2.content, d);
            }
        } else {  // opaque image
            if (!gw) {
                log.warnings.push_back(where + "image skipped (no model backend)");
                return;
            }
            if (!gw->config().multimodal) {
                log.warnings.push_back(where + "image skipped (backend is text-only)");
                return;
            }
            auto r = gw->complete(build_image_describe_request(desc_prompt, att));
            auto all = wave::descriptions_from_json(r.content);
            for (auto& b : all) {
                bool known = true;
                for (const auto& s : b.involved_signals)
                    if (!find_signal(defs, s)) {
                        log.warnings.push_back(where + "dropped behavior naming unknown signal " + s);
                        known = false;
                        break;
                    }
                if (known) descs.push_back(std::move(b));
            }
        }
        for (auto& b : descs) behaviors.push_back(std::move(b));
    } catch (const llm::ReplayMiss& e) {
        log.errors.push_back(where + e.what());
    } catch (const llm::BackendUnreachable& e) {
        log.errors.push_back(where + e.what());
    } catch (const llm::RateLimited& e) {
        log.errors.push_back(where + e.what());
    } catch (const llm::ImageUnsupported& e) {
        log.errors.push_back(where + e.what());
    } catch (const Error& e) {
        log.warnings.push_back(where + e.what());
    }
}

GenerateResult cmd_generate(const PipelineConfig& cfg0) {
    PipelineConfig cfg = cfg0;
    finalize_config(cfg);
    GenerateResult out;

    ingest::Bundle bundle;
    try {
        bundle = ingest::load_bundle(cfg.bundle_dir);
    } catch (const Error& e) {
        throw ConfigError("bundle: " + std::string(e.what()));
    }

    const std::string nl_prompt = load_prompt(cfg.prompts_dir, "nl_analyzer.txt");
    const std::string wave_tmpl = load_prompt(cfg.prompts_dir, "waveform_template.txt");
    const std::string wave_desc = load_prompt(cfg.prompts_dir, "waveform_describe.txt");
    const std::string width_prompt = load_prompt(cfg.prompts_dir, "sva_width.txt");
    const std::string conn_prompt = load_prompt(cfg.prompts_dir, "sva_connectivity.txt");
    const std::string func_prompt = load_prompt(cfg.prompts_dir, "sva_function.txt");

    std::unique_ptr<llm::Gateway> gw;
    if (cfg.mode != Mode::Local) {
        auto gc = llm::config_from_env(gateway_mode(cfg.mode));
        gc.transcript_dir = cfg.transcript_dir;
        gw = std::make_unique<llm::Gateway>(std::move(gc));
    }

    nl::Extractor ex{gw.get(), nl_prompt};
    auto exr = nl::extract_all(ex, bundle.doc, bundle.signals);
    out.specs = std::move(exr.specs);
    for (const auto& f : exr.errors)
        out.log.errors.push_back("extract " + f.signal + ": " + f.error);
    for (const auto& s : out.specs)
        for (const auto& w : s.warnings) out.log.warnings.push_back("extract " + s.name + ": " + w);

    for (const auto& att : bundle.doc.waveforms)
        collect_behaviors(att, gw.get(), wave_tmpl, wave_desc, bundle.signals, out.behaviors,
                          out.log);

    std::optional<knowledge::LexicalIndex> index;
    if (!cfg.corpus_dir.empty()) {
        try {
            index = knowledge::build_index(cfg.corpus_dir);
        } catch (const Error& e) {
            throw ConfigError("corpus: " + std::string(e.what()));
        }
    }

    fs::create_directories(cfg.output_dir);
    out.specs_path = (fs::path(cfg.output_dir) / "signal_specs.json").string();
    fsio::write_file_atomic(out.specs_path, nl::specs_to_json(out.specs));
    out.behaviors_path = (fs::path(cfg.output_dir) / "behaviors.json").string();
    fsio::write_file_atomic(out.behaviors_path, wave::descriptions_to_json(out.behaviors));

    try {
        auto p = gen::plan(out.specs, bundle.signals, out.behaviors);
        gen::Generator g;
        g.gateway = gw.get();
        g.index = index ? &*index : nullptr;
        g.defs = bundle.signals;
        g.clock = p.clock;
        g.architecture = architecture_body(bundle.doc);
        g.width_prompt = width_prompt;
        g.conn_prompt = conn_prompt;
        g.func_prompt = func_prompt;
        auto res = gen::generate_all(g, p, out.specs, out.behaviors);
        out.records = gen::records_of(res);
        out.assertions = std::move(res.assertions);
        for (auto& w : res.warnings) out.log.warnings.push_back(std::move(w));
        for (auto& e : res.errors) out.log.errors.push_back(std::move(e));
    } catch (const Error& e) {
        out.log.errors.push_back("plan: " + std::string(e.what()));
    }

    out.assertions_path = (fs::path(cfg.output_dir) / "assertions.json").string();
    fsio::write_file_atomic(out.assertions_path, assertions_to_json(out.records));
    std::string sva;
    for (const auto& r : out.records) {
        sva += r.text;
        if (sva.empty() || sva.back() != '\n') sva += '\n';
    }
    out.sva_path = (fs::path(cfg.output_dir) / "assertions.sva").string();
    fsio::write_file_atomic(out.sva_path, sva);
    return out;
}

static nlohmann::ordered_json verdict_json(const eval::CheckedAssertion& c,
                                           const eval::Verdict& v) {
    nlohmann::ordered_json j;
    j["signal"] = c.rec.signal;
    j["category"] = c.rec.category;
    j["text"] = c.rec.text;
    j["outcome"] = eval::to_string(v.outcome);
    if (!v.detail.empty()) j["detail"] = v.detail;
    j["checked_cycles"] = v.checked_cycles;
    if (v.outcome == eval::Outcome::Fail) {
        j["fail_cycle"] = v.fail_cycle;
        j["stimulus"] = v.stimulus_name;
        if (v.counterexample)
            j["counterexample"] = nlohmann::ordered_json::parse(
                rtl::stimulus_to_json(*v.counterexample));
    }
    return j;
}

EvaluateResult cmd_evaluate(const PipelineConfig& cfg, const std::string& assertions_path) {
    if (cfg.rtl_path.empty()) throw ConfigError("design file is required");
    if (!fs::is_regular_file(cfg.rtl_path))
        throw ConfigError("design file not found: " + cfg.rtl_path);
    if (!fs::is_regular_file(assertions_path))
        throw ConfigError("assertions file not found: " + assertions_path);

    auto design = rtl::parse_verilog(fsio::read_file(cfg.rtl_path));
    auto recs = assertions_from_json(fsio::read_file(assertions_path));

    EvaluateResult out;
    out.run = eval::evaluate_assertions(design.name, design, recs, cfg.budget);

    std::string out_dir = cfg.output_dir.empty() ? "out" : cfg.output_dir;
    fs::create_directories(out_dir);
    out.report_json_path = (fs::path(out_dir) / "report.json").string();
    fsio::write_file_atomic(out.report_json_path, eval::render_report_json(out.run.report));
    out.report_md_path = (fs::path(out_dir) / "report.md").string();
    fsio::write_file_atomic(out.report_md_path, eval::render_report_md(out.run.report));

    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (size_t i = 0; i < out.run.checked.size() && i < out.run.verdicts.size(); ++i)
        arr.push_back(verdict_json(out.run.checked[i], out.run.verdicts[i]));
    out.verdicts_path = (fs::path(out_dir) / "verdicts.json").string();
    fsio::write_file_atomic(out.verdicts_path, arr.dump(2) + "\n");
    return out;
}

RunResult cmd_run(const PipelineConfig& cfg0) {
    PipelineConfig cfg = cfg0;
    finalize_config(cfg);
    RunResult rr;
    rr.generate = cmd_generate(cfg);
    rr.evaluate = cmd_evaluate(cfg, rr.generate.assertions_path);
    return rr;
}

} // namespace assertforge::pipe
