// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "assertforge/doc_ingest.hpp"
#include "assertforge/error.hpp"
#include "assertforge/evaluator.hpp"
#include "assertforge/llm.hpp"
#include "assertforge/nl_analyzer.hpp"
#include "assertforge/sva_generator.hpp"
#include "assertforge/waveform.hpp"

namespace assertforge::pipe {

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config: " + what) {}
};

enum class Mode { Live, Record, Replay, Local };

const char* to_string(Mode m);
std::optional<Mode> mode_from(const std::string& s);

struct PipelineConfig {
    std::string bundle_dir;
    std::string rtl_path;         // default: <bundle_dir>/rtl.v
    Mode mode = Mode::Local;
    std::string transcript_dir;   // default: <bundle_dir>/transcripts
    std::string corpus_dir;       // empty = generate without retrieval
    std::string prompts_dir = "prompts";
    std::string output_dir = "out";
    eval::Budget budget;
};

// Fills path defaults and validates mode requirements (record/replay need a
// transcript dir, live needs ASSERTFORGE_LLM_URL). Throws ConfigError.
void finalize_config(PipelineConfig& cfg);

// Warnings are quality notes (skipped items, fallbacks); errors make the
// stage's exit status nonzero but never stop sibling work items.
struct StageLog {
    std::vector<std::string> warnings;
    std::vector<std::string> errors;
};

struct GenerateResult {
    std::vector<nl::SignalSpec> specs;
    std::vector<wave::BehaviorDescription> behaviors;
    std::vector<gen::GeneratedAssertion> assertions;
    std::vector<AssertionRecord> records;
    StageLog log;
    std::string specs_path;
    std::string behaviors_path;
    std::string assertions_path;
    std::string sva_path;
};

// Spec bundle -> signal_specs.json / behaviors.json / assertions.json(.sva).
// Partial artifacts are still written when individual items fail.
GenerateResult cmd_generate(const PipelineConfig& cfg);

struct EvaluateResult {
    eval::EvalRun run;
    StageLog log;
    std::string report_json_path;
    std::string report_md_path;
    std::string verdicts_path;
};

// RTL + assertions.json -> report.json / report.md / verdicts.json.
EvaluateResult cmd_evaluate(const PipelineConfig& cfg, const std::string& assertions_path);

struct RunResult {
    GenerateResult generate;
    EvaluateResult evaluate;
};

// generate followed by evaluate on the freshly written assertions.json.
RunResult cmd_run(const PipelineConfig& cfg);

// Request builders shared with transcript tooling so recorded exchanges are
// keyed by the exact prompts the pipeline sends.
llm::ChatRequest build_template_request(const std::string& prompt_template,
                                        const wave::TimingDiagram& d);
llm::ChatRequest build_describe_request(const std::string& prompt_template,
                                        const std::vector<wave::BehaviorTemplate>& templates,
                                        const wave::TimingDiagram& d);
llm::ChatRequest build_image_describe_request(const std::string& prompt_template,
                                              const ingest::WaveformAttachment& att);

} // namespace assertforge::pipe
