// SPDX-License-Identifier: Apache-2.0
//
// Per-signal extraction of structured descriptions from the specification
// document. The model-backed path issues one chat request per signal and
// parses a fixed JSON schema; a deterministic rule-based path serves
// offline runs. Every spec is validated against the declared signal list
// before it reaches generation.
#pragma once

#include "assertforge/diag.hpp"
#include "assertforge/doc_ingest.hpp"
#include "assertforge/llm.hpp"
#include "assertforge/signal.hpp"

#include <string>
#include <vector>

namespace assertforge::nl {

class ExtractionUnparseable : public Error {
public:
    ExtractionUnparseable(const std::string& what, std::string raw_response)
        : Error("unparseable extraction: " + what), raw(std::move(raw_response)) {}
    std::string raw;
};

class ValidationFailed : public Error {
public:
    explicit ValidationFailed(std::vector<std::string> violation_list)
        : Error("extraction failed validation: " + join(violation_list)),
          violations(std::move(violation_list)) {}
    std::vector<std::string> violations;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
        return out;
    }
};

struct SignalSpec {
    std::string name;
    int width = 0;
    std::string signal_type;  // clock | reset | control | data (free text from the doc)
    std::string direction;
    std::string functionality;
    std::string interconnection;
    std::string additional;
    std::vector<std::string> interconnection_signals;
    bool not_described = false;          // signal absent from every section body
    std::vector<std::string> warnings;   // non-fatal findings (e.g. width mismatch)
};

// All invariant violations; empty list means valid. Width disagreement is
// reported here but treated as non-fatal by extraction (signals.json wins).
std::vector<std::string> validate_spec(const SignalSpec& spec,
                                       const std::vector<SignalDefinition>& defs);

// The exact chat request the pipeline issues for one signal; shared with
// fixture authoring so recorded fingerprints always match.
llm::ChatRequest build_extraction_request(const ingest::SpecDocument& doc,
                                          const std::string& signal_name,
                                          const std::string& prompt_template);

// Parses the model's JSON reply (optionally fenced) into a SignalSpec.
SignalSpec parse_extraction(const std::string& response);

struct Extractor {
    const llm::Gateway* gateway = nullptr;  // null -> deterministic local rules
    std::string prompt_template;            // prompts/nl_analyzer.txt content
};

SignalSpec extract_signal_spec(const Extractor& ex, const ingest::SpecDocument& doc,
                               const SignalDefinition& sig,
                               const std::vector<SignalDefinition>& defs);

struct ExtractFailure {
    std::string signal;
    std::string error;
};

struct ExtractAllResult {
    std::vector<SignalSpec> specs;        // signals.json order
    std::vector<ExtractFailure> errors;   // per-signal failures, same order
};

// Concurrent per-signal extraction; one failure never aborts the rest.
ExtractAllResult extract_all(const Extractor& ex, const ingest::SpecDocument& doc,
                             const std::vector<SignalDefinition>& defs);

std::string specs_to_json(const std::vector<SignalSpec>& specs);
std::vector<SignalSpec> specs_from_json(const std::string& text);

} // namespace assertforge::nl
