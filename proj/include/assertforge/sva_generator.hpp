// SPDX-License-Identifier: Apache-2.0
//
// Assertion generation: derive per-signal category plans from extracted
// signal specs, assemble retrieval-augmented prompts per (signal, category),
// and parse model responses into assertion records. With no gateway attached
// every category falls back to a deterministic local form, so generation
// runs offline end to end.
#pragma once

#include "assertforge/assertion.hpp"
#include "assertforge/knowledge.hpp"
#include "assertforge/llm.hpp"
#include "assertforge/nl_analyzer.hpp"
#include "assertforge/sva.hpp"
#include "assertforge/waveform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace assertforge::gen {

class GenerationUnparseable : public Error {
public:
    std::string raw;
    explicit GenerationUnparseable(std::string response)
        : Error("no SVA code block in response"), raw(std::move(response)) {}
};

class EmptyInterconnection : public Error {
public:
    explicit EmptyInterconnection(const std::string& signal)
        : Error("no interconnection signals recorded for " + signal) {}
};

class ClockUnresolved : public Error {
public:
    explicit ClockUnresolved(const std::string& why) : Error("clock unresolved: " + why) {}
};

enum class Category { Width, Connectivity, Function };
const char* to_string(Category c);

// One generated assertion plus its post-parse status. `rec.text` is the
// model output verbatim (never post-edited); `ast` is engaged only when the
// text parsed and satisfied its category's structural invariant.
struct GeneratedAssertion {
    enum class Status { Unchecked, SyntaxErr, Parsed };
    AssertionRecord rec;
    std::optional<sva::PropertyAst> ast;
    Status status = Status::Unchecked;
    std::string reason;  // diagnostic or "category mismatch" when SyntaxErr
};

struct PlanItem {
    std::string signal;
    std::string signal_type;          // clock | reset | control | data
    std::string source;               // io_port | arch_register
    std::vector<Category> categories; // ordered width < connectivity < function
};

// Categories per signal type: clock/reset/data IO -> width only; control IO
// -> width+connectivity; control registers -> all three; data registers ->
// width+function. Waveform behaviors each request one function assertion.
struct GenerationPlan {
    std::string clock;            // resolved sampling clock
    std::vector<PlanItem> items;  // one per spec, spec order
    int behavior_count = 0;
};

// Resolves the sampling clock from the clock-typed specs: a unique one wins;
// among several, exact "clk", then "wb_clk_i", then a unique "*_clk" suffix.
// None or an unresolved tie throws ClockUnresolved.
std::string resolve_clock(const std::vector<nl::SignalSpec>& specs);

GenerationPlan plan(const std::vector<nl::SignalSpec>& specs,
                    const std::vector<SignalDefinition>& defs,
                    const std::vector<wave::BehaviorDescription>& behaviors);

// Generation context. gateway == nullptr selects the deterministic local
// fallbacks; index == nullptr skips retrieval augmentation.
struct Generator {
    llm::Gateway* gateway = nullptr;
    const knowledge::LexicalIndex* index = nullptr;
    std::vector<SignalDefinition> defs;
    std::string clock;         // from GenerationPlan
    std::string architecture;  // architecture-overview section body, may be ""
    std::string width_prompt, conn_prompt, func_prompt;
};

// Request builders are public so transcript fixtures can be recorded against
// the exact prompts the generator issues.
llm::ChatRequest build_width_request(const Generator& g, const nl::SignalSpec& spec);
llm::ChatRequest build_connectivity_request(const Generator& g, const nl::SignalSpec& spec);
llm::ChatRequest build_function_request(const Generator& g, const nl::SignalSpec& spec);
llm::ChatRequest build_function_request(const Generator& g, const wave::BehaviorDescription& b);

// Fenced code blocks -> individual top-level "assert property ... ;"
// statements, commentary trimmed. No fence -> empty.
std::vector<std::string> parse_response_blocks(const std::string& text);

// Width check for `spec` (local form: "assert property (@(posedge <clk>)
// ($bits(<name>) == <width>));"). Throws Error when the width is unknown.
GeneratedAssertion generate_width(const Generator& g, const nl::SignalSpec& spec);

// Connectivity checks against every interconnection partner (local form:
// "<sig-as-bool> |-> ##1 <partner> == $past(<partner>)").
std::vector<GeneratedAssertion> generate_connectivity(const Generator& g,
                                                      const nl::SignalSpec& spec);

// Function checks from the functionality narrative. Empty narrative yields
// no assertions plus a not-described warning; the local path never invents
// behavior from prose, so it reports a warning as well.
std::vector<GeneratedAssertion> generate_function(const Generator& g, const nl::SignalSpec& spec,
                                                  std::vector<std::string>* warnings = nullptr);

// Function check from a waveform behavior (local path maps the five builtin
// behavior shapes onto canonical SVA forms).
std::vector<GeneratedAssertion> generate_function(const Generator& g,
                                                  const wave::BehaviorDescription& b,
                                                  std::vector<std::string>* warnings = nullptr);

struct GenerationResult {
    std::vector<GeneratedAssertion> assertions;
    std::vector<std::string> warnings;  // benign skips: empty narrative, no partners, ...
    std::vector<std::string> errors;    // transport/transcript failures (replay miss, ...)
};

// Runs the whole plan. (signal, category) tasks run concurrently under the
// gateway cap; output order is plan order with width < connectivity <
// function, then waveform behaviors in input order. A failing task is
// recorded as a warning or error and never aborts the batch.
GenerationResult generate_all(const Generator& g, const GenerationPlan& p,
                              const std::vector<nl::SignalSpec>& specs,
                              const std::vector<wave::BehaviorDescription>& behaviors);

std::vector<AssertionRecord> records_of(const GenerationResult& r);

} // namespace assertforge::gen
