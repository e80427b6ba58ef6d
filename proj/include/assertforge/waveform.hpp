// SPDX-License-Identifier: Apache-2.0
//
// Textual timing diagrams and behavior descriptions. The diagram JSON is
// {"cycles": N, "signals": [{"name": "...", "wave": "..."}]} with wave
// symbols over {0,1,x,z,.} plus semicolon-terminated bus tokens "=<int>;".
// Behavior extraction has two paths: a model-backed one (responses parsed
// as a JSON array) and a deterministic local describer whose rules only
// emit a sentence when the pattern holds at every occurrence in the
// diagram (universal matching).
#pragma once

#include "assertforge/diag.hpp"
#include "assertforge/signal.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace assertforge::wave {

class MalformedTiming : public Error {
public:
    explicit MalformedTiming(const std::string& what) : Error("malformed timing json: " + what) {}
};

class LeadingHold : public Error {
public:
    LeadingHold() : Error("lane starts with '.' (nothing to hold)") {}
};

class NoTemplates : public Error {
public:
    NoTemplates() : Error("response yielded zero parseable templates") {}
};

class DescriptionUnparseable : public Error {
public:
    explicit DescriptionUnparseable(const std::string& what)
        : Error("unparseable behavior description: " + what) {}
};

class InvalidSignalRef : public Error {
public:
    explicit InvalidSignalRef(const std::string& name)
        : Error("description references a signal not in the diagram: " + name), signal(name) {}
    std::string signal;
};

// ---- diagram ----

struct Symbol {
    enum class Kind { Zero, One, X, Z, Bus, Hold };
    Kind kind = Kind::X;
    uint64_t bus = 0;  // Bus only
};

struct Lane {
    std::string name;
    std::vector<Symbol> symbols;  // length == diagram cycles
};

struct TimingDiagram {
    int cycles = 0;
    std::vector<Lane> signals;

    const Lane* find(const std::string& name) const;
};

TimingDiagram parse_timing(const std::string& json_text);

// '.' replaced by the previous concrete symbol; length preserved.
std::vector<Symbol> expand_lane(const std::vector<Symbol>& lane);

// Every lane name must be a declared signal.
void check_signals(const TimingDiagram& d, const std::vector<SignalDefinition>& defs);

// ---- templates ----

struct BehaviorTemplate {
    std::string id;
    std::string pattern;  // slots: {{SIG}}, {{SIG2}}, {{N}}, {{VAL}}
};

// The five built-in behavior classes (latency, stability, edge-cause,
// mutual exclusion, value-hold).
std::vector<BehaviorTemplate> builtin_templates();

// Parses a model response: every line containing at least one {{...}} slot
// becomes a template; lines with undefined slot names are dropped with a
// warning. Throws NoTemplates when nothing parseable remains.
struct ParsedTemplates {
    std::vector<BehaviorTemplate> templates;
    std::vector<std::string> warnings;
};
ParsedTemplates parse_templates(const std::string& response);

// ---- descriptions ----

struct BehaviorDescription {
    std::string template_id;  // or "extended"
    std::string text;
    std::vector<std::string> involved_signals;  // subset of diagram signals
    std::map<std::string, std::string> parameters;
};

// Which local rule a template drives, classified by its slot signature
// (and, for the two {{SIG}},{{SIG2}} shapes, by wording: "never" = mutual
// exclusion, "edge"/"change" = edge-cause). Unknown shapes are advisory
// only and drive no local rule.
enum class RuleKind { Latency, Stability, EdgeCause, Mutex, ValueHold, Unknown };
RuleKind classify_template(const BehaviorTemplate& t);

// Deterministic local describer (pure function of diagram + templates).
std::vector<BehaviorDescription> describe_waveform(const TimingDiagram& d,
                                                   const std::vector<BehaviorTemplate>& templates);

// Model-path response: JSON array of {"template_id","text","signals",
// "parameters"}; throws DescriptionUnparseable / InvalidSignalRef.
std::vector<BehaviorDescription> parse_descriptions(const std::string& response,
                                                    const TimingDiagram& d);

// Serialization used in prompts and artifacts.
std::string diagram_to_text(const TimingDiagram& d);
std::string descriptions_to_json(const std::vector<BehaviorDescription>& ds);
std::vector<BehaviorDescription> descriptions_from_json(const std::string& text);

} // namespace assertforge::wave
