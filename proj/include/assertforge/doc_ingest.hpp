// SPDX-License-Identifier: Apache-2.0
//
// Specification-bundle loading: split the spec document into canonical
// sections, read the signal-definition file, and register waveform
// attachments. The split is lossless — each section keeps the raw heading
// line(s) it was cut at, so concatenating heading_raw + body over all
// sections reproduces the input byte-for-byte.
#pragma once

#include "assertforge/diag.hpp"
#include "assertforge/signal.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace assertforge::ingest {

class MissingFile : public Error {
public:
    explicit MissingFile(const std::string& what) : Error("missing file: " + what) {}
};

// Schema violation in signals.json; `field` is a path like "[2].width".
class MalformedSignals : public Error {
public:
    MalformedSignals(const std::string& field_path, const std::string& what)
        : Error("signals.json: " + field_path + ": " + what), field(field_path) {}
    std::string field;
};

class DuplicateSignal : public Error {
public:
    explicit DuplicateSignal(const std::string& name)
        : Error("signals.json: duplicate signal \"" + name + "\""), signal(name) {}
    std::string signal;
};

enum class SectionKind {
    Introduction,
    IoPorts,
    Registers,
    Operation,
    Architecture,
    Usage,
    Waveform,
    Other,
};

const char* to_string(SectionKind k);

struct Section {
    SectionKind kind = SectionKind::Other;
    std::string title;        // heading text, markers stripped
    std::string body;         // raw text up to the next heading
    std::string heading_raw;  // the heading line(s) exactly as written
};

struct WaveformAttachment {
    enum class Kind { TimingJson, ImageOpaque };
    std::string id;  // file stem
    Kind kind = Kind::TimingJson;
    std::vector<uint8_t> payload;
    std::vector<std::string> referenced_signals;  // lane names; empty for images
};

struct SpecDocument {
    std::vector<Section> sections;
    std::vector<WaveformAttachment> waveforms;
    std::filesystem::path source_path;
};

// Case-insensitive keyword classification of a heading; first match in
// table order wins (introduction, io_ports, registers, operation,
// architecture, usage, waveform), no match -> Other.
SectionKind classify_heading(const std::string& title);

// Cuts at Markdown ATX headings (any level) and at ALL-CAPS lines of <= 8
// words; headerless input becomes one Other section.
std::vector<Section> split_sections(const std::string& body);

struct Bundle {
    SpecDocument doc;
    std::vector<SignalDefinition> signals;
};

// dir must hold spec.md (or spec.txt) and signals.json; waveforms/ is
// optional (*.json timing diagrams, *.png / *.jpg opaque images).
Bundle load_bundle(const std::filesystem::path& dir);

std::vector<SignalDefinition> parse_signals(const std::string& json_text);
std::string signals_to_json(const std::vector<SignalDefinition>& defs);

} // namespace assertforge::ingest
