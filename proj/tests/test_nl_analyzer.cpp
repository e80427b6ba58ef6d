// SPDX-License-Identifier: Apache-2.0
#include "assertforge/nl_analyzer.hpp"

#include "assertforge/fsio.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>

using namespace assertforge;
using namespace assertforge::nl;

namespace {

const std::string kI2cBundle = std::string(ASSERTFORGE_SOURCE_DIR) + "/fixtures/mini_i2c";
const std::string kPrompt =
    fsio::read_file(std::string(ASSERTFORGE_SOURCE_DIR) + "/prompts/nl_analyzer.txt");

std::filesystem::path fresh_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

ingest::SpecDocument toy_doc() {
    ingest::SpecDocument doc;
    doc.sections.push_back({ingest::SectionKind::IoPorts, "IO Ports",
                            "req (input, 1 bit): request strobe, answered by ack.\n\n"
                            "ack (output, 1 bit): acknowledge for req.\n",
                            "# IO Ports\n"});
    return doc;
}

std::vector<SignalDefinition> toy_defs() {
    return {{"req", 1, SignalKind::Input, Hierarchy::IoPort},
            {"ack", 1, SignalKind::Output, Hierarchy::IoPort}};
}

std::string spec_json(const std::string& name, int width, const std::string& extra_signal = "") {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["definition"] = {{"width", width}, {"signal_type", "data"}, {"direction", "input"}};
    j["functionality"] = "carries the " + name + " value";
    j["interconnection"] = "sampled with the system clock";
    j["additional"] = "";
    auto sigs = nlohmann::ordered_json::array();
    if (!extra_signal.empty()) sigs.push_back(extra_signal);
    j["interconnection_signals"] = sigs;
    return j.dump();
}

// Records a canned response for the exact request the extractor will issue.
void author_transcript(const std::filesystem::path& dir, const ingest::SpecDocument& doc,
                       const std::string& signal, const std::string& content) {
    auto req = build_extraction_request(doc, signal, kPrompt);
    llm::TranscriptStore store(dir);
    store.save(llm::fingerprint(req), llm::canonical_request_text(req), content);
}

} // namespace

TEST_CASE("validate_spec reports every invariant violation") {
    auto defs = toy_defs();

    SignalSpec ok;
    ok.name = "req";
    ok.width = 1;
    ok.interconnection_signals = {"ack"};
    CHECK(validate_spec(ok, defs).empty());

    SignalSpec wide = ok;
    wide.width = 8;
    wide.name = "req";
    auto v = validate_spec(wide, defs);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "width mismatch 8≠1");

    SignalSpec ghost = ok;
    ghost.interconnection_signals = {"ghost_sig"};
    v = validate_spec(ghost, defs);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "unknown signal ghost_sig");

    SignalSpec selfy = ok;
    selfy.interconnection_signals = {"req"};
    v = validate_spec(selfy, defs);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "self-interconnection");

    SignalSpec unknown = ok;
    unknown.name = "nobody";
    v = validate_spec(unknown, defs);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "unknown signal nobody");

    SignalSpec multi = ok;
    multi.width = 4;
    multi.interconnection_signals = {"ack", "ghost_sig", "req"};
    CHECK(validate_spec(multi, defs).size() == 3);
}

TEST_CASE("extraction responses parse strictly, fenced or bare") {
    auto s = parse_extraction(spec_json("req", 1, "ack"));
    CHECK(s.name == "req");
    CHECK(s.width == 1);
    CHECK(s.signal_type == "data");
    CHECK(s.direction == "input");
    CHECK(s.interconnection_signals == std::vector<std::string>{"ack"});

    auto fenced = parse_extraction("```json\n" + spec_json("req", 1) + "\n```");
    CHECK(fenced.name == "req");

    try {
        (void)parse_extraction("I could not find that signal.");
        FAIL("expected ExtractionUnparseable");
    } catch (const ExtractionUnparseable& e) {
        CHECK(e.raw == "I could not find that signal.");
    }

    CHECK_THROWS_AS((void)parse_extraction(R"({"name": "req"})"), ExtractionUnparseable);
    CHECK_THROWS_AS(
        (void)parse_extraction(
            R"({"name": "req", "definition": {"width": "wide", "signal_type": "x", "direction": "y"},
                "functionality": "", "interconnection": "", "additional": "",
                "interconnection_signals": []})"),
        ExtractionUnparseable);
}

TEST_CASE("extraction requests embed the template and the whole document") {
    auto doc = toy_doc();
    auto req = build_extraction_request(doc, "req", kPrompt);
    CHECK(req.system_instruction.find("the signal req") != std::string::npos);
    CHECK(req.system_instruction.find("{{SIGNAL_NAME}}") == std::string::npos);
    REQUIRE(req.messages.size() == 1);
    CHECK(req.messages[0].text.find("# IO Ports") != std::string::npos);
    CHECK(req.messages[0].text.find("request strobe") != std::string::npos);
    CHECK(req.messages[0].text.find("Target signal: req") != std::string::npos);
    CHECK(req.temperature == 0.0);
}

TEST_CASE("local path extracts all 23 i2c signals in declaration order") {
    auto b = ingest::load_bundle(kI2cBundle);
    Extractor ex;  // no gateway: rule-based path
    auto res = extract_all(ex, b.doc, b.signals);
    CHECK(res.errors.empty());
    REQUIRE(res.specs.size() == 23);
    for (size_t i = 0; i < res.specs.size(); ++i) CHECK(res.specs[i].name == b.signals[i].name);

    auto spec_of = [&](const std::string& name) -> const SignalSpec& {
        for (const auto& s : res.specs)
            if (s.name == name) return s;
        static SignalSpec none;
        return none;
    };

    const auto& prer = spec_of("prer");
    CHECK(prer.width == 16);
    CHECK(prer.signal_type == "data");
    CHECK(prer.direction == "internal");
    CHECK(!prer.functionality.empty());
    CHECK(std::find(prer.interconnection_signals.begin(), prer.interconnection_signals.end(),
                    "wb_clk_i") != prer.interconnection_signals.end());

    CHECK(spec_of("wb_clk_i").signal_type == "clock");
    CHECK(spec_of("wb_rst_i").signal_type == "reset");
    CHECK(spec_of("arst_i").signal_type == "reset");
    CHECK(spec_of("wb_cyc_i").signal_type == "control");
    CHECK(spec_of("wb_stb_i").signal_type == "control");
    CHECK(spec_of("wb_we_i").signal_type == "control");
    CHECK(spec_of("wb_adr_i").signal_type == "data");
    CHECK(spec_of("wb_adr_i").width == 3);
    CHECK(spec_of("wb_ack_o").signal_type == "data");
    CHECK(spec_of("ctr").signal_type == "control");
    CHECK(spec_of("cr").signal_type == "control");
    CHECK(spec_of("sr").signal_type == "data");
    CHECK(spec_of("txr").signal_type == "data");

    int described = 0;
    for (const auto& s : res.specs)
        if (!s.not_described) ++described;
    CHECK(described == 23);  // the bundle documents every signal

    // idempotence
    auto res2 = extract_all(ex, b.doc, b.signals);
    CHECK(specs_to_json(res2.specs) == specs_to_json(res.specs));
}

TEST_CASE("undocumented signals come back flagged, without a model call") {
    auto doc = toy_doc();
    auto defs = toy_defs();
    defs.push_back({"phantom", 4, SignalKind::Wire, Hierarchy::Internal});

    // empty transcript store: any completion attempt would raise ReplayMiss
    llm::GatewayConfig cfg;
    cfg.mode = llm::GatewayMode::Replay;
    cfg.transcript_dir = fresh_dir("assertforge_nl_empty").string();
    llm::Gateway gw(cfg);
    Extractor ex{&gw, kPrompt};

    auto spec = extract_signal_spec(ex, doc, defs[2], defs);
    CHECK(spec.not_described);
    CHECK(spec.functionality.empty());
    CHECK(spec.interconnection_signals.empty());
    CHECK(spec.width == 4);
}

TEST_CASE("replay-backed extraction validates locally") {
    auto dir = fresh_dir("assertforge_nl_replay");
    auto b = ingest::load_bundle(kI2cBundle);

    nlohmann::ordered_json j;
    j["name"] = "prer";
    j["definition"] = {{"width", 16}, {"signal_type", "data"}, {"direction", "internal"}};
    j["functionality"] = "Clock prescale register dividing wb_clk_i for the SCL generator.";
    j["interconnection"] = "Written over the Wishbone data bus; read back on wb_dat_o.";
    j["additional"] = "Only change while the core is disabled.";
    j["interconnection_signals"] = {"wb_clk_i", "wb_dat_i", "wb_dat_o"};
    author_transcript(dir, b.doc, "prer", j.dump());

    llm::GatewayConfig cfg;
    cfg.mode = llm::GatewayMode::Replay;
    cfg.transcript_dir = dir.string();
    llm::Gateway gw(cfg);
    Extractor ex{&gw, kPrompt};

    auto prer_def = *find_signal(b.signals, "prer");
    auto spec = extract_signal_spec(ex, b.doc, prer_def, b.signals);
    CHECK(spec.width == 16);
    CHECK(spec.warnings.empty());
    auto& ic = spec.interconnection_signals;
    CHECK(std::find(ic.begin(), ic.end(), "wb_dat_i") != ic.end());

    // twice -> identical
    auto again = extract_signal_spec(ex, b.doc, prer_def, b.signals);
    CHECK(specs_to_json({again}) == specs_to_json({spec}));
}

TEST_CASE("width disagreement is flagged and signals.json wins") {
    auto dir = fresh_dir("assertforge_nl_width");
    auto b = ingest::load_bundle(kI2cBundle);
    author_transcript(dir, b.doc, "prer", spec_json("prer", 8, "wb_clk_i"));

    llm::GatewayConfig cfg;
    cfg.mode = llm::GatewayMode::Replay;
    cfg.transcript_dir = dir.string();
    llm::Gateway gw(cfg);
    Extractor ex{&gw, kPrompt};

    auto spec = extract_signal_spec(ex, b.doc, *find_signal(b.signals, "prer"), b.signals);
    CHECK(spec.width == 16);
    REQUIRE(spec.warnings.size() == 1);
    CHECK(spec.warnings[0] == "width mismatch 8≠16");
}

TEST_CASE("hallucinated interconnections fail validation") {
    auto dir = fresh_dir("assertforge_nl_ghost");
    auto b = ingest::load_bundle(kI2cBundle);
    author_transcript(dir, b.doc, "prer", spec_json("prer", 16, "ghost_sig"));

    llm::GatewayConfig cfg;
    cfg.mode = llm::GatewayMode::Replay;
    cfg.transcript_dir = dir.string();
    llm::Gateway gw(cfg);
    Extractor ex{&gw, kPrompt};

    try {
        (void)extract_signal_spec(ex, b.doc, *find_signal(b.signals, "prer"), b.signals);
        FAIL("expected ValidationFailed");
    } catch (const ValidationFailed& e) {
        REQUIRE(e.violations.size() == 1);
        CHECK(e.violations[0] == "unknown signal ghost_sig");
    }

    // a response describing the wrong signal is rejected up front
    auto dir2 = fresh_dir("assertforge_nl_wrongname");
    author_transcript(dir2, b.doc, "txr", spec_json("rxr", 8));
    llm::GatewayConfig cfg2 = cfg;
    cfg2.transcript_dir = dir2.string();
    llm::Gateway gw2(cfg2);
    Extractor ex2{&gw2, kPrompt};
    CHECK_THROWS_AS((void)extract_signal_spec(ex2, b.doc, *find_signal(b.signals, "txr"),
                                              b.signals),
                    ValidationFailed);
}

TEST_CASE("one bad signal never aborts the batch") {
    auto dir = fresh_dir("assertforge_nl_partial");
    auto doc = toy_doc();
    auto defs = toy_defs();
    author_transcript(dir, doc, "req", spec_json("req", 1, "ack"));
    // no transcript for "ack"

    llm::GatewayConfig cfg;
    cfg.mode = llm::GatewayMode::Replay;
    cfg.transcript_dir = dir.string();
    llm::Gateway gw(cfg);
    Extractor ex{&gw, kPrompt};

    auto res = extract_all(ex, doc, defs);
    REQUIRE(res.specs.size() == 1);
    CHECK(res.specs[0].name == "req");
    REQUIRE(res.errors.size() == 1);
    CHECK(res.errors[0].signal == "ack");
    CHECK(res.errors[0].error.find("no transcript for fingerprint") != std::string::npos);

    CHECK(extract_all(ex, doc, {}).specs.empty());
}

TEST_CASE("signal specs round-trip through json") {
    auto b = ingest::load_bundle(kI2cBundle);
    Extractor ex;
    auto res = extract_all(ex, b.doc, b.signals);
    auto txt = specs_to_json(res.specs);
    auto back = specs_from_json(txt);
    REQUIRE(back.size() == res.specs.size());
    CHECK(specs_to_json(back) == txt);
    CHECK_THROWS_AS((void)specs_from_json("{}"), Error);
}
