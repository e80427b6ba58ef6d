// SPDX-License-Identifier: Apache-2.0
#include "assertforge/doc_ingest.hpp"

#include "assertforge/fsio.hpp"
#include "assertforge/waveform.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>

using namespace assertforge;
using namespace assertforge::ingest;

namespace {

const std::string kI2cBundle = std::string(ASSERTFORGE_SOURCE_DIR) + "/fixtures/mini_i2c";

std::string rejoin(const std::vector<Section>& secs) {
    std::string out;
    for (const auto& s : secs) out += s.heading_raw + s.body;
    return out;
}

std::filesystem::path fresh_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("two-heading example splits on the keyword table") {
    std::string body = "# Introduction\nA\n# Operation\nB";
    auto secs = split_sections(body);
    REQUIRE(secs.size() == 2);
    CHECK(secs[0].kind == SectionKind::Introduction);
    CHECK(secs[0].title == "Introduction");
    CHECK(secs[0].body == "A\n");
    CHECK(secs[1].kind == SectionKind::Operation);
    CHECK(secs[1].title == "Operation");
    CHECK(secs[1].body == "B");
    CHECK(rejoin(secs) == body);
}

TEST_CASE("empty document becomes a single empty other-section") {
    auto secs = split_sections("");
    REQUIRE(secs.size() == 1);
    CHECK(secs[0].kind == SectionKind::Other);
    CHECK(secs[0].title.empty());
    CHECK(secs[0].body.empty());
}

TEST_CASE("heading keywords map case-insensitively, first match wins") {
    auto kind = [](const char* t) { return classify_heading(t); };
    CHECK(kind("Introduction") == SectionKind::Introduction);
    CHECK(kind("OVERVIEW") == SectionKind::Introduction);
    CHECK(kind("Features") == SectionKind::Introduction);
    CHECK(kind("IO Ports") == SectionKind::IoPorts);
    CHECK(kind("Port Description") == SectionKind::IoPorts);
    CHECK(kind("Wishbone Interface") == SectionKind::IoPorts);
    CHECK(kind("Register Map") == SectionKind::Registers);
    CHECK(kind("Registers") == SectionKind::Registers);
    CHECK(kind("Operation") == SectionKind::Operation);
    CHECK(kind("Protocol Details") == SectionKind::Operation);
    CHECK(kind("Behavioral Notes") == SectionKind::Operation);
    CHECK(kind("Architecture") == SectionKind::Architecture);
    CHECK(kind("Block Diagram") == SectionKind::Architecture);
    CHECK(kind("Usage") == SectionKind::Usage);
    CHECK(kind("Examples") == SectionKind::Usage);
    CHECK(kind("Waveforms") == SectionKind::Waveform);
    CHECK(kind("Timing") == SectionKind::Waveform);
    // "io" must match whole word prefixes only, never mid-word substrings
    CHECK(kind("Version History") == SectionKind::Other);
    CHECK(kind("Description") == SectionKind::Other);
    CHECK(kind("") == SectionKind::Other);
    // "interface" outranks "register" because the io_ports row comes first
    CHECK(kind("Register Interface") == SectionKind::IoPorts);
}

TEST_CASE("all-caps headings only cut headerless plain text") {
    std::string txt = "INTRODUCTION\nsome prose\nIO PORTS\nmore prose\n";
    auto secs = split_sections(txt);
    REQUIRE(secs.size() == 2);
    CHECK(secs[0].kind == SectionKind::Introduction);
    CHECK(secs[0].title == "INTRODUCTION");
    CHECK(secs[1].kind == SectionKind::IoPorts);
    CHECK(rejoin(secs) == txt);

    // nine words: too long for a heading
    auto nine = split_sections("A B C D E F G H I\nbody\n");
    CHECK(nine.size() == 1);
    CHECK(nine[0].kind == SectionKind::Other);

    // once a document uses ATX headings, caps lines are ordinary body text
    std::string md = "# Operation\nwrite to the CR REGISTER\nTODO\n";
    auto msec = split_sections(md);
    REQUIRE(msec.size() == 1);
    CHECK(msec[0].body == "write to the CR REGISTER\nTODO\n");
    CHECK(rejoin(msec) == md);
}

TEST_CASE("split is lossless on random documents") {
    std::mt19937 rng(20260816);
    const std::vector<std::string> pieces = {
        "# Introduction", "## Register Map", "### Usage", "IO PORTS", "WAVEFORM TIMING",
        "plain prose line", "another line with CAPS inside", "", "  indented text",
        "wb_ack_o pulses once", "#missing space heading", "A B C D E F G H I",
    };
    for (int iter = 0; iter < 200; ++iter) {
        std::string doc;
        int lines = (int)(rng() % 12);
        for (int i = 0; i < lines; ++i) {
            doc += pieces[rng() % pieces.size()];
            doc += (rng() % 8 == 0) ? "\r\n" : "\n";
        }
        if (rng() % 3 == 0 && !pieces.empty()) doc += pieces[rng() % pieces.size()];  // no trailing \n
        auto secs = split_sections(doc);
        CHECK(!secs.empty());
        REQUIRE_MESSAGE(rejoin(secs) == doc, "iter ", iter);
    }
}

TEST_CASE("signals.json schema errors carry field paths") {
    CHECK_THROWS_AS((void)parse_signals("nope"), MalformedSignals);
    CHECK_THROWS_AS((void)parse_signals("{}"), MalformedSignals);

    try {
        (void)parse_signals(R"([{"name": "a", "width": 1, "kind": "input", "hierarchy": "io_port"},
                                {"name": "b", "width": 1, "kind": "input", "hierarchy": "io_port"},
                                {"name": "c", "width": 0, "kind": "input", "hierarchy": "io_port"}])");
        FAIL("expected MalformedSignals");
    } catch (const MalformedSignals& e) {
        CHECK(e.field == "[2].width");
    }

    try {
        (void)parse_signals(R"([{"width": 1, "kind": "input", "hierarchy": "io_port"}])");
        FAIL("expected MalformedSignals");
    } catch (const MalformedSignals& e) {
        CHECK(e.field == "[0].name");
    }

    CHECK_THROWS_AS(
        (void)parse_signals(R"([{"name": "2bad", "width": 1, "kind": "input", "hierarchy": "io_port"}])"),
        MalformedSignals);
    CHECK_THROWS_AS(
        (void)parse_signals(R"([{"name": "a", "width": 1, "kind": "tristate", "hierarchy": "io_port"}])"),
        MalformedSignals);
    CHECK_THROWS_AS(
        (void)parse_signals(R"([{"name": "a", "width": 1, "kind": "input", "hierarchy": "top"}])"),
        MalformedSignals);

    try {
        (void)parse_signals(R"([{"name": "scl", "width": 1, "kind": "input", "hierarchy": "io_port"},
                                {"name": "scl", "width": 1, "kind": "input", "hierarchy": "io_port"}])");
        FAIL("expected DuplicateSignal");
    } catch (const DuplicateSignal& e) {
        CHECK(e.signal == "scl");
    }
}

TEST_CASE("signal definitions round-trip through json") {
    std::vector<SignalDefinition> defs{
        {"wb_clk_i", 1, SignalKind::Input, Hierarchy::IoPort},
        {"txr", 8, SignalKind::Reg, Hierarchy::ArchRegister},
        {"scratch", 4, SignalKind::Wire, Hierarchy::Internal},
    };
    auto back = parse_signals(signals_to_json(defs));
    REQUIRE(back.size() == defs.size());
    for (size_t i = 0; i < defs.size(); ++i) {
        CHECK(back[i].name == defs[i].name);
        CHECK(back[i].width == defs[i].width);
        CHECK(back[i].kind == defs[i].kind);
        CHECK(back[i].hierarchy == defs[i].hierarchy);
    }
}

TEST_CASE("load_bundle reads spec, signals, and waveform attachments") {
    auto dir = fresh_dir("assertforge_bundle");
    fsio::write_file_atomic(dir / "spec.md", "# Introduction\nhello\n# IO Ports\nreq, ack\n");
    fsio::write_file_atomic(dir / "signals.json",
                            R"([{"name": "req", "width": 1, "kind": "input", "hierarchy": "io_port"},
                                {"name": "ack", "width": 1, "kind": "output", "hierarchy": "io_port"}])");
    std::filesystem::create_directories(dir / "waveforms");
    fsio::write_file_atomic(dir / "waveforms" / "handshake.json",
                            R"({"cycles": 3, "signals": [{"name": "req", "wave": "1.."},
                                                         {"name": "ack", "wave": "001"}]})");
    fsio::write_file_atomic(dir / "waveforms" / "photo.png", "not really a png");

    auto b = load_bundle(dir);
    CHECK(b.doc.source_path == dir / "spec.md");
    REQUIRE(b.doc.sections.size() == 2);
    CHECK(b.doc.sections[1].kind == SectionKind::IoPorts);
    REQUIRE(b.signals.size() == 2);
    REQUIRE(b.doc.waveforms.size() == 2);
    CHECK(b.doc.waveforms[0].id == "handshake");
    CHECK(b.doc.waveforms[0].kind == WaveformAttachment::Kind::TimingJson);
    CHECK(b.doc.waveforms[0].referenced_signals == std::vector<std::string>{"req", "ack"});
    CHECK(b.doc.waveforms[1].id == "photo");
    CHECK(b.doc.waveforms[1].kind == WaveformAttachment::Kind::ImageOpaque);
    CHECK(b.doc.waveforms[1].referenced_signals.empty());
    CHECK(b.doc.waveforms[1].payload.size() == 16);

    // determinism: loading twice gives the same document
    auto b2 = load_bundle(dir);
    CHECK(rejoin(b2.doc.sections) == rejoin(b.doc.sections));
    CHECK(b2.signals.size() == b.signals.size());
}

TEST_CASE("load_bundle error paths") {
    auto empty = fresh_dir("assertforge_bundle_empty");
    CHECK_THROWS_AS((void)load_bundle(empty), MissingFile);

    auto nosig = fresh_dir("assertforge_bundle_nosig");
    fsio::write_file_atomic(nosig / "spec.md", "# Introduction\n");
    CHECK_THROWS_AS((void)load_bundle(nosig), MissingFile);

    // spec.txt is accepted when spec.md is absent
    auto txt = fresh_dir("assertforge_bundle_txt");
    fsio::write_file_atomic(txt / "spec.txt", "INTRODUCTION\nhello\n");
    fsio::write_file_atomic(txt / "signals.json",
                            R"([{"name": "req", "width": 1, "kind": "input", "hierarchy": "io_port"}])");
    auto b = load_bundle(txt);
    CHECK(b.doc.source_path == txt / "spec.txt");
    CHECK(b.doc.sections[0].kind == SectionKind::Introduction);

    // malformed timing attachment
    auto badwave = fresh_dir("assertforge_bundle_badwave");
    fsio::write_file_atomic(badwave / "spec.md", "# Introduction\n");
    fsio::write_file_atomic(badwave / "signals.json",
                            R"([{"name": "req", "width": 1, "kind": "input", "hierarchy": "io_port"}])");
    std::filesystem::create_directories(badwave / "waveforms");
    fsio::write_file_atomic(badwave / "waveforms" / "broken.json", "{\"cycles\": -1}");
    CHECK_THROWS_AS((void)load_bundle(badwave), wave::MalformedTiming);

    // attachment lane not in signals.json
    auto ghost = fresh_dir("assertforge_bundle_ghost");
    fsio::write_file_atomic(ghost / "spec.md", "# Introduction\n");
    fsio::write_file_atomic(ghost / "signals.json",
                            R"([{"name": "req", "width": 1, "kind": "input", "hierarchy": "io_port"}])");
    std::filesystem::create_directories(ghost / "waveforms");
    fsio::write_file_atomic(ghost / "waveforms" / "w.json",
                            R"({"cycles": 1, "signals": [{"name": "ghost", "wave": "0"}]})");
    CHECK_THROWS_AS((void)load_bundle(ghost), Error);
}

TEST_CASE("i2c-style bundle: 23 signals, 17 io ports + 6 registers") {
    auto b = load_bundle(kI2cBundle);
    CHECK(b.signals.size() == 23);
    int io = 0, arch = 0;
    for (const auto& s : b.signals) {
        if (s.hierarchy == Hierarchy::IoPort) ++io;
        if (s.hierarchy == Hierarchy::ArchRegister) ++arch;
    }
    CHECK(io == 17);
    CHECK(arch == 6);

    // the canonical sections all appear
    auto has = [&](SectionKind k) {
        for (const auto& s : b.doc.sections)
            if (s.kind == k) return true;
        return false;
    };
    CHECK(has(SectionKind::Introduction));
    CHECK(has(SectionKind::IoPorts));
    CHECK(has(SectionKind::Registers));
    CHECK(has(SectionKind::Operation));
    CHECK(has(SectionKind::Architecture));
    CHECK(has(SectionKind::Waveform));

    CHECK(rejoin(b.doc.sections) == fsio::read_file(std::filesystem::path(kI2cBundle) / "spec.md"));

    REQUIRE(b.doc.waveforms.size() == 2);
    for (const auto& w : b.doc.waveforms) {
        CHECK(w.kind == WaveformAttachment::Kind::TimingJson);
        CHECK(!w.referenced_signals.empty());
        for (const auto& s : w.referenced_signals) CHECK(find_signal(b.signals, s) != nullptr);
    }
}
