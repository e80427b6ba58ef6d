// SPDX-License-Identifier: Apache-2.0
#include "assertforge/sva_generator.hpp"

#include "assertforge/doc_ingest.hpp"
#include "assertforge/fsio.hpp"

#include <doctest.h>

#include <filesystem>

using namespace assertforge;
using namespace assertforge::gen;

namespace {

const std::string kI2cBundle = std::string(ASSERTFORGE_SOURCE_DIR) + "/fixtures/mini_i2c";

std::string prompt(const char* name) {
    return fsio::read_file(std::string(ASSERTFORGE_SOURCE_DIR) + "/prompts/" + name);
}

std::filesystem::path fresh_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

struct I2c {
    ingest::Bundle bundle;
    std::vector<nl::SignalSpec> specs;
    std::vector<wave::BehaviorDescription> behaviors;
    GenerationPlan the_plan;

    I2c() : bundle(ingest::load_bundle(kI2cBundle)) {
        nl::Extractor ex;
        specs = nl::extract_all(ex, bundle.doc, bundle.signals).specs;
        for (const auto& att : bundle.doc.waveforms) {
            if (att.kind != ingest::WaveformAttachment::Kind::TimingJson) continue;
            auto d = wave::parse_timing(std::string(att.payload.begin(), att.payload.end()));
            for (auto& b : wave::describe_waveform(d, wave::builtin_templates()))
                behaviors.push_back(std::move(b));
        }
        the_plan = plan(specs, bundle.signals, behaviors);
    }

    Generator local() const {
        Generator g;
        g.defs = bundle.signals;
        g.clock = the_plan.clock;
        for (const auto& sec : bundle.doc.sections)
            if (sec.kind == ingest::SectionKind::Architecture) g.architecture = sec.body;
        g.width_prompt = prompt("sva_width.txt");
        g.conn_prompt = prompt("sva_connectivity.txt");
        g.func_prompt = prompt("sva_function.txt");
        return g;
    }

    const nl::SignalSpec& spec_of(const std::string& name) const {
        for (const auto& s : specs)
            if (s.name == name) return s;
        throw Error("no spec " + name);
    }
};

const I2c& i2c() {
    static I2c fixture;
    return fixture;
}

nl::SignalSpec toy_spec(const std::string& name, int width, const std::string& type,
                        std::vector<std::string> partners = {}) {
    nl::SignalSpec s;
    s.name = name;
    s.width = width;
    s.signal_type = type;
    s.direction = "input";
    s.functionality = "does " + name + " things";
    s.interconnection_signals = std::move(partners);
    return s;
}

llm::Gateway replay_gateway(const std::filesystem::path& dir) {
    llm::GatewayConfig cfg;
    cfg.mode = llm::GatewayMode::Replay;
    cfg.transcript_dir = dir.string();
    return llm::Gateway(cfg);
}

void author(const std::filesystem::path& dir, const llm::ChatRequest& req,
            const std::string& content) {
    llm::TranscriptStore store(dir);
    store.save(llm::fingerprint(req), llm::canonical_request_text(req), content);
}

} // namespace

TEST_CASE("clock resolution prefers the conventional names") {
    auto clocky = [](std::vector<std::string> names) {
        std::vector<nl::SignalSpec> specs;
        for (auto& n : names) specs.push_back(toy_spec(n, 1, "clock"));
        return specs;
    };
    CHECK(resolve_clock(clocky({"sysclk"})) == "sysclk");
    CHECK(resolve_clock(clocky({"sysclk", "clk"})) == "clk");
    CHECK(resolve_clock(clocky({"core_clk", "wb_clk_i"})) == "wb_clk_i");
    CHECK(resolve_clock(clocky({"phi2", "bus_clk"})) == "bus_clk");
    CHECK_THROWS_AS((void)resolve_clock(clocky({"a_clk", "b_clk"})), ClockUnresolved);
    CHECK_THROWS_AS((void)resolve_clock({toy_spec("rst", 1, "reset")}), ClockUnresolved);
}

TEST_CASE("the plan requests categories per signal type") {
    const auto& f = i2c();
    const auto& p = f.the_plan;
    CHECK(p.clock == "wb_clk_i");
    REQUIRE(p.items.size() == 23);

    int width = 0, conn = 0, func = 0;
    for (const auto& it : p.items) {
        for (auto c : it.categories) {
            if (c == Category::Width) ++width;
            if (c == Category::Connectivity) ++conn;
            if (c == Category::Function) ++func;
        }
        // category order is fixed within an item
        CHECK(std::is_sorted(it.categories.begin(), it.categories.end()));
        CHECK(it.categories.front() == Category::Width);
    }
    CHECK(width == 23);  // every signal gets one width request
    CHECK(conn == 5);    // 3 control IO + 2 control registers
    CHECK(func == 6);    // registers only (2 control + 4 data)
    CHECK(p.behavior_count == (int)f.behaviors.size());
    CHECK(p.behavior_count >= 2);

    auto item_of = [&](const std::string& n) {
        for (const auto& it : p.items)
            if (it.signal == n) return it;
        throw Error("no item");
    };
    CHECK(item_of("wb_clk_i").categories == std::vector<Category>{Category::Width});
    CHECK(item_of("wb_dat_i").categories == std::vector<Category>{Category::Width});
    CHECK(item_of("wb_stb_i").categories ==
          std::vector<Category>{Category::Width, Category::Connectivity});
    CHECK(item_of("ctr").categories ==
          std::vector<Category>{Category::Width, Category::Connectivity, Category::Function});
    CHECK(item_of("prer").categories ==
          std::vector<Category>{Category::Width, Category::Function});
    CHECK(item_of("ctr").source == "arch_register");
    CHECK(item_of("wb_stb_i").source == "io_port");

    auto lone = plan({toy_spec("clk", 1, "clock")},
                     {{"clk", 1, SignalKind::Input, Hierarchy::IoPort}}, {});
    REQUIRE(lone.items.size() == 1);
    CHECK(lone.items[0].categories == std::vector<Category>{Category::Width});
}

TEST_CASE("local width generation emits the canonical form") {
    auto g = i2c().local();
    auto ga = generate_width(g, i2c().spec_of("prer"));
    CHECK(ga.rec.text == "assert property (@(posedge wb_clk_i) ($bits(prer) == 16));");
    CHECK(ga.status == GeneratedAssertion::Status::Parsed);
    CHECK(ga.rec.category == "width");
    CHECK(ga.rec.source == "arch_register");
    CHECK(ga.rec.signal_type == "data");
    REQUIRE(ga.ast.has_value());
    CHECK(sva::bits_arg_signals(*ga.ast) == std::set<std::string>{"prer"});

    auto bad = toy_spec("ghost", 0, "data");
    CHECK_THROWS_AS((void)generate_width(g, bad), Error);
}

TEST_CASE("local connectivity covers every recorded partner") {
    auto g = i2c().local();

    auto stb = generate_connectivity(g, i2c().spec_of("wb_stb_i"));
    REQUIRE(stb.size() == 2);  // wb_cyc_i and wb_ack_o
    for (const auto& ga : stb) {
        CHECK(ga.status == GeneratedAssertion::Status::Parsed);
        CHECK(ga.rec.category == "connectivity");
        auto refs = sva::referenced_signals(*ga.ast);
        CHECK(refs.count("wb_stb_i") == 1);
        CHECK(refs.size() >= 2);
    }
    CHECK(stb[0].rec.text ==
          "assert property (@(posedge wb_clk_i) wb_stb_i |-> ##1 wb_cyc_i == $past(wb_cyc_i));");

    // multi-bit signals gate on a nonzero value
    auto ctr = generate_connectivity(g, i2c().spec_of("ctr"));
    REQUIRE(ctr.size() == 1);
    CHECK(ctr[0].rec.text.find("(ctr != 0) |->") != std::string::npos);

    CHECK_THROWS_AS((void)generate_connectivity(g, toy_spec("lonely", 1, "control")),
                    EmptyInterconnection);
}

TEST_CASE("behavior descriptions map onto canonical assertion forms") {
    Generator g;
    g.clock = "clk";
    g.defs = {{"req", 1, SignalKind::Input, Hierarchy::IoPort},
              {"ack", 1, SignalKind::Output, Hierarchy::IoPort}};

    auto behavior = [](const std::string& id,
                       std::map<std::string, std::string> params,
                       const std::string& txt = "") {
        wave::BehaviorDescription b;
        b.template_id = id;
        b.text = txt;
        b.parameters = std::move(params);
        return b;
    };

    std::vector<std::string> w;
    auto lat = generate_function(
        g, behavior("response-latency", {{"SIG", "req"}, {"SIG2", "ack"}, {"N", "2"}}), &w);
    REQUIRE(lat.size() == 1);
    CHECK(lat[0].rec.text == "assert property (@(posedge clk) req |-> ##[1:2] ack);");
    CHECK(lat[0].rec.source == "waveform");
    CHECK(lat[0].rec.signal.empty());
    CHECK(lat[0].rec.category == "function");
    CHECK(lat[0].status == GeneratedAssertion::Status::Parsed);

    auto stab = generate_function(g, behavior("stability", {{"SIG", "req"}, {"N", "4"}}), &w);
    REQUIRE(stab.size() == 1);
    CHECK(stab[0].rec.text == "assert property (@(posedge clk) ##1 $stable(req));");
    CHECK(stab[0].status == GeneratedAssertion::Status::Parsed);

    auto edge =
        generate_function(g, behavior("edge-cause", {{"SIG", "req"}, {"SIG2", "ack"}}), &w);
    REQUIRE(edge.size() == 1);
    CHECK(edge[0].rec.text ==
          "assert property (@(posedge clk) $rose(req) |-> ##1 !$stable(ack));");
    CHECK(edge[0].status == GeneratedAssertion::Status::Parsed);

    auto mux = generate_function(
        g, behavior("mutual-exclusion", {{"SIG", "req"}, {"SIG2", "ack"}}), &w);
    REQUIRE(mux.size() == 1);
    CHECK(mux[0].rec.text == "assert property (@(posedge clk) !(req && ack));");
    CHECK(mux[0].status == GeneratedAssertion::Status::Parsed);

    auto hold = generate_function(
        g, behavior("value-hold", {{"SIG", "req"}, {"SIG2", "ack"}, {"VAL", "1"}}), &w);
    REQUIRE(hold.size() == 1);
    CHECK(hold[0].rec.text == "assert property (@(posedge clk) ack |-> req == 1);");
    CHECK(hold[0].status == GeneratedAssertion::Status::Parsed);
    CHECK(w.empty());

    // model-authored template ids classify by parameter signature + wording
    auto ext = generate_function(
        g, behavior("t1", {{"SIG", "req"}, {"SIG2", "ack"}, {"N", "3"}},
                    "ack answers req within 3 cycles"),
        &w);
    REQUIRE(ext.size() == 1);
    CHECK(ext[0].rec.text == "assert property (@(posedge clk) req |-> ##[1:3] ack);");

    auto none = generate_function(g, behavior("t9", {}, "some freeform claim"), &w);
    CHECK(none.empty());
    REQUIRE(!w.empty());
    CHECK(w.back().find("t9") != std::string::npos);

    std::vector<std::string> w2;
    auto incomplete = generate_function(g, behavior("response-latency", {{"SIG", "req"}}), &w2);
    CHECK(incomplete.empty());
    REQUIRE(w2.size() == 1);
    CHECK(w2[0].find("parameters incomplete") != std::string::npos);
}

TEST_CASE("prose function specs are skipped locally with a warning") {
    auto g = i2c().local();
    std::vector<std::string> w;
    CHECK(generate_function(g, i2c().spec_of("prer"), &w).empty());
    REQUIRE(w.size() == 1);
    CHECK(w[0].find("prer") != std::string::npos);

    std::vector<std::string> w2;
    auto empty = toy_spec("mute", 1, "data");
    empty.functionality = "";
    CHECK(generate_function(g, empty, &w2).empty());
    REQUIRE(w2.size() == 1);
    CHECK(w2[0].find("nothing described") != std::string::npos);
}

TEST_CASE("response blocks split into top-level assert statements") {
    auto two = parse_response_blocks(
        "Here you go:\n```systemverilog\n"
        "assert property (@(posedge clk) a |-> b);\n"
        "assert property (@(posedge clk) c);\n"
        "```\ndone.\n");
    REQUIRE(two.size() == 2);
    CHECK(two[0] == "assert property (@(posedge clk) a |-> b);");
    CHECK(two[1] == "assert property (@(posedge clk) c);");

    CHECK(parse_response_blocks("No code here, sorry.").empty());

    auto nested = parse_response_blocks(
        "```sv\n"
        "assert property (@(posedge clk)\n"
        "  (a && (b || c)) |->\n"
        "  ##[1:3] (d == $past(e, 2)));\n"
        "```\n");
    REQUIRE(nested.size() == 1);
    CHECK(nested[0].find("$past(e, 2)") != std::string::npos);
    CHECK(nested[0].back() == ';');

    auto commented = parse_response_blocks(
        "```systemverilog\n"
        "// assert property notes: width check below\n"
        "assert property (@(posedge clk) $bits(x) == 4); // done\n"
        "```\n");
    REQUIRE(commented.size() == 1);
    CHECK(commented[0] == "assert property (@(posedge clk) $bits(x) == 4);");

    auto fences = parse_response_blocks(
        "```\nassert property (@(posedge clk) a);\n```\n"
        "and then\n"
        "```\nassert property (@(posedge clk) b);\n```\n");
    REQUIRE(fences.size() == 2);
    CHECK(fences[0].find("clk) a") != std::string::npos);
    CHECK(fences[1].find("clk) b") != std::string::npos);
}

TEST_CASE("replayed width responses are checked structurally") {
    auto dir = fresh_dir("assertforge_gen_width");
    auto g = i2c().local();
    const auto& spec = i2c().spec_of("wb_dat_i");

    author(dir, build_width_request(g, spec),
           "```systemverilog\nassert property (@(posedge wb_clk_i) ($bits(wb_dat_i) == 8));\n```");
    auto gw = replay_gateway(dir);
    g.gateway = &gw;

    auto ga = generate_width(g, spec);
    CHECK(ga.status == GeneratedAssertion::Status::Parsed);
    REQUIRE(ga.ast.has_value());
    CHECK(sva::bits_arg_signals(*ga.ast) == std::set<std::string>{"wb_dat_i"});
    CHECK(ga.rec.text.find(" 8") != std::string::npos);

    // a parseable response that checks no $bits is a category mismatch
    auto dir2 = fresh_dir("assertforge_gen_width_bad");
    auto g2 = i2c().local();
    author(dir2, build_width_request(g2, spec),
           "```systemverilog\nassert property (@(posedge wb_clk_i) wb_dat_i == 0);\n```");
    auto gw2 = replay_gateway(dir2);
    g2.gateway = &gw2;
    auto bad = generate_width(g2, spec);
    CHECK(bad.status == GeneratedAssertion::Status::SyntaxErr);
    CHECK(bad.reason == "category mismatch");
    CHECK(!bad.ast.has_value());

    // prose-only response
    auto dir3 = fresh_dir("assertforge_gen_width_prose");
    auto g3 = i2c().local();
    author(dir3, build_width_request(g3, spec), "I cannot help with that.");
    auto gw3 = replay_gateway(dir3);
    g3.gateway = &gw3;
    CHECK_THROWS_AS((void)generate_width(g3, spec), GenerationUnparseable);
}

TEST_CASE("replayed connectivity responses keep bad blocks isolated") {
    auto dir = fresh_dir("assertforge_gen_conn");
    auto g = i2c().local();
    const auto& spec = i2c().spec_of("ctr");

    author(dir, build_connectivity_request(g, spec),
           "```systemverilog\n"
           "assert property (@(posedge wb_clk_i) wb_we_i |-> ##1 ctr == $past(wb_dat_i));\n"
           "```\n"
           "```systemverilog\n"
           "assert property (@(posedge wb_clk_i) ctr throughout wb_cyc_i);\n"
           "```\n"
           "```systemverilog\n"
           "assert property (@(posedge wb_clk_i) ctr == ctr);\n"
           "```\n");
    auto gw = replay_gateway(dir);
    g.gateway = &gw;

    auto out = generate_connectivity(g, spec);
    REQUIRE(out.size() == 3);
    CHECK(out[0].status == GeneratedAssertion::Status::Parsed);
    auto refs = sva::referenced_signals(*out[0].ast);
    CHECK(refs.count("ctr") == 1);
    CHECK(refs.count("wb_dat_i") == 1);
    CHECK(out[1].status == GeneratedAssertion::Status::SyntaxErr);
    CHECK(out[1].reason.find("category mismatch") == std::string::npos);  // real syntax issue
    CHECK(out[2].status == GeneratedAssertion::Status::SyntaxErr);
    CHECK(out[2].reason == "category mismatch");  // references one signal only
}

TEST_CASE("the full plan generates in a stable order") {
    const auto& f = i2c();
    auto g = f.local();
    auto res = generate_all(g, f.the_plan, f.specs, f.behaviors);

    int width = 0;
    for (const auto& ga : res.assertions)
        if (ga.rec.category == "width") ++width;
    CHECK(width == 23);  // plan conservation: every known-width signal

    // order: signals in declaration order, categories width < conn < func,
    // then waveform-derived records
    size_t i = 0;
    for (const auto& item : f.the_plan.items) {
        REQUIRE(i < res.assertions.size());
        CHECK(res.assertions[i].rec.signal == item.signal);
        CHECK(res.assertions[i].rec.category == "width");
        ++i;
        while (i < res.assertions.size() && res.assertions[i].rec.signal == item.signal &&
               res.assertions[i].rec.source != "waveform") {
            CHECK(res.assertions[i].rec.category == "connectivity");
            ++i;
        }
    }
    for (; i < res.assertions.size(); ++i) {
        CHECK(res.assertions[i].rec.source == "waveform");
        CHECK(res.assertions[i].rec.signal.empty());
        CHECK(res.assertions[i].rec.category == "function");
    }
    CHECK(res.assertions.back().rec.source == "waveform");

    // local mode: prose-function tasks warn, nothing crashes the batch
    int func_warnings = 0;
    for (const auto& w : res.warnings)
        if (w.find("function") != std::string::npos) ++func_warnings;
    CHECK(func_warnings == 6);

    // determinism
    auto res2 = generate_all(g, f.the_plan, f.specs, f.behaviors);
    CHECK(assertions_to_json(records_of(res2)) == assertions_to_json(records_of(res)));

    // every emitted local assertion parses
    for (const auto& ga : res.assertions)
        CHECK(ga.status == GeneratedAssertion::Status::Parsed);
}

TEST_CASE("a failing task surfaces as a warning, not an abort") {
    const auto& f = i2c();
    auto specs = f.specs;
    for (auto& s : specs)
        if (s.name == "wb_stb_i") s.interconnection_signals.clear();
    auto p = plan(specs, f.bundle.signals, f.behaviors);
    auto g = f.local();
    auto res = generate_all(g, p, specs, f.behaviors);

    bool warned = false;
    for (const auto& w : res.warnings)
        warned = warned || (w.find("connectivity wb_stb_i") != std::string::npos &&
                            w.find("no interconnection signals") != std::string::npos);
    CHECK(warned);

    int stb_conn = 0;
    for (const auto& ga : res.assertions)
        if (ga.rec.signal == "wb_stb_i" && ga.rec.category == "connectivity") ++stb_conn;
    CHECK(stb_conn == 0);

    // width task for the same signal still ran
    bool stb_width = false;
    for (const auto& ga : res.assertions)
        stb_width = stb_width || (ga.rec.signal == "wb_stb_i" && ga.rec.category == "width");
    CHECK(stb_width);
}

TEST_CASE("replayed generation runs concurrently and lands in plan order") {
    auto dir = fresh_dir("assertforge_gen_all_replay");
    std::vector<nl::SignalSpec> specs = {toy_spec("clk", 1, "clock"),
                                         toy_spec("sel", 1, "control", {"q"}),
                                         toy_spec("q", 8, "data")};
    std::vector<SignalDefinition> defs = {{"clk", 1, SignalKind::Input, Hierarchy::IoPort},
                                          {"sel", 1, SignalKind::Input, Hierarchy::IoPort},
                                          {"q", 8, SignalKind::Output, Hierarchy::IoPort}};
    auto p = plan(specs, defs, {});

    Generator g;
    g.defs = defs;
    g.clock = p.clock;
    g.width_prompt = prompt("sva_width.txt");
    g.conn_prompt = prompt("sva_connectivity.txt");
    g.func_prompt = prompt("sva_function.txt");

    auto width_resp = [](const std::string& name, int w) {
        return "```systemverilog\nassert property (@(posedge clk) ($bits(" + name +
               ") == " + std::to_string(w) + "));\n```";
    };
    author(dir, build_width_request(g, specs[0]), width_resp("clk", 1));
    author(dir, build_width_request(g, specs[1]), width_resp("sel", 1));
    author(dir, build_width_request(g, specs[2]), width_resp("q", 8));
    author(dir, build_connectivity_request(g, specs[1]),
           "```systemverilog\nassert property (@(posedge clk) sel |-> ##1 q == $past(q));\n```");

    auto gw = replay_gateway(dir);
    g.gateway = &gw;
    auto res = generate_all(g, p, specs, {});
    REQUIRE(res.assertions.size() == 4);
    CHECK(res.warnings.empty());
    CHECK(res.assertions[0].rec.signal == "clk");
    CHECK(res.assertions[1].rec.signal == "sel");
    CHECK(res.assertions[1].rec.category == "width");
    CHECK(res.assertions[2].rec.category == "connectivity");
    CHECK(res.assertions[3].rec.signal == "q");

    // retrieval-augmented prompts hit the same transcripts only when the
    // index matches; a missing transcript isolates to its own task
    auto res2 = generate_all(g, p, specs, {});
    CHECK(assertions_to_json(records_of(res2)) == assertions_to_json(records_of(res)));

    knowledge::LexicalIndex idx = knowledge::build_index_from(
        {{"notes.md", "Bit width checks use $bits on the signal.\n\n"
                      "Connectivity checks relate a control signal to its partners."}});
    g.index = &idx;
    auto res3 = generate_all(g, p, specs, {});
    CHECK(res3.assertions.empty());
    CHECK(res3.warnings.empty());
    CHECK(res3.errors.size() == 4);  // every prompt changed, no transcript matches
    for (const auto& e : res3.errors)
        CHECK(e.find("no transcript for fingerprint") != std::string::npos);
}
