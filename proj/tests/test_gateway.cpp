// SPDX-License-Identifier: Apache-2.0
#define CPPHTTPLIB_OPENSSL_SUPPORT  // must match the gateway TU
#include "assertforge/llm.hpp"

#include "assertforge/fsio.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <thread>

using namespace assertforge;
using namespace assertforge::llm;

namespace {

ChatRequest simple_request(const std::string& user_text) {
    ChatRequest req;
    req.system_instruction = "You are a verification assistant.";
    req.messages.push_back(ChatMessage::user(user_text));
    return req;
}

std::filesystem::path fresh_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

// loopback chat-completion stub
struct StubServer {
    httplib::Server srv;
    std::thread th;
    int port = 0;

    explicit StubServer(httplib::Server::Handler handler) {
        srv.Post("/v1/chat/completions", std::move(handler));
        port = srv.bind_to_any_port("127.0.0.1");
        th = std::thread([this] { srv.listen_after_bind(); });
        srv.wait_until_ready();
    }
    ~StubServer() {
        srv.stop();
        th.join();
    }
    std::string url() const {
        return "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    }
};

std::string ok_body(const std::string& content, const std::string& model = "stub-model") {
    nlohmann::json j;
    j["model"] = model;
    j["choices"] = {{{"message", {{"role", "assistant"}, {"content", content}}}}};
    return j.dump();
}

} // namespace

TEST_CASE("fingerprints are stable and sensitive to every field") {
    auto base = simple_request("hello world");
    auto fp = fingerprint(base);
    CHECK(fp.size() == 64);
    CHECK(fp.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(fingerprint(base) == fp);

    // trailing whitespace and CRLF canonicalize away
    auto ws = simple_request("hello   world  \r\n");
    CHECK(fingerprint(ws) == fp);
    auto tabs = simple_request("hello\t \tworld");
    CHECK(fingerprint(tabs) == fp);

    // real differences change the hash
    CHECK(fingerprint(simple_request("hello there")) != fp);
    auto temp = base;
    temp.temperature = 0.2;
    CHECK(fingerprint(temp) != fp);
    auto tok = base;
    tok.max_tokens = 512;
    CHECK(fingerprint(tok) != fp);
    auto sys = base;
    sys.system_instruction = "Other instruction";
    CHECK(fingerprint(sys) != fp);
    auto role = base;
    role.messages[0].role = ChatMessage::Role::Assistant;
    CHECK(fingerprint(role) != fp);

    // image payloads hash by bytes
    auto img1 = base;
    ChatMessage m;
    m.image = {1, 2, 3, 4};
    img1.messages.push_back(m);
    auto img2 = img1;
    img2.messages.back().image[3] = 5;
    CHECK(fingerprint(img1) != fp);
    CHECK(fingerprint(img1) != fingerprint(img2));

    // newlines survive canonicalization (only spaces/tabs collapse)
    CHECK(fingerprint(simple_request("a\nb")) != fingerprint(simple_request("a b")));
}

TEST_CASE("canonical request text renders roles and image digests") {
    auto req = simple_request("  what   is\tthe ack  latency? ");
    req.messages.push_back(ChatMessage::assistant("one cycle"));
    ChatMessage img;
    img.image = {9, 9, 9};
    req.messages.push_back(img);
    auto txt = canonical_request_text(req);
    CHECK(txt.find("system: You are a verification assistant.\n") != std::string::npos);
    CHECK(txt.find("user: what is the ack latency?\n") != std::string::npos);
    CHECK(txt.find("assistant: one cycle\n") != std::string::npos);
    CHECK(txt.find("[image 3 bytes sha256=") != std::string::npos);
    CHECK(txt.find("max_tokens: 2048") != std::string::npos);
}

TEST_CASE("replay returns stored content byte-identically and misses loudly") {
    auto dir = fresh_dir("assertforge_transcripts");
    auto req = simple_request("generate an assertion for wb_ack_o");
    auto fp = fingerprint(req);

    TranscriptStore store(dir);
    std::string content = "assert property (@(posedge wb_clk_i) wb_stb_i |-> ##1 wb_ack_o);\n";
    store.save(fp, canonical_request_text(req), content);

    GatewayConfig cfg;
    cfg.mode = GatewayMode::Replay;
    cfg.transcript_dir = dir.string();
    cfg.url = "https://nonexistent.invalid/v1";  // must never be contacted
    Gateway gw(cfg);

    auto res = gw.complete(req);
    CHECK(res.content == content);
    CHECK(res.backend_id == "replay");
    CHECK(res.fingerprint == fp);

    auto other = simple_request("something never recorded");
    try {
        (void)gw.complete(other);
        FAIL("expected ReplayMiss");
    } catch (const ReplayMiss& e) {
        CHECK(e.fingerprint == fingerprint(other));
        CHECK(e.request_digest.find("something never recorded") != std::string::npos);
    }

    // append-only: a second save with different content does not clobber
    store.save(fp, "digest", "other content");
    CHECK(gw.complete(req).content == content);

    // whitespace variants of the request hit the same transcript
    auto ws = simple_request("generate an assertion   for wb_ack_o \r\n");
    CHECK(gw.complete(ws).content == content);
}

TEST_CASE("chat requests need a user message") {
    GatewayConfig cfg;
    cfg.mode = GatewayMode::Replay;
    cfg.transcript_dir = fresh_dir("assertforge_transcripts_inv").string();
    Gateway gw(cfg);
    ChatRequest req;
    req.messages.push_back(ChatMessage::assistant("I go first"));
    CHECK_THROWS_AS((void)gw.complete(req), Error);
    CHECK_THROWS_AS((void)gw.complete(ChatRequest{}), Error);
}

TEST_CASE("image payloads require a multimodal backend") {
    GatewayConfig cfg;
    cfg.mode = GatewayMode::Replay;
    cfg.transcript_dir = fresh_dir("assertforge_transcripts_img").string();
    cfg.multimodal = false;
    Gateway gw(cfg);
    auto req = simple_request("describe this waveform");
    ChatMessage img;
    img.image = {1, 2, 3};
    req.messages.push_back(img);
    CHECK_THROWS_AS((void)gw.complete(req), ImageUnsupported);
}

TEST_CASE("live mode speaks the chat-completion wire protocol") {
    std::string seen_body;
    std::string seen_auth;
    StubServer server([&](const httplib::Request& rq, httplib::Response& rs) {
        seen_body = rq.body;
        seen_auth = rq.get_header_value("Authorization");
        rs.set_content(ok_body("pong"), "application/json");
    });

    GatewayConfig cfg;
    cfg.mode = GatewayMode::Live;
    cfg.url = server.url();
    cfg.key = "sk-test-key";
    cfg.model = "test-model";
    Gateway gw(cfg);

    auto req = simple_request("ping");
    req.messages.push_back(ChatMessage::assistant("earlier reply"));
    req.messages.push_back(ChatMessage::user("again"));
    auto res = gw.complete(req);
    CHECK(res.content == "pong");
    CHECK(res.backend_id == "stub-model");
    CHECK(res.fingerprint == fingerprint(req));
    CHECK(seen_auth == "Bearer sk-test-key");

    auto body = nlohmann::json::parse(seen_body);
    CHECK(body["model"] == "test-model");
    CHECK(body["temperature"] == 0.0);
    CHECK(body["max_tokens"] == 2048);
    REQUIRE(body["messages"].size() == 4);  // system + three turns
    CHECK(body["messages"][0]["role"] == "system");
    CHECK(body["messages"][1]["role"] == "user");
    CHECK(body["messages"][1]["content"] == "ping");
    CHECK(body["messages"][2]["role"] == "assistant");
    CHECK(body["messages"][3]["content"] == "again");
}

TEST_CASE("image parts go out as data URLs") {
    std::string seen_body;
    StubServer server([&](const httplib::Request& rq, httplib::Response& rs) {
        seen_body = rq.body;
        rs.set_content(ok_body("seen"), "application/json");
    });

    GatewayConfig cfg;
    cfg.mode = GatewayMode::Live;
    cfg.url = server.url();
    Gateway gw(cfg);

    auto req = simple_request("look at this");
    ChatMessage img;
    img.image = {'a', 'b', 'c', 'd'};  // base64 "YWJjZA=="
    img.image_mime = "image/jpeg";
    req.messages.push_back(img);
    CHECK(gw.complete(req).content == "seen");

    auto body = nlohmann::json::parse(seen_body);
    const auto& part = body["messages"][2]["content"][0];
    CHECK(part["type"] == "image_url");
    CHECK(part["image_url"]["url"] == "data:image/jpeg;base64,YWJjZA==");
}

TEST_CASE("record mode persists transcripts that replay without a backend") {
    auto dir = fresh_dir("assertforge_transcripts_rec");
    std::atomic<int> calls{0};
    StubServer server([&](const httplib::Request&, httplib::Response& rs) {
        ++calls;
        rs.set_content(ok_body("recorded answer"), "application/json");
    });

    GatewayConfig cfg;
    cfg.mode = GatewayMode::Record;
    cfg.url = server.url();
    cfg.transcript_dir = dir.string();
    Gateway gw(cfg);

    auto req = simple_request("record me");
    auto res = gw.complete(req);
    CHECK(res.content == "recorded answer");
    CHECK(calls == 1);

    auto file = dir / (fingerprint(req) + ".json");
    REQUIRE(std::filesystem::is_regular_file(file));
    auto j = nlohmann::json::parse(fsio::read_file(file));
    CHECK(j["content"] == "recorded answer");
    CHECK(j["request_digest"].get<std::string>().find("record me") != std::string::npos);

    GatewayConfig rcfg;
    rcfg.mode = GatewayMode::Replay;
    rcfg.transcript_dir = dir.string();
    Gateway replay(rcfg);
    CHECK(replay.complete(req).content == "recorded answer");
    CHECK(calls == 1);  // replay never called the server
}

TEST_CASE("transient failures retry with backoff, then fail loudly") {
    std::atomic<int> calls{0};
    StubServer flaky([&](const httplib::Request&, httplib::Response& rs) {
        int n = ++calls;
        if (n <= 2) {
            rs.status = 500;
            rs.set_content("boom", "text/plain");
        } else {
            rs.set_content(ok_body("finally"), "application/json");
        }
    });

    GatewayConfig cfg;
    cfg.mode = GatewayMode::Live;
    cfg.url = flaky.url();
    cfg.retry_base_ms = 1;
    Gateway gw(cfg);
    CHECK(gw.complete(simple_request("try hard")).content == "finally");
    CHECK(calls == 3);

    std::atomic<int> always_calls{0};
    StubServer dead([&](const httplib::Request&, httplib::Response& rs) {
        ++always_calls;
        rs.status = 500;
    });
    GatewayConfig dcfg;
    dcfg.mode = GatewayMode::Live;
    dcfg.url = dead.url();
    dcfg.retry_base_ms = 1;
    Gateway dgw(dcfg);
    CHECK_THROWS_AS((void)dgw.complete(simple_request("no luck")), BackendUnreachable);
    CHECK(always_calls == 4);  // first attempt + 3 retries

    // unreachable endpoint entirely
    GatewayConfig ucfg;
    ucfg.mode = GatewayMode::Live;
    ucfg.url = "http://127.0.0.1:1/v1/chat/completions";
    ucfg.retry_base_ms = 1;
    Gateway ugw(ucfg);
    CHECK_THROWS_AS((void)ugw.complete(simple_request("nobody home")), BackendUnreachable);
}

TEST_CASE("rate limiting surfaces retry-after") {
    StubServer limited([&](const httplib::Request&, httplib::Response& rs) {
        rs.status = 429;
        rs.set_header("Retry-After", "7");
    });
    GatewayConfig cfg;
    cfg.mode = GatewayMode::Live;
    cfg.url = limited.url();
    cfg.retry_base_ms = 1;
    Gateway gw(cfg);
    try {
        (void)gw.complete(simple_request("too fast"));
        FAIL("expected RateLimited");
    } catch (const RateLimited& e) {
        CHECK(e.retry_after == 7);
    }
}

TEST_CASE("hard client errors do not retry") {
    std::atomic<int> calls{0};
    StubServer server([&](const httplib::Request&, httplib::Response& rs) {
        ++calls;
        rs.status = 400;
        rs.set_content("bad request", "text/plain");
    });
    GatewayConfig cfg;
    cfg.mode = GatewayMode::Live;
    cfg.url = server.url();
    cfg.retry_base_ms = 1;
    Gateway gw(cfg);
    CHECK_THROWS_AS((void)gw.complete(simple_request("oops")), BackendUnreachable);
    CHECK(calls == 1);
}

TEST_CASE("concurrent calls respect the in-flight cap") {
    std::atomic<int> inside{0};
    std::atomic<int> peak{0};
    StubServer server([&](const httplib::Request&, httplib::Response& rs) {
        int now = ++inside;
        int prev = peak.load();
        while (now > prev && !peak.compare_exchange_weak(prev, now)) {}
        std::this_thread::sleep_for(std::chrono::milliseconds(25));
        --inside;
        rs.set_content(ok_body("done"), "application/json");
    });

    GatewayConfig cfg;
    cfg.mode = GatewayMode::Live;
    cfg.url = server.url();
    cfg.max_in_flight = 2;
    Gateway gw(cfg);

    std::vector<std::thread> threads;
    std::atomic<int> ok{0};
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&, i] {
            auto res = gw.complete(simple_request("job " + std::to_string(i)));
            if (res.content == "done") ++ok;
        });
    for (auto& t : threads) t.join();
    CHECK(ok == 8);
    CHECK(peak.load() <= 2);
}

TEST_CASE("config_from_env picks up endpoint variables") {
    setenv("ASSERTFORGE_LLM_URL", "https://example.invalid/v1/chat/completions", 1);
    setenv("ASSERTFORGE_LLM_KEY", "sk-env", 1);
    setenv("ASSERTFORGE_LLM_MODEL", "env-model", 1);
    auto cfg = config_from_env(GatewayMode::Live);
    CHECK(cfg.url == "https://example.invalid/v1/chat/completions");
    CHECK(cfg.key == "sk-env");
    CHECK(cfg.model == "env-model");
    unsetenv("ASSERTFORGE_LLM_URL");
    unsetenv("ASSERTFORGE_LLM_KEY");
    unsetenv("ASSERTFORGE_LLM_MODEL");
}
