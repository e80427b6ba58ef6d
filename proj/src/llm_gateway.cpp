// SPDX-License-Identifier: Apache-2.0
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "assertforge/llm.hpp"

#include "assertforge/fsio.hpp"
#include "assertforge/text.hpp"

#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <thread>

namespace assertforge::llm {

// ---- fingerprint ----

namespace {

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()) { EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr); }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }

    void feed(const void* data, size_t n) { EVP_DigestUpdate(ctx_, data, n); }

    std::string hex() {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int n = 0;
        EVP_DigestFinal_ex(ctx_, md, &n);
        static const char* k = "0123456789abcdef";
        std::string out;
        for (unsigned int i = 0; i < n; ++i) {
            out += k[md[i] >> 4];
            out += k[md[i] & 0xf];
        }
        return out;
    }

private:
    EVP_MD_CTX* ctx_;
};

} // namespace

std::string canonical_request_text(const ChatRequest& req) {
    std::string out = "system: " + text::canonicalize_ws(req.system_instruction) + "\n";
    for (const auto& m : req.messages) {
        out += m.role == ChatMessage::Role::User ? "user: " : "assistant: ";
        if (m.is_image()) {
            Sha256 h;
            h.feed(m.image.data(), m.image.size());
            out += "[image " + std::to_string(m.image.size()) + " bytes sha256=" +
                   h.hex().substr(0, 16) + "]";
        } else {
            out += text::canonicalize_ws(m.text);
        }
        out += '\n';
    }
    out += "temperature: " + std::to_string(req.temperature) + "\n";
    out += "max_tokens: " + std::to_string(req.max_tokens) + "\n";
    return out;
}

std::string fingerprint(const ChatRequest& req) {
    Sha256 h;
    auto put = [&](const void* data, size_t n) {
        uint8_t len[8];
        size_t v = n;
        for (int i = 7; i >= 0; --i) {
            len[i] = (uint8_t)(v & 0xff);
            v >>= 8;
        }
        h.feed(len, 8);
        h.feed(data, n);
    };
    auto put_str = [&](const std::string& s) { put(s.data(), s.size()); };

    put_str(text::canonicalize_ws(req.system_instruction));
    for (const auto& m : req.messages) {
        char role = m.role == ChatMessage::Role::User ? 'u' : 'a';
        h.feed(&role, 1);
        char kind = m.is_image() ? 'i' : 't';
        h.feed(&kind, 1);
        if (m.is_image()) put(m.image.data(), m.image.size());
        else put_str(text::canonicalize_ws(m.text));
    }
    // temperature as raw IEEE-754 bits, big-endian, so the hash never
    // depends on decimal formatting
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(req.temperature));
    std::memcpy(&bits, &req.temperature, 8);
    uint8_t tb[8];
    for (int i = 7; i >= 0; --i) {
        tb[i] = (uint8_t)(bits & 0xff);
        bits >>= 8;
    }
    h.feed(tb, 8);
    uint64_t mt = (uint64_t)req.max_tokens;
    uint8_t mb[8];
    for (int i = 7; i >= 0; --i) {
        mb[i] = (uint8_t)(mt & 0xff);
        mt >>= 8;
    }
    h.feed(mb, 8);
    return h.hex();
}

// ---- transcript store ----

std::optional<std::string> TranscriptStore::load(const std::string& fp) const {
    auto p = dir_ / (fp + ".json");
    if (!std::filesystem::is_regular_file(p)) return std::nullopt;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(fsio::read_file(p));
    } catch (const nlohmann::json::exception& e) {
        throw Error("transcript " + p.string() + ": invalid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("content") || !j["content"].is_string())
        throw Error("transcript " + p.string() + ": missing \"content\"");
    return j["content"].get<std::string>();
}

void TranscriptStore::save(const std::string& fp, const std::string& digest,
                           const std::string& content) const {
    auto p = dir_ / (fp + ".json");
    if (std::filesystem::is_regular_file(p)) return;  // append-only: keep the first recording
    std::filesystem::create_directories(dir_);
    nlohmann::ordered_json j;
    j["request_digest"] = digest;
    j["content"] = content;
    fsio::write_file_atomic(p, j.dump(2) + "\n");
}

// ---- gateway ----

GatewayConfig config_from_env(GatewayMode mode) {
    GatewayConfig cfg;
    cfg.mode = mode;
    if (const char* u = std::getenv("ASSERTFORGE_LLM_URL")) cfg.url = u;
    if (const char* k = std::getenv("ASSERTFORGE_LLM_KEY")) cfg.key = k;
    if (const char* m = std::getenv("ASSERTFORGE_LLM_MODEL")) cfg.model = m;
    return cfg;
}

namespace {

std::string base64(const std::vector<uint8_t>& bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                            (int)bytes.size());
    out.resize(n > 0 ? (size_t)n : 0);
    return out;
}

// Bounded in-flight gate (the cap is a runtime value, so no
// std::counting_semaphore here).
class Gate {
public:
    explicit Gate(int cap) : cap_(cap) {}

    void acquire() {
        std::unique_lock lk(mu_);
        cv_.wait(lk, [&] { return used_ < cap_; });
        ++used_;
    }
    void release() {
        std::lock_guard lk(mu_);
        --used_;
        cv_.notify_one();
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    int cap_;
    int used_ = 0;
};

struct GateHold {
    Gate& g;
    explicit GateHold(Gate& gate) : g(gate) { g.acquire(); }
    ~GateHold() { g.release(); }
};

// splits "https://host:port/path" into client base and path
struct UrlParts {
    std::string base;
    std::string path;
};

UrlParts split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint URL needs a scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace

struct Gateway::Impl {
    GatewayConfig cfg;
    TranscriptStore store;
    mutable Gate gate;

    explicit Impl(GatewayConfig c)
        : cfg(std::move(c)), store(cfg.transcript_dir), gate(cfg.max_in_flight) {}

    nlohmann::ordered_json wire_body(const ChatRequest& req) const {
        nlohmann::ordered_json body;
        body["model"] = cfg.model;
        auto messages = nlohmann::ordered_json::array();
        if (!req.system_instruction.empty())
            messages.push_back({{"role", "system"}, {"content", req.system_instruction}});
        for (const auto& m : req.messages) {
            const char* role = m.role == ChatMessage::Role::User ? "user" : "assistant";
            if (m.is_image()) {
                nlohmann::ordered_json part;
                part["type"] = "image_url";
                part["image_url"] = {
                    {"url", "data:" + m.image_mime + ";base64," + base64(m.image)}};
                messages.push_back(
                    {{"role", role}, {"content", nlohmann::ordered_json::array({part})}});
            } else {
                messages.push_back({{"role", role}, {"content", m.text}});
            }
        }
        body["messages"] = std::move(messages);
        body["temperature"] = req.temperature;
        body["max_tokens"] = req.max_tokens;
        return body;
    }

    ChatResponse live_call(const ChatRequest& req, const std::string& fp) const {
        if (cfg.url.empty())
            throw ConfigError("live backend needs ASSERTFORGE_LLM_URL");
        auto parts = split_url(cfg.url);
        std::string payload = wire_body(req).dump();

        std::string last_error;
        int rate_retry_after = -1;
        bool rate_limited = false;
        for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(
                    std::chrono::milliseconds((long long)cfg.retry_base_ms << (attempt - 1)));
            }
            httplib::Client cli(parts.base);
            cli.set_connection_timeout(10, 0);
            cli.set_read_timeout(120, 0);
            httplib::Headers headers;
            if (!cfg.key.empty()) headers.emplace("Authorization", "Bearer " + cfg.key);
            auto res = cli.Post(parts.path, headers, payload, "application/json");
            if (!res) {
                last_error = "connection failed (" + httplib::to_string(res.error()) + ")";
                rate_limited = false;
                continue;
            }
            if (res->status == 429) {
                rate_limited = true;
                rate_retry_after = -1;
                if (res->has_header("Retry-After")) {
                    try {
                        rate_retry_after = std::stoi(res->get_header_value("Retry-After"));
                    } catch (...) {}
                }
                continue;
            }
            if (res->status >= 500) {
                last_error = "status " + std::to_string(res->status);
                rate_limited = false;
                continue;
            }
            if (res->status != 200)
                throw BackendUnreachable("status " + std::to_string(res->status) + ": " +
                                         res->body.substr(0, 200));
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(res->body);
            } catch (const nlohmann::json::exception& e) {
                throw BackendUnreachable(std::string("unparseable response: ") + e.what());
            }
            if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty() ||
                !j["choices"][0].contains("message") ||
                !j["choices"][0]["message"].contains("content"))
                throw BackendUnreachable("response carries no choices[0].message.content");
            ChatResponse out;
            out.content = j["choices"][0]["message"]["content"].get<std::string>();
            out.backend_id = j.contains("model") && j["model"].is_string()
                                 ? j["model"].get<std::string>()
                                 : cfg.model;
            out.fingerprint = fp;
            return out;
        }
        if (rate_limited) throw RateLimited(rate_retry_after);
        throw BackendUnreachable(last_error.empty() ? "retries exhausted" : last_error);
    }
};

Gateway::Gateway(GatewayConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}
Gateway::~Gateway() = default;

const GatewayConfig& Gateway::config() const { return impl_->cfg; }

ChatResponse Gateway::complete(const ChatRequest& req) const {
    bool has_user = false;
    for (const auto& m : req.messages)
        if (m.role == ChatMessage::Role::User) has_user = true;
    if (!has_user) throw Error("chat request needs at least one user message");
    if (!impl_->cfg.multimodal)
        for (const auto& m : req.messages)
            if (m.is_image()) throw ImageUnsupported();

    std::string fp = fingerprint(req);
    const auto& cfg = impl_->cfg;

    if (cfg.mode == GatewayMode::Replay) {
        if (cfg.transcript_dir.empty())
            throw ConfigError("replay mode needs a transcript directory");
        auto hit = impl_->store.load(fp);
        if (!hit) throw ReplayMiss(fp, canonical_request_text(req));
        return {*hit, "replay", fp};
    }

    GateHold hold(impl_->gate);
    ChatResponse res = impl_->live_call(req, fp);
    if (cfg.mode == GatewayMode::Record) {
        if (cfg.transcript_dir.empty())
            throw ConfigError("record mode needs a transcript directory");
        impl_->store.save(fp, canonical_request_text(req), res.content);
    }
    return res;
}

} // namespace assertforge::llm
