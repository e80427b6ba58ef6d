// SPDX-License-Identifier: Apache-2.0
//
// Chat-completion gateway: one live wire client plus a transcript store
// that makes every pipeline stage replayable. Fingerprints are content
// hashes of the canonicalized request, so a transcript recorded once keeps
// serving byte-identical responses across runs and platforms.
#pragma once

#include "assertforge/diag.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace assertforge::llm {

class BackendUnreachable : public Error {
public:
    explicit BackendUnreachable(const std::string& what)
        : Error("backend unreachable: " + what) {}
};

class RateLimited : public Error {
public:
    explicit RateLimited(int retry_after_s)
        : Error("rate limited" + (retry_after_s >= 0
                                      ? " (retry after " + std::to_string(retry_after_s) + "s)"
                                      : std::string())),
          retry_after(retry_after_s) {}
    int retry_after = -1;  // seconds, -1 when the backend gave none
};

// Replay mode never falls through to a live call; a missing fingerprint is
// this error, carrying what fixture authoring needs.
class ReplayMiss : public Error {
public:
    ReplayMiss(const std::string& fp, const std::string& digest)
        : Error("no transcript for fingerprint " + fp), fingerprint(fp), request_digest(digest) {}
    std::string fingerprint;
    std::string request_digest;
};

class ImageUnsupported : public Error {
public:
    ImageUnsupported() : Error("configured backend does not accept image payloads") {}
};

struct ChatMessage {
    enum class Role { User, Assistant };
    Role role = Role::User;
    std::string text;
    std::vector<uint8_t> image;  // non-empty = opaque image part
    std::string image_mime = "image/png";

    bool is_image() const { return !image.empty(); }

    static ChatMessage user(std::string t) { return {Role::User, std::move(t), {}, {}}; }
    static ChatMessage assistant(std::string t) { return {Role::Assistant, std::move(t), {}, {}}; }
};

struct ChatRequest {
    std::string system_instruction;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    int max_tokens = 2048;
};

struct ChatResponse {
    std::string content;
    std::string backend_id;
    std::string fingerprint;
};

// 256-bit content hash over (system instruction, canonicalized message
// texts, image payload bytes, temperature, max_tokens) in fixed field
// order, hex-encoded. Whitespace-canonicalized text parts make the hash
// stable across platforms.
std::string fingerprint(const ChatRequest& req);

// Human-readable rendering of the canonicalized request; stored next to
// recorded responses so fixtures can be authored against a ReplayMiss.
std::string canonical_request_text(const ChatRequest& req);

// One JSON file per fingerprint: <hex>.json {"request_digest", "content"}.
class TranscriptStore {
public:
    explicit TranscriptStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::optional<std::string> load(const std::string& fp) const;
    // First recording wins: an existing entry is never rewritten.
    void save(const std::string& fp, const std::string& digest, const std::string& content) const;
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
};

enum class GatewayMode { Live, Record, Replay };

struct GatewayConfig {
    GatewayMode mode = GatewayMode::Replay;
    std::string url;    // full endpoint URL (live/record)
    std::string key;    // bearer token
    std::string model = "gpt-4o";
    std::string transcript_dir;  // record/replay
    bool multimodal = true;
    int max_in_flight = 4;
    int retries = 3;             // after the first attempt
    int retry_base_ms = 1000;    // 1s, 2s, 4s
};

// Fills url/key/model from ASSERTFORGE_LLM_URL / ASSERTFORGE_LLM_KEY /
// ASSERTFORGE_LLM_MODEL when set.
GatewayConfig config_from_env(GatewayMode mode);

class Gateway {
public:
    explicit Gateway(GatewayConfig cfg);
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    // Thread-safe; concurrent calls share the in-flight cap.
    ChatResponse complete(const ChatRequest& req) const;

    const GatewayConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace assertforge::llm
