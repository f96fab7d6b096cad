#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace pitchside::gateway {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role) noexcept;

struct Message {
    Role role = Role::User;
    std::string text;
};

struct ChatRequest {
    std::vector<Message> messages;
    double temperature = 0.0;
    int max_tokens = 2048;
    // Provenance label, e.g. "planner" or "tool:Choice Selection". Not part of the cache key.
    std::string tag;
    // Opaque file references forwarded to multimodal backends.
    std::vector<std::string> materials;

    static ChatRequest user(std::string text, std::string tag, std::vector<std::string> materials = {});
};

struct Usage {
    int prompt_tokens = 0;
    int completion_tokens = 0;
};

struct ChatResponse {
    std::string text;
    std::optional<Usage> usage;
    std::chrono::milliseconds latency{0};
};

// Throws InvalidRequest when the request breaks its invariants.
void validate(const ChatRequest& request);

// Message texts joined by newlines; what scripted patterns are matched against.
std::string request_text(const ChatRequest& request);

// SHA-256 over a canonical serialization of messages, materials and sampling parameters.
std::string request_key(const ChatRequest& request);

// All implementations are safe to call concurrently.
class Gateway {
public:
    virtual ~Gateway() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// --- scripted -----------------------------------------------------------

enum class MatchKind { Exact, Substring };

struct ScriptRecord {
    std::string pattern;
    MatchKind match_kind = MatchKind::Substring;
    std::string response_text;
    // When non-empty the record only answers requests carrying this tag.
    std::string tag;
};

// Ordered pattern table; the first matching record answers.
class ScriptedGateway final : public Gateway {
public:
    explicit ScriptedGateway(std::vector<ScriptRecord> records);

    // JSON array of {pattern, match_kind: "exact"|"substring", response_text, tag?}.
    static std::shared_ptr<ScriptedGateway> load(const std::string& path);

    ChatResponse complete(const ChatRequest& request) override;

    const std::vector<ScriptRecord>& records() const noexcept { return records_; }

private:
    std::vector<ScriptRecord> records_;
};

std::vector<ScriptRecord> parse_script(const nlohmann::json& doc);

// --- record / replay ----------------------------------------------------

struct CacheStats {
    std::size_t hits = 0;
    std::size_t misses = 0;
    std::size_t entries = 0;

    friend bool operator==(const CacheStats&, const CacheStats&) = default;
};

// Append-only response cache keyed by request_key. With a directory it
// persists one JSON file per entry (written atomically) and reloads them on
// construction; without one it lives in memory.
class ReplayCache {
public:
    explicit ReplayCache(std::string directory = {});

    std::optional<ChatResponse> lookup(const ChatRequest& request);
    void record(const ChatRequest& request, const ChatResponse& response);
    CacheStats stats() const;
    const std::string& directory() const noexcept { return directory_; }

private:
    std::string directory_;
    mutable std::mutex mu_;
    std::map<std::string, std::string> entries_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

// Serves from the cache. A miss raises CacheMiss in strict mode (no upstream);
// with an upstream the request is forwarded and the response recorded.
class ReplayGateway final : public Gateway {
public:
    explicit ReplayGateway(std::shared_ptr<ReplayCache> cache, std::shared_ptr<Gateway> upstream = nullptr);

    ChatResponse complete(const ChatRequest& request) override;
    void record(const ChatRequest& request, const ChatResponse& response);
    CacheStats cache_stats() const { return cache_->stats(); }

private:
    std::shared_ptr<ReplayCache> cache_;
    std::shared_ptr<Gateway> upstream_;
};

// --- remote -------------------------------------------------------------

struct HttpPost {
    std::string url;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
    std::chrono::milliseconds timeout{60000};
};

struct HttpResult {
    enum class Failure { None, Timeout, Connection };
    Failure failure = Failure::None;
    int status = 0;
    std::string body;
    std::string error;
};

using Transport = std::function<HttpResult(const HttpPost&)>;

// cpp-httplib backed transport (http:// and https://).
HttpResult http_post(const HttpPost& post);

// Maps request materials into extra content parts of the outgoing user message.
using MaterialEncoder = std::function<nlohmann::json(const std::vector<std::string>&)>;

nlohmann::json reference_encoder(const std::vector<std::string>& materials);

struct RemoteConfig {
    std::string endpoint;  // full chat-completions URL
    std::string api_key;
    std::string model;
    int max_retries = 3;
    std::chrono::milliseconds backoff_base{500};
    std::chrono::milliseconds timeout{60000};
    std::size_t max_in_flight = 4;
    std::uint64_t jitter_seed = 0x5eed;

    // MODEL_ENDPOINT, MODEL_API_KEY, MODEL_NAME.
    static RemoteConfig from_env();
};

// OpenAI-style chat completion client with bounded retries (exponential
// backoff with jitter) and a cap on concurrent in-flight calls.
class RemoteGateway final : public Gateway {
public:
    explicit RemoteGateway(RemoteConfig config, Transport transport = http_post,
                           MaterialEncoder encoder = reference_encoder);

    ChatResponse complete(const ChatRequest& request) override;

    std::size_t peak_in_flight() const;

private:
    nlohmann::json build_body(const ChatRequest& request) const;
    std::chrono::milliseconds backoff(int attempt);

    RemoteConfig config_;
    Transport transport_;
    MaterialEncoder encoder_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::size_t in_flight_ = 0;
    std::size_t peak_ = 0;
    std::uint64_t jitter_state_;
};

// --- observation --------------------------------------------------------

struct Exchange {
    std::string tag;
    std::string prompt;
    std::string response;
};

// Forwards to an inner gateway and keeps every (tag, prompt, response) triple.
class RecordingGateway final : public Gateway {
public:
    explicit RecordingGateway(std::shared_ptr<Gateway> inner);

    ChatResponse complete(const ChatRequest& request) override;
    std::vector<Exchange> exchanges() const;

private:
    std::shared_ptr<Gateway> inner_;
    mutable std::mutex mu_;
    std::vector<Exchange> log_;
};

}  // namespace pitchside::gateway
