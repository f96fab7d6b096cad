#include "pitchside/model_gateway.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "httplib.h"

#include "pitchside/error.hpp"
#include "pitchside/text.hpp"

namespace pitchside::gateway {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Role role) noexcept {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "user";
}

ChatRequest ChatRequest::user(std::string text, std::string tag, std::vector<std::string> materials) {
    ChatRequest r;
    r.messages.push_back({Role::User, std::move(text)});
    r.tag = std::move(tag);
    r.materials = std::move(materials);
    return r;
}

void validate(const ChatRequest& request) {
    if (request.messages.empty()) {
        throw Error(ErrorKind::InvalidRequest, "request has no messages", request.tag);
    }
    if (request.temperature < 0.0) {
        throw Error(ErrorKind::InvalidRequest, "negative temperature", request.tag);
    }
    if (request.max_tokens <= 0) {
        throw Error(ErrorKind::InvalidRequest, "max_tokens must be positive", request.tag);
    }
}

std::string request_text(const ChatRequest& request) {
    std::vector<std::string> parts;
    parts.reserve(request.messages.size());
    for (const auto& m : request.messages) parts.push_back(m.text);
    return text::join(parts, "\n");
}

namespace {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) {
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return out.str();
}

json canonical(const ChatRequest& request) {
    json messages = json::array();
    for (const auto& m : request.messages) {
        messages.push_back({{"role", to_string(m.role)}, {"text", m.text}});
    }
    return {{"messages", messages},
            {"materials", request.materials},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens}};
}

json response_to_json(const ChatResponse& r) {
    json j = {{"text", r.text}};
    if (r.usage) j["usage"] = {{"prompt_tokens", r.usage->prompt_tokens},
                               {"completion_tokens", r.usage->completion_tokens}};
    return j;
}

ChatResponse response_from_json(const json& j) {
    ChatResponse r;
    r.text = j.at("text").get<std::string>();
    if (j.contains("usage")) {
        r.usage = Usage{j["usage"].value("prompt_tokens", 0), j["usage"].value("completion_tokens", 0)};
    }
    return r;
}

}  // namespace

std::string request_key(const ChatRequest& request) { return sha256_hex(canonical(request).dump()); }

// --- scripted -----------------------------------------------------------

ScriptedGateway::ScriptedGateway(std::vector<ScriptRecord> records) : records_(std::move(records)) {}

std::vector<ScriptRecord> parse_script(const json& doc) {
    if (!doc.is_array()) throw Error(ErrorKind::ParseError, "script table must be a JSON array");
    std::vector<ScriptRecord> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& row = doc[i];
        try {
            ScriptRecord r;
            r.pattern = row.at("pattern").get<std::string>();
            const auto kind = row.value("match_kind", std::string("substring"));
            if (kind == "exact") {
                r.match_kind = MatchKind::Exact;
            } else if (kind == "substring") {
                r.match_kind = MatchKind::Substring;
            } else {
                throw Error(ErrorKind::ParseError, "unknown match_kind '" + kind + "'", std::to_string(i));
            }
            r.response_text = row.at("response_text").get<std::string>();
            r.tag = row.value("tag", std::string());
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw Error(ErrorKind::ParseError, "script record " + std::to_string(i) + ": " + e.what(),
                        std::to_string(i));
        }
    }
    return out;
}

std::shared_ptr<ScriptedGateway> ScriptedGateway::load(const std::string& path) {
    json doc;
    try {
        doc = json::parse(text::read_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what(), path);
    }
    return std::make_shared<ScriptedGateway>(parse_script(doc));
}

ChatResponse ScriptedGateway::complete(const ChatRequest& request) {
    validate(request);
    const std::string prompt = request_text(request);
    for (const auto& r : records_) {
        if (!r.tag.empty() && r.tag != request.tag) continue;
        const bool hit = r.match_kind == MatchKind::Exact ? prompt == r.pattern
                                                          : text::contains(prompt, r.pattern);
        if (hit) return ChatResponse{r.response_text, std::nullopt, std::chrono::milliseconds{0}};
    }
    throw Error(ErrorKind::FixtureMiss, "no scripted response for request tagged '" + request.tag + "'",
                request.tag);
}

// --- record / replay ----------------------------------------------------

ReplayCache::ReplayCache(std::string directory) : directory_(std::move(directory)) {
    if (directory_.empty()) return;
    std::error_code ec;
    fs::create_directories(directory_, ec);
    if (ec) throw Error(ErrorKind::StorageError, "cannot create cache dir: " + ec.message(), directory_);
    for (const auto& entry : fs::directory_iterator(directory_)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        try {
            const json doc = json::parse(text::read_file(entry.path().string()));
            entries_[doc.at("key").get<std::string>()] = doc.at("response").dump();
        } catch (const json::exception& e) {
            throw Error(ErrorKind::StorageError, "corrupt cache entry " + entry.path().string() + ": " + e.what(),
                        entry.path().string());
        }
    }
}

std::optional<ChatResponse> ReplayCache::lookup(const ChatRequest& request) {
    const auto key = request_key(request);
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        ++misses_;
        return std::nullopt;
    }
    ++hits_;
    return response_from_json(json::parse(it->second));
}

void ReplayCache::record(const ChatRequest& request, const ChatResponse& response) {
    const auto key = request_key(request);
    const json resp = response_to_json(response);
    {
        std::lock_guard lock(mu_);
        if (entries_.count(key)) return;  // append-only: first write wins
        entries_[key] = resp.dump();
    }
    if (!directory_.empty()) {
        const json doc = {{"key", key}, {"tag", request.tag}, {"request", canonical(request)}, {"response", resp}};
        text::write_file_atomic((fs::path(directory_) / (key + ".json")).string(), doc.dump(2) + "\n");
    }
}

CacheStats ReplayCache::stats() const {
    std::lock_guard lock(mu_);
    return CacheStats{hits_, misses_, entries_.size()};
}

ReplayGateway::ReplayGateway(std::shared_ptr<ReplayCache> cache, std::shared_ptr<Gateway> upstream)
    : cache_(std::move(cache)), upstream_(std::move(upstream)) {}

ChatResponse ReplayGateway::complete(const ChatRequest& request) {
    validate(request);
    if (auto hit = cache_->lookup(request)) return *hit;
    if (!upstream_) {
        throw Error(ErrorKind::CacheMiss, "no cached response for request tagged '" + request.tag + "'",
                    request_key(request));
    }
    auto response = upstream_->complete(request);
    cache_->record(request, response);
    return response;
}

void ReplayGateway::record(const ChatRequest& request, const ChatResponse& response) {
    cache_->record(request, response);
}

// --- remote -------------------------------------------------------------

HttpResult http_post(const HttpPost& post) {
    HttpResult result;
    const auto scheme_end = post.url.find("://");
    if (scheme_end == std::string::npos) {
        result.failure = HttpResult::Failure::Connection;
        result.error = "malformed url: " + post.url;
        return result;
    }
    const auto path_start = post.url.find('/', scheme_end + 3);
    const std::string origin = post.url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : post.url.substr(path_start);

    httplib::Client client(origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(post.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(post.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers headers;
    for (const auto& [k, v] : post.headers) headers.emplace(k, v);
    auto res = client.Post(path, headers, post.body, "application/json");
    if (!res) {
        const auto err = res.error();
        result.failure = (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                          err == httplib::Error::Write)
                             ? HttpResult::Failure::Timeout
                             : HttpResult::Failure::Connection;
        result.error = httplib::to_string(err);
        return result;
    }
    result.status = res->status;
    result.body = res->body;
    return result;
}

json reference_encoder(const std::vector<std::string>& materials) {
    json parts = json::array();
    for (const auto& m : materials) {
        parts.push_back({{"type", "text"}, {"text", "[attached material: " + m + "]"}});
    }
    return parts;
}

RemoteConfig RemoteConfig::from_env() {
    RemoteConfig c;
    if (const char* v = std::getenv("MODEL_ENDPOINT")) c.endpoint = v;
    if (const char* v = std::getenv("MODEL_API_KEY")) c.api_key = v;
    if (const char* v = std::getenv("MODEL_NAME")) c.model = v;
    return c;
}

RemoteGateway::RemoteGateway(RemoteConfig config, Transport transport, MaterialEncoder encoder)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      encoder_(std::move(encoder)),
      jitter_state_(config_.jitter_seed) {
    if (config_.endpoint.empty()) throw Error(ErrorKind::ConfigError, "remote gateway needs an endpoint");
    if (config_.max_in_flight == 0) config_.max_in_flight = 1;
}

json RemoteGateway::build_body(const ChatRequest& request) const {
    json messages = json::array();
    for (std::size_t i = 0; i < request.messages.size(); ++i) {
        const auto& m = request.messages[i];
        const bool last_user = m.role == Role::User && i + 1 == request.messages.size();
        if (last_user && !request.materials.empty()) {
            json content = json::array({{{"type", "text"}, {"text", m.text}}});
            for (auto& part : encoder_(request.materials)) content.push_back(part);
            messages.push_back({{"role", to_string(m.role)}, {"content", content}});
        } else {
            messages.push_back({{"role", to_string(m.role)}, {"content", m.text}});
        }
    }
    json body = {{"messages", messages},
                 {"temperature", request.temperature},
                 {"max_tokens", request.max_tokens}};
    if (!config_.model.empty()) body["model"] = config_.model;
    return body;
}

std::chrono::milliseconds RemoteGateway::backoff(int attempt) {
    std::uint64_t r;
    {
        std::lock_guard lock(mu_);
        // xorshift64
        jitter_state_ ^= jitter_state_ << 13;
        jitter_state_ ^= jitter_state_ >> 7;
        jitter_state_ ^= jitter_state_ << 17;
        r = jitter_state_;
    }
    const auto base = config_.backoff_base.count() * (1LL << attempt);
    const auto jitter = base > 0 ? static_cast<long long>(r % static_cast<std::uint64_t>(base / 2 + 1)) : 0;
    return std::chrono::milliseconds(base + jitter);
}

std::size_t RemoteGateway::peak_in_flight() const {
    std::lock_guard lock(mu_);
    return peak_;
}

ChatResponse RemoteGateway::complete(const ChatRequest& request) {
    validate(request);
    {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return in_flight_ < config_.max_in_flight; });
        ++in_flight_;
        peak_ = std::max(peak_, in_flight_);
    }
    struct Release {
        RemoteGateway* self;
        ~Release() {
            {
                std::lock_guard lock(self->mu_);
                --self->in_flight_;
            }
            self->cv_.notify_one();
        }
    } release{this};

    HttpPost post;
    post.url = config_.endpoint;
    post.headers.emplace_back("Content-Type", "application/json");
    if (!config_.api_key.empty()) post.headers.emplace_back("Authorization", "Bearer " + config_.api_key);
    post.body = build_body(request).dump();
    post.timeout = config_.timeout;

    const auto started = std::chrono::steady_clock::now();
    HttpResult last;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(backoff(attempt - 1));
        last = transport_(post);
        if (last.failure != HttpResult::Failure::None) continue;
        if (last.status == 429 || last.status >= 500) continue;
        if (last.status < 200 || last.status >= 300) {
            throw Error(ErrorKind::TransportError,
                        "HTTP " + std::to_string(last.status) + " from model endpoint [" + request.tag + "]",
                        last.body.substr(0, 500));
        }
        ChatResponse out;
        try {
            const json doc = json::parse(last.body);
            out.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
            if (doc.contains("usage") && doc["usage"].is_object()) {
                out.usage = Usage{doc["usage"].value("prompt_tokens", 0), doc["usage"].value("completion_tokens", 0)};
            }
        } catch (const json::exception& e) {
            throw Error(ErrorKind::TransportError, std::string("malformed completion body: ") + e.what(),
                        last.body.substr(0, 500));
        }
        out.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
        return out;
    }
    const std::string where = " after " + std::to_string(config_.max_retries) + " retries [" + request.tag + "]";
    if (last.failure == HttpResult::Failure::Timeout) throw Error(ErrorKind::Timeout, "model call timed out" + where);
    if (last.failure == HttpResult::Failure::None && last.status == 429) {
        throw Error(ErrorKind::RateLimited, "rate limited" + where);
    }
    throw Error(ErrorKind::TransportError,
                (last.failure == HttpResult::Failure::None ? "HTTP " + std::to_string(last.status) : last.error) + where,
                last.body.substr(0, 500));
}

// --- observation --------------------------------------------------------

RecordingGateway::RecordingGateway(std::shared_ptr<Gateway> inner) : inner_(std::move(inner)) {}

ChatResponse RecordingGateway::complete(const ChatRequest& request) {
    try {
        auto response = inner_->complete(request);
        std::lock_guard lock(mu_);
        log_.push_back({request.tag, request_text(request), response.text});
        return response;
    } catch (const Error& e) {
        std::lock_guard lock(mu_);
        log_.push_back({request.tag, request_text(request), std::string("<error: ") + e.what() + ">"});
        throw;
    }
}

std::vector<Exchange> RecordingGateway::exchanges() const {
    std::lock_guard lock(mu_);
    return log_;
}

}  // namespace pitchside::gateway
