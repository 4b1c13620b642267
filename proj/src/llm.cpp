#include "unigen/llm.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

#include "unigen/fsutil.hpp"
#include "unigen/hash.hpp"

namespace unigen {

using nlohmann::json;

std::string_view to_string(Role r) {
    switch (r) {
    case Role::System:
        return "system";
    case Role::User:
        return "user";
    case Role::Assistant:
        return "assistant";
    }
    return "user";
}

std::string_view to_string(FinishReason f) {
    switch (f) {
    case FinishReason::Stop:
        return "stop";
    case FinishReason::Length:
        return "length";
    case FinishReason::Error:
        return "error";
    }
    return "error";
}

namespace {

Role role_from_string(const std::string& s) {
    if (s == "system") return Role::System;
    if (s == "user") return Role::User;
    if (s == "assistant") return Role::Assistant;
    throw Error("InvalidRequest", "unknown message role '" + s + "'");
}

FinishReason finish_from_string(const std::string& s) {
    if (s == "stop") return FinishReason::Stop;
    if (s == "length") return FinishReason::Length;
    return FinishReason::Error;
}

} // namespace

json to_json(const ChatRequest& req) {
    json messages = json::array();
    for (const auto& m : req.messages) {
        messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
    }
    return {{"model", req.model}, {"messages", messages}, {"temperature", req.temperature}, {"jsonMode", req.json_mode}};
}

json to_json(const ChatResponse& resp) {
    return {{"content", resp.content},
            {"finishReason", std::string(to_string(resp.finish_reason))},
            {"usage", {{"promptTokens", resp.usage.prompt_tokens}, {"completionTokens", resp.usage.completion_tokens}}}};
}

json to_json(const TranscriptEntry& entry) {
    return {{"requestHash", entry.request_hash},
            {"request", to_json(entry.request)},
            {"response", to_json(entry.response)},
            {"timestamp", entry.timestamp}};
}

ChatRequest chat_request_from_json(const json& j) {
    ChatRequest req;
    req.model = j.at("model").get<std::string>();
    for (const auto& m : j.at("messages")) {
        req.messages.push_back({role_from_string(m.at("role").get<std::string>()), m.at("content").get<std::string>()});
    }
    req.temperature = j.value("temperature", 0.2);
    req.json_mode = j.value("jsonMode", false);
    return req;
}

ChatResponse chat_response_from_json(const json& j) {
    ChatResponse resp;
    resp.content = j.at("content").get<std::string>();
    resp.finish_reason = finish_from_string(j.value("finishReason", "stop"));
    if (auto it = j.find("usage"); it != j.end()) {
        resp.usage.prompt_tokens = it->value("promptTokens", std::int64_t{0});
        resp.usage.completion_tokens = it->value("completionTokens", std::int64_t{0});
    }
    return resp;
}

TranscriptEntry transcript_entry_from_json(const json& j) {
    TranscriptEntry e;
    e.request_hash = j.at("requestHash").get<std::string>();
    e.request = chat_request_from_json(j.at("request"));
    e.response = chat_response_from_json(j.at("response"));
    e.timestamp = j.value("timestamp", "");
    return e;
}

std::string canonical_request(const ChatRequest& req) {
    // nlohmann::json objects are key-sorted; dump() without indent is compact.
    return to_json(req).dump();
}

std::string request_hash(const ChatRequest& req) { return sha256_hex(canonical_request(req)); }

void check_request(const ChatRequest& req) {
    if (req.messages.empty()) throw Error("InvalidRequest", "chat request has no messages");
    if (req.messages.front().role == Role::Assistant) {
        throw Error("InvalidRequest", "first message must be a system or user message");
    }
    if (!(req.temperature >= 0.0)) throw Error("InvalidRequest", "temperature must be >= 0");
}

HttpProviderConfig HttpProviderConfig::from_env() {
    HttpProviderConfig cfg;
    if (const char* url = std::getenv("UNIGEN_LLM_BASE_URL"); url && *url) cfg.base_url = url;
    if (const char* key = std::getenv("UNIGEN_LLM_API_KEY"); key && *key) cfg.api_key = key;
    return cfg;
}

ScriptedProvider::ScriptedProvider(std::vector<std::string> contents) {
    for (auto& c : contents) queue_.emplace_back(std::move(c));
}

void ScriptedProvider::push(std::string content) {
    std::lock_guard lock(mutex_);
    queue_.emplace_back(std::move(content));
}

void ScriptedProvider::push_failure(ProviderFailure failure) {
    std::lock_guard lock(mutex_);
    queue_.emplace_back(std::move(failure));
}

ChatResponse ScriptedProvider::send(const ChatRequest& req) {
    std::lock_guard lock(mutex_);
    requests_.push_back(req);
    if (queue_.empty()) throw ProviderFailure("scripted provider exhausted", false);
    auto next = std::move(queue_.front());
    queue_.pop_front();
    if (auto* failure = std::get_if<ProviderFailure>(&next)) throw *failure;
    ChatResponse resp;
    resp.content = std::get<std::string>(std::move(next));
    resp.usage.completion_tokens = static_cast<std::int64_t>(resp.content.size() / 4);
    return resp;
}

std::vector<ChatRequest> ScriptedProvider::requests() const {
    std::lock_guard lock(mutex_);
    return requests_;
}

std::size_t ScriptedProvider::remaining() const {
    std::lock_guard lock(mutex_);
    return queue_.size();
}

TranscriptStore::TranscriptStore(std::filesystem::path path) : path_(std::move(path)) {}

std::vector<TranscriptEntry> TranscriptStore::load() const {
    std::vector<TranscriptEntry> entries;
    std::ifstream in(path_);
    if (!in) throw Error("IoError", "cannot read transcript " + path_.string());
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            entries.push_back(transcript_entry_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw Error("IoError", path_.string() + ":" + std::to_string(number) + ": bad transcript entry: " + e.what());
        }
    }
    return entries;
}

void TranscriptStore::append(const TranscriptEntry& entry) {
    const std::string line = to_json(entry).dump() + "\n";
    std::lock_guard lock(mutex_);
    std::error_code ec;
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path(), ec);
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw Error("IoError", "cannot append to transcript " + path_.string());
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    out.flush();
    if (!out) throw Error("IoError", "short write to transcript " + path_.string());
}

std::string_view to_string(GatewayMode m) {
    switch (m) {
    case GatewayMode::Live:
        return "live";
    case GatewayMode::Record:
        return "record";
    case GatewayMode::Replay:
        return "replay";
    }
    return "replay";
}

std::optional<GatewayMode> gateway_mode_from_string(std::string_view s) {
    if (s == "live") return GatewayMode::Live;
    if (s == "record") return GatewayMode::Record;
    if (s == "replay") return GatewayMode::Replay;
    return std::nullopt;
}

LlmGateway::LlmGateway(GatewayOptions options, std::shared_ptr<ChatProvider> provider,
                       std::optional<std::filesystem::path> transcript)
    : options_(std::move(options)), provider_(std::move(provider)) {
    if (!options_.sleep) options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    if (!options_.clock) options_.clock = [] { return utc_now_iso8601(); };

    if (options_.mode != GatewayMode::Replay && !provider_) {
        throw Error("ConfigError", "live and record modes need a provider endpoint");
    }
    if (options_.mode != GatewayMode::Live) {
        if (!transcript) throw Error("ConfigError", "record and replay modes need a transcript path");
        store_ = std::make_unique<TranscriptStore>(*transcript);
    }
    if (options_.mode == GatewayMode::Replay) {
        replay_entries_ = store_->load();
        for (std::size_t i = 0; i < replay_entries_.size(); ++i) {
            replay_index_[replay_entries_[i].request_hash].push_back(i);
        }
    }
}

ChatRequest LlmGateway::request(std::vector<ChatMessage> messages, bool json_mode, double temperature) const {
    return ChatRequest{options_.model, std::move(messages), temperature, json_mode};
}

ChatResponse LlmGateway::complete(const ChatRequest& req) {
    check_request(req);
    const std::string hash = request_hash(req);
    if (options_.mode == GatewayMode::Replay) return replay(req, hash);

    ChatResponse resp = call_provider(req);
    const std::string now = options_.clock();
    if (options_.mode == GatewayMode::Record) {
        store_->append(TranscriptEntry{hash, req, resp, now});
    }
    std::lock_guard lock(mutex_);
    ++calls_;
    if (!latest_timestamp_ || now > *latest_timestamp_) latest_timestamp_ = now;
    return resp;
}

ChatResponse LlmGateway::replay(const ChatRequest&, const std::string& hash) {
    std::lock_guard lock(mutex_);
    auto it = replay_index_.find(hash);
    if (it == replay_index_.end() || it->second.empty()) {
        throw Error("ReplayMiss", "no transcript entry for request hash " + hash);
    }
    const TranscriptEntry& entry = replay_entries_[it->second.front()];
    it->second.pop_front();
    ++calls_;
    // Max rather than last, so concurrent callers still see a stable value.
    if (!latest_timestamp_ || entry.timestamp > *latest_timestamp_) latest_timestamp_ = entry.timestamp;
    return entry.response;
}

ChatResponse LlmGateway::call_provider(const ChatRequest& req) {
    auto backoff = options_.initial_backoff;
    for (int attempt = 0;; ++attempt) {
        try {
            ChatResponse resp = provider_->send(req);
            if (resp.finish_reason == FinishReason::Stop && resp.content.empty()) {
                throw ProviderFailure("provider returned an empty completion", true);
            }
            return resp;
        } catch (const ProviderFailure& failure) {
            if (!failure.transient() || attempt >= options_.max_retries) {
                const std::string detail = failure.what() + std::string(" (after ") + std::to_string(attempt + 1) +
                                           " attempt" + (attempt ? "s" : "") + ")";
                throw ProviderFailure(detail, false, failure.timeout());
            }
        }
        options_.sleep(backoff);
        backoff *= 2;
    }
}

std::optional<std::string> LlmGateway::latest_timestamp() const {
    std::lock_guard lock(mutex_);
    return latest_timestamp_;
}

std::size_t LlmGateway::call_count() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

namespace {

// Index one past the bracket closing the one at `start`, or npos.
std::size_t match_bracket(std::string_view text, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{' || c == '[') {
            ++depth;
        } else if (c == '}' || c == ']') {
            if (--depth == 0) return i + 1;
        }
    }
    return std::string_view::npos;
}

std::string remove_trailing_commas(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            out.push_back(c);
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') in_string = true;
        if (c == ',') {
            std::size_t j = text.find_first_not_of(" \t\r\n", i + 1);
            if (j != std::string_view::npos && (text[j] == '}' || text[j] == ']')) continue;
        }
        out.push_back(c);
    }
    return out;
}

} // namespace

std::string strip_code_fence(std::string_view text) {
    const std::size_t open = text.find("```");
    if (open == std::string_view::npos) return std::string(text);
    const std::size_t body = text.find('\n', open);
    if (body == std::string_view::npos) return std::string(text);
    const std::size_t close = text.find("```", body + 1);
    if (close == std::string_view::npos) return std::string(text.substr(body + 1));
    return std::string(text.substr(body + 1, close - body - 1));
}

json extract_json(std::string_view text) {
    const std::string body = strip_code_fence(text);
    std::string first_error;
    for (std::size_t start = body.find_first_of("{["); start != std::string::npos;) {
        const std::size_t end = match_bracket(body, start);
        const std::string_view candidate =
            std::string_view(body).substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        try {
            return json::parse(candidate);
        } catch (const json::parse_error& e) {
            if (first_error.empty()) first_error = e.what();
        }
        try {
            return json::parse(remove_trailing_commas(candidate));
        } catch (const json::parse_error&) {
        }
        // Nested brackets belong to the rejected candidate; resume after it.
        if (end == std::string_view::npos) break;
        start = body.find_first_of("{[", end);
    }
    if (first_error.empty()) throw Error("NoJsonFound", "model output contains no JSON document");
    throw Error("UnrepairableJson", "model output JSON could not be repaired: " + first_error);
}

} // namespace unigen
