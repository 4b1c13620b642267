#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "unigen/error.hpp"

namespace unigen {

enum class Role { System, User, Assistant };

struct ChatMessage {
    Role role = Role::User;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.2;
    bool json_mode = false;

    bool operator==(const ChatRequest&) const = default;
};

enum class FinishReason { Stop, Length, Error };

struct Usage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;

    bool operator==(const Usage&) const = default;
};

struct ChatResponse {
    std::string content;
    FinishReason finish_reason = FinishReason::Stop;
    Usage usage;

    bool operator==(const ChatResponse&) const = default;
};

struct TranscriptEntry {
    std::string request_hash;
    ChatRequest request;
    ChatResponse response;
    std::string timestamp;
};

std::string_view to_string(Role r);
std::string_view to_string(FinishReason f);

nlohmann::json to_json(const ChatRequest& req);
nlohmann::json to_json(const ChatResponse& resp);
nlohmann::json to_json(const TranscriptEntry& entry);
ChatRequest chat_request_from_json(const nlohmann::json& j);
ChatResponse chat_response_from_json(const nlohmann::json& j);
TranscriptEntry transcript_entry_from_json(const nlohmann::json& j);

/// Sorted-key compact JSON of the request; message content is kept verbatim.
std::string canonical_request(const ChatRequest& req);
std::string request_hash(const ChatRequest& req);

/// Throws Error{"InvalidRequest"} when the request breaks its invariants.
void check_request(const ChatRequest& req);

/// One attempt against a model backend. Transient failures are reported via
/// ProviderFailure so the gateway can retry them.
class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual ChatResponse send(const ChatRequest& req) = 0;
};

class ProviderFailure : public Error {
public:
    ProviderFailure(const std::string& message, bool transient, bool timeout = false)
        : Error(timeout ? "Timeout" : "ProviderError", message), transient_(transient), timeout_(timeout) {}
    bool transient() const noexcept { return transient_; }
    bool timeout() const noexcept { return timeout_; }

private:
    bool transient_;
    bool timeout_;
};

struct HttpProviderConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key;
    std::chrono::seconds timeout{120};

    /// Reads UNIGEN_LLM_BASE_URL and UNIGEN_LLM_API_KEY.
    static HttpProviderConfig from_env();
};

/// Chat-completions style HTTP(S) endpoint: POST <base>/chat/completions.
class HttpChatProvider final : public ChatProvider {
public:
    explicit HttpChatProvider(HttpProviderConfig config);
    ChatResponse send(const ChatRequest& req) override;

private:
    HttpProviderConfig config_;
    std::string origin_;
    std::string path_prefix_;
};

/// Serves canned responses in order; used to author fixtures and in tests.
class ScriptedProvider final : public ChatProvider {
public:
    explicit ScriptedProvider(std::vector<std::string> contents = {});
    void push(std::string content);
    void push_failure(ProviderFailure failure);
    ChatResponse send(const ChatRequest& req) override;

    std::vector<ChatRequest> requests() const;
    std::size_t remaining() const;

private:
    mutable std::mutex mutex_;
    std::deque<std::variant<std::string, ProviderFailure>> queue_;
    std::vector<ChatRequest> requests_;
};

/// Append-only JSONL transcript with a single-writer append path.
class TranscriptStore {
public:
    explicit TranscriptStore(std::filesystem::path path);

    const std::filesystem::path& path() const { return path_; }
    std::vector<TranscriptEntry> load() const;
    void append(const TranscriptEntry& entry);

private:
    std::filesystem::path path_;
    std::mutex mutex_;
};

enum class GatewayMode { Live, Record, Replay };

std::string_view to_string(GatewayMode m);
std::optional<GatewayMode> gateway_mode_from_string(std::string_view s);

struct GatewayOptions {
    GatewayMode mode = GatewayMode::Replay;
    std::string model = "gpt-4.1";
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{1000};
    std::function<void(std::chrono::milliseconds)> sleep;  // defaults to this_thread::sleep_for
    std::function<std::string()> clock;                    // defaults to utc_now_iso8601
};

class LlmGateway {
public:
    /// `provider` is required for live/record; `transcript` for record/replay.
    LlmGateway(GatewayOptions options, std::shared_ptr<ChatProvider> provider,
               std::optional<std::filesystem::path> transcript);

    ChatResponse complete(const ChatRequest& req);

    GatewayMode mode() const { return options_.mode; }
    const std::string& model() const { return options_.model; }

    /// Builds a request with the configured model name.
    ChatRequest request(std::vector<ChatMessage> messages, bool json_mode, double temperature = 0.2) const;

    /// Timestamp of the most recent response: the recorded time in replay
    /// mode, the wall clock otherwise. Empty before the first call.
    std::optional<std::string> latest_timestamp() const;
    std::size_t call_count() const;

private:
    ChatResponse call_provider(const ChatRequest& req);
    ChatResponse replay(const ChatRequest& req, const std::string& hash);

    GatewayOptions options_;
    std::shared_ptr<ChatProvider> provider_;
    std::unique_ptr<TranscriptStore> store_;

    mutable std::mutex mutex_;
    std::vector<TranscriptEntry> replay_entries_;
    std::map<std::string, std::deque<std::size_t>> replay_index_;
    std::optional<std::string> latest_timestamp_;
    std::size_t calls_ = 0;
};

/// Pulls the first JSON document out of model output: strips code fences and
/// surrounding prose, then tries one trailing-comma repair pass.
/// Throws Error{"NoJsonFound"} or Error{"UnrepairableJson"}.
nlohmann::json extract_json(std::string_view text);

/// Strips a surrounding markdown code fence, if the text has one.
std::string strip_code_fence(std::string_view text);

} // namespace unigen
