#include "unigen/llm.hpp"

#include <httplib.h>

namespace unigen {

using nlohmann::json;

HttpChatProvider::HttpChatProvider(HttpProviderConfig config) : config_(std::move(config)) {
    const std::string& url = config_.base_url;
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error("ConfigError", "provider base URL needs a scheme: " + url);
    const std::size_t path_start = url.find('/', scheme_end + 3);
    origin_ = url.substr(0, path_start);
    path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

ChatResponse HttpChatProvider::send(const ChatRequest& req) {
    json body = {{"model", req.model}, {"temperature", req.temperature}, {"messages", json::array()}};
    for (const auto& m : req.messages) {
        body["messages"].push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
    }
    if (req.json_mode) body["response_format"] = {{"type", "json_object"}};

    httplib::Client client(origin_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    if (!config_.api_key.empty()) client.set_bearer_token_auth(config_.api_key);

    auto result = client.Post(path_prefix_ + "/chat/completions", body.dump(), "application/json");
    if (!result) {
        const auto err = result.error();
        const bool timeout = err == httplib::Error::Read || err == httplib::Error::Write ||
                             err == httplib::Error::ConnectionTimeout;
        throw ProviderFailure("request to " + origin_ + " failed: " + httplib::to_string(err), true, timeout);
    }
    const int status = result->status;
    if (status == 429 || status >= 500) {
        throw ProviderFailure("provider returned HTTP " + std::to_string(status), true);
    }
    if (status != 200) {
        throw ProviderFailure("provider returned HTTP " + std::to_string(status) + ": " + result->body, false);
    }

    try {
        const json doc = json::parse(result->body);
        const json& choice = doc.at("choices").at(0);
        ChatResponse resp;
        const json& content = choice.at("message").at("content");
        resp.content = content.is_string() ? content.get<std::string>() : std::string();
        const std::string finish = choice.value("finish_reason", "stop");
        resp.finish_reason = finish == "stop" ? FinishReason::Stop
                             : finish == "length" ? FinishReason::Length
                                                  : FinishReason::Error;
        if (auto usage = doc.find("usage"); usage != doc.end()) {
            resp.usage.prompt_tokens = usage->value("prompt_tokens", std::int64_t{0});
            resp.usage.completion_tokens = usage->value("completion_tokens", std::int64_t{0});
        }
        return resp;
    } catch (const json::exception& e) {
        throw ProviderFailure(std::string("malformed provider response: ") + e.what(), false);
    }
}

} // namespace unigen
