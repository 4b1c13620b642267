#include <gtest/gtest.h>

#include "test_support.hpp"
#include "unigen/llm.hpp"

using namespace unigen;
using unigen::testing::TempDir;

namespace {

ChatRequest sample(std::string text = "hi") {
    return ChatRequest{"m", {{Role::System, "sys"}, {Role::User, std::move(text)}}, 0.2, false};
}

GatewayOptions options(GatewayMode mode, std::vector<std::chrono::milliseconds>* sleeps = nullptr) {
    GatewayOptions o;
    o.mode = mode;
    o.sleep = [sleeps](std::chrono::milliseconds d) {
        if (sleeps) sleeps->push_back(d);
    };
    o.clock = [] { return std::string("2026-01-01T00:00:00.000Z"); };
    return o;
}

} // namespace

TEST(Llm, RequestHashIsCanonical) {
    const ChatRequest a = sample();
    ChatRequest b = sample();
    EXPECT_EQ(request_hash(a), request_hash(b));
    b.messages[1].content = "hi ";
    EXPECT_NE(request_hash(a), request_hash(b));
    b = sample();
    b.json_mode = true;
    EXPECT_NE(request_hash(a), request_hash(b));
    EXPECT_EQ(canonical_request(a).find(' '), std::string::npos);
}

TEST(Llm, InvalidRequests) {
    ChatRequest r = sample();
    r.messages.clear();
    EXPECT_THROW(check_request(r), Error);
    r = sample();
    r.messages[0].role = Role::Assistant;
    EXPECT_THROW(check_request(r), Error);
}

TEST(Llm, RecordThenReplay) {
    TempDir dir;
    const auto path = dir.path() / "t.jsonl";
    auto provider = std::make_shared<ScriptedProvider>(std::vector<std::string>{"one", "two"});
    {
        LlmGateway gw(options(GatewayMode::Record), provider, path);
        EXPECT_EQ(gw.complete(sample("a")).content, "one");
        EXPECT_EQ(gw.complete(sample("a")).content, "two");
    }
    EXPECT_EQ(TranscriptStore(path).load().size(), 2u);
    LlmGateway replay(options(GatewayMode::Replay), nullptr, path);
    EXPECT_EQ(replay.complete(sample("a")).content, "one");
    EXPECT_EQ(replay.complete(sample("a")).content, "two");
    EXPECT_EQ(replay.latest_timestamp(), "2026-01-01T00:00:00.000Z");
    try {
        replay.complete(sample("a"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "ReplayMiss");
    }
    try {
        replay.complete(sample("b"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "ReplayMiss");
    }
}

TEST(Llm, RetriesTransientFailuresWithBackoff) {
    auto provider = std::make_shared<ScriptedProvider>();
    provider->push_failure(ProviderFailure("503", true));
    provider->push_failure(ProviderFailure("timeout", true, true));
    provider->push("ok");
    std::vector<std::chrono::milliseconds> sleeps;
    LlmGateway gw(options(GatewayMode::Live, &sleeps), provider, std::nullopt);
    EXPECT_EQ(gw.complete(sample()).content, "ok");
    ASSERT_EQ(sleeps.size(), 2u);
    EXPECT_EQ(sleeps[1], 2 * sleeps[0]);
}

TEST(Llm, GivesUpAfterMaxRetries) {
    auto provider = std::make_shared<ScriptedProvider>();
    for (int i = 0; i < 5; ++i) provider->push_failure(ProviderFailure("timeout", true, true));
    std::vector<std::chrono::milliseconds> sleeps;
    LlmGateway gw(options(GatewayMode::Live, &sleeps), provider, std::nullopt);
    try {
        gw.complete(sample());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "Timeout");
    }
    EXPECT_EQ(sleeps.size(), 3u);
    EXPECT_EQ(provider->remaining(), 1u);
}

TEST(Llm, PermanentFailuresAreNotRetried) {
    auto provider = std::make_shared<ScriptedProvider>();
    provider->push_failure(ProviderFailure("401", false));
    LlmGateway gw(options(GatewayMode::Live), provider, std::nullopt);
    EXPECT_THROW(gw.complete(sample()), ProviderFailure);
}

TEST(Llm, ModeConfiguration) {
    EXPECT_THROW(LlmGateway(options(GatewayMode::Live), nullptr, std::nullopt), Error);
    EXPECT_THROW(LlmGateway(options(GatewayMode::Replay), nullptr, std::nullopt), Error);
}

TEST(Llm, ExtractJson) {
    EXPECT_EQ(extract_json("Sure:\n```json\n{\"a\": 1}\n```\nDone.")["a"], 1);
    EXPECT_EQ(extract_json("prefix {\"a\": [1, 2,],} suffix")["a"].size(), 2u);
    EXPECT_EQ(extract_json("{\"s\": \"}\"}")["s"], "}");
    try {
        extract_json("no json here");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NoJsonFound");
    }
    try {
        extract_json("{\"a\": }");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "UnrepairableJson");
    }
}

TEST(Llm, StripCodeFence) {
    EXPECT_EQ(strip_code_fence("```csharp\nclass A {}\n```"), "class A {}\n");
    EXPECT_EQ(strip_code_fence("class A {}"), "class A {}");
}
