#include <gtest/gtest.h>

#include "test_support.hpp"
#include "unigen/planning.hpp"

using namespace unigen;
using unigen::testing::data_path;
using unigen::testing::load_blueprint;

namespace {

struct Harness {
    std::shared_ptr<ScriptedProvider> provider = std::make_shared<ScriptedProvider>();
    LlmGateway gateway{[] {
                           GatewayOptions o;
                           o.mode = GatewayMode::Live;
                           o.sleep = [](std::chrono::milliseconds) {};
                           return o;
                       }(),
                       provider, std::nullopt};
    PromptLibrary prompts{std::filesystem::path(UNIGEN_SOURCE_DIR) / "prompts"};
};

std::string blueprint_text() { return canonical_serialize(load_blueprint("data/obstacle_run.blueprint.json")); }

std::string description_for(const GameBlueprint& bp) {
    std::string md;
    for (const auto& h : expected_section_headers(bp)) md += "## " + h + "\n\nDetails.\n\n";
    return md;
}

} // namespace

TEST(Planning, AcceptsValidBlueprint) {
    Harness h;
    h.provider->push("```json\n" + blueprint_text() + "```");
    AgentTrace trace;
    const GameBlueprint bp = interpret_requirement("obstacle run", h.gateway, h.prompts, {}, &trace);
    EXPECT_EQ(bp, with_naming_defaults(load_blueprint("data/obstacle_run.blueprint.json")));
    EXPECT_EQ(trace.repair_rounds, 0);
    const ChatRequest req = h.provider->requests().front();
    EXPECT_TRUE(req.json_mode);
    EXPECT_NE(req.messages.back().content.find("obstacle run"), std::string::npos);
}

TEST(Planning, RepairsWithDiagnostics) {
    Harness h;
    std::string broken = blueprint_text();
    const std::string from = "\"entityId\": \"player\"";
    broken.replace(broken.find(from), from.size(), "\"entityId\": \"nobody\"");
    h.provider->push(broken);
    h.provider->push(blueprint_text());
    AgentTrace trace;
    interpret_requirement("obstacle run", h.gateway, h.prompts, {}, &trace);
    EXPECT_EQ(trace.repair_rounds, 1);
    const auto requests = h.provider->requests();
    ASSERT_EQ(requests.size(), 2u);
    EXPECT_NE(requests[1].messages.back().content.find("DANGLING_REF"), std::string::npos);
}

TEST(Planning, RejectsAfterRepairBudget) {
    Harness h;
    for (int i = 0; i < 3; ++i) h.provider->push("not json");
    try {
        interpret_requirement("x", h.gateway, h.prompts);
        FAIL();
    } catch (const BlueprintRejected& e) {
        EXPECT_EQ(e.repair_rounds(), 2);
    }
    EXPECT_EQ(h.provider->requests().size(), 3u);
}

TEST(Planning, EmptyRequirement) {
    Harness h;
    try {
        interpret_requirement("  \n", h.gateway, h.prompts);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "EmptyRequirement");
    }
}

TEST(Planning, DescriptionSections) {
    const auto bp = load_blueprint("data/obstacle_run.blueprint.json");
    const auto headers = expected_section_headers(bp);
    EXPECT_EQ(headers.front(), "Behavior: PlayerController");
    EXPECT_EQ(headers.back(), "Interaction: winMessage");
    EXPECT_TRUE(check_description(description_for(bp), bp).valid());
    const auto report = check_description("## Behavior: Nope\n\nx\n", bp);
    EXPECT_EQ(report.count("UNKNOWN_SECTION"), 1u);
    EXPECT_EQ(report.count("MISSING_SECTION"), headers.size());
}

TEST(Planning, GeneratesDescriptionWithRepair) {
    Harness h;
    const auto bp = load_blueprint("data/obstacle_run.blueprint.json");
    h.provider->push("## Behavior: PlayerController\n\nonly one\n");
    h.provider->push(description_for(bp));
    const LogicDescription desc = generate_logic_description(bp, h.gateway, h.prompts);
    EXPECT_EQ(desc.source_blueprint_hash, blueprint_hash(bp));
    EXPECT_EQ(section_body(desc, "Interaction: grabCoin"), "Details.");
}
