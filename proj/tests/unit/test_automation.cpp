#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "unigen/automation.hpp"
#include "unigen/fsutil.hpp"
#include "unigen/hash.hpp"
#include "unigen/support_assets.hpp"

using namespace unigen;
using unigen::testing::load_blueprint;
using unigen::testing::random_blueprint;
using unigen::testing::TempDir;
namespace fs = std::filesystem;

namespace {

GameBlueprint obstacle() { return with_naming_defaults(load_blueprint("data/obstacle_run.blueprint.json")); }

std::vector<ScriptArtifact> scripts_for(const GameBlueprint& bp) {
    std::vector<ScriptArtifact> out;
    for (const auto& plan : plan_script_set(bp)) out.push_back(template_generate(plan, bp));
    return out;
}

EditorScriptArtifact editor_for(const GameBlueprint& bp) {
    return generate_editor_script(bp, {}, CodegenMode::Template);
}

} // namespace

TEST(Automation, EditorTemplatePassesChecks) {
    const auto bp = obstacle();
    const std::string source = editor_template(bp);
    const auto report = check_editor_script(source, bp);
    EXPECT_TRUE(report.valid()) << report.to_text();
    EXPECT_NE(source.find("namespace UniGen.Generated"), std::string::npos);
    EXPECT_NE(source.find("[MenuItem(\"UniGen/Build Scene\")]"), std::string::npos);
    EXPECT_NE(source.find("// ENTITY finish"), std::string::npos);
    EXPECT_NE(source.find("SetFieldSafe(component, \"messageText\", ui[\"messageLabel\"])"), std::string::npos) << source;
}

TEST(Automation, EditorTemplateChecksHoldForRandomBlueprints) {
    std::mt19937 rng(4242);
    for (int i = 0; i < 100; ++i) {
        const auto bp = with_naming_defaults(random_blueprint(rng));
        const auto report = check_editor_script(editor_template(bp), bp);
        EXPECT_TRUE(report.valid()) << canonical_serialize(bp) << report.to_text();
    }
}

TEST(Automation, EditorChecksCatchProblems) {
    const auto bp = obstacle();
    const std::string good = editor_template(bp);
    std::string missing = good;
    missing.replace(missing.find("// ENTITY coin"), 14, "// ENTITY nope");
    auto report = check_editor_script(missing, bp);
    EXPECT_EQ(report.count("MISSING_ENTITY"), 1u);
    EXPECT_EQ(report.count("UNKNOWN_ENTITY"), 1u);

    std::string direct = good;
    const auto at = direct.find("UniGen.ReflectionHelper.SetFieldSafe(component, \"target\"");
    ASSERT_NE(at, std::string::npos) << good;
    direct.insert(at, "component.target = objects[\"player\"];\n                ");
    EXPECT_EQ(check_editor_script(direct, bp).count("DIRECT_ASSIGNMENT"), 1u);

    EXPECT_EQ(check_editor_script("class Other {}", bp).count("TYPE_NOT_DECLARED"), 1u);
}

TEST(Automation, LlmEditorScriptIsRepaired) {
    const auto bp = obstacle();
    auto provider = std::make_shared<ScriptedProvider>();
    provider->push("```csharp\nnamespace UniGen.Generated { public static class SceneBuilder { } }\n```");
    provider->push(editor_template(bp));
    GatewayOptions o;
    o.mode = GatewayMode::Live;
    LlmGateway gateway(o, provider, std::nullopt);
    PromptLibrary prompts(fs::path(UNIGEN_SOURCE_DIR) / "prompts");
    AgentTrace trace;
    const auto editor = generate_editor_script(bp, scripts_for(bp), CodegenMode::Llm, &gateway, &prompts, 2, &trace);
    EXPECT_EQ(trace.repair_rounds, 1);
    EXPECT_EQ(editor.script.path, "SceneBuilder.cs");
    EXPECT_EQ(editor.batch_entry_point, kBatchEntryPoint);
    EXPECT_NE(provider->requests()[1].messages.back().content.find("MISSING_ENTRY_POINT"), std::string::npos);
}

TEST(Automation, SupportFilesAreBundledVerbatim) {
    const auto assets = support_assets();
    ASSERT_EQ(assets.size(), 3u);
    for (const auto& a : assets) {
        EXPECT_EQ(a.source, read_file(fs::path(UNIGEN_SOURCE_DIR) / "unity-support" / a.relative_path)) << a.relative_path;
        EXPECT_EQ(a.version, "1.0.0");
    }
    EXPECT_THROW(support_version("using UnityEngine;"), Error);
}

TEST(Automation, AssembleWritesManifestMatchingDisk) {
    TempDir dir;
    const auto bp = obstacle();
    const auto scripts = scripts_for(bp);
    const auto m = assemble_project(dir.path(), bp, scripts, editor_for(bp), "2026-01-01T00:00:00.000Z");
    EXPECT_EQ(m.files.size(), scripts.size() + 1 + 3);
    EXPECT_TRUE(manifest_mismatches(dir.path(), m).empty());
    EXPECT_EQ(load_manifest(dir.path()), m);
    EXPECT_TRUE(std::is_sorted(m.files.begin(), m.files.end(),
                               [](const auto& a, const auto& b) { return a.relative_path < b.relative_path; }));
    ASSERT_NE(m.find("Assets/Runtime/ReflectionHelper.cs"), nullptr);
    EXPECT_EQ(m.find("Assets/Runtime/ReflectionHelper.cs")->origin, FileOrigin::Support);
    EXPECT_EQ(m.find("Assets/Editor/SceneBuilder.cs")->origin, FileOrigin::Generated);
}

TEST(Automation, ReassemblyIsIdempotent) {
    TempDir dir;
    const auto bp = obstacle();
    const auto scripts = scripts_for(bp);
    const auto first = assemble_project(dir.path(), bp, scripts, editor_for(bp), "2026-01-01T00:00:00.000Z");
    const auto player = project_dir(dir.path()) / "Assets/Runtime/PlayerController.cs";
    const auto stamp = fs::last_write_time(player);
    const auto second = assemble_project(dir.path(), bp, scripts, editor_for(bp), "2027-01-01T00:00:00.000Z");
    EXPECT_EQ(second, first);
    EXPECT_EQ(fs::last_write_time(player), stamp);
}

TEST(Automation, StaleFilesAreRemoved) {
    TempDir dir;
    auto bp = obstacle();
    assemble_project(dir.path(), bp, scripts_for(bp), editor_for(bp), "t");
    bp.behaviors.pop_back(); // drop the HUD
    const auto m = assemble_project(dir.path(), bp, scripts_for(bp), editor_for(bp), "t");
    EXPECT_EQ(m.find("Assets/Runtime/HudController.cs"), nullptr);
    EXPECT_FALSE(fs::exists(project_dir(dir.path()) / "Assets/Runtime/HudController.cs"));
}

TEST(Automation, EscapingPathsWriteNothing) {
    TempDir dir;
    const auto bp = obstacle();
    auto scripts = scripts_for(bp);
    scripts[0].path = "../../evil.cs";
    try {
        assemble_project(dir.path(), bp, scripts, editor_for(bp), "t");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "PathEscape");
    }
    EXPECT_FALSE(fs::exists(project_dir(dir.path())));
}

TEST(Automation, ManifestDetectsDrift) {
    TempDir dir;
    const auto bp = obstacle();
    const auto m = assemble_project(dir.path(), bp, scripts_for(bp), editor_for(bp), "t");
    write_file_atomic(project_dir(dir.path()) / "Assets/Runtime/CoinPickup.cs", "// edited\n");
    EXPECT_EQ(manifest_mismatches(dir.path(), m), std::vector<std::string>{"Assets/Runtime/CoinPickup.cs"});
}
