#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "unigen/automation.hpp"
#include "unigen/debugging.hpp"
#include "unigen/fsutil.hpp"
#include "unigen/hash.hpp"

using namespace unigen;
using unigen::testing::data_path;
using unigen::testing::load_blueprint;
using unigen::testing::random_patch;
using unigen::testing::snapshot;
using unigen::testing::TempDir;
using unigen::testing::Tree;
namespace fs = std::filesystem;

namespace {

GameBlueprint obstacle() { return with_naming_defaults(load_blueprint("data/obstacle_run.blueprint.json")); }

ProjectManifest assemble(const fs::path& run_dir, const GameBlueprint& bp) {
    return unigen::testing::assemble_templates(run_dir, bp);
}

LlmGateway scripted(std::shared_ptr<ScriptedProvider> provider) {
    GatewayOptions o;
    o.mode = GatewayMode::Live;
    return LlmGateway(o, std::move(provider), std::nullopt);
}

} // namespace

TEST(CompileLog, ParsesLine) {
    const auto d = parse_diagnostic_line("Assets/Runtime/A.cs(12,5): error CS0103: The name 'x' does not exist");
    ASSERT_TRUE(d);
    EXPECT_EQ(d->file, "Assets/Runtime/A.cs");
    EXPECT_EQ(d->line, 12);
    EXPECT_EQ(d->column, 5);
    EXPECT_EQ(d->severity, Severity::Error);
    EXPECT_EQ(d->code, "CS0103");
    EXPECT_EQ(d->message, "The name 'x' does not exist");
    EXPECT_TRUE(parse_diagnostic_line("C:\\p\\Assets\\A.cs(1,1): warning CS0168: unused\r"));
}

TEST(CompileLog, RejectsNearMisses) {
    for (const char* line : {"A.cs(1,1): error cs0103: m", "A.cs(1,1): Error CS0103: m", "A.cs(1): error CS0103: m",
                             "A.cs(01,1): error CS0103: m", "A.cs(1,0): error CS0103: m", "(1,1): error CS0103: m",
                             "A.cs(1,1): error CS0103 m", "A.cs(1,1): warning CS01030: m", ""}) {
        EXPECT_FALSE(parse_diagnostic_line(line)) << line;
    }
}

TEST(CompileLog, MixedLogMatchesOracle) {
    const std::string log = read_file(data_path("data/compile_mixed.log"));
    const auto expected = nlohmann::json::parse(read_file(data_path("data/compile_mixed.expected.json")));
    const auto got = parse_compile_log(log);
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        const auto& e = expected[i];
        EXPECT_EQ(got[i].file, e["file"].get<std::string>());
        EXPECT_EQ(got[i].line, e["line"].get<int>());
        EXPECT_EQ(got[i].column, e["column"].get<int>());
        EXPECT_EQ(to_string(got[i].severity), e["severity"].get<std::string>());
        EXPECT_EQ(got[i].code, e["code"].get<std::string>());
        EXPECT_EQ(got[i].message, e["message"].get<std::string>());
        EXPECT_EQ(got[i].to_line(), e["source"].get<std::string>());
    }
}

TEST(ErrorContext, MapsDiagnosticsOntoManifest) {
    TempDir dir;
    const auto m = assemble(dir.path(), obstacle());
    const auto ctx = make_error_context("broken",
                                        "/home/u/Game/Assets/Runtime/CoinPickup.cs(3,1): error CS1002: ; expected\n"
                                        "C:\\Game\\Assets\\Editor\\SceneBuilder.cs(9,9): warning CS0168: unused\n"
                                        "Library/Other.cs(1,1): error CS0246: missing\n",
                                        m);
    EXPECT_EQ(ctx.diagnostics.size(), 3u);
    EXPECT_EQ(ctx.affected_files,
              (std::vector<std::string>{"Assets/Runtime/CoinPickup.cs", "Assets/Editor/SceneBuilder.cs"}));
}

TEST(Patch, JsonRoundTrip) {
    PatchSet p{3, {{"Assets/Runtime/A.cs", std::string(64, 'a'), "x"}, {"Assets/Runtime/B.cs", std::nullopt, "y"}}, "why"};
    EXPECT_EQ(patch_from_json(to_json(p)), p);
}

TEST(Patch, StructuralChecks) {
    TempDir dir;
    const auto m = assemble(dir.path(), obstacle());
    const std::string hash = m.find("Assets/Runtime/CoinPickup.cs")->content_hash;
    auto codes = [&](PatchSet p) { return check_patch(p, m); };
    EXPECT_TRUE(codes({0, {{"Assets/Runtime/CoinPickup.cs", hash, "x"}}, "r"}).valid());
    EXPECT_EQ(codes({0, {{"Assets/Runtime/CoinPickup.cs", hash, "x"}}, ""}).count("MISSING_RATIONALE"), 1u);
    EXPECT_EQ(codes({0, {}, "r"}).count("NO_FILES"), 1u);
    EXPECT_EQ(codes({0, {{"../x.cs", std::nullopt, "x"}}, "r"}).count("PATH_ESCAPE"), 1u);
    EXPECT_EQ(codes({0, {{"Assets/Runtime/CoinPickup.cs", hash, "x"}, {"Assets/Runtime/CoinPickup.cs", hash, "y"}}, "r"})
                  .count("DUPLICATE_PATH"),
              1u);
    const std::string support = m.find("Assets/Runtime/ReflectionHelper.cs")->content_hash;
    EXPECT_EQ(codes({0, {{"Assets/Runtime/ReflectionHelper.cs", support, "x"}}, "r"}).count("SUPPORT_FILE"), 1u);
    EXPECT_EQ(codes({0, {{"Assets/Runtime/CoinPickup.cs", std::string(64, '0'), "x"}}, "r"}).count("STALE_BASE"), 1u);
    EXPECT_EQ(codes({0, {{"Assets/Runtime/CoinPickup.cs", std::nullopt, "x"}}, "r"}).count("NEW_FILE_EXISTS"), 1u);
    EXPECT_EQ(codes({0, {{"Assets/Runtime/Nope.cs", std::string(64, '0'), "x"}}, "r"}).count("UNKNOWN_TARGET"), 1u);
}

TEST(Patch, PerturbedHashesModifyNothing) {
    TempDir dir;
    assemble(dir.path(), obstacle());
    std::mt19937 rng(99);
    const Tree before = snapshot(dir.path());
    for (int i = 0; i < 50; ++i) {
        const auto m = load_manifest(dir.path());
        PatchSet p = random_patch(rng, m);
        auto& victim = p.files[rng() % p.files.size()];
        if (victim.base_hash) {
            (*victim.base_hash)[rng() % 64] ^= 1;
        } else {
            victim.base_hash = sha256_hex("not the current content");
        }
        EXPECT_THROW(apply_patch(dir.path(), p), StaleBase);
        EXPECT_EQ(snapshot(dir.path()), before) << "iteration " << i;
    }
    EXPECT_TRUE(patch_ids(dir.path()).empty());
}

TEST(Patch, ValidSetsKeepManifestInSyncAndReplay) {
    TempDir dir;
    assemble(dir.path(), obstacle());
    const Tree initial = snapshot(project_dir(dir.path()));
    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        const AppliedPatch applied = apply_patch(dir.path(), random_patch(rng, load_manifest(dir.path())));
        EXPECT_EQ(applied.patch.id, i + 1);
        EXPECT_TRUE(manifest_mismatches(dir.path(), applied.manifest).empty());
        EXPECT_EQ(load_manifest(dir.path()), applied.manifest);
    }
    Tree replayed = initial;
    for (int id : patch_ids(dir.path())) {
        for (const auto& f : load_patch(dir.path(), id).files) {
            if (f.base_hash) {
                ASSERT_EQ(sha256_hex(replayed.at(f.relative_path)), *f.base_hash);
            }
            replayed[f.relative_path] = f.new_content;
        }
    }
    Tree final_tree = snapshot(project_dir(dir.path()));
    replayed.erase("manifest.json");
    final_tree.erase("manifest.json");
    EXPECT_EQ(replayed, final_tree);
    for (const auto& f : load_manifest(dir.path()).files) {
        if (f.relative_path.rfind("Assets/Runtime/Extra", 0) == 0) EXPECT_EQ(f.origin, FileOrigin::Patched);
    }
}

TEST(Patch, FailedStagingWritesNothing) {
    TempDir dir;
    const auto m = assemble(dir.path(), obstacle());
    const Tree before = snapshot(dir.path());
    PatchSet p{0,
               {{"Assets/Runtime/CoinPickup.cs", m.find("Assets/Runtime/CoinPickup.cs")->content_hash, "// new\n"},
                {"Assets/Runtime/SpikeHazard.cs/Nested.cs", std::nullopt, "// new\n"}},
               "r"};
    try {
        apply_patch(dir.path(), p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "IoError");
    }
    EXPECT_EQ(snapshot(dir.path()), before);
}

TEST(Patch, ProposeRejectsUnknownTargets) {
    TempDir dir;
    const auto bp = obstacle();
    const auto m = assemble(dir.path(), bp);
    auto provider = std::make_shared<ScriptedProvider>();
    for (int i = 0; i < 3; ++i) {
        provider->push(R"({"rationale":"r","files":[{"path":"Assets/Runtime/Ghost.cs","content":"x"}]})");
    }
    auto gw = scripted(provider);
    PromptLibrary prompts(fs::path(UNIGEN_SOURCE_DIR) / "prompts");
    try {
        propose_patch(make_error_context("fix it", "", m), dir.path(), m, bp, gw, prompts);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "PatchTargetsUnknownFile");
    }
    EXPECT_EQ(provider->requests().size(), 3u);
    try {
        propose_patch(make_error_context("  ", "", m), dir.path(), m, bp, gw, prompts);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "EmptyReport");
    }
}

TEST(Patch, ProposeFillsBaseHashes) {
    TempDir dir;
    const auto bp = obstacle();
    const auto m = assemble(dir.path(), bp);
    auto provider = std::make_shared<ScriptedProvider>();
    provider->push(R"({"rationale":"double points","files":[{"path":"Assets/Runtime/CoinPickup.cs","content":"x"}]})");
    auto gw = scripted(provider);
    PromptLibrary prompts(fs::path(UNIGEN_SOURCE_DIR) / "prompts");
    const PatchSet p = propose_patch(make_error_context("coins", "", m), dir.path(), m, bp, gw, prompts);
    ASSERT_EQ(p.files.size(), 1u);
    EXPECT_EQ(p.files[0].base_hash, m.find("Assets/Runtime/CoinPickup.cs")->content_hash);
    EXPECT_TRUE(provider->requests()[0].json_mode);
}
