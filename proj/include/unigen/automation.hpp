#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unigen/blueprint.hpp"
#include "unigen/generation.hpp"
#include "unigen/llm.hpp"
#include "unigen/planning.hpp"
#include "unigen/prompts.hpp"

namespace unigen {

inline constexpr std::string_view kSceneBuilderType = "SceneBuilder";
inline constexpr std::string_view kSceneBuilderNamespace = "UniGen.Generated";
inline constexpr std::string_view kMenuEntryName = "UniGen/Build Scene";
inline constexpr std::string_view kBatchEntryPoint = "UniGen.Generated.SceneBuilder.BuildBatch";

struct EditorScriptArtifact {
    ScriptArtifact script; // role Editor, path "SceneBuilder.cs"
    std::string menu_entry_name;
    std::string batch_entry_point;

    bool operator==(const EditorScriptArtifact&) const = default;
};

/// Deterministic scene builder for the blueprint.
std::string editor_template(const GameBlueprint& bp);

/// Lexical checks on a scene builder: declared type, entry points, one
/// "// ENTITY <id>" marker per entity, one AddComponent per behavior, every
/// binding routed through ReflectionHelper.SetFieldSafe and no direct field
/// assignment on generated components.
ValidationReport check_editor_script(std::string_view source, const GameBlueprint& bp);

/// Template mode never touches the gateway; LLM mode requires it.
EditorScriptArtifact generate_editor_script(const GameBlueprint& bp, std::span<const ScriptArtifact> artifacts,
                                            CodegenMode mode, LlmGateway* gateway = nullptr,
                                            const PromptLibrary* prompts = nullptr, int repair_rounds = 2,
                                            AgentTrace* trace = nullptr);

enum class FileOrigin { Generated, Support, Patched };

std::string_view to_string(FileOrigin o);

struct ManifestFile {
    std::string relative_path; // relative to the project root, always under Assets/
    std::string content_hash;
    FileOrigin origin = FileOrigin::Generated;

    bool operator==(const ManifestFile&) const = default;
};

struct ProjectManifest {
    std::string root_path = "project"; // relative to the run directory
    std::vector<ManifestFile> files;   // sorted by relative_path
    std::string created_at;

    const ManifestFile* find(std::string_view relative_path) const;
    bool operator==(const ProjectManifest&) const = default;
};

nlohmann::json to_json(const ProjectManifest& m);
ProjectManifest manifest_from_json(const nlohmann::json& j);

/// project/manifest.json under `run_dir`. Throws Error{"IoError"} if absent.
ProjectManifest load_manifest(const std::filesystem::path& run_dir);
void save_manifest(const std::filesystem::path& run_dir, const ProjectManifest& m);

/// Files whose on-disk hash differs from the manifest (or that are missing).
std::vector<std::string> manifest_mismatches(const std::filesystem::path& run_dir, const ProjectManifest& m);

std::filesystem::path project_dir(const std::filesystem::path& run_dir);
std::filesystem::path project_lock_path(const std::filesystem::path& run_dir);

/// Writes project/Assets/{Runtime,Editor} and project/manifest.json. Rerunning
/// with equal inputs rewrites nothing and keeps the earlier createdAt.
/// Throws Error{"PathEscape"} before writing anything, Error{"IoError"}.
ProjectManifest assemble_project(const std::filesystem::path& run_dir, const GameBlueprint& bp,
                                 std::span<const ScriptArtifact> artifacts, const EditorScriptArtifact& editor,
                                 const std::string& created_at);

} // namespace unigen
