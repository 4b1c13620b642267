#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "unigen/automation.hpp"
#include "unigen/blueprint.hpp"
#include "unigen/llm.hpp"
#include "unigen/planning.hpp"
#include "unigen/prompts.hpp"

namespace unigen {

/// One line of the form `<path>(<line>,<col>): <error|warning> <CODE>: <message>`.
struct CompilerDiagnostic {
    std::string file;
    int line = 0;
    int column = 0;
    Severity severity = Severity::Error;
    std::string code;
    std::string message;

    /// Reconstructs the source line.
    std::string to_line() const;
    bool operator==(const CompilerDiagnostic&) const = default;
};

nlohmann::json to_json(const CompilerDiagnostic& d);

std::optional<CompilerDiagnostic> parse_diagnostic_line(std::string_view line);

/// Matching lines in order; everything else is ignored.
std::vector<CompilerDiagnostic> parse_compile_log(std::string_view text);

struct ErrorContext {
    std::string user_message;
    std::vector<CompilerDiagnostic> diagnostics;
    std::vector<std::string> affected_files; // manifest paths named by diagnostics
};

/// Diagnostic paths may be absolute or use backslashes; they are mapped onto
/// manifest paths by their "Assets/..." suffix.
ErrorContext make_error_context(std::string user_message, std::string_view log_text, const ProjectManifest& manifest);

struct FilePatch {
    std::string relative_path;
    std::optional<std::string> base_hash; // absent for a new file
    std::string new_content;

    bool operator==(const FilePatch&) const = default;
};

struct PatchSet {
    int id = 0; // assigned by apply_patch when 0
    std::vector<FilePatch> files;
    std::string rationale;

    bool operator==(const PatchSet&) const = default;
};

nlohmann::json to_json(const PatchSet& p);
PatchSet patch_from_json(const nlohmann::json& j);

/// Structural checks against the manifest: paths under Assets/, unique,
/// existing unless new, base hashes current, support files untouched.
ValidationReport check_patch(const PatchSet& patch, const ProjectManifest& manifest);

/// Throws Error{"EmptyReport"}, Error{"PatchTargetsUnknownFile"} or
/// Error{"PatchRejected"} after the repair rounds.
PatchSet propose_patch(const ErrorContext& ctx, const std::filesystem::path& run_dir, const ProjectManifest& manifest,
                       const GameBlueprint& bp, LlmGateway& gateway, const PromptLibrary& prompts,
                       int repair_rounds = 2, AgentTrace* trace = nullptr);

class StaleBase : public Error {
public:
    explicit StaleBase(std::vector<std::string> paths);
    const std::vector<std::string>& paths() const noexcept { return paths_; }

private:
    std::vector<std::string> paths_;
};

struct AppliedPatch {
    PatchSet patch; // with its assigned id
    ProjectManifest manifest;
    std::vector<std::string> changed_paths;
};

/// All-or-nothing: every base hash is checked before anything is written.
/// Persists patches/<id>.json. Throws StaleBase, Error{"PathEscape"},
/// Error{"IoError"} (after rolling back), Error{"Busy"}.
AppliedPatch apply_patch(const std::filesystem::path& run_dir, PatchSet patch);

/// Ids of patches/<id>.json in ascending order.
std::vector<int> patch_ids(const std::filesystem::path& run_dir);
PatchSet load_patch(const std::filesystem::path& run_dir, int id);

} // namespace unigen
