#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "unigen/blueprint.hpp"
#include "unigen/llm.hpp"
#include "unigen/planning.hpp"
#include "unigen/prompts.hpp"

namespace unigen {

/// What one generated runtime script must provide.
struct ScriptPlan {
    std::string type_name;
    BehaviorKind kind = BehaviorKind::Custom;
    std::optional<std::string> entity_id;   // absent for the synthetic GameManager
    std::optional<std::string> behavior_id; // absent for the synthetic GameManager
    std::vector<Binding> required_fields;
    std::vector<std::string> required_functions;

    bool operator==(const ScriptPlan&) const = default;
};

nlohmann::json to_json(const ScriptPlan& plan);

/// One plan per behavior in blueprint order, plus a trailing synthetic
/// GameManager plan when the blueprint declares none.
/// Throws Error{"DuplicateTypeName"}.
std::vector<ScriptPlan> plan_script_set(const GameBlueprint& bp);

/// Type name of the script owning score and win/lose state.
std::string game_manager_type(const GameBlueprint& bp);

enum class ScriptRole { Runtime, Editor };

std::string_view to_string(ScriptRole r);

struct ScriptArtifact {
    std::string path; // relative to the role's folder, e.g. "PlayerController.cs"
    std::string type_name;
    ScriptRole role = ScriptRole::Runtime;
    std::string source;
    std::string content_hash;

    bool operator==(const ScriptArtifact&) const = default;
};

ScriptArtifact make_artifact(std::string type_name, ScriptRole role, std::string source);

/// Deterministic source for the standard behavior kinds.
/// Throws Error{"TemplateUnavailable"} for custom behaviors.
ScriptArtifact template_generate(const ScriptPlan& plan, const GameBlueprint& bp);

std::vector<std::string> default_forbidden_tokens();

struct ScriptCheckOptions {
    std::vector<std::string> forbidden_tokens = default_forbidden_tokens();
};

/// Lexical checks: naming, brace balance, required names, forbidden tokens.
ValidationReport validate_scripts(std::span<const ScriptArtifact> artifacts, const GameBlueprint& bp,
                                  const ScriptCheckOptions& options = {});

class ScriptRejected : public Error {
public:
    ScriptRejected(std::string type_name, ValidationReport report);
    const std::string& type_name() const noexcept { return type_name_; }
    const ValidationReport& report() const noexcept { return report_; }

private:
    std::string type_name_;
    ValidationReport report_;
};

enum class CodegenMode { Llm, Template };

std::string_view to_string(CodegenMode m);
std::optional<CodegenMode> codegen_mode_from_string(std::string_view s);

struct GenerationOptions {
    CodegenMode mode = CodegenMode::Llm;
    int repair_rounds = 2;
    bool parallel = true;
    ScriptCheckOptions checks;
};

/// One validated runtime artifact per plan, in plan order. In template mode
/// only custom behaviors reach the model.
std::vector<ScriptArtifact> generate_scripts(const GameBlueprint& bp, const LogicDescription& desc,
                                             LlmGateway& gateway, const PromptLibrary& prompts,
                                             const GenerationOptions& options = {}, AgentTrace* trace = nullptr);

namespace csharp {

/// Source with comments and string/char literal bodies blanked out, keeping
/// offsets and line breaks intact.
std::string strip_non_code(std::string_view source);

/// Names following class/struct/interface/enum keywords, in order.
std::vector<std::string> declared_types(std::string_view code);

/// True when `token` occurs in `code` at identifier boundaries.
bool contains_token(std::string_view code, std::string_view token);

std::string string_literal(std::string_view text);
std::string float_literal(double value);

} // namespace csharp

} // namespace unigen
