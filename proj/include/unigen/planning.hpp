#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "unigen/blueprint.hpp"
#include "unigen/llm.hpp"
#include "unigen/prompts.hpp"

namespace unigen {

/// Notes an agent leaves about its model exchanges (repair rounds and the
/// diagnostics that triggered them). The orchestrator turns them into events.
struct AgentTrace {
    int repair_rounds = 0;
    std::vector<std::string> notes;
};

class BlueprintRejected : public Error {
public:
    BlueprintRejected(ValidationReport report, int repair_rounds);
    const ValidationReport& report() const noexcept { return report_; }
    int repair_rounds() const noexcept { return repair_rounds_; }

private:
    ValidationReport report_;
    int repair_rounds_;
};

struct PlanningOptions {
    int repair_rounds = 2;
};

/// Turns a natural-language requirement into a validated blueprint. Each
/// failed attempt is fed back to the model with its diagnostics, up to
/// `repair_rounds` times.
GameBlueprint interpret_requirement(std::string_view requirement, LlmGateway& gateway, const PromptLibrary& prompts,
                                    const PlanningOptions& options = {}, AgentTrace* trace = nullptr);

struct LogicDescription {
    std::string markdown;
    std::string source_blueprint_hash;
};

struct DescriptionSection {
    std::string header; // e.g. "Behavior: PlayerController"
    std::string body;
};

std::vector<DescriptionSection> description_sections(std::string_view markdown);

/// Section headers expected for `bp`, in blueprint order.
std::vector<std::string> expected_section_headers(const GameBlueprint& bp);

/// Diagnostics for missing, duplicate, or unknown section headers.
ValidationReport check_description(std::string_view markdown, const GameBlueprint& bp);

LogicDescription generate_logic_description(const GameBlueprint& bp, LlmGateway& gateway,
                                            const PromptLibrary& prompts, AgentTrace* trace = nullptr);

/// Body of the section describing `header`, or empty.
std::string section_body(const LogicDescription& desc, std::string_view header);

} // namespace unigen
