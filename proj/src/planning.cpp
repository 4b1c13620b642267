#include "unigen/planning.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace unigen {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

struct Attempt {
    std::optional<GameBlueprint> blueprint;
    ValidationReport report;
};

Attempt evaluate_response(const std::string& content) {
    Attempt attempt;
    try {
        ParseResult parsed = parse_blueprint(extract_json(content));
        GameBlueprint bp = with_naming_defaults(std::move(parsed.blueprint));
        attempt.report = validate(bp);
        attempt.report.append(parsed.warnings);
        attempt.blueprint = std::move(bp);
    } catch (const SchemaError& e) {
        attempt.report.add(Severity::Error, "SCHEMA", e.path(), e.what());
    } catch (const Error& e) {
        attempt.report.add(Severity::Error, e.code(), "", e.what());
    }
    return attempt;
}

} // namespace

BlueprintRejected::BlueprintRejected(ValidationReport report, int repair_rounds)
    : Error("BlueprintRejected", "blueprint still invalid after " + std::to_string(repair_rounds) +
                                     " repair round(s):\n" + report.to_text()),
      report_(std::move(report)), repair_rounds_(repair_rounds) {}

GameBlueprint interpret_requirement(std::string_view requirement, LlmGateway& gateway, const PromptLibrary& prompts,
                                    const PlanningOptions& options, AgentTrace* trace) {
    const std::string req = trim(requirement);
    if (req.empty()) throw Error("EmptyRequirement", "requirement is empty");

    const std::string schema = prompts.raw("blueprint.schema.txt");
    const ChatMessage system{Role::System, prompts.render("planning.system.txt", {{"schema", schema}})};
    const ChatMessage user{Role::User, prompts.render("planning.user.txt", {{"requirement", req}})};

    std::vector<ChatMessage> messages{system, user};
    for (int round = 0;; ++round) {
        const ChatResponse resp = gateway.complete(gateway.request(messages, true));
        Attempt attempt = evaluate_response(resp.content);
        if (attempt.blueprint && attempt.report.valid()) {
            if (trace) trace->repair_rounds += round;
            return std::move(*attempt.blueprint);
        }
        if (trace) {
            trace->notes.push_back("planning attempt " + std::to_string(round + 1) + " rejected:\n" +
                                   attempt.report.to_text());
        }
        if (round >= options.repair_rounds) {
            if (trace) trace->repair_rounds += round;
            throw BlueprintRejected(std::move(attempt.report), round);
        }
        const std::string previous =
            attempt.blueprint ? canonical_serialize(*attempt.blueprint) : resp.content;
        messages = {system, user, {Role::Assistant, resp.content},
                    {Role::User, prompts.render("planning.repair.txt",
                                                {{"diagnostics", attempt.report.to_text()}, {"blueprint", previous}})}};
    }
}

std::vector<DescriptionSection> description_sections(std::string_view markdown) {
    std::vector<DescriptionSection> sections;
    std::istringstream in{std::string(markdown)};
    std::string line;
    bool in_fence = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("```", 0) == 0) in_fence = !in_fence;
        if (!in_fence && line.rfind("## ", 0) == 0) {
            sections.push_back({trim(line.substr(3)), {}});
            continue;
        }
        if (!sections.empty()) sections.back().body += line + "\n";
    }
    return sections;
}

std::vector<std::string> expected_section_headers(const GameBlueprint& bp) {
    std::vector<std::string> headers;
    for (const auto& b : bp.behaviors) headers.push_back("Behavior: " + b.type_name);
    for (const auto& i : bp.interactions) headers.push_back("Interaction: " + i.id);
    return headers;
}

ValidationReport check_description(std::string_view markdown, const GameBlueprint& bp) {
    ValidationReport report;
    std::map<std::string, int> expected;
    for (const auto& h : expected_section_headers(bp)) expected[h] = 0;
    for (const auto& section : description_sections(markdown)) {
        auto it = expected.find(section.header);
        if (it == expected.end()) {
            report.add(Severity::Error, "UNKNOWN_SECTION", section.header,
                       "section '" + section.header + "' matches no behavior or interaction");
        } else if (++it->second == 2) {
            report.add(Severity::Error, "DUPLICATE_SECTION", section.header,
                       "section '" + section.header + "' appears more than once");
        }
    }
    for (const auto& h : expected_section_headers(bp)) {
        if (expected[h] == 0) report.add(Severity::Error, "MISSING_SECTION", h, "no section '## " + h + "'");
    }
    return report;
}

LogicDescription generate_logic_description(const GameBlueprint& bp, LlmGateway& gateway,
                                            const PromptLibrary& prompts, AgentTrace* trace) {
    LogicDescription desc;
    desc.source_blueprint_hash = blueprint_hash(bp);

    const auto headers = expected_section_headers(bp);
    if (headers.empty()) {
        desc.markdown = "# " + (bp.meta.name.empty() ? std::string("Game") : bp.meta.name) + "\n\n" +
                        (bp.meta.description.empty() ? std::string() : bp.meta.description + "\n");
        return desc;
    }

    std::string header_list;
    for (const auto& h : headers) header_list += "## " + h + "\n";
    const ChatMessage system{Role::System, prompts.raw("description.system.txt")};
    const ChatMessage user{Role::User, prompts.render("description.user.txt", {{"blueprint", canonical_serialize(bp)},
                                                                              {"sections", header_list}})};

    std::vector<ChatMessage> messages{system, user};
    for (int round = 0;; ++round) {
        const ChatResponse resp = gateway.complete(gateway.request(messages, false));
        const ValidationReport report = check_description(resp.content, bp);
        if (report.valid()) {
            desc.markdown = resp.content;
            if (trace) trace->repair_rounds += round;
            return desc;
        }
        if (trace) trace->notes.push_back("description attempt " + std::to_string(round + 1) + " rejected:\n" +
                                          report.to_text());
        if (round >= 1) {
            throw Error("MalformedDescription",
                        "description sections do not match the blueprint:\n" + report.to_text());
        }
        messages = {system, user, {Role::Assistant, resp.content},
                    {Role::User, prompts.render("description.repair.txt", {{"diagnostics", report.to_text()},
                                                                          {"sections", header_list}})}};
    }
}

std::string section_body(const LogicDescription& desc, std::string_view header) {
    for (const auto& s : description_sections(desc.markdown)) {
        if (s.header == header) return trim(s.body);
    }
    return {};
}

} // namespace unigen
