#include "unigen/generation.hpp"

#include <algorithm>
#include <charconv>
#include <future>
#include <regex>
#include <set>

#include "unigen/hash.hpp"

namespace unigen {

using nlohmann::json;

namespace csharp {

namespace {

bool ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

} // namespace

std::string strip_non_code(std::string_view src) {
    std::string out(src);
    auto blank = [&](std::size_t i) {
        if (out[i] != '\n') out[i] = ' ';
    };
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        const char c = src[i];
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') blank(i++);
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            blank(i++);
            blank(i++);
            while (i < n && !(src[i] == '*' && i + 1 < n && src[i + 1] == '/')) blank(i++);
            if (i < n) {
                blank(i++);
                blank(i++);
            }
            continue;
        }
        if (c == '"' || ((c == '@' || c == '$') && i + 1 < n)) {
            // Optional @ / $ prefixes in either order.
            std::size_t j = i;
            bool verbatim = false;
            while (j < n && (src[j] == '@' || src[j] == '$') && j - i < 2) {
                verbatim = verbatim || src[j] == '@';
                ++j;
            }
            if (j >= n || src[j] != '"') {
                ++i;
                continue;
            }
            i = j + 1;
            while (i < n) {
                if (verbatim) {
                    if (src[i] == '"' && i + 1 < n && src[i + 1] == '"') {
                        blank(i++);
                        blank(i++);
                        continue;
                    }
                    if (src[i] == '"') break;
                } else {
                    if (src[i] == '\\' && i + 1 < n) {
                        blank(i++);
                        blank(i++);
                        continue;
                    }
                    if (src[i] == '"' || src[i] == '\n') break;
                }
                blank(i++);
            }
            ++i; // closing quote
            continue;
        }
        if (c == '\'') {
            std::size_t j = i + 1;
            while (j < n && j < i + 8 && src[j] != '\'' && src[j] != '\n') {
                if (src[j] == '\\') ++j;
                ++j;
            }
            if (j < n && src[j] == '\'') {
                for (std::size_t k = i + 1; k < j; ++k) blank(k);
                i = j + 1;
                continue;
            }
        }
        ++i;
    }
    return out;
}

std::vector<std::string> declared_types(std::string_view code) {
    static const std::regex kDecl(R"(\b(?:class|struct|interface|enum)\s+([A-Za-z_][A-Za-z0-9_]*))");
    std::vector<std::string> names;
    const std::string text(code);
    for (std::sregex_iterator it(text.begin(), text.end(), kDecl), end; it != end; ++it) {
        names.push_back((*it)[1].str());
    }
    return names;
}

bool contains_token(std::string_view code, std::string_view token) {
    if (token.empty()) return false;
    for (std::size_t pos = code.find(token); pos != std::string_view::npos; pos = code.find(token, pos + 1)) {
        const bool left_ok = !ident_char(token.front()) || pos == 0 || !ident_char(code[pos - 1]);
        const std::size_t after = pos + token.size();
        const bool right_ok = !ident_char(token.back()) || after >= code.size() || !ident_char(code[after]);
        if (left_ok && right_ok) return true;
    }
    return false;
}

std::string string_literal(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\r':
            out += "\\r";
            break;
        case '\t':
            out += "\\t";
            break;
        default:
            out.push_back(c);
        }
    }
    return out + "\"";
}

std::string float_literal(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) return "0f";
    return std::string(buf, ptr) + "f";
}

} // namespace csharp

json to_json(const ScriptPlan& plan) {
    json fields = json::array();
    for (const auto& f : plan.required_fields) fields.push_back({{"field", f.field}, {"ref", format_ref(f.ref)}});
    json j = {{"typeName", plan.type_name},
              {"kind", std::string(to_string(plan.kind))},
              {"requiredFields", fields},
              {"requiredFunctions", plan.required_functions}};
    if (plan.entity_id) j["entityId"] = *plan.entity_id;
    if (plan.behavior_id) j["behaviorId"] = *plan.behavior_id;
    return j;
}

std::string game_manager_type(const GameBlueprint& bp) {
    for (const auto& b : bp.behaviors) {
        if (b.kind == BehaviorKind::GameManager) return b.type_name;
    }
    auto it = bp.naming.components.find(std::string(to_string(BehaviorKind::GameManager)));
    return it != bp.naming.components.end() ? it->second : default_type_name(BehaviorKind::GameManager);
}

namespace {

std::vector<std::string> registry_functions(const GameBlueprint& bp, BehaviorKind kind) {
    std::vector<std::string> names;
    for (std::string_view key : required_function_keys(kind)) {
        auto it = bp.naming.functions.find(std::string(key));
        if (it != bp.naming.functions.end()) names.push_back(it->second);
    }
    return names;
}

} // namespace

std::vector<ScriptPlan> plan_script_set(const GameBlueprint& bp) {
    std::vector<ScriptPlan> plans;
    std::set<std::string> names;
    auto add = [&](ScriptPlan plan) {
        if (!names.insert(plan.type_name).second) {
            throw Error("DuplicateTypeName", "script type name '" + plan.type_name + "' is planned twice");
        }
        plans.push_back(std::move(plan));
    };
    for (const auto& b : bp.behaviors) {
        add(ScriptPlan{b.type_name, b.kind, b.entity_id, b.id, b.bindings, registry_functions(bp, b.kind)});
    }
    if (!bp.has_kind(BehaviorKind::GameManager)) {
        add(ScriptPlan{game_manager_type(bp), BehaviorKind::GameManager, std::nullopt, std::nullopt, {},
                       registry_functions(bp, BehaviorKind::GameManager)});
    }
    return plans;
}

std::string_view to_string(ScriptRole r) { return r == ScriptRole::Runtime ? "runtime" : "editor"; }

ScriptArtifact make_artifact(std::string type_name, ScriptRole role, std::string source) {
    ScriptArtifact a;
    a.path = type_name + ".cs";
    a.type_name = std::move(type_name);
    a.role = role;
    a.content_hash = sha256_hex(source);
    a.source = std::move(source);
    return a;
}

std::vector<std::string> default_forbidden_tokens() {
    return {
        // Removed or obsolete engine APIs.
        "Application.LoadLevel", "Application.LoadLevelAsync", "GUIText", "GUITexture", "WWW", "OnLevelWasLoaded",
        // Filesystem, process and network access.
        "System.IO", "File.", "Directory.", "System.Net", "UnityWebRequest", "Process.Start", "System.Diagnostics.Process",
    };
}

namespace {

void check_artifact(const ScriptArtifact& a, const ScriptPlan* plan, const ScriptCheckOptions& options,
                    ValidationReport& report) {
    auto error = [&](std::string code, std::string message) {
        report.add(Severity::Error, std::move(code), a.path, std::move(message));
    };

    bool name_reported = false;
    const std::filesystem::path p(a.path);
    if (p.extension() != ".cs") error("BAD_EXTENSION", "script files must use the .cs extension");
    if (p.stem().string() != a.type_name) {
        error("NAME_MISMATCH", "file stem '" + p.stem().string() + "' differs from type '" + a.type_name + "'");
        name_reported = true;
    }
    if (sha256_hex(a.source) != a.content_hash) error("HASH_MISMATCH", "contentHash does not match source");

    const std::string code = csharp::strip_non_code(a.source);
    const auto declared = csharp::declared_types(code);
    if (std::find(declared.begin(), declared.end(), a.type_name) == declared.end()) {
        if (declared.empty()) {
            error("TYPE_NOT_DECLARED", "source declares no type named '" + a.type_name + "'");
        } else if (!name_reported) {
            error("NAME_MISMATCH", "source declares '" + declared.front() + "' but the file expects '" + a.type_name + "'");
        }
    }

    long depth = 0;
    long opens = 0;
    long closes = 0;
    bool underflow = false;
    for (char c : code) {
        if (c == '{') {
            ++opens;
            ++depth;
        } else if (c == '}') {
            ++closes;
            if (--depth < 0) underflow = true;
        }
    }
    if (opens != closes || underflow) {
        error("UNBALANCED_BRACES",
              std::to_string(opens) + " opening and " + std::to_string(closes) + " closing braces");
    }

    if (plan) {
        for (const auto& fn : plan->required_functions) {
            if (!csharp::contains_token(code, fn)) error("MISSING_FUNCTION", "required function '" + fn + "' not found");
        }
        for (const auto& field : plan->required_fields) {
            if (!csharp::contains_token(code, field.field)) {
                error("MISSING_FIELD", "required field '" + field.field + "' not found");
            }
        }
    }
    for (const auto& token : options.forbidden_tokens) {
        if (csharp::contains_token(code, token)) error("FORBIDDEN_TOKEN", "forbidden token '" + token + "' used");
    }
}

} // namespace

ValidationReport validate_scripts(std::span<const ScriptArtifact> artifacts, const GameBlueprint& bp,
                                  const ScriptCheckOptions& options) {
    ValidationReport report;
    std::vector<ScriptPlan> plans;
    try {
        plans = plan_script_set(bp);
    } catch (const Error& e) {
        report.add(Severity::Error, "DUPLICATE_TYPENAME", "/behaviors", e.what());
    }
    for (const auto& a : artifacts) {
        const ScriptPlan* plan = nullptr;
        if (a.role == ScriptRole::Runtime) {
            auto it = std::find_if(plans.begin(), plans.end(), [&](const auto& p) { return p.type_name == a.type_name; });
            if (it != plans.end()) {
                plan = &*it;
            } else {
                report.add(Severity::Warning, "UNPLANNED_SCRIPT", a.path,
                           "type '" + a.type_name + "' has no matching plan");
            }
        }
        check_artifact(a, plan, options, report);
    }
    return report;
}

ScriptRejected::ScriptRejected(std::string type_name, ValidationReport report)
    : Error("ScriptRejected", "script '" + type_name + "' still invalid after repairs:\n" + report.to_text()),
      type_name_(std::move(type_name)), report_(std::move(report)) {}

std::string_view to_string(CodegenMode m) { return m == CodegenMode::Llm ? "llm" : "template"; }

std::optional<CodegenMode> codegen_mode_from_string(std::string_view s) {
    if (s == "llm") return CodegenMode::Llm;
    if (s == "template") return CodegenMode::Template;
    return std::nullopt;
}

namespace {

std::string contract_text(const GameBlueprint& bp) {
    std::string out = "- State owner: " + game_manager_type(bp) + " (static property Instance)\n";
    for (std::string_view key : required_function_keys(BehaviorKind::GameManager)) {
        out += "  - " + std::string(key) + ": " + function_name(bp, key) + "\n";
    }
    for (const auto& b : bp.behaviors) {
        if (b.kind != BehaviorKind::UiManager) continue;
        out += "- UI owner: " + b.type_name + " (static property Instance)\n";
        for (std::string_view key : required_function_keys(BehaviorKind::UiManager)) {
            out += "  - " + std::string(key) + ": " + function_name(bp, key) + "\n";
        }
    }
    return out;
}

struct ScriptJob {
    const ScriptPlan* plan;
    bool use_model;
};

ScriptArtifact generate_with_model(const ScriptPlan& plan, const GameBlueprint& bp, const LogicDescription& desc,
                                   LlmGateway& gateway, const PromptLibrary& prompts, const GenerationOptions& options,
                                   std::vector<std::string>& notes, int& rounds_used) {
    std::string forbidden;
    for (const auto& t : options.checks.forbidden_tokens) forbidden += "- " + t + "\n";
    std::string reference = "(no standard pattern: custom behavior)";
    if (plan.kind != BehaviorKind::Custom) reference = template_generate(plan, bp).source;
    std::string section = plan.behavior_id ? section_body(desc, "Behavior: " + plan.type_name) : std::string();
    if (section.empty()) section = "(no dedicated section)";

    const ChatMessage system{Role::System, prompts.render("generation.system.txt", {{"forbidden", forbidden}})};
    const ChatMessage user{Role::User, prompts.render("generation.user.txt", {{"typeName", plan.type_name},
                                                                             {"kind", std::string(to_string(plan.kind))},
                                                                             {"plan", to_json(plan).dump(2)},
                                                                             {"contract", contract_text(bp)},
                                                                             {"description", section},
                                                                             {"reference", reference},
                                                                             {"blueprint", canonical_serialize(bp)}})};
    std::vector<ChatMessage> messages{system, user};
    for (int round = 0;; ++round) {
        const ChatResponse resp = gateway.complete(gateway.request(messages, false));
        ScriptArtifact artifact = make_artifact(plan.type_name, ScriptRole::Runtime, strip_code_fence(resp.content));
        const ValidationReport report = validate_scripts(std::span(&artifact, 1), bp, options.checks);
        if (report.valid()) {
            rounds_used = round;
            return artifact;
        }
        notes.push_back("script " + plan.type_name + " attempt " + std::to_string(round + 1) + " rejected:\n" +
                        report.to_text());
        if (round >= options.repair_rounds) throw ScriptRejected(plan.type_name, report);
        messages = {system, user, {Role::Assistant, resp.content},
                    {Role::User, prompts.render("generation.repair.txt", {{"typeName", plan.type_name},
                                                                         {"diagnostics", report.to_text()}})}};
    }
}

} // namespace

std::vector<ScriptArtifact> generate_scripts(const GameBlueprint& bp, const LogicDescription& desc,
                                             LlmGateway& gateway, const PromptLibrary& prompts,
                                             const GenerationOptions& options, AgentTrace* trace) {
    const std::vector<ScriptPlan> plans = plan_script_set(bp);

    struct Outcome {
        ScriptArtifact artifact;
        std::vector<std::string> notes;
        int rounds = 0;
    };
    auto run = [&](const ScriptPlan& plan) {
        Outcome out;
        if (options.mode == CodegenMode::Template && plan.kind != BehaviorKind::Custom) {
            out.artifact = template_generate(plan, bp);
        } else {
            out.artifact = generate_with_model(plan, bp, desc, gateway, prompts, options, out.notes, out.rounds);
        }
        return out;
    };

    std::vector<std::future<Outcome>> futures;
    futures.reserve(plans.size());
    for (const auto& plan : plans) {
        futures.push_back(std::async(options.parallel ? std::launch::async : std::launch::deferred, run, std::cref(plan)));
    }

    // Wait for everything before surfacing the first failure in plan order.
    std::vector<Outcome> outcomes;
    std::exception_ptr first_error;
    for (auto& f : futures) {
        try {
            outcomes.push_back(f.get());
        } catch (...) {
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    std::vector<ScriptArtifact> artifacts;
    for (auto& o : outcomes) {
        if (trace) {
            trace->repair_rounds += o.rounds;
            trace->notes.insert(trace->notes.end(), o.notes.begin(), o.notes.end());
        }
        artifacts.push_back(std::move(o.artifact));
    }
    return artifacts;
}

} // namespace unigen
