// Records the bundled replay transcript by running the pipeline in record
// mode against a scripted model that answers from a fixed blueprint.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>

#include "unigen/automation.hpp"
#include "unigen/debugging.hpp"
#include "unigen/fsutil.hpp"
#include "unigen/orchestrator.hpp"

using namespace unigen;
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kTypo = "jumpForse";

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

std::string replace_first(std::string s, std::string_view from, std::string_view to) {
    const auto pos = s.find(from);
    if (pos != std::string::npos) s.replace(pos, from.size(), to);
    return s;
}

std::string section_text(const GameBlueprint& bp, const std::string& header) {
    if (starts_with(header, "Behavior: ")) {
        const std::string type = header.substr(10);
        for (const auto& b : bp.behaviors) {
            if (b.type_name != type) continue;
            return type + " is attached to `" + b.entity_id + "` and implements the " + std::string(to_string(b.kind)) +
                   " pattern with the listed params. Contacts are forwarded to the game manager.";
        }
    }
    const std::string id = header.substr(13);
    for (const auto& r : bp.interactions) {
        if (r.id != id) continue;
        std::string text = "When `" + r.subject + "` fires " + std::string(to_string(r.trigger));
        if (r.object) text += " against `" + *r.object + "`";
        text += ", the game manager applies " + std::string(to_string(r.effect));
        if (r.effect_arg) text += " (" + *r.effect_arg + ")";
        return text + ".";
    }
    return "";
}

class FixtureModel final : public ChatProvider {
public:
    explicit FixtureModel(GameBlueprint bp) : bp_(std::move(bp)) {}

    ChatResponse send(const ChatRequest& req) override {
        const std::string& system = req.messages.front().content;
        const std::string& user = req.messages.back().content;
        ChatResponse resp;
        resp.usage = {static_cast<std::int64_t>((system.size() + user.size()) / 4), 0};
        if (starts_with(system, "You are the planning agent") && starts_with(user, "Requirement:")) {
            resp.content = "Here is the blueprint.\n\n```json\n" + to_ordered_json(bp_).dump(2) + "\n```\n";
        } else if (starts_with(system, "You are the planning agent")) {
            for (const auto& h : expected_section_headers(bp_)) {
                resp.content += "## " + h + "\n\n" + section_text(bp_, h) + "\n\n";
            }
        } else if (starts_with(system, "You are the generation agent")) {
            const auto begin = user.find("Write the script ") + 17;
            const std::string type = user.substr(begin, user.find(' ', begin) - begin);
            for (const auto& plan : plan_script_set(bp_)) {
                if (plan.type_name != type) continue;
                std::string source = template_generate(plan, bp_).source;
                if (plan.kind == BehaviorKind::PlayerMovement) source = with_typo(source);
                resp.content = "```csharp\n" + source + "```\n";
            }
        } else if (starts_with(system, "You are the automation agent")) {
            resp.content = "```csharp\n" + editor_template(bp_) + "```\n";
        } else if (starts_with(system, "You are the debugging agent")) {
            nlohmann::ordered_json patch;
            patch["rationale"] = "PlayerController referenced jumpForse, a misspelling of the jumpForce field.";
            patch["files"] = nlohmann::ordered_json::array();
            patch["files"].push_back({{"path", "Assets/Runtime/PlayerController.cs"}, {"content", fixed_player()}});
            resp.content = patch.dump(2);
        } else {
            throw ProviderFailure("fixture model got an unexpected prompt", false);
        }
        resp.usage.completion_tokens = static_cast<std::int64_t>(resp.content.size() / 4);
        return resp;
    }

    std::string fixed_player() const {
        for (const auto& plan : plan_script_set(bp_)) {
            if (plan.kind == BehaviorKind::PlayerMovement) return template_generate(plan, bp_).source;
        }
        return {};
    }

    static std::string with_typo(const std::string& source) {
        return replace_first(source, "Vector3.up * jumpForce", std::string("Vector3.up * ") + std::string(kTypo));
    }

private:
    GameBlueprint bp_;
};

std::string compile_log(const std::string& buggy) {
    const auto pos = buggy.find(kTypo);
    int line = 1 + static_cast<int>(std::count(buggy.begin(), buggy.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
    const int column = static_cast<int>(pos - buggy.rfind('\n', pos));
    CompilerDiagnostic d{"Assets/Runtime/PlayerController.cs", line, column, Severity::Error, "CS0103",
                         "The name '" + std::string(kTypo) + "' does not exist in the current context"};
    return "Refreshing native plugins compatible for Editor in 0.42 ms, found 0 plugins.\n"
           "Reloading assemblies after forced synchronous recompile.\n"
           "Starting: /Applications/Unity/Hub/Editor/2022.3.20f1/Unity.app/Contents/MonoBleedingEdge/bin/mono\n" +
           d.to_line() + "\n" +
           "(Filename: Assets/Runtime/PlayerController.cs Line: " + std::to_string(line) + ")\n\n"
           "Assembly-CSharp.dll compilation failed\n";
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: make_fixtures <blueprint.json> <fixture dir>\n";
        return 2;
    }
    const fs::path blueprint_path = argv[1];
    const fs::path out = argv[2];
    try {
        const GameBlueprint bp = parse_blueprint(std::string_view(read_file(blueprint_path))).blueprint;
        if (!validate(bp).valid()) throw Error("InvalidBlueprint", validate(bp).to_text());
        auto model = std::make_shared<FixtureModel>(bp);

        const fs::path scratch = fs::temp_directory_path() / "unigen-fixture-runs";
        fs::remove_all(scratch);
        fs::remove(out / "transcript.jsonl");

        int tick = 0;
        std::mutex tick_mutex;
        auto clock = [&] {
            std::lock_guard lock(tick_mutex);
            char buf[48];
            std::snprintf(buf, sizeof buf, "2026-03-02T10:%02d:%02d.000Z", tick / 60, tick % 60);
            ++tick;
            return std::string(buf);
        };
        StoreConfig config;
        config.root = scratch;
        config.provider = [model] { return model; };
        config.gateway.clock = clock;
        config.clock = clock;
        config.parallel_generation = false;
        RunStore store(config);

        const std::string requirement = read_file(out / "requirement.txt");
        RunOptions options{CodegenMode::Llm, GatewayMode::Record, out / "transcript.jsonl"};
        const std::string id = store.create_run(requirement, options);
        const PipelineRun run = store.advance(id, true);
        if (run.stage != Stage::Assembled) {
            throw Error("FixtureFailed", "run ended in " + std::string(to_string(run.stage)) +
                                             (run.error ? ": " + run.error->message : ""));
        }
        const std::string buggy = read_file(project_dir(store.run_dir(id)) / "Assets/Runtime/PlayerController.cs");
        const std::string log = compile_log(buggy);
        const std::string message = "The project does not compile, see the log.";
        write_file_atomic(out / "compile.log", log);
        write_file_atomic(out / "debug_message.txt", message);
        const PatchSummary patch = store.debug_message(id, message, log);
        std::cout << "recorded run " << id << ", patch " << patch.patch_id << "\n";
        fs::remove_all(scratch);
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}
