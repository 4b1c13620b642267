#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "unigen/generation.hpp"
#include "unigen/llm.hpp"
#include "unigen/prompts.hpp"

namespace unigen {

enum class Stage { Created, Planned, Described, Generated, Assembled, Debugging, Done, Failed };

std::string_view to_string(Stage s);
std::optional<Stage> stage_from_string(std::string_view s);

/// Created→Planned→Described→Generated→Assembled→{Debugging↔Assembled}→Done,
/// plus any non-terminal stage → Failed.
bool is_legal_transition(Stage from, Stage to);

enum class EventKind { StageStarted, StageCompleted, Diagnostic, DebugMessage, PatchApplied, Failed };

std::string_view to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view s);

struct RunError {
    Stage stage = Stage::Failed; // the stage that was being entered
    std::string code;
    std::string message;
};

struct PipelineRun {
    std::string id;
    std::string requirement;
    Stage stage = Stage::Created;
    std::string created_at;
    std::string updated_at;
    std::optional<RunError> error;
    CodegenMode codegen_mode = CodegenMode::Llm;
    GatewayMode gateway_mode = GatewayMode::Live;
    std::string transcript; // relative to the run directory unless absolute; empty in live mode
};

nlohmann::json to_json(const PipelineRun& run);
PipelineRun run_from_json(const nlohmann::json& j);

struct RunEvent {
    int seq = 0;
    std::string timestamp;
    EventKind kind = EventKind::StageStarted;
    nlohmann::json payload;
};

nlohmann::json to_json(const RunEvent& e);
RunEvent event_from_json(const nlohmann::json& j);

struct RunOptions {
    CodegenMode codegen = CodegenMode::Llm;
    GatewayMode gateway = GatewayMode::Live;
    /// Replay: copied into the run as transcript.jsonl. Record: appended to
    /// in place (default: the run's transcript.jsonl).
    std::optional<std::filesystem::path> transcript;
};

struct PatchSummary {
    int patch_id = 0;
    std::vector<std::string> changed_paths;
};

struct RunSnapshot {
    PipelineRun run;
    std::vector<RunEvent> events;
};

using ProviderFactory = std::function<std::shared_ptr<ChatProvider>()>;

struct StoreConfig {
    std::filesystem::path root = "runs";
    std::optional<std::filesystem::path> prompts_dir; // default PromptLibrary::default_dir()
    ProviderFactory provider;                         // default: HTTP provider from the environment
    GatewayOptions gateway;                           // mode is taken from each run
    std::function<std::string()> clock;               // default utc_now_iso8601
    int repair_rounds = 2;
    bool parallel_generation = true;
};

/// File-backed run store: runs/<id>/ holds requirement.txt, run.json,
/// events.jsonl and the stage artifacts. One writer per run at a time
/// (Error{"Busy"} otherwise); reads never lock.
class RunStore {
public:
    explicit RunStore(StoreConfig config);

    const std::filesystem::path& root() const { return config_.root; }
    std::filesystem::path run_dir(const std::string& id) const;

    /// Throws Error{"EmptyRequirement"} before creating anything.
    std::string create_run(std::string_view requirement, const RunOptions& options = {});

    /// Runs exactly the next stage, or with `auto_advance` until Assembled or
    /// Failed. Stage errors end in Failed rather than propagating. Throws
    /// Error{"UnknownRun"}, Error{"TerminalRun"}, Error{"WrongStage"}.
    PipelineRun advance(const std::string& id, bool auto_advance = false);

    /// Throws Error{"WrongStage"}; patch failures propagate after the run is
    /// returned to Assembled.
    PatchSummary debug_message(const std::string& id, const std::string& message,
                               const std::optional<std::string>& log_text = std::nullopt);

    RunSnapshot get_run(const std::string& id, int since = 0) const;
    std::vector<PipelineRun> list_runs() const;
    std::vector<RunEvent> events(const std::string& id, int since = 0) const;

    /// Regular files under the run directory, relative, sorted; lock files excluded.
    std::vector<std::string> list_files(const std::string& id) const;
    /// Throws Error{"PathEscape"}, Error{"NotFound"}.
    std::string read_file(const std::string& id, const std::string& relative_path) const;

private:
    PipelineRun load(const std::string& id) const;
    void save(const PipelineRun& run) const;
    void record(const std::string& id, EventKind kind, nlohmann::json payload) const;
    std::unique_ptr<LlmGateway> make_gateway(const PipelineRun& run) const;
    std::string manifest_timestamp(const PipelineRun& run) const;
    std::string now() const;
    void step(PipelineRun& run, LlmGateway& gateway);

    StoreConfig config_;
    PromptLibrary prompts_;
    mutable std::mutex create_mutex_;
};

} // namespace unigen
