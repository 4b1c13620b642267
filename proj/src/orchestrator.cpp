#include "unigen/orchestrator.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "unigen/automation.hpp"
#include "unigen/debugging.hpp"
#include "unigen/fsutil.hpp"
#include "unigen/hash.hpp"
#include "unigen/planning.hpp"

namespace unigen {

namespace {

constexpr std::array<std::pair<Stage, std::string_view>, 8> kStages{{
    {Stage::Created, "Created"},
    {Stage::Planned, "Planned"},
    {Stage::Described, "Described"},
    {Stage::Generated, "Generated"},
    {Stage::Assembled, "Assembled"},
    {Stage::Debugging, "Debugging"},
    {Stage::Done, "Done"},
    {Stage::Failed, "Failed"},
}};

constexpr std::array<std::pair<EventKind, std::string_view>, 6> kEventKinds{{
    {EventKind::StageStarted, "stageStarted"},
    {EventKind::StageCompleted, "stageCompleted"},
    {EventKind::Diagnostic, "diagnostic"},
    {EventKind::DebugMessage, "debugMessage"},
    {EventKind::PatchApplied, "patchApplied"},
    {EventKind::Failed, "failed"},
}};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

bool valid_run_id(const std::string& id) {
    return !id.empty() && id.size() <= 12 && std::all_of(id.begin(), id.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string format_id(long long n) {
    std::string s = std::to_string(n);
    return s.size() >= 4 ? s : std::string(4 - s.size(), '0') + s;
}

Stage next_stage(Stage s) {
    switch (s) {
    case Stage::Created: return Stage::Planned;
    case Stage::Planned: return Stage::Described;
    case Stage::Described: return Stage::Generated;
    case Stage::Generated: return Stage::Assembled;
    case Stage::Assembled: return Stage::Done;
    default: return s;
    }
}

const std::filesystem::path kScripts = "scripts";

void write_scripts(const std::filesystem::path& dir, const std::vector<ScriptArtifact>& artifacts) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& a : artifacts) {
        write_file_atomic(dir / kScripts / a.path, a.source);
        nlohmann::ordered_json e;
        e["path"] = a.path;
        e["typeName"] = a.type_name;
        e["contentHash"] = a.content_hash;
        list.push_back(std::move(e));
    }
    write_file_atomic(dir / kScripts / "manifest.json", list.dump(2) + "\n");
}

std::vector<ScriptArtifact> read_scripts(const std::filesystem::path& dir) {
    std::vector<ScriptArtifact> out;
    const auto list = nlohmann::json::parse(unigen::read_file(dir / kScripts / "manifest.json"));
    for (const auto& e : list) {
        const std::string type = e.at("typeName").get<std::string>();
        std::string path;
        if (!normalize_relative(e.at("path").get<std::string>(), path) || path.find('/') != std::string::npos) {
            throw Error("PathEscape", "script path " + e.at("path").dump() + " leaves scripts/");
        }
        ScriptArtifact a = make_artifact(type, ScriptRole::Runtime, unigen::read_file(dir / kScripts / path));
        a.path = path;
        if (a.content_hash != e.at("contentHash").get<std::string>()) {
            throw Error("HashMismatch", "scripts/" + path + " does not match scripts/manifest.json");
        }
        out.push_back(std::move(a));
    }
    return out;
}

GameBlueprint read_blueprint(const std::filesystem::path& dir) {
    return parse_blueprint(std::string_view(unigen::read_file(dir / "blueprint.json"))).blueprint;
}

void note_trace(const AgentTrace& trace, const std::function<void(const std::string&)>& emit) {
    for (const auto& n : trace.notes) emit(n);
}

} // namespace

std::string_view to_string(Stage s) {
    for (const auto& [v, name] : kStages) {
        if (v == s) return name;
    }
    return "Failed";
}

std::optional<Stage> stage_from_string(std::string_view s) {
    for (const auto& [v, name] : kStages) {
        if (name == s) return v;
    }
    return std::nullopt;
}

bool is_legal_transition(Stage from, Stage to) {
    if (from == Stage::Done || from == Stage::Failed) return false;
    if (to == Stage::Failed) return true;
    switch (from) {
    case Stage::Assembled: return to == Stage::Debugging || to == Stage::Done;
    case Stage::Debugging: return to == Stage::Assembled;
    default: return to == next_stage(from) && to != Stage::Done;
    }
}

std::string_view to_string(EventKind k) {
    for (const auto& [v, name] : kEventKinds) {
        if (v == k) return name;
    }
    return "diagnostic";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
    for (const auto& [v, name] : kEventKinds) {
        if (name == s) return v;
    }
    return std::nullopt;
}

nlohmann::json to_json(const PipelineRun& run) {
    nlohmann::json j{{"id", run.id},
                     {"requirement", run.requirement},
                     {"stage", std::string(to_string(run.stage))},
                     {"createdAt", run.created_at},
                     {"updatedAt", run.updated_at},
                     {"error", nullptr},
                     {"codegenMode", std::string(to_string(run.codegen_mode))},
                     {"gatewayMode", std::string(to_string(run.gateway_mode))},
                     {"transcript", run.transcript}};
    if (run.error) {
        j["error"] = {{"stage", std::string(to_string(run.error->stage))},
                      {"code", run.error->code},
                      {"message", run.error->message}};
    }
    return j;
}

PipelineRun run_from_json(const nlohmann::json& j) {
    try {
        PipelineRun run;
        run.id = j.at("id").get<std::string>();
        run.requirement = j.at("requirement").get<std::string>();
        auto stage = stage_from_string(j.at("stage").get<std::string>());
        auto codegen = codegen_mode_from_string(j.at("codegenMode").get<std::string>());
        auto gateway = gateway_mode_from_string(j.at("gatewayMode").get<std::string>());
        if (!stage || !codegen || !gateway) throw Error("RunInvalid", "run.json has an unknown enum value");
        run.stage = *stage;
        run.codegen_mode = *codegen;
        run.gateway_mode = *gateway;
        run.created_at = j.at("createdAt").get<std::string>();
        run.updated_at = j.at("updatedAt").get<std::string>();
        run.transcript = j.value("transcript", "");
        if (j.contains("error") && !j["error"].is_null()) {
            const auto& e = j["error"];
            run.error = RunError{stage_from_string(e.at("stage").get<std::string>()).value_or(Stage::Failed),
                                 e.at("code").get<std::string>(), e.at("message").get<std::string>()};
        }
        return run;
    } catch (const nlohmann::json::exception& e) {
        throw Error("RunInvalid", std::string("malformed run.json: ") + e.what());
    }
}

nlohmann::json to_json(const RunEvent& e) {
    return {{"seq", e.seq}, {"timestamp", e.timestamp}, {"kind", std::string(to_string(e.kind))}, {"payload", e.payload}};
}

RunEvent event_from_json(const nlohmann::json& j) {
    RunEvent e;
    e.seq = j.at("seq").get<int>();
    e.timestamp = j.at("timestamp").get<std::string>();
    e.kind = event_kind_from_string(j.at("kind").get<std::string>()).value_or(EventKind::Diagnostic);
    e.payload = j.value("payload", nlohmann::json::object());
    return e;
}

RunStore::RunStore(StoreConfig config)
    : config_(std::move(config)), prompts_(config_.prompts_dir ? *config_.prompts_dir : PromptLibrary::default_dir()) {
    if (!config_.clock) config_.clock = utc_now_iso8601;
    if (!config_.provider) {
        config_.provider = [] { return std::make_shared<HttpChatProvider>(HttpProviderConfig::from_env()); };
    }
}

std::filesystem::path RunStore::run_dir(const std::string& id) const { return config_.root / id; }

std::string RunStore::now() const { return config_.clock(); }

PipelineRun RunStore::load(const std::string& id) const {
    if (!valid_run_id(id) || !std::filesystem::is_regular_file(run_dir(id) / "run.json")) {
        throw Error("UnknownRun", "no run '" + id + "'");
    }
    try {
        return run_from_json(nlohmann::json::parse(unigen::read_file(run_dir(id) / "run.json")));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("RunInvalid", "run " + id + ": " + e.what());
    }
}

void RunStore::save(const PipelineRun& run) const {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(to_json(run).dump());
    nlohmann::ordered_json ordered;
    for (const char* key : {"id", "requirement", "stage", "createdAt", "updatedAt", "error", "codegenMode",
                            "gatewayMode", "transcript"}) {
        ordered[key] = j[key];
    }
    write_file_atomic(run_dir(run.id) / "run.json", ordered.dump(2) + "\n");
}

std::vector<RunEvent> RunStore::events(const std::string& id, int since) const {
    load(id);
    std::vector<RunEvent> out;
    std::ifstream in(run_dir(id) / "events.jsonl");
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        try {
            RunEvent e = event_from_json(nlohmann::json::parse(line));
            if (e.seq > since) out.push_back(std::move(e));
        } catch (const nlohmann::json::exception&) {
            // a torn trailing line from a crash is skipped
        }
    }
    return out;
}

void RunStore::record(const std::string& id, EventKind kind, nlohmann::json payload) const {
    const auto path = run_dir(id) / "events.jsonl";
    int seq = 1;
    {
        std::ifstream in(path);
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            try {
                seq = std::max(seq, nlohmann::json::parse(line).at("seq").get<int>() + 1);
            } catch (const nlohmann::json::exception&) {
            }
        }
    }
    nlohmann::ordered_json e;
    e["seq"] = seq;
    e["timestamp"] = now();
    e["kind"] = std::string(to_string(kind));
    e["payload"] = std::move(payload);
    std::ofstream out(path, std::ios::app | std::ios::binary);
    out << e.dump() << "\n";
    if (!out) throw Error("IoError", "cannot append to " + path.string());
}

std::string RunStore::create_run(std::string_view requirement, const RunOptions& options) {
    const std::string req = trim(requirement);
    if (req.empty()) throw Error("EmptyRequirement", "requirement is empty");
    if (options.gateway == GatewayMode::Replay && !options.transcript) {
        throw Error("ConfigError", "replay mode needs a transcript");
    }
    if (options.transcript && options.gateway == GatewayMode::Replay &&
        !std::filesystem::is_regular_file(*options.transcript)) {
        throw Error("ConfigError", "transcript not found: " + options.transcript->string());
    }

    std::lock_guard guard(create_mutex_);
    std::filesystem::create_directories(config_.root);
    FileLock lock(config_.root / ".store.lock", true);

    long long next = 1;
    const auto counter = config_.root / "next-id";
    if (std::filesystem::exists(counter)) {
        next = std::stoll(trim(unigen::read_file(counter)));
    }
    std::string id = format_id(next);
    while (std::filesystem::exists(run_dir(id))) id = format_id(++next);
    write_file_atomic(counter, std::to_string(next + 1) + "\n");

    const auto dir = run_dir(id);
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "requirement.txt", req + "\n");

    PipelineRun run;
    run.id = id;
    run.requirement = req;
    run.created_at = run.updated_at = now();
    run.codegen_mode = options.codegen;
    run.gateway_mode = options.gateway;
    if (options.gateway == GatewayMode::Replay) {
        std::filesystem::copy_file(*options.transcript, dir / "transcript.jsonl",
                                   std::filesystem::copy_options::overwrite_existing);
        run.transcript = "transcript.jsonl";
    } else if (options.gateway == GatewayMode::Record) {
        run.transcript = options.transcript ? std::filesystem::absolute(*options.transcript).string()
                                            : std::string("transcript.jsonl");
    }
    save(run);
    record(id, EventKind::StageStarted, {{"stage", "Created"}});
    return id;
}

std::unique_ptr<LlmGateway> RunStore::make_gateway(const PipelineRun& run) const {
    GatewayOptions options = config_.gateway;
    options.mode = run.gateway_mode;
    std::optional<std::filesystem::path> transcript;
    if (!run.transcript.empty()) {
        const std::filesystem::path p(run.transcript);
        transcript = p.is_absolute() ? p : run_dir(run.id) / p;
    }
    std::shared_ptr<ChatProvider> provider;
    if (run.gateway_mode != GatewayMode::Replay) provider = config_.provider();
    return std::make_unique<LlmGateway>(std::move(options), std::move(provider), std::move(transcript));
}

// In replay the manifest carries the newest recorded time so replays are
// byte-identical; otherwise it is the wall clock.
std::string RunStore::manifest_timestamp(const PipelineRun& run) const {
    if (run.gateway_mode == GatewayMode::Replay && !run.transcript.empty()) {
        std::string latest;
        for (const auto& e : TranscriptStore(run_dir(run.id) / run.transcript).load()) latest = std::max(latest, e.timestamp);
        if (!latest.empty()) return latest;
        return "1970-01-01T00:00:00.000Z";
    }
    return now();
}

void RunStore::step(PipelineRun& run, LlmGateway& gateway) {
    const auto dir = run_dir(run.id);
    const Stage target = next_stage(run.stage);
    record(run.id, EventKind::StageStarted, {{"stage", std::string(to_string(target))}});
    AgentTrace trace;
    auto emit_notes = [&] {
        note_trace(trace, [&](const std::string& n) {
            record(run.id, EventKind::Diagnostic, {{"stage", std::string(to_string(target))}, {"message", n}});
        });
    };
    nlohmann::json completed{{"stage", std::string(to_string(target))}};
    try {
        switch (target) {
        case Stage::Planned: {
            PlanningOptions options;
            options.repair_rounds = config_.repair_rounds;
            const GameBlueprint bp = interpret_requirement(run.requirement, gateway, prompts_, options, &trace);
            write_file_atomic(dir / "blueprint.json", canonical_serialize(bp));
            completed["artifacts"] = {"blueprint.json"};
            completed["blueprintHash"] = blueprint_hash(bp);
            break;
        }
        case Stage::Described: {
            const GameBlueprint bp = read_blueprint(dir);
            const LogicDescription desc = generate_logic_description(bp, gateway, prompts_, &trace);
            write_file_atomic(dir / "description.md", desc.markdown);
            completed["artifacts"] = {"description.md"};
            break;
        }
        case Stage::Generated: {
            const GameBlueprint bp = read_blueprint(dir);
            LogicDescription desc{unigen::read_file(dir / "description.md"), blueprint_hash(bp)};
            GenerationOptions options;
            options.mode = run.codegen_mode;
            options.repair_rounds = config_.repair_rounds;
            options.parallel = config_.parallel_generation;
            const auto artifacts = generate_scripts(bp, desc, gateway, prompts_, options, &trace);
            std::filesystem::remove_all(dir / kScripts);
            write_scripts(dir, artifacts);
            nlohmann::json names = nlohmann::json::array();
            for (const auto& a : artifacts) names.push_back("scripts/" + a.path);
            completed["artifacts"] = std::move(names);
            break;
        }
        case Stage::Assembled: {
            const GameBlueprint bp = read_blueprint(dir);
            const auto artifacts = read_scripts(dir);
            const EditorScriptArtifact editor = generate_editor_script(bp, artifacts, run.codegen_mode, &gateway,
                                                                       &prompts_, config_.repair_rounds, &trace);
            const ProjectManifest manifest = assemble_project(dir, bp, artifacts, editor, manifest_timestamp(run));
            completed["artifacts"] = {"project/manifest.json"};
            completed["files"] = manifest.files.size();
            break;
        }
        case Stage::Done:
            break;
        default:
            throw Error("WrongStage", "no stage follows " + std::string(to_string(run.stage)));
        }
    } catch (const Error& e) {
        emit_notes();
        run.error = RunError{target, e.code(), e.what()};
        run.stage = Stage::Failed;
        run.updated_at = now();
        record(run.id, EventKind::Failed,
               {{"stage", std::string(to_string(target))}, {"code", e.code()}, {"message", e.what()}});
        save(run);
        return;
    } catch (const std::exception& e) {
        emit_notes();
        run.error = RunError{target, "InternalError", e.what()};
        run.stage = Stage::Failed;
        run.updated_at = now();
        record(run.id, EventKind::Failed,
               {{"stage", std::string(to_string(target))}, {"code", "InternalError"}, {"message", e.what()}});
        save(run);
        return;
    }
    emit_notes();
    if (trace.repair_rounds > 0) completed["repairRounds"] = trace.repair_rounds;
    run.stage = target;
    run.updated_at = now();
    record(run.id, EventKind::StageCompleted, std::move(completed));
    save(run);
}

PipelineRun RunStore::advance(const std::string& id, bool auto_advance) {
    load(id);
    FileLock lock(run_dir(id) / "run.lock");
    PipelineRun run = load(id);
    if (run.stage == Stage::Done || run.stage == Stage::Failed) {
        throw Error("TerminalRun", "run " + id + " is " + std::string(to_string(run.stage)));
    }
    if (run.stage == Stage::Debugging) throw Error("WrongStage", "run " + id + " is being debugged");

    std::unique_ptr<LlmGateway> gateway;
    try {
        gateway = make_gateway(run);
    } catch (const Error& e) {
        const Stage target = next_stage(run.stage);
        run.error = RunError{target, e.code(), e.what()};
        run.stage = Stage::Failed;
        run.updated_at = now();
        record(run.id, EventKind::Failed,
               {{"stage", std::string(to_string(target))}, {"code", e.code()}, {"message", e.what()}});
        save(run);
        return run;
    }
    do {
        step(run, *gateway);
    } while (auto_advance && run.stage != Stage::Assembled && run.stage != Stage::Failed);
    return run;
}

PatchSummary RunStore::debug_message(const std::string& id, const std::string& message,
                                     const std::optional<std::string>& log_text) {
    load(id);
    FileLock lock(run_dir(id) / "run.lock");
    PipelineRun run = load(id);
    if (run.stage != Stage::Assembled && run.stage != Stage::Debugging) {
        throw Error("WrongStage", "debugging needs an Assembled run; run " + id + " is " +
                                      std::string(to_string(run.stage)));
    }
    const auto dir = run_dir(id);
    run.stage = Stage::Debugging;
    run.updated_at = now();
    save(run);

    auto restore = [&] {
        run.stage = Stage::Assembled;
        run.updated_at = now();
        save(run);
    };
    try {
        const ProjectManifest manifest = load_manifest(dir);
        const ErrorContext ctx = make_error_context(message, log_text.value_or(""), manifest);
        nlohmann::json diagnostics = nlohmann::json::array();
        for (const auto& d : ctx.diagnostics) diagnostics.push_back(to_json(d));
        record(id, EventKind::DebugMessage,
               {{"message", message}, {"diagnostics", std::move(diagnostics)}, {"affectedFiles", ctx.affected_files}});

        const GameBlueprint bp = read_blueprint(dir);
        auto gateway = make_gateway(run);
        AgentTrace trace;
        PatchSet patch;
        try {
            patch = propose_patch(ctx, dir, manifest, bp, *gateway, prompts_, config_.repair_rounds, &trace);
        } catch (...) {
            for (const auto& n : trace.notes) record(id, EventKind::Diagnostic, {{"stage", "Debugging"}, {"message", n}});
            throw;
        }
        for (const auto& n : trace.notes) record(id, EventKind::Diagnostic, {{"stage", "Debugging"}, {"message", n}});
        const AppliedPatch applied = apply_patch(dir, std::move(patch));
        record(id, EventKind::PatchApplied, {{"patchId", applied.patch.id},
                                             {"changedPaths", applied.changed_paths},
                                             {"rationale", applied.patch.rationale}});
        restore();
        return {applied.patch.id, applied.changed_paths};
    } catch (const Error& e) {
        record(id, EventKind::Diagnostic, {{"stage", "Debugging"}, {"code", e.code()}, {"message", e.what()}});
        restore();
        throw;
    }
}

RunSnapshot RunStore::get_run(const std::string& id, int since) const { return {load(id), events(id, since)}; }

std::vector<PipelineRun> RunStore::list_runs() const {
    std::vector<PipelineRun> runs;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(config_.root, ec)) {
        const std::string id = entry.path().filename().string();
        if (!entry.is_directory() || !valid_run_id(id)) continue;
        try {
            runs.push_back(load(id));
        } catch (const Error&) {
            // half-created directory
        }
    }
    std::sort(runs.begin(), runs.end(), [](const PipelineRun& a, const PipelineRun& b) { return a.id < b.id; });
    return runs;
}

std::vector<std::string> RunStore::list_files(const std::string& id) const {
    load(id);
    const auto dir = run_dir(id);
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = std::filesystem::relative(entry.path(), dir).generic_string();
        if (entry.path().extension() == ".lock" || rel.find(".unigen-tmp") != std::string::npos ||
            rel.find(".tmp.") != std::string::npos) {
            continue;
        }
        files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::string RunStore::read_file(const std::string& id, const std::string& relative_path) const {
    load(id);
    std::string normalized;
    if (!normalize_relative(relative_path, normalized)) {
        throw Error("PathEscape", "'" + relative_path + "' is outside the run directory");
    }
    const auto path = run_dir(id) / normalized;
    if (!std::filesystem::is_regular_file(path)) throw Error("NotFound", "no file '" + normalized + "' in run " + id);
    return unigen::read_file(path);
}

} // namespace unigen
