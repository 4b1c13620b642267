#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "unigen/error.hpp"
#include "unigen/eval.hpp"
#include "unigen/fsutil.hpp"
#include "unigen/http_api.hpp"
#include "unigen/orchestrator.hpp"

using namespace unigen;

namespace {

struct Globals {
    std::string codegen = "llm";
    std::string llm = "live";
    std::string transcript;
    std::string runs_dir = "runs";
    std::string prompts_dir;
};

RunOptions run_options(const Globals& g) {
    RunOptions o;
    auto codegen = codegen_mode_from_string(g.codegen);
    auto gateway = gateway_mode_from_string(g.llm);
    if (!codegen) throw Error("ConfigError", "--codegen must be llm or template");
    if (!gateway) throw Error("ConfigError", "--llm must be live, record or replay");
    o.codegen = *codegen;
    o.gateway = *gateway;
    if (!g.transcript.empty()) o.transcript = g.transcript;
    return o;
}

RunStore make_store(const Globals& g) {
    StoreConfig config;
    config.root = g.runs_dir;
    if (!g.prompts_dir.empty()) config.prompts_dir = g.prompts_dir;
    return RunStore(std::move(config));
}

std::string requirement_text(const std::string& inline_text, const std::string& file) {
    if (!file.empty()) return read_file(file);
    return inline_text;
}

int report(const PipelineRun& run) {
    std::cout << run.id << " " << to_string(run.stage) << "\n";
    if (run.error) {
        std::cerr << "failed in " << to_string(run.error->stage) << ": " << run.error->code << ": "
                  << run.error->message << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"unigen: requirement to Unity project pipeline"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--codegen", g.codegen, "llm or template")->check(CLI::IsMember({"llm", "template"}));
    app.add_option("--llm", g.llm, "live, record or replay")->check(CLI::IsMember({"live", "record", "replay"}));
    app.add_option("--transcript", g.transcript, "transcript for record/replay");
    app.add_option("--runs-dir", g.runs_dir, "run store root");
    app.add_option("--prompts-dir", g.prompts_dir, "prompt template directory");

    std::string requirement;
    std::string requirement_file;
    auto* cmd_new = app.add_subcommand("new", "create a run");
    cmd_new->add_option("requirement", requirement);
    cmd_new->add_option("-f,--file", requirement_file, "read the requirement from a file");

    std::string run_id;
    bool auto_advance = false;
    auto* cmd_advance = app.add_subcommand("advance", "run the next stage");
    cmd_advance->add_option("id", run_id)->required();
    cmd_advance->add_flag("--auto", auto_advance, "continue until Assembled or Failed");

    auto* cmd_run = app.add_subcommand("run", "create a run and advance it to Assembled");
    cmd_run->add_option("requirement", requirement);
    cmd_run->add_option("-f,--file", requirement_file, "read the requirement from a file");

    std::string message;
    std::string log_file;
    auto* cmd_debug = app.add_subcommand("debug", "propose and apply a patch");
    cmd_debug->add_option("id", run_id)->required();
    cmd_debug->add_option("-m,--message", message, "problem report")->required();
    cmd_debug->add_option("--log", log_file, "Unity compile log")->check(CLI::ExistingFile);

    auto* cmd_status = app.add_subcommand("status", "show a run and its events");
    cmd_status->add_option("id", run_id)->required();

    ServerOptions server;
    std::string static_dir;
    auto* cmd_serve = app.add_subcommand("serve", "serve the HTTP API");
    cmd_serve->add_option("--host", server.host);
    cmd_serve->add_option("--port", server.port);
    cmd_serve->add_option("--static", static_dir, "console build to serve under /");

    std::string matrix_path;
    bool csv = false;
    std::optional<double> manual;
    std::optional<double> assisted;
    auto* cmd_eval = app.add_subcommand("eval", "completeness and improvement metrics");
    cmd_eval->add_option("--matrix", matrix_path, "interaction matrix (json or csv)");
    cmd_eval->add_flag("--csv", csv);
    cmd_eval->add_option("--manual", manual, "manual effort");
    cmd_eval->add_option("--assisted", assisted, "assisted effort");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_eval) {
            if (matrix_path.empty() && !(manual && assisted)) {
                std::cerr << "eval needs --matrix or both --manual and --assisted\n";
                return 2;
            }
            int code = 0;
            if (!matrix_path.empty()) {
                const InteractionMatrix m = load_matrix(matrix_path, csv);
                std::cout << render_report(m);
                for (const auto& e : m.entries) {
                    if (e.result == EntryResult::Pending) code = 3;
                }
                if (m.entries.empty()) code = 3;
            }
            if (manual && assisted) std::cout << "Improvement: " << improvement(*manual, *assisted).str() << "%\n";
            return code;
        }

        RunStore store = make_store(g);
        if (*cmd_new) {
            std::cout << store.create_run(requirement_text(requirement, requirement_file), run_options(g)) << "\n";
        } else if (*cmd_run) {
            const std::string id = store.create_run(requirement_text(requirement, requirement_file), run_options(g));
            return report(store.advance(id, true));
        } else if (*cmd_advance) {
            return report(store.advance(run_id, auto_advance));
        } else if (*cmd_debug) {
            std::optional<std::string> log;
            if (!log_file.empty()) log = read_file(log_file);
            const PatchSummary s = store.debug_message(run_id, message, log);
            std::cout << "patch " << s.patch_id << "\n";
            for (const auto& p : s.changed_paths) std::cout << "  " << p << "\n";
        } else if (*cmd_status) {
            const RunSnapshot snap = store.get_run(run_id);
            std::cout << to_json(snap.run).dump(2) << "\n";
            for (const auto& e : snap.events) std::cout << to_json(e).dump() << "\n";
        } else if (*cmd_serve) {
            server.defaults = run_options(g);
            if (!static_dir.empty()) server.static_dir = static_dir;
            std::cout << "listening on http://" << server.host << ":" << server.port << "\n" << std::flush;
            serve(store, server);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
