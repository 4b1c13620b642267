#include "unigen/http_api.hpp"

#include <map>

#include <httplib.h>

namespace unigen {

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const std::string& code, const std::string& message) {
    send_json(res, {{"code", code}, {"message", message}}, http_status_for(code));
}

json body_of(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    json j = json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error("InvalidBody", "request body must be a JSON object");
    return j;
}

RunOptions options_from(const json& j, RunOptions options) {
    if (!j.is_object()) return options;
    if (auto it = j.find("codegen"); it != j.end()) {
        auto mode = it->is_string() ? codegen_mode_from_string(it->get<std::string>()) : std::nullopt;
        if (!mode) throw Error("InvalidBody", "options.codegen must be llm or template");
        options.codegen = *mode;
    }
    if (auto it = j.find("llm"); it != j.end()) {
        auto mode = it->is_string() ? gateway_mode_from_string(it->get<std::string>()) : std::nullopt;
        if (!mode) throw Error("InvalidBody", "options.llm must be live, record or replay");
        options.gateway = *mode;
    }
    if (auto it = j.find("transcript"); it != j.end() && it->is_string()) options.transcript = it->get<std::string>();
    return options;
}

json summary(const PipelineRun& run) {
    json j = to_json(run);
    j.erase("transcript");
    return j;
}

int since_of(const httplib::Request& req) {
    if (!req.has_param("since")) return 0;
    try {
        return std::stoi(req.get_param_value("since"));
    } catch (const std::exception&) {
        throw Error("InvalidBody", "since must be an integer");
    }
}

template <typename F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            send_error(res, e.code(), e.what());
        } catch (const std::exception& e) {
            send_error(res, "InternalError", e.what());
        }
    };
}

} // namespace

int http_status_for(std::string_view code) {
    static const std::map<std::string_view, int> statuses{
        {"UnknownRun", 404},       {"NotFound", 404},         {"EmptyRequirement", 400},
        {"EmptyReport", 400},      {"InvalidBody", 400},      {"PathEscape", 400},
        {"ConfigError", 400},      {"WrongStage", 409},       {"TerminalRun", 409},
        {"StaleBase", 409},        {"Busy", 409},             {"PatchTargetsUnknownFile", 422},
        {"PatchRejected", 422},    {"ReplayMiss", 502},       {"ProviderError", 502},
        {"Timeout", 504},
    };
    auto it = statuses.find(code);
    return it == statuses.end() ? 500 : it->second;
}

void install_api(httplib::Server& server, RunStore& store, const RunOptions& defaults) {
    server.Post("/api/runs", guarded([&store, defaults](const httplib::Request& req, httplib::Response& res) {
                    const json body = body_of(req);
                    const auto requirement = body.value("requirement", json(nullptr));
                    if (!requirement.is_string()) throw Error("EmptyRequirement", "requirement is required");
                    const RunOptions options = options_from(body.value("options", json::object()), defaults);
                    send_json(res, {{"id", store.create_run(requirement.get<std::string>(), options)}}, 201);
                }));
    server.Get("/api/runs", guarded([&store](const httplib::Request&, httplib::Response& res) {
                   json runs = json::array();
                   for (const auto& run : store.list_runs()) runs.push_back(summary(run));
                   send_json(res, runs);
               }));
    server.Get(R"(/api/runs/(\d+))", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   const RunSnapshot snap = store.get_run(req.matches[1], since_of(req));
                   json events = json::array();
                   for (const auto& e : snap.events) events.push_back(to_json(e));
                   send_json(res, {{"run", summary(snap.run)}, {"events", std::move(events)}});
               }));
    server.Post(R"(/api/runs/(\d+)/advance)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                    const json body = body_of(req);
                    const bool auto_advance = body.value("auto", false);
                    send_json(res, summary(store.advance(req.matches[1], auto_advance)));
                }));
    server.Get(R"(/api/runs/(\d+)/events)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   json events = json::array();
                   for (const auto& e : store.events(req.matches[1], since_of(req))) events.push_back(to_json(e));
                   send_json(res, events);
               }));
    server.Get(R"(/api/runs/(\d+)/files)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, store.list_files(req.matches[1]));
               }));
    server.Get(R"(/api/runs/(\d+)/files/(.+))", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   const std::string path = req.matches[2];
                   const std::string content = store.read_file(req.matches[1], path);
                   const bool is_json = path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0;
                   res.set_content(content, is_json ? "application/json" : "text/plain; charset=utf-8");
               }));
    server.Post(R"(/api/runs/(\d+)/debug)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                    const json body = body_of(req);
                    const std::string message = body.value("message", "");
                    std::optional<std::string> log;
                    if (auto it = body.find("log"); it != body.end() && it->is_string()) log = it->get<std::string>();
                    const PatchSummary s = store.debug_message(req.matches[1], message, log);
                    send_json(res, {{"patchId", s.patch_id}, {"changedPaths", s.changed_paths}});
                }));
}

void serve(RunStore& store, const ServerOptions& options) {
    httplib::Server server;
    install_api(server, store, options.defaults);
    if (options.static_dir && !server.set_mount_point("/", options.static_dir->string())) {
        throw Error("ConfigError", "static directory not found: " + options.static_dir->string());
    }
    if (!server.listen(options.host, options.port)) {
        throw Error("IoError", "cannot listen on " + options.host + ":" + std::to_string(options.port));
    }
}

} // namespace unigen
