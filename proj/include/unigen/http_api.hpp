#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "unigen/orchestrator.hpp"

namespace httplib {
class Server;
}

namespace unigen {

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    RunOptions defaults;                             // used when POST /api/runs omits options
    std::optional<std::filesystem::path> static_dir; // console assets served under /
};

/// HTTP status for an error code, e.g. UnknownRun -> 404, StaleBase -> 409.
int http_status_for(std::string_view code);

/// Registers every /api route on `server`.
void install_api(httplib::Server& server, RunStore& store, const RunOptions& defaults);

/// Blocks until the server stops. Throws Error{"IoError"} if the port cannot be bound.
void serve(RunStore& store, const ServerOptions& options);

} // namespace unigen
