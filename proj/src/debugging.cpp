#include "unigen/debugging.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "unigen/fsutil.hpp"
#include "unigen/hash.hpp"

namespace unigen {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// Positive decimal without leading zeros, so the text round-trips.
bool positive_int(const std::string& text, int& out) {
    if (text.empty() || text[0] == '0') return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size() && out > 0;
}

std::optional<std::string> manifest_path_for(const std::string& file, const ProjectManifest& manifest) {
    std::string p = file;
    std::replace(p.begin(), p.end(), '\\', '/');
    std::string tail;
    if (p.rfind("Assets/", 0) == 0) {
        tail = p;
    } else if (auto pos = p.rfind("/Assets/"); pos != std::string::npos) {
        tail = p.substr(pos + 1);
    } else {
        return std::nullopt;
    }
    std::string normalized;
    if (!normalize_relative(tail, normalized) || !manifest.find(normalized)) return std::nullopt;
    return normalized;
}

bool under_assets(const std::string& path, std::string& normalized) {
    return normalize_relative(path, normalized) && normalized.rfind("Assets/", 0) == 0 && normalized.size() > 7;
}

std::filesystem::path patches_dir(const std::filesystem::path& run_dir) { return run_dir / "patches"; }

std::string project_listing(const std::filesystem::path& run_dir, const ProjectManifest& manifest) {
    std::string out;
    const auto root = project_dir(run_dir);
    for (const auto& f : manifest.files) {
        if (f.origin == FileOrigin::Support) {
            out += "### " + f.relative_path + " (support file, read-only)\n\n";
            continue;
        }
        out += "### " + f.relative_path + "\n```csharp\n" + read_file(root / f.relative_path);
        if (out.back() != '\n') out += "\n";
        out += "```\n\n";
    }
    return out;
}

std::string editable_paths(const ProjectManifest& manifest) {
    std::string out;
    for (const auto& f : manifest.files) {
        if (f.origin != FileOrigin::Support) out += "- " + f.relative_path + "\n";
    }
    return out;
}

struct Candidate {
    PatchSet patch;
    ValidationReport report;
};

Candidate read_candidate(const std::string& content, const ProjectManifest& manifest) {
    Candidate c;
    nlohmann::json doc;
    try {
        doc = extract_json(content);
    } catch (const Error& e) {
        c.report.add(Severity::Error, "MALFORMED_PATCH", "", e.what());
        return c;
    }
    if (!doc.is_object()) {
        c.report.add(Severity::Error, "MALFORMED_PATCH", "", "expected a JSON object");
        return c;
    }
    if (auto it = doc.find("rationale"); it != doc.end() && it->is_string()) c.patch.rationale = it->get<std::string>();
    auto files = doc.find("files");
    if (files == doc.end() || !files->is_array()) {
        c.report.add(Severity::Error, "MALFORMED_PATCH", "/files", "expected an array of files");
        return c;
    }
    for (std::size_t i = 0; i < files->size(); ++i) {
        const auto& f = (*files)[i];
        const std::string where = "/files/" + std::to_string(i);
        if (!f.is_object() || !f.contains("path") || !f["path"].is_string() || !f.contains("content") ||
            !f["content"].is_string()) {
            c.report.add(Severity::Error, "MALFORMED_PATCH", where, "each file needs string path and content");
            continue;
        }
        const bool new_file = f.value("newFile", false);
        FilePatch fp;
        fp.relative_path = f["path"].get<std::string>();
        fp.new_content = f["content"].get<std::string>();
        std::string normalized;
        if (normalize_relative(fp.relative_path, normalized)) fp.relative_path = normalized;
        if (const ManifestFile* m = manifest.find(fp.relative_path)) {
            fp.base_hash = m->content_hash;
        } else if (!new_file) {
            c.report.add(Severity::Error, "UNKNOWN_TARGET", fp.relative_path,
                         "'" + fp.relative_path + "' is not a project file and is not marked newFile");
        }
        c.patch.files.push_back(std::move(fp));
    }
    c.report.append(check_patch(c.patch, manifest));
    return c;
}

std::string tmp_path_for(const std::filesystem::path& p) { return p.string() + ".unigen-tmp"; }

void write_raw(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IoError", "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("IoError", "short write to " + path.string());
}

// Field order follows the type rather than json's sorted keys.
std::string patch_text(const PatchSet& p) {
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& f : p.files) {
        nlohmann::ordered_json e;
        e["relativePath"] = f.relative_path;
        e["baseHash"] = f.base_hash ? nlohmann::ordered_json(*f.base_hash) : nlohmann::ordered_json(nullptr);
        e["newContent"] = f.new_content;
        files.push_back(std::move(e));
    }
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["files"] = std::move(files);
    j["rationale"] = p.rationale;
    return j.dump(2) + "\n";
}

} // namespace

std::string CompilerDiagnostic::to_line() const {
    return file + "(" + std::to_string(line) + "," + std::to_string(column) + "): " + std::string(to_string(severity)) +
           " " + code + ": " + message;
}

nlohmann::json to_json(const CompilerDiagnostic& d) {
    return {{"file", d.file},
            {"line", d.line},
            {"column", d.column},
            {"severity", std::string(to_string(d.severity))},
            {"code", d.code},
            {"message", d.message}};
}

std::optional<CompilerDiagnostic> parse_diagnostic_line(std::string_view raw) {
    static const std::regex grammar(R"(^(.+)\((\d+),(\d+)\): (error|warning) ([A-Z]{2}[0-9]{4}): (.*)$)");
    std::string line(raw);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (!std::regex_match(line, m, grammar)) return std::nullopt;
    CompilerDiagnostic d;
    if (!positive_int(m[2], d.line) || !positive_int(m[3], d.column)) return std::nullopt;
    d.file = m[1];
    d.severity = m[4] == "error" ? Severity::Error : Severity::Warning;
    d.code = m[5];
    d.message = m[6];
    return d;
}

std::vector<CompilerDiagnostic> parse_compile_log(std::string_view text) {
    std::vector<CompilerDiagnostic> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        if (auto d = parse_diagnostic_line(text.substr(start, end - start))) out.push_back(std::move(*d));
        start = end + 1;
    }
    return out;
}

ErrorContext make_error_context(std::string user_message, std::string_view log_text, const ProjectManifest& manifest) {
    ErrorContext ctx;
    ctx.user_message = std::move(user_message);
    ctx.diagnostics = parse_compile_log(log_text);
    for (const auto& d : ctx.diagnostics) {
        auto path = manifest_path_for(d.file, manifest);
        if (path && std::find(ctx.affected_files.begin(), ctx.affected_files.end(), *path) == ctx.affected_files.end()) {
            ctx.affected_files.push_back(*path);
        }
    }
    return ctx;
}

nlohmann::json to_json(const PatchSet& p) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : p.files) {
        files.push_back({{"relativePath", f.relative_path},
                         {"baseHash", f.base_hash ? nlohmann::json(*f.base_hash) : nlohmann::json(nullptr)},
                         {"newContent", f.new_content}});
    }
    return {{"id", p.id}, {"files", std::move(files)}, {"rationale", p.rationale}};
}

PatchSet patch_from_json(const nlohmann::json& j) {
    try {
        PatchSet p;
        p.id = j.at("id").get<int>();
        p.rationale = j.value("rationale", "");
        for (const auto& f : j.at("files")) {
            FilePatch fp;
            fp.relative_path = f.at("relativePath").get<std::string>();
            if (f.contains("baseHash") && !f["baseHash"].is_null()) fp.base_hash = f["baseHash"].get<std::string>();
            fp.new_content = f.at("newContent").get<std::string>();
            p.files.push_back(std::move(fp));
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw Error("PatchInvalid", std::string("malformed patch: ") + e.what());
    }
}

ValidationReport check_patch(const PatchSet& patch, const ProjectManifest& manifest) {
    ValidationReport report;
    if (trim(patch.rationale).empty()) report.add(Severity::Error, "MISSING_RATIONALE", "/rationale", "rationale is empty");
    if (patch.files.empty()) report.add(Severity::Error, "NO_FILES", "/files", "patch changes no files");
    std::set<std::string> seen;
    for (const auto& f : patch.files) {
        std::string normalized;
        if (!under_assets(f.relative_path, normalized)) {
            report.add(Severity::Error, "PATH_ESCAPE", f.relative_path, "'" + f.relative_path + "' is not under Assets/");
            continue;
        }
        if (!seen.insert(normalized).second) {
            report.add(Severity::Error, "DUPLICATE_PATH", normalized, "'" + normalized + "' appears twice");
        }
        const ManifestFile* m = manifest.find(normalized);
        if (m && m->origin == FileOrigin::Support) {
            report.add(Severity::Error, "SUPPORT_FILE", normalized, "support files are shipped verbatim");
        }
        if (m && f.base_hash && *f.base_hash != m->content_hash) {
            report.add(Severity::Error, "STALE_BASE", normalized, "base hash differs from the manifest");
        }
        if (m && !f.base_hash) {
            report.add(Severity::Error, "NEW_FILE_EXISTS", normalized, "'" + normalized + "' already exists");
        }
        if (!m && f.base_hash) {
            report.add(Severity::Error, "UNKNOWN_TARGET", normalized, "'" + normalized + "' is not a project file");
        }
    }
    return report;
}

PatchSet propose_patch(const ErrorContext& ctx, const std::filesystem::path& run_dir, const ProjectManifest& manifest,
                       const GameBlueprint& bp, LlmGateway& gateway, const PromptLibrary& prompts, int repair_rounds,
                       AgentTrace* trace) {
    if (trim(ctx.user_message).empty() && ctx.diagnostics.empty()) {
        throw Error("EmptyReport", "nothing to debug: empty message and no diagnostics");
    }
    std::string diagnostics;
    for (const auto& d : ctx.diagnostics) diagnostics += d.to_line() + "\n";
    if (diagnostics.empty()) diagnostics = "(none)\n";
    const std::string message = trim(ctx.user_message).empty() ? std::string("(see diagnostics)") : ctx.user_message;

    const ChatMessage system{Role::System, prompts.raw("debug.system.txt")};
    const ChatMessage user{Role::User, prompts.render("debug.user.txt", {{"message", message},
                                                                        {"diagnostics", diagnostics},
                                                                        {"blueprint", canonical_serialize(bp)},
                                                                        {"files", project_listing(run_dir, manifest)}})};
    std::vector<ChatMessage> messages{system, user};
    for (int round = 0;; ++round) {
        const ChatResponse resp = gateway.complete(gateway.request(messages, true));
        Candidate c = read_candidate(resp.content, manifest);
        if (c.report.valid()) {
            if (trace) trace->repair_rounds += round;
            return std::move(c.patch);
        }
        if (trace) trace->notes.push_back("patch attempt " + std::to_string(round + 1) + " rejected:\n" + c.report.to_text());
        if (round >= repair_rounds) {
            if (c.report.count("UNKNOWN_TARGET") > 0) {
                throw Error("PatchTargetsUnknownFile", "patch still targets unknown files:\n" + c.report.to_text());
            }
            throw Error("PatchRejected", "patch still invalid after repairs:\n" + c.report.to_text());
        }
        messages = {system, user, {Role::Assistant, resp.content},
                    {Role::User, prompts.render("debug.repair.txt", {{"diagnostics", c.report.to_text()},
                                                                    {"paths", editable_paths(manifest)}})}};
    }
}

StaleBase::StaleBase(std::vector<std::string> paths)
    : Error("StaleBase",
            [&] {
                std::string msg = "files changed since the patch was proposed:";
                for (const auto& p : paths) msg += " " + p;
                return msg;
            }()),
      paths_(std::move(paths)) {}

std::vector<int> patch_ids(const std::filesystem::path& run_dir) {
    std::vector<int> ids;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(patches_dir(run_dir), ec)) {
        const std::string name = entry.path().filename().string();
        if (entry.path().extension() != ".json") continue;
        int id = 0;
        if (positive_int(name.substr(0, name.size() - 5), id)) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

PatchSet load_patch(const std::filesystem::path& run_dir, int id) {
    const auto path = patches_dir(run_dir) / (std::to_string(id) + ".json");
    try {
        return patch_from_json(nlohmann::json::parse(read_file(path)));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("PatchInvalid", path.string() + ": " + e.what());
    }
}

AppliedPatch apply_patch(const std::filesystem::path& run_dir, PatchSet patch) {
    FileLock lock(project_lock_path(run_dir));
    ProjectManifest manifest = load_manifest(run_dir);
    const auto root = project_dir(run_dir);

    std::set<std::string> seen;
    for (auto& f : patch.files) {
        std::string normalized;
        if (!under_assets(f.relative_path, normalized)) {
            throw Error("PathEscape", "patch path '" + f.relative_path + "' is not under Assets/");
        }
        if (!seen.insert(normalized).second) throw Error("PatchInvalid", "'" + normalized + "' patched twice");
        f.relative_path = normalized;
    }

    // Verify everything before touching anything.
    struct Target {
        std::filesystem::path path;
        std::optional<std::string> previous;
    };
    std::vector<Target> targets;
    std::vector<std::string> stale;
    for (const auto& f : patch.files) {
        Target t{root / f.relative_path, std::nullopt};
        std::error_code ec;
        if (std::filesystem::exists(t.path, ec)) t.previous = read_file(t.path);
        const bool current = f.base_hash ? t.previous && sha256_hex(*t.previous) == *f.base_hash
                                         : !t.previous && !manifest.find(f.relative_path);
        if (!current) stale.push_back(f.relative_path);
        targets.push_back(std::move(t));
    }
    if (!stale.empty()) throw StaleBase(std::move(stale));

    const auto existing = patch_ids(run_dir);
    const int next = existing.empty() ? 1 : existing.back() + 1;
    if (patch.id == 0) patch.id = next;
    if (patch.id < next) throw Error("PatchInvalid", "patch id " + std::to_string(patch.id) + " already used");

    // Stage every file next to its target, then swap them in.
    std::vector<std::string> temps;
    auto drop_temps = [&] {
        std::error_code ec;
        for (const auto& t : temps) std::filesystem::remove(t, ec);
    };
    try {
        for (std::size_t i = 0; i < targets.size(); ++i) {
            std::filesystem::create_directories(targets[i].path.parent_path());
            temps.push_back(tmp_path_for(targets[i].path));
            write_raw(temps.back(), patch.files[i].new_content);
        }
    } catch (const std::exception& e) {
        drop_temps();
        throw Error("IoError", std::string("staging patch failed: ") + e.what());
    }
    std::size_t swapped = 0;
    try {
        for (; swapped < targets.size(); ++swapped) std::filesystem::rename(temps[swapped], targets[swapped].path);
    } catch (const std::exception& e) {
        std::error_code ec;
        for (std::size_t i = 0; i < swapped; ++i) {
            if (targets[i].previous) {
                write_raw(tmp_path_for(targets[i].path), *targets[i].previous);
                std::filesystem::rename(tmp_path_for(targets[i].path), targets[i].path, ec);
            } else {
                std::filesystem::remove(targets[i].path, ec);
            }
        }
        drop_temps();
        throw Error("IoError", std::string("applying patch failed, rolled back: ") + e.what());
    }

    AppliedPatch applied;
    for (const auto& f : patch.files) {
        const std::string hash = sha256_hex(f.new_content);
        auto it = std::find_if(manifest.files.begin(), manifest.files.end(),
                               [&](const ManifestFile& m) { return m.relative_path == f.relative_path; });
        if (it == manifest.files.end()) {
            manifest.files.push_back({f.relative_path, hash, FileOrigin::Patched});
        } else {
            it->content_hash = hash;
            it->origin = FileOrigin::Patched;
        }
        applied.changed_paths.push_back(f.relative_path);
    }
    std::sort(manifest.files.begin(), manifest.files.end(),
              [](const ManifestFile& a, const ManifestFile& b) { return a.relative_path < b.relative_path; });

    write_file_atomic(patches_dir(run_dir) / (std::to_string(patch.id) + ".json"), patch_text(patch));
    save_manifest(run_dir, manifest);

    applied.patch = std::move(patch);
    applied.manifest = std::move(manifest);
    return applied;
}

} // namespace unigen
