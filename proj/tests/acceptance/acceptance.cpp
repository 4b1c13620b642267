// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "test_support.hpp"
#include "unigen/eval.hpp"
#include "unigen/fsutil.hpp"
#include "unigen/hash.hpp"

using namespace unigen;
using namespace unigen::testing;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Thrown by `require` with the reason a criterion failed.
struct Unmet {
    std::string why;
};

void require(bool ok, const std::string& why) {
    if (!ok) throw Unmet{why};
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void criterion(const std::string& id, const std::string& name, const std::function<std::string()>& body) {
    std::string detail;
    bool ok = true;
    try {
        detail = body();
    } catch (const Unmet& u) {
        ok = false;
        detail = u.why;
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::cout << (ok ? "PASS " : "FAIL ") << id << " " << name << (detail.empty() ? "" : ": " + detail) << "\n"
              << std::flush;
}

std::string metrics() {
    const auto start = Clock::now();
    const std::pair<std::pair<int, int>, const char*> cases[] = {
        {{15, 15}, "100.0"}, {{15, 16}, "93.8"}, {{17, 19}, "89.5"}};
    std::string out;
    for (const auto& [c, expected] : cases) {
        const std::string got = completeness(c.first, c.second).str();
        require(got == expected, std::to_string(c.first) + "/" + std::to_string(c.second) + " gave " + got);
        out += got + " ";
    }
    const double elapsed = seconds_since(start);
    require(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
    return out + "in " + std::to_string(elapsed) + " s";
}

std::string improvements() {
    const std::string a = improvement(140, 12).str();
    const std::string b = improvement(75, 5).str();
    require(a == "91.4", "140->12 gave " + a);
    require(b == "93.3", "75->5 gave " + b);
    return a + " " + b;
}

int run_cli(const fs::path& runs_dir) {
    const fs::path fixtures = fs::path(UNIGEN_TEST_DIR) / "fixtures/obstacle_run";
    std::ostringstream cmd;
    cmd << '"' << UNIGEN_CLI << "\" --llm replay --transcript \"" << (fixtures / "transcript.jsonl").string()
        << "\" --runs-dir \"" << runs_dir.string() << "\" run -f \"" << (fixtures / "requirement.txt").string()
        << "\" > \"" << (runs_dir.string() + ".out") << "\" 2>&1";
    return std::system(cmd.str().c_str());
}

// Project tree plus stage artifacts; run.json and events.jsonl hold wall-clock bookkeeping.
Tree artifacts_of(const fs::path& run_dir) {
    Tree tree = snapshot(run_dir);
    for (auto it = tree.begin(); it != tree.end();) {
        const bool bookkeeping = it->first == "run.json" || it->first == "events.jsonl" ||
                                 it->first.size() > 5 && it->first.compare(it->first.size() - 5, 5, ".lock") == 0;
        it = bookkeeping ? tree.erase(it) : std::next(it);
    }
    return tree;
}

std::string replay_run() {
    TempDir dir;
    const auto start = Clock::now();
    const fs::path a = dir.path() / "a";
    const fs::path b = dir.path() / "b";
    for (const fs::path& root : {a, b}) {
        const int status = run_cli(root);
        if (status != 0) throw Unmet{"unigen run failed: " + read_file(root.string() + ".out")};
    }
    const double elapsed = seconds_since(start);
    const fs::path run = a / "0001";

    std::vector<std::string> stages;
    for (const auto& line : [&] {
             std::vector<std::string> lines;
             std::istringstream in(read_file(run / "events.jsonl"));
             for (std::string l; std::getline(in, l);) lines.push_back(l);
             return lines;
         }()) {
        const auto e = nlohmann::json::parse(line);
        if (e["kind"] == "stageCompleted" || (e["kind"] == "stageStarted" && e["payload"]["stage"] == "Created")) {
            stages.push_back(e["payload"]["stage"]);
        }
    }
    const std::vector<std::string> expected{"Created", "Planned", "Described", "Generated", "Assembled"};
    require(stages == expected, "stage sequence differs");
    require(nlohmann::json::parse(read_file(run / "run.json"))["stage"] == "Assembled", "run did not end Assembled");

    const ProjectManifest m = load_manifest(run);
    int runtime = 0, builders = 0, support = 0;
    for (const auto& f : m.files) {
        if (f.origin == FileOrigin::Support) ++support;
        else if (f.relative_path == "Assets/Editor/SceneBuilder.cs") ++builders;
        else if (f.relative_path.rfind("Assets/Runtime/", 0) == 0) ++runtime;
    }
    require(runtime >= 4, std::to_string(runtime) + " runtime scripts");
    require(builders == 1, std::to_string(builders) + " scene builders");
    require(support == 3, std::to_string(support) + " support assets");
    require(manifest_mismatches(run, m).empty(), "manifest hashes differ from disk");
    require(artifacts_of(run) == artifacts_of(b / "0001"), "the two runs differ");
    require(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
    std::ostringstream out;
    out << runtime << " runtime, " << builders << " builder, " << support << " support, identical trees, " << elapsed
        << " s for two runs";
    return out.str();
}

std::string blueprint_properties() {
    const auto start = Clock::now();
    std::mt19937 rng(424242);
    for (int i = 0; i < 100; ++i) {
        const GameBlueprint bp = random_blueprint(rng);
        require(validate(bp).valid(), "generator produced an invalid blueprint");
        const std::string text = canonical_serialize(bp);
        require(parse_blueprint(std::string_view(text)).blueprint == bp, "round trip " + std::to_string(i) + " differs");
    }
    const GameBlueprint base = load_blueprint("data/obstacle_run.blueprint.json");
    const std::vector<std::pair<std::string, std::function<void(GameBlueprint&)>>> faults{
        {"DANGLING_REF", [](GameBlueprint& bp) { bp.interactions[0].object = "ghost"; }},
        {"DUPLICATE_ID", [](GameBlueprint& bp) { bp.ui[0].id = "coin"; }},
        {"DUPLICATE_TYPENAME", [](GameBlueprint& bp) { bp.behaviors[2].type_name = bp.behaviors[3].type_name; }},
        {"NONPOSITIVE_SCALE", [](GameBlueprint& bp) { bp.entities[2].scale[0] = -1; }},
        {"MISSING_ASSET_PATH", [](GameBlueprint& bp) { bp.entities[3].shape = Shape::Asset; }},
        {"MISSING_ARG", [](GameBlueprint& bp) {
             bp.interactions.push_back({"restart", "player", Trigger::KeyPress, std::nullopt, std::nullopt, Effect::Custom,
                                        std::nullopt});
         }},
    };
    for (const auto& [code, mutate] : faults) {
        GameBlueprint bp = base;
        mutate(bp);
        require(validate(bp).count(code) >= 1, code + " not reported");
    }
    const double elapsed = seconds_since(start);
    require(elapsed < 5.0, "took " + std::to_string(elapsed) + " s");
    return "100 round trips, 6 fault classes, " + std::to_string(elapsed) + " s";
}

std::string goldens() {
    const GameBlueprint bp = with_naming_defaults(load_blueprint("data/templates.blueprint.json"));
    int matched = 0;
    for (const auto& plan : plan_script_set(bp)) {
        const std::string kind(to_string(plan.kind));
        const fs::path golden = data_path("golden/templates") / (kind + ".cs");
        require(template_generate(plan, bp).source == read_file(golden), kind + " differs from its golden file");
        ++matched;
    }
    require(matched == 8, std::to_string(matched) + " kinds checked");
    return "8/8 byte-exact";
}

std::string patch_atomicity() {
    TempDir dir;
    assemble_templates(dir.path(), with_naming_defaults(load_blueprint("data/obstacle_run.blueprint.json")));
    const Tree initial = snapshot(project_dir(dir.path()));
    std::mt19937 rng(5150);
    const Tree before = snapshot(dir.path());
    for (int i = 0; i < 50; ++i) {
        PatchSet p = random_patch(rng, load_manifest(dir.path()));
        auto& victim = p.files[rng() % p.files.size()];
        victim.base_hash = victim.base_hash ? sha256_hex(*victim.base_hash) : sha256_hex("stale");
        bool rejected = false;
        try {
            apply_patch(dir.path(), p);
        } catch (const StaleBase&) {
            rejected = true;
        }
        require(rejected, "perturbed set " + std::to_string(i) + " was applied");
        require(snapshot(dir.path()) == before, "perturbed set " + std::to_string(i) + " modified files");
    }
    for (int i = 0; i < 50; ++i) {
        const AppliedPatch applied = apply_patch(dir.path(), random_patch(rng, load_manifest(dir.path())));
        require(manifest_mismatches(dir.path(), applied.manifest).empty(),
                "manifest differs from disk after set " + std::to_string(i));
    }
    Tree replayed = initial;
    const auto ids = patch_ids(dir.path());
    for (int id : ids) {
        for (const auto& f : load_patch(dir.path(), id).files) replayed[f.relative_path] = f.new_content;
    }
    Tree final_tree = snapshot(project_dir(dir.path()));
    replayed.erase("manifest.json");
    final_tree.erase("manifest.json");
    require(replayed == final_tree, "replaying patches does not reproduce the tree");
    return "50 stale sets rejected untouched, 50 applied, " + std::to_string(ids.size()) + " patches replay";
}

std::string compile_log() {
    const std::string log = read_file(data_path("data/compile_mixed.log"));
    const auto expected = nlohmann::json::parse(read_file(data_path("data/compile_mixed.expected.json")));
    std::size_t lines = 0;
    for (char c : log) lines += c == '\n';
    require(lines == 200, std::to_string(lines) + " log lines");
    const auto got = parse_compile_log(log);
    require(got.size() == expected.size(),
            std::to_string(got.size()) + " diagnostics, oracle has " + std::to_string(expected.size()));
    for (std::size_t i = 0; i < got.size(); ++i) {
        const auto& e = expected[i];
        require(got[i].file == e["file"] && got[i].line == e["line"] && got[i].column == e["column"] &&
                    to_string(got[i].severity) == e["severity"].get<std::string>() && got[i].code == e["code"] &&
                    got[i].message == e["message"],
                "diagnostic " + std::to_string(i) + " fields differ");
        require(got[i].to_line() == e["source"], "diagnostic " + std::to_string(i) + " does not rebuild its line");
    }
    return std::to_string(got.size()) + " of 200 lines matched, all reconstruct";
}

} // namespace

int main() {
    criterion("C1", "completeness", metrics);
    criterion("C2", "improvement", improvements);
    criterion("C3", "replay run", replay_run);
    criterion("C4", "blueprint properties", blueprint_properties);
    criterion("C5", "template goldens", goldens);
    criterion("C6", "patch atomicity", patch_atomicity);
    criterion("C7", "compile log", compile_log);
    return failures;
}
