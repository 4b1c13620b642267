#include "unigen/automation.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "unigen/fsutil.hpp"
#include "unigen/hash.hpp"
#include "unigen/support_assets.hpp"

namespace unigen {

namespace {

using csharp::float_literal;
using csharp::string_literal;

std::string vec3(const Vec3& v) {
    return "new Vector3(" + float_literal(v[0]) + ", " + float_literal(v[1]) + ", " + float_literal(v[2]) + ")";
}

std::string euler(const Vec3& v) {
    return "Quaternion.Euler(" + float_literal(v[0]) + ", " + float_literal(v[1]) + ", " + float_literal(v[2]) + ")";
}

std::string color(const Color& c) {
    return "new Color(" + float_literal(c[0]) + ", " + float_literal(c[1]) + ", " + float_literal(c[2]) + ", " +
           float_literal(c[3]) + ")";
}

std::string primitive(Shape s) {
    switch (s) {
    case Shape::Cube: return "PrimitiveType.Cube";
    case Shape::Sphere: return "PrimitiveType.Sphere";
    case Shape::Capsule: return "PrimitiveType.Capsule";
    case Shape::Cylinder: return "PrimitiveType.Cylinder";
    case Shape::Plane: return "PrimitiveType.Plane";
    case Shape::Asset: break;
    }
    return {};
}

const std::set<std::string>& builtin_tags() {
    static const std::set<std::string> tags{"Respawn", "Finish", "EditorOnly", "MainCamera", "Player", "GameController"};
    return tags;
}

std::string ref_expression(const BindingRef& ref) {
    switch (ref.kind) {
    case BindingRef::Kind::Entity:
        return "objects[" + string_literal(ref.target) + "]";
    case BindingRef::Kind::Ui:
        return "ui[" + string_literal(ref.target) + "]";
    case BindingRef::Kind::Literal:
        break;
    }
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return float_literal(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return string_literal(v);
            }
        },
        ref.literal);
}

bool needs_canvas(const GameBlueprint& bp) {
    if (!bp.ui.empty()) return true;
    return std::any_of(bp.behaviors.begin(), bp.behaviors.end(),
                       [](const BehaviorSpec& b) { return b.entity_id == "uiCanvas"; });
}

void entity_block(std::ostringstream& out, const Entity& e) {
    const std::string id = string_literal(e.id);
    out << "\n            // ENTITY " << e.id << "\n            {\n";
    if (e.shape == Shape::Asset) {
        const std::string path = string_literal(e.asset_path.value_or(""));
        out << "                GameObject prefab = AssetDatabase.LoadAssetAtPath<GameObject>(" << path << ");\n"
            << "                GameObject go = prefab != null ? (GameObject)PrefabUtility.InstantiatePrefab(prefab) : "
               "new GameObject();\n"
            << "                if (prefab == null)\n                {\n"
            << "                    Debug.LogWarning(\"[UniGen] asset not found: \" + " << path << ");\n"
            << "                }\n";
    } else {
        out << "                GameObject go = GameObject.CreatePrimitive(" << primitive(e.shape) << ");\n";
    }
    out << "                go.name = " << id << ";\n"
        << "                go.transform.position = " << vec3(e.position) << ";\n"
        << "                go.transform.rotation = " << euler(e.rotation) << ";\n"
        << "                go.transform.localScale = " << vec3(e.scale) << ";\n"
        << "                Paint(go, " << color(e.color) << ");\n";
    if (e.physics.collider_is_trigger) {
        out << "                Collider collider = go.GetComponent<Collider>();\n"
            << "                if (collider != null)\n                {\n"
            << "                    collider.isTrigger = true;\n                }\n";
    }
    if (e.physics.rigidbody) {
        out << "                Rigidbody body = go.AddComponent<Rigidbody>();\n"
            << "                body.useGravity = " << (e.physics.use_gravity ? "true" : "false") << ";\n";
    }
    for (const auto& tag : e.tags) {
        if (builtin_tags().count(tag)) {
            out << "                go.tag = " << string_literal(tag) << ";\n";
            break;
        }
    }
    out << "                objects[" << id << "] = go;\n            }\n";
}

void behavior_block(std::ostringstream& out, const BehaviorSpec& b) {
    out << "\n            // BEHAVIOR " << b.id << "\n";
    const std::string host = "objects[" + string_literal(b.entity_id) + "]";
    if (b.bindings.empty()) {
        out << "            " << host << ".AddComponent<" << b.type_name << ">();\n";
        return;
    }
    out << "            {\n"
        << "                " << b.type_name << " component = " << host << ".AddComponent<" << b.type_name << ">();\n";
    for (const auto& binding : b.bindings) {
        out << "                UniGen.ReflectionHelper.SetFieldSafe(component, " << string_literal(binding.field) << ", "
            << ref_expression(binding.ref) << ");\n";
    }
    out << "            }\n";
}

constexpr std::string_view kHelpers = R"(
        private static void Paint(GameObject go, Color color)
        {
            Renderer renderer = go.GetComponent<Renderer>();
            if (renderer == null || renderer.sharedMaterial == null)
            {
                return;
            }
            Material material = new Material(renderer.sharedMaterial);
            material.color = color;
            renderer.sharedMaterial = material;
        }

        private static GameObject CreateText(GameObject canvas, string name, string initial, Vector2 anchor, TextAnchor alignment)
        {
            GameObject go = new GameObject(name);
            go.transform.SetParent(canvas.transform, false);
            Text text = go.AddComponent<Text>();
            text.text = initial;
            text.font = Resources.GetBuiltinResource<Font>("LegacyRuntime.ttf");
            text.fontSize = 28;
            text.alignment = alignment;
            text.color = Color.white;
            RectTransform rect = go.GetComponent<RectTransform>();
            rect.anchorMin = anchor;
            rect.anchorMax = anchor;
            rect.pivot = anchor;
            rect.anchoredPosition = new Vector2(anchor.x < 0.5f ? 20f : 0f, anchor.y > 0.5f ? -20f : 0f);
            rect.sizeDelta = new Vector2(600f, 60f);
            return go;
        }
)";

std::string scripts_listing(std::span<const ScriptArtifact> artifacts) {
    std::string out;
    for (const auto& a : artifacts) out += "- " + a.type_name + " (" + a.path + ")\n";
    return out;
}

// Marker ids in source order, read from the raw text since markers are comments.
std::vector<std::string> entity_markers(std::string_view source) {
    static const std::regex marker(R"(^[ \t]*// ENTITY (\S+)[ \t]*\r?$)");
    std::vector<std::string> ids;
    std::istringstream in{std::string(source)};
    std::string line;
    std::smatch m;
    while (std::getline(in, line)) {
        if (std::regex_match(line, m, marker)) ids.push_back(m[1]);
    }
    return ids;
}

std::string escape_regex(std::string_view s) {
    static const std::string special = R"(\^$.|?*+()[]{})";
    std::string out;
    for (char c : s) {
        if (special.find(c) != std::string::npos) out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

int brace_balance(std::string_view code) {
    int depth = 0;
    for (char c : code) {
        if (c == '{') ++depth;
        if (c == '}' && --depth < 0) return -1;
    }
    return depth;
}

struct PlannedFile {
    std::string content;
    FileOrigin origin;
};

std::string place(std::string_view folder, const std::string& path) {
    std::string normalized;
    const std::string full = std::string(folder) + path;
    if (path.empty() || !normalize_relative(full, normalized) || normalized.rfind(folder, 0) != 0) {
        throw Error("PathEscape", "artifact path '" + path + "' leaves " + std::string(folder));
    }
    return normalized;
}

} // namespace

std::string editor_template(const GameBlueprint& bp) {
    std::ostringstream out;
    out << "#if UNITY_EDITOR\n"
           "using System.Collections.Generic;\n"
           "using UnityEditor;\n"
           "using UnityEditor.SceneManagement;\n"
           "using UnityEngine;\n"
           "using UnityEngine.UI;\n\n"
        << "namespace " << kSceneBuilderNamespace << "\n{\n"
        << "    // Builds the scene for " << (bp.meta.name.empty() ? std::string("the game") : bp.meta.name)
        << ". Regenerate instead of editing.\n"
        << "    public static class " << kSceneBuilderType << "\n    {\n"
        << "        [MenuItem(" << string_literal(kMenuEntryName) << ")]\n"
        << "        public static void BuildFromMenu()\n        {\n"
           "            Build();\n"
           "            UniGen.EditorSupport.SceneBuildEntry.SaveScene();\n"
           "        }\n\n"
           "        public static void BuildBatch()\n        {\n"
           "            UniGen.EditorSupport.SceneBuildEntry.Run(Build);\n"
           "        }\n\n"
           "        public static void Build()\n        {\n"
           "            EditorSceneManager.NewScene(NewSceneSetup.EmptyScene, NewSceneMode.Single);\n"
           "            var objects = new Dictionary<string, GameObject>();\n"
           "            var ui = new Dictionary<string, GameObject>();\n\n"
           "            // SCAFFOLD mainCamera\n"
           "            GameObject mainCamera = new GameObject(\"Main Camera\");\n"
           "            mainCamera.tag = \"MainCamera\";\n"
           "            mainCamera.AddComponent<Camera>();\n"
           "            mainCamera.AddComponent<AudioListener>();\n"
           "            mainCamera.transform.position = new Vector3(0f, 5f, -10f);\n"
           "            mainCamera.transform.rotation = Quaternion.Euler(20f, 0f, 0f);\n"
           "            objects[\"mainCamera\"] = mainCamera;\n\n"
           "            // SCAFFOLD directionalLight\n"
           "            GameObject directionalLight = new GameObject(\"Directional Light\");\n"
           "            Light light = directionalLight.AddComponent<Light>();\n"
           "            light.type = LightType.Directional;\n"
           "            light.intensity = 1f;\n"
           "            directionalLight.transform.rotation = Quaternion.Euler(50f, -30f, 0f);\n"
           "            objects[\"directionalLight\"] = directionalLight;\n";
    if (needs_canvas(bp)) {
        out << "\n            // SCAFFOLD uiCanvas\n"
               "            GameObject uiCanvas = new GameObject(\"uiCanvas\");\n"
               "            Canvas canvas = uiCanvas.AddComponent<Canvas>();\n"
               "            canvas.renderMode = RenderMode.ScreenSpaceOverlay;\n"
               "            uiCanvas.AddComponent<CanvasScaler>();\n"
               "            uiCanvas.AddComponent<GraphicRaycaster>();\n"
               "            objects[\"uiCanvas\"] = uiCanvas;\n";
        for (const auto& u : bp.ui) {
            const bool score = u.kind == UiKind::ScoreText;
            out << "            ui[" << string_literal(u.id) << "] = CreateText(uiCanvas, " << string_literal(u.id) << ", "
                << string_literal(u.initial_text) << ", "
                << (score ? "new Vector2(0f, 1f), TextAnchor.UpperLeft" : "new Vector2(0.5f, 0.5f), TextAnchor.MiddleCenter")
                << ");\n";
        }
    }
    for (const auto& e : bp.entities) entity_block(out, e);
    for (const auto& b : bp.behaviors) behavior_block(out, b);
    out << "        }\n" << kHelpers << "    }\n}\n#endif\n";
    return out.str();
}

ValidationReport check_editor_script(std::string_view source, const GameBlueprint& bp) {
    ValidationReport report;
    const std::string code = csharp::strip_non_code(source);
    const std::string type(kSceneBuilderType);

    const auto types = csharp::declared_types(code);
    if (std::find(types.begin(), types.end(), type) == types.end()) {
        report.add(Severity::Error, "TYPE_NOT_DECLARED", type, "source does not declare " + type);
    }
    if (brace_balance(code) != 0) {
        report.add(Severity::Error, "UNBALANCED_BRACES", type, "opening and closing braces do not match");
    }
    if (source.find("namespace " + std::string(kSceneBuilderNamespace)) == std::string_view::npos) {
        report.add(Severity::Error, "MISSING_ENTRY_POINT", type,
                   "builder must live in namespace " + std::string(kSceneBuilderNamespace));
    }
    for (std::string_view token : {"BuildBatch", "Build", "MenuItem"}) {
        if (!csharp::contains_token(code, token)) {
            report.add(Severity::Error, "MISSING_ENTRY_POINT", type, "missing " + std::string(token));
        }
    }

    std::map<std::string, int> seen;
    for (const auto& id : entity_markers(source)) ++seen[id];
    for (const auto& [id, count] : seen) {
        if (!bp.find_entity(id)) {
            report.add(Severity::Error, "UNKNOWN_ENTITY", id, "marker for entity '" + id + "' not in the blueprint");
        } else if (count > 1) {
            report.add(Severity::Error, "DUPLICATE_ENTITY", id, "entity '" + id + "' is created more than once");
        }
    }
    for (const auto& e : bp.entities) {
        if (!seen.count(e.id)) {
            report.add(Severity::Error, "MISSING_ENTITY", e.id, "no '// ENTITY " + e.id + "' block");
        }
    }

    std::set<std::string> generated;
    for (const auto& b : bp.behaviors) {
        generated.insert(b.type_name);
        const std::regex add("AddComponent\\s*<\\s*" + escape_regex(b.type_name) + "\\s*>");
        if (!std::regex_search(code, add)) {
            report.add(Severity::Error, "MISSING_COMPONENT", b.id, b.type_name + " is never attached");
        }
        for (const auto& binding : b.bindings) {
            const std::regex routed("SetFieldSafe\\s*\\([^;]*\"" + escape_regex(binding.field) + "\"");
            if (!std::regex_search(std::string(source), routed)) {
                report.add(Severity::Error, "MISSING_BINDING", b.id + "/" + binding.field,
                           "binding '" + binding.field + "' is not routed through ReflectionHelper.SetFieldSafe");
            }
        }
    }

    // Variables holding generated components must never receive member assignments.
    std::set<std::string> holders;
    for (const auto& t : generated) {
        const std::string T = escape_regex(t);
        const std::regex declared("\\b" + T + "\\s+([A-Za-z_]\\w*)\\s*=");
        const std::regex assigned("\\b([A-Za-z_]\\w*)\\s*=\\s*[^;=]*(?:Add|Get)Component\\s*<\\s*" + T + "\\s*>");
        for (const std::regex* re : {&declared, &assigned}) {
            for (std::sregex_iterator it(code.begin(), code.end(), *re), end; it != end; ++it) holders.insert((*it)[1]);
        }
        const std::regex chained("(?:Add|Get)Component\\s*<\\s*" + T + "\\s*>\\s*\\(\\s*\\)\\s*\\.\\s*\\w+\\s*=(?!=)");
        if (std::regex_search(code, chained)) {
            report.add(Severity::Error, "DIRECT_ASSIGNMENT", t, "direct field assignment on " + t);
        }
    }
    for (const auto& var : holders) {
        const std::regex member("\\b" + escape_regex(var) + "\\s*\\.\\s*(\\w+)\\s*=(?!=)");
        std::smatch m;
        if (std::regex_search(code, m, member)) {
            report.add(Severity::Error, "DIRECT_ASSIGNMENT", var + "." + m[1].str(),
                       "field '" + m[1].str() + "' assigned directly; use ReflectionHelper.SetFieldSafe");
        }
    }
    return report;
}

EditorScriptArtifact generate_editor_script(const GameBlueprint& bp, std::span<const ScriptArtifact> artifacts,
                                            CodegenMode mode, LlmGateway* gateway, const PromptLibrary* prompts,
                                            int repair_rounds, AgentTrace* trace) {
    EditorScriptArtifact editor;
    editor.menu_entry_name = std::string(kMenuEntryName);
    editor.batch_entry_point = std::string(kBatchEntryPoint);
    const std::string reference = editor_template(bp);
    if (mode == CodegenMode::Template) {
        editor.script = make_artifact(std::string(kSceneBuilderType), ScriptRole::Editor, reference);
        return editor;
    }
    if (!gateway || !prompts) throw Error("ConfigError", "LLM editor generation needs a gateway and prompts");

    const ChatMessage system{Role::System, prompts->raw("editor.system.txt")};
    const ChatMessage user{Role::User, prompts->render("editor.user.txt", {{"blueprint", canonical_serialize(bp)},
                                                                          {"scripts", scripts_listing(artifacts)},
                                                                          {"reference", reference}})};
    std::vector<ChatMessage> messages{system, user};
    for (int round = 0;; ++round) {
        const ChatResponse resp = gateway->complete(gateway->request(messages, false));
        std::string source = strip_code_fence(resp.content);
        const ValidationReport report = check_editor_script(source, bp);
        if (report.valid()) {
            if (trace) trace->repair_rounds += round;
            editor.script = make_artifact(std::string(kSceneBuilderType), ScriptRole::Editor, std::move(source));
            return editor;
        }
        if (trace) {
            trace->notes.push_back("editor attempt " + std::to_string(round + 1) + " rejected:\n" + report.to_text());
        }
        if (round >= repair_rounds) throw ScriptRejected(std::string(kSceneBuilderType), report);
        messages = {system, user, {Role::Assistant, resp.content},
                    {Role::User, prompts->render("editor.repair.txt", {{"diagnostics", report.to_text()}})}};
    }
}

std::string_view to_string(FileOrigin o) {
    switch (o) {
    case FileOrigin::Generated: return "generated";
    case FileOrigin::Support: return "support";
    case FileOrigin::Patched: return "patched";
    }
    return "generated";
}

const ManifestFile* ProjectManifest::find(std::string_view relative_path) const {
    for (const auto& f : files) {
        if (f.relative_path == relative_path) return &f;
    }
    return nullptr;
}

nlohmann::json to_json(const ProjectManifest& m) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : m.files) {
        files.push_back({{"relativePath", f.relative_path},
                         {"contentHash", f.content_hash},
                         {"origin", std::string(to_string(f.origin))}});
    }
    return {{"rootPath", m.root_path}, {"files", std::move(files)}, {"createdAt", m.created_at}};
}

ProjectManifest manifest_from_json(const nlohmann::json& j) {
    static const std::map<std::string, FileOrigin> origins{
        {"generated", FileOrigin::Generated}, {"support", FileOrigin::Support}, {"patched", FileOrigin::Patched}};
    try {
        ProjectManifest m;
        m.root_path = j.at("rootPath").get<std::string>();
        m.created_at = j.at("createdAt").get<std::string>();
        for (const auto& f : j.at("files")) {
            auto origin = origins.find(f.at("origin").get<std::string>());
            if (origin == origins.end()) throw Error("ManifestInvalid", "unknown origin " + f.at("origin").dump());
            m.files.push_back({f.at("relativePath").get<std::string>(), f.at("contentHash").get<std::string>(),
                               origin->second});
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error("ManifestInvalid", std::string("malformed manifest: ") + e.what());
    }
}

namespace {

// Keys in the same order as the type, independent of json's sorted maps.
std::string manifest_text(const ProjectManifest& m) {
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& f : m.files) {
        nlohmann::ordered_json e;
        e["relativePath"] = f.relative_path;
        e["contentHash"] = f.content_hash;
        e["origin"] = std::string(to_string(f.origin));
        files.push_back(std::move(e));
    }
    nlohmann::ordered_json j;
    j["rootPath"] = m.root_path;
    j["files"] = std::move(files);
    j["createdAt"] = m.created_at;
    return j.dump(2) + "\n";
}

} // namespace

std::filesystem::path project_dir(const std::filesystem::path& run_dir) { return run_dir / "project"; }

std::filesystem::path project_lock_path(const std::filesystem::path& run_dir) { return run_dir / "project.lock"; }

ProjectManifest load_manifest(const std::filesystem::path& run_dir) {
    const auto path = project_dir(run_dir) / "manifest.json";
    const std::string text = read_file(path);
    try {
        return manifest_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("ManifestInvalid", path.string() + ": " + e.what());
    }
}

void save_manifest(const std::filesystem::path& run_dir, const ProjectManifest& m) {
    write_file_if_changed(project_dir(run_dir) / "manifest.json", manifest_text(m));
}

std::vector<std::string> manifest_mismatches(const std::filesystem::path& run_dir, const ProjectManifest& m) {
    std::vector<std::string> bad;
    const auto root = project_dir(run_dir);
    for (const auto& f : m.files) {
        const auto path = root / f.relative_path;
        std::error_code ec;
        if (!std::filesystem::is_regular_file(path, ec) || sha256_hex(read_file(path)) != f.content_hash) {
            bad.push_back(f.relative_path);
        }
    }
    return bad;
}

ProjectManifest assemble_project(const std::filesystem::path& run_dir, const GameBlueprint& bp,
                                 std::span<const ScriptArtifact> artifacts, const EditorScriptArtifact& editor,
                                 const std::string& created_at) {
    (void)bp;
    std::map<std::string, PlannedFile> planned;
    auto add = [&](std::string rel, std::string content, FileOrigin origin) {
        if (!planned.emplace(rel, PlannedFile{std::move(content), origin}).second) {
            throw Error("PathEscape", "two project files map to " + rel);
        }
    };
    for (const auto& a : artifacts) {
        add(place(a.role == ScriptRole::Editor ? "Assets/Editor/" : "Assets/Runtime/", a.path), a.source,
            FileOrigin::Generated);
    }
    add(place("Assets/Editor/", editor.script.path), editor.script.source, FileOrigin::Generated);
    for (const auto& s : support_asset_table()) {
        add(place("Assets/", std::string(s.relative_path.substr(std::string_view("Assets/").size()))),
            std::string(s.content), FileOrigin::Support);
    }

    std::filesystem::create_directories(run_dir);
    FileLock lock(project_lock_path(run_dir));

    ProjectManifest manifest;
    manifest.created_at = created_at;
    for (const auto& [rel, file] : planned) manifest.files.push_back({rel, sha256_hex(file.content), file.origin});

    const auto root = project_dir(run_dir);
    std::optional<ProjectManifest> previous;
    if (std::filesystem::exists(root / "manifest.json")) {
        try {
            previous = load_manifest(run_dir);
        } catch (const Error&) {
            previous.reset();
        }
    }
    if (previous && previous->files == manifest.files) manifest.created_at = previous->created_at;

    try {
        for (const auto& [rel, file] : planned) write_file_if_changed(root / rel, file.content);
        if (previous) {
            for (const auto& old : previous->files) {
                if (!planned.count(old.relative_path)) std::filesystem::remove(root / old.relative_path);
            }
        }
        save_manifest(run_dir, manifest);
    } catch (const std::filesystem::filesystem_error& e) {
        throw Error("IoError", e.path1().string() + ": " + e.code().message());
    }
    return manifest;
}

} // namespace unigen
