#include "unigen/blueprint.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "unigen/hash.hpp"

namespace unigen {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename Enum, std::size_t N>
struct EnumTable {
    std::array<std::pair<Enum, std::string_view>, N> entries;

    std::string_view name(Enum e) const {
        for (const auto& [value, text] : entries) {
            if (value == e) return text;
        }
        return "?";
    }

    std::optional<Enum> parse(std::string_view text) const {
        for (const auto& [value, name] : entries) {
            if (name == text) return value;
        }
        return std::nullopt;
    }

    std::string choices() const {
        std::string out;
        for (const auto& [value, text] : entries) {
            if (!out.empty()) out += "|";
            out += text;
        }
        return out;
    }
};

constexpr EnumTable<Shape, 6> kShapes{{{
    {Shape::Cube, "cube"},
    {Shape::Sphere, "sphere"},
    {Shape::Capsule, "capsule"},
    {Shape::Cylinder, "cylinder"},
    {Shape::Plane, "plane"},
    {Shape::Asset, "asset"},
}}};

constexpr EnumTable<BehaviorKind, 9> kKinds{{{
    {BehaviorKind::PlayerMovement, "playerMovement"},
    {BehaviorKind::CameraFollow, "cameraFollow"},
    {BehaviorKind::NpcPath, "npcPath"},
    {BehaviorKind::Collectible, "collectible"},
    {BehaviorKind::Hazard, "hazard"},
    {BehaviorKind::Goal, "goal"},
    {BehaviorKind::UiManager, "uiManager"},
    {BehaviorKind::GameManager, "gameManager"},
    {BehaviorKind::Custom, "custom"},
}}};

constexpr EnumTable<Trigger, 4> kTriggers{{{
    {Trigger::Collision, "collision"},
    {Trigger::TriggerEnter, "triggerEnter"},
    {Trigger::KeyPress, "keyPress"},
    {Trigger::ScoreReaches, "scoreReaches"},
}}};

constexpr EnumTable<Effect, 6> kEffects{{{
    {Effect::GameOver, "gameOver"},
    {Effect::Win, "win"},
    {Effect::ScoreDelta, "scoreDelta"},
    {Effect::DestroyObject, "destroyObject"},
    {Effect::UiMessage, "uiMessage"},
    {Effect::Custom, "custom"},
}}};

constexpr EnumTable<UiKind, 2> kUiKinds{{{
    {UiKind::ScoreText, "scoreText"},
    {UiKind::MessageText, "messageText"},
}}};

std::string type_name_of(const json& j) {
    return j.type_name();
}

// Walks one JSON object, tracking which keys were consumed so the rest can be
// reported as UNKNOWN_KEY.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path, ValidationReport& warnings)
        : obj_(obj), path_(std::move(path)), warnings_(warnings) {
        if (!obj_.is_object()) {
            throw SchemaError(path_.empty() ? "/" : path_,
                              "expected object, found " + type_name_of(obj_));
        }
    }

    ~ObjectReader() = default;

    std::string child(std::string_view key) const { return path_ + "/" + std::string(key); }

    const json* optional(std::string_view key) {
        seen_.insert(std::string(key));
        auto it = obj_.find(std::string(key));
        if (it == obj_.end() || it->is_null()) return nullptr;
        return &*it;
    }

    const json& required(std::string_view key) {
        const json* v = optional(key);
        if (!v) throw SchemaError(child(key), "missing required field");
        return *v;
    }

    std::string string(std::string_view key) { return as_string(required(key), child(key)); }

    std::string string_or(std::string_view key, std::string fallback) {
        const json* v = optional(key);
        return v ? as_string(*v, child(key)) : std::move(fallback);
    }

    std::optional<std::string> optional_string(std::string_view key) {
        const json* v = optional(key);
        if (!v) return std::nullopt;
        return as_string(*v, child(key));
    }

    bool flag_or(std::string_view key, bool fallback) {
        const json* v = optional(key);
        if (!v) return fallback;
        if (!v->is_boolean()) throw SchemaError(child(key), "expected boolean, found " + type_name_of(*v));
        return v->get<bool>();
    }

    template <std::size_t N>
    std::array<double, N> reals_or(std::string_view key, std::array<double, N> fallback) {
        const json* v = optional(key);
        if (!v) return fallback;
        const std::string p = child(key);
        if (!v->is_array() || v->size() != N) {
            throw SchemaError(p, "expected array of " + std::to_string(N) + " numbers");
        }
        std::array<double, N> out{};
        for (std::size_t i = 0; i < N; ++i) {
            const json& e = (*v)[i];
            if (!e.is_number()) {
                throw SchemaError(p + "/" + std::to_string(i), "expected number, found " + type_name_of(e));
            }
            out[i] = e.get<double>();
        }
        return out;
    }

    template <typename Enum, std::size_t N>
    Enum enumeration(std::string_view key, const EnumTable<Enum, N>& table) {
        const std::string text = string(key);
        auto value = table.parse(text);
        if (!value) {
            throw SchemaError(child(key), "unknown value '" + text + "', expected one of " + table.choices());
        }
        return *value;
    }

    const json& array(std::string_view key) {
        const json& v = required(key);
        if (!v.is_array()) throw SchemaError(child(key), "expected array, found " + type_name_of(v));
        return v;
    }

    const json* optional_array(std::string_view key) {
        const json* v = optional(key);
        if (v && !v->is_array()) throw SchemaError(child(key), "expected array, found " + type_name_of(*v));
        return v;
    }

    void finish() {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) {
                warnings_.add(Severity::Warning, "UNKNOWN_KEY", child(it.key()),
                              "unknown key '" + it.key() + "' ignored");
            }
        }
    }

    static std::string as_string(const json& v, const std::string& path) {
        if (!v.is_string()) throw SchemaError(path, "expected string, found " + type_name_of(v));
        return v.get<std::string>();
    }

private:
    const json& obj_;
    std::string path_;
    ValidationReport& warnings_;
    std::set<std::string> seen_;
};

Scalar parse_scalar(const json& v, const std::string& path) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    throw SchemaError(path, "expected number, string or boolean, found " + type_name_of(v));
}

BindingRef parse_ref(const json& v, const std::string& path) {
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        if (s.rfind("entity:", 0) == 0) return BindingRef::entity(s.substr(7));
        if (s.rfind("ui:", 0) == 0) return BindingRef::ui(s.substr(3));
    }
    return BindingRef::value(parse_scalar(v, path));
}

Entity parse_entity(const json& j, const std::string& path, ValidationReport& warnings) {
    ObjectReader r(j, path, warnings);
    Entity e;
    e.id = r.string("id");
    e.name = r.string_or("name", e.id);
    e.shape = r.enumeration("shape", kShapes);
    e.asset_path = r.optional_string("assetPath");
    e.position = r.reals_or<3>("position", e.position);
    e.rotation = r.reals_or<3>("rotation", e.rotation);
    e.scale = r.reals_or<3>("scale", e.scale);
    if (const json* p = r.optional("physics")) {
        ObjectReader pr(*p, r.child("physics"), warnings);
        e.physics.rigidbody = pr.flag_or("rigidbody", false);
        e.physics.use_gravity = pr.flag_or("useGravity", false);
        e.physics.collider_is_trigger = pr.flag_or("colliderIsTrigger", false);
        pr.finish();
    }
    e.color = r.reals_or<4>("color", e.color);
    if (const json* tags = r.optional_array("tags")) {
        for (std::size_t i = 0; i < tags->size(); ++i) {
            e.tags.push_back(ObjectReader::as_string((*tags)[i], r.child("tags") + "/" + std::to_string(i)));
        }
    }
    r.finish();
    return e;
}

BehaviorSpec parse_behavior(const json& j, const std::string& path, ValidationReport& warnings) {
    ObjectReader r(j, path, warnings);
    BehaviorSpec b;
    b.id = r.string("id");
    b.entity_id = r.string("entityId");
    b.kind = r.enumeration("kind", kKinds);
    b.type_name = r.string("typeName");
    if (const json* params = r.optional("params")) {
        if (!params->is_object()) throw SchemaError(r.child("params"), "expected object");
        for (auto it = params->begin(); it != params->end(); ++it) {
            b.params.emplace(it.key(), parse_scalar(it.value(), r.child("params") + "/" + it.key()));
        }
    }
    if (const json* bindings = r.optional_array("bindings")) {
        for (std::size_t i = 0; i < bindings->size(); ++i) {
            const std::string bp = r.child("bindings") + "/" + std::to_string(i);
            ObjectReader br((*bindings)[i], bp, warnings);
            Binding binding;
            binding.field = br.string("field");
            binding.ref = parse_ref(br.required("ref"), br.child("ref"));
            br.finish();
            b.bindings.push_back(std::move(binding));
        }
    }
    r.finish();
    return b;
}

InteractionRule parse_interaction(const json& j, const std::string& path, ValidationReport& warnings) {
    ObjectReader r(j, path, warnings);
    InteractionRule rule;
    rule.id = r.string("id");
    rule.subject = r.string("subject");
    rule.trigger = r.enumeration("trigger", kTriggers);
    if (const json* arg = r.optional("arg")) {
        // Thresholds are frequently emitted as bare numbers.
        if (arg->is_number_integer()) {
            rule.arg = std::to_string(arg->get<long long>());
        } else {
            rule.arg = ObjectReader::as_string(*arg, r.child("arg"));
        }
    }
    rule.object = r.optional_string("object");
    rule.effect = r.enumeration("effect", kEffects);
    if (const json* ea = r.optional("effectArg")) {
        if (ea->is_number_integer()) {
            rule.effect_arg = std::to_string(ea->get<long long>());
        } else {
            rule.effect_arg = ObjectReader::as_string(*ea, r.child("effectArg"));
        }
    }
    r.finish();
    return rule;
}

UiElement parse_ui(const json& j, const std::string& path, ValidationReport& warnings) {
    ObjectReader r(j, path, warnings);
    UiElement u;
    u.id = r.string("id");
    u.kind = r.enumeration("kind", kUiKinds);
    u.initial_text = r.string_or("initialText", "");
    r.finish();
    return u;
}

std::map<std::string, std::string> parse_name_map(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected object, found " + type_name_of(j));
    std::map<std::string, std::string> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out.emplace(it.key(), ObjectReader::as_string(it.value(), path + "/" + it.key()));
    }
    return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    // nlohmann reports the 1-based count of bytes consumed.
    std::size_t offset = byte == 0 ? 0 : byte - 1;
    offset = std::min(offset, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

bool parses_as_integer(std::string_view s) {
    if (s.empty()) return false;
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

ordered_json scalar_json(const Scalar& s) {
    return std::visit([](const auto& v) { return ordered_json(v); }, s);
}

template <std::size_t N>
ordered_json reals_json(const std::array<double, N>& values) {
    ordered_json arr = ordered_json::array();
    for (double v : values) arr.push_back(v);
    return arr;
}

} // namespace

bool is_scaffold_id(std::string_view id) {
    return id == kMainCameraId || id == kDirectionalLightId || id == kUiCanvasId;
}

const Entity* GameBlueprint::find_entity(std::string_view id) const {
    for (const auto& e : entities) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

const UiElement* GameBlueprint::find_ui(std::string_view id) const {
    for (const auto& u : ui) {
        if (u.id == id) return &u;
    }
    return nullptr;
}

bool GameBlueprint::has_kind(BehaviorKind kind) const {
    return std::any_of(behaviors.begin(), behaviors.end(), [&](const auto& b) { return b.kind == kind; });
}

bool ValidationReport::valid() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                  [](const auto& d) { return d.severity == Severity::Error; }));
}

std::size_t ValidationReport::count(std::string_view code) const {
    return static_cast<std::size_t>(
        std::count_if(diagnostics.begin(), diagnostics.end(), [&](const auto& d) { return d.code == code; }));
}

void ValidationReport::add(Severity severity, std::string code, std::string path, std::string message) {
    diagnostics.push_back({severity, std::move(code), std::move(path), std::move(message)});
}

void ValidationReport::append(const ValidationReport& other) {
    diagnostics.insert(diagnostics.end(), other.diagnostics.begin(), other.diagnostics.end());
}

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    for (const auto& d : diagnostics) {
        out << to_string(d.severity) << " " << d.code << " at " << (d.path.empty() ? "/" : d.path) << ": "
            << d.message << "\n";
    }
    return out.str();
}

nlohmann::json to_json(const ValidationReport& report) {
    json arr = json::array();
    for (const auto& d : report.diagnostics) {
        arr.push_back({{"severity", std::string(to_string(d.severity))},
                       {"code", d.code},
                       {"path", d.path},
                       {"message", d.message}});
    }
    return arr;
}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string& detail)
    : Error("SyntaxError",
            "syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + detail),
      line_(line), column_(column) {}

SchemaError::SchemaError(std::string path, const std::string& detail)
    : Error("SchemaError", "schema error at " + path + ": " + detail), path_(std::move(path)) {}

ParseResult parse_blueprint(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, column] = line_column(text, e.byte);
        throw SyntaxError(line, column, e.what());
    }
    return parse_blueprint(doc);
}

ParseResult parse_blueprint(const nlohmann::json& document) {
    ParseResult result;
    ValidationReport& warnings = result.warnings;
    GameBlueprint& bp = result.blueprint;

    ObjectReader root(document, "", warnings);
    if (const json* meta = root.optional("meta")) {
        ObjectReader mr(*meta, "/meta", warnings);
        bp.meta.name = mr.string_or("name", "");
        bp.meta.description = mr.string_or("description", "");
        mr.finish();
    }

    const json& entities = root.array("entities");
    for (std::size_t i = 0; i < entities.size(); ++i) {
        bp.entities.push_back(parse_entity(entities[i], "/entities/" + std::to_string(i), warnings));
    }
    if (const json* behaviors = root.optional_array("behaviors")) {
        for (std::size_t i = 0; i < behaviors->size(); ++i) {
            bp.behaviors.push_back(parse_behavior((*behaviors)[i], "/behaviors/" + std::to_string(i), warnings));
        }
    }
    if (const json* interactions = root.optional_array("interactions")) {
        for (std::size_t i = 0; i < interactions->size(); ++i) {
            bp.interactions.push_back(
                parse_interaction((*interactions)[i], "/interactions/" + std::to_string(i), warnings));
        }
    }
    if (const json* ui = root.optional_array("ui")) {
        for (std::size_t i = 0; i < ui->size(); ++i) {
            bp.ui.push_back(parse_ui((*ui)[i], "/ui/" + std::to_string(i), warnings));
        }
    }
    if (const json* naming = root.optional("naming")) {
        ObjectReader nr(*naming, "/naming", warnings);
        if (const json* f = nr.optional("functions")) bp.naming.functions = parse_name_map(*f, "/naming/functions");
        if (const json* c = nr.optional("components")) bp.naming.components = parse_name_map(*c, "/naming/components");
        nr.finish();
    }
    root.finish();
    return result;
}

ValidationReport validate(const GameBlueprint& bp) {
    ValidationReport report;
    auto error = [&](std::string code, std::string path, std::string message) {
        report.add(Severity::Error, std::move(code), std::move(path), std::move(message));
    };

    // Identifier uniqueness spans all element kinds.
    std::map<std::string, std::string> seen_ids;
    auto check_id = [&](const std::string& id, const std::string& path) {
        if (id.empty()) {
            error("EMPTY_ID", path, "identifier must be nonempty");
            return;
        }
        if (is_scaffold_id(id)) {
            error("RESERVED_ID", path, "'" + id + "' is reserved for built-in scene scaffolding");
        }
        auto [it, inserted] = seen_ids.emplace(id, path);
        if (!inserted) error("DUPLICATE_ID", path, "identifier '" + id + "' already used at " + it->second);
    };

    for (std::size_t i = 0; i < bp.entities.size(); ++i) {
        const Entity& e = bp.entities[i];
        const std::string path = "/entities/" + std::to_string(i);
        check_id(e.id, path + "/id");
        for (std::size_t k = 0; k < 3; ++k) {
            if (!(e.scale[k] > 0.0)) {
                error("NONPOSITIVE_SCALE", path + "/scale/" + std::to_string(k), "scale components must be > 0");
            }
        }
        for (std::size_t k = 0; k < 4; ++k) {
            if (!(e.color[k] >= 0.0 && e.color[k] <= 1.0)) {
                error("COLOR_RANGE", path + "/color/" + std::to_string(k), "color components must lie in [0,1]");
            }
        }
        const bool has_asset = e.asset_path && !e.asset_path->empty();
        if (e.shape == Shape::Asset && !has_asset) {
            error("MISSING_ASSET_PATH", path + "/assetPath", "shape 'asset' requires assetPath");
        } else if (e.shape != Shape::Asset && e.asset_path) {
            error("UNEXPECTED_ASSET_PATH", path + "/assetPath", "assetPath is only allowed with shape 'asset'");
        }
    }
    for (std::size_t i = 0; i < bp.behaviors.size(); ++i) {
        check_id(bp.behaviors[i].id, "/behaviors/" + std::to_string(i) + "/id");
    }
    for (std::size_t i = 0; i < bp.interactions.size(); ++i) {
        check_id(bp.interactions[i].id, "/interactions/" + std::to_string(i) + "/id");
    }
    for (std::size_t i = 0; i < bp.ui.size(); ++i) {
        check_id(bp.ui[i].id, "/ui/" + std::to_string(i) + "/id");
    }

    auto entity_resolves = [&](const std::string& id) { return bp.find_entity(id) || is_scaffold_id(id); };

    std::map<std::string, std::string> type_names;
    std::size_t ui_managers = 0;
    std::size_t game_managers = 0;
    for (std::size_t i = 0; i < bp.behaviors.size(); ++i) {
        const BehaviorSpec& b = bp.behaviors[i];
        const std::string path = "/behaviors/" + std::to_string(i);
        if (!entity_resolves(b.entity_id)) {
            error("DANGLING_REF", path + "/entityId", "entity '" + b.entity_id + "' does not exist");
        }
        if (!is_identifier(b.type_name)) {
            error("INVALID_TYPENAME", path + "/typeName", "'" + b.type_name + "' is not a valid script type name");
        } else {
            auto [it, inserted] = type_names.emplace(b.type_name, path);
            if (!inserted) {
                error("DUPLICATE_TYPENAME", path + "/typeName",
                      "type name '" + b.type_name + "' already used at " + it->second);
            }
        }
        if (b.kind == BehaviorKind::UiManager && ++ui_managers > 1) {
            error("DUPLICATE_MANAGER", path + "/kind", "at most one uiManager behavior is allowed");
        }
        if (b.kind == BehaviorKind::GameManager && ++game_managers > 1) {
            error("DUPLICATE_MANAGER", path + "/kind", "at most one gameManager behavior is allowed");
        }
        std::set<std::string> fields;
        for (std::size_t k = 0; k < b.bindings.size(); ++k) {
            const Binding& binding = b.bindings[k];
            const std::string bpath = path + "/bindings/" + std::to_string(k);
            if (!is_identifier(binding.field)) {
                error("INVALID_FIELD", bpath + "/field", "'" + binding.field + "' is not a valid field name");
            } else if (!fields.insert(binding.field).second) {
                error("DUPLICATE_BINDING", bpath + "/field", "field '" + binding.field + "' bound twice");
            }
            if (binding.ref.kind == BindingRef::Kind::Entity && !entity_resolves(binding.ref.target)) {
                error("DANGLING_REF", bpath + "/ref", "entity '" + binding.ref.target + "' does not exist");
            }
            if (binding.ref.kind == BindingRef::Kind::Ui && !bp.find_ui(binding.ref.target)) {
                error("DANGLING_REF", bpath + "/ref", "ui element '" + binding.ref.target + "' does not exist");
            }
        }
    }

    for (std::size_t i = 0; i < bp.interactions.size(); ++i) {
        const InteractionRule& rule = bp.interactions[i];
        const std::string path = "/interactions/" + std::to_string(i);
        if (!bp.find_entity(rule.subject)) {
            error("DANGLING_REF", path + "/subject", "entity '" + rule.subject + "' does not exist");
        }
        const bool contact = rule.trigger == Trigger::Collision || rule.trigger == Trigger::TriggerEnter;
        if (contact && !rule.object) {
            error("OBJECT_REQUIRED", path + "/object", "contact triggers require an object entity");
        } else if (!contact && rule.object) {
            error("UNEXPECTED_OBJECT", path + "/object", "object is only allowed for contact triggers");
        }
        if (rule.object && !bp.find_entity(*rule.object)) {
            error("DANGLING_REF", path + "/object", "entity '" + *rule.object + "' does not exist");
        }
        if (rule.trigger == Trigger::KeyPress && (!rule.arg || rule.arg->empty())) {
            error("MISSING_ARG", path + "/arg", "keyPress requires the key name in arg");
        }
        if (rule.trigger == Trigger::ScoreReaches && !(rule.arg && parses_as_integer(*rule.arg))) {
            error("INVALID_THRESHOLD", path + "/arg", "scoreReaches requires an integer threshold in arg");
        }
        if (rule.effect == Effect::ScoreDelta && rule.effect_arg && !parses_as_integer(*rule.effect_arg)) {
            error("INVALID_EFFECT_ARG", path + "/effectArg", "scoreDelta effectArg must be an integer");
        }
    }

    std::map<std::string, std::string> function_owners;
    for (const auto& [key, name] : bp.naming.functions) {
        const std::string path = "/naming/functions/" + key;
        if (!is_identifier(name)) {
            error("INVALID_NAME", path, "'" + name + "' is not a valid function name");
            continue;
        }
        auto [it, inserted] = function_owners.emplace(name, key);
        if (!inserted) {
            error("DUPLICATE_FUNCTION_NAME", path,
                  "function name '" + name + "' is already assigned to key '" + it->second + "'");
        }
    }
    for (const auto& [key, name] : bp.naming.components) {
        if (!is_identifier(name)) {
            error("INVALID_NAME", "/naming/components/" + key, "'" + name + "' is not a valid type name");
        }
    }

    if (!bp.has_kind(BehaviorKind::PlayerMovement)) {
        report.add(Severity::Warning, "NO_PLAYER", "/behaviors", "no playerMovement behavior declared");
    }
    return report;
}

nlohmann::ordered_json to_ordered_json(const GameBlueprint& bp) {
    ordered_json doc;
    doc["meta"] = {{"name", bp.meta.name}, {"description", bp.meta.description}};

    ordered_json entities = ordered_json::array();
    for (const Entity& e : bp.entities) {
        ordered_json j;
        j["id"] = e.id;
        j["name"] = e.name;
        j["shape"] = std::string(to_string(e.shape));
        if (e.asset_path) j["assetPath"] = *e.asset_path;
        j["position"] = reals_json(e.position);
        j["rotation"] = reals_json(e.rotation);
        j["scale"] = reals_json(e.scale);
        j["physics"] = {{"rigidbody", e.physics.rigidbody},
                        {"useGravity", e.physics.use_gravity},
                        {"colliderIsTrigger", e.physics.collider_is_trigger}};
        j["color"] = reals_json(e.color);
        j["tags"] = e.tags;
        entities.push_back(std::move(j));
    }
    doc["entities"] = std::move(entities);

    ordered_json behaviors = ordered_json::array();
    for (const BehaviorSpec& b : bp.behaviors) {
        ordered_json j;
        j["id"] = b.id;
        j["entityId"] = b.entity_id;
        j["kind"] = std::string(to_string(b.kind));
        j["typeName"] = b.type_name;
        ordered_json params = ordered_json::object();
        for (const auto& [key, value] : b.params) params[key] = scalar_json(value);
        j["params"] = std::move(params);
        ordered_json bindings = ordered_json::array();
        for (const Binding& binding : b.bindings) {
            ordered_json ref = binding.ref.kind == BindingRef::Kind::Literal ? scalar_json(binding.ref.literal)
                                                                             : ordered_json(format_ref(binding.ref));
            bindings.push_back({{"field", binding.field}, {"ref", std::move(ref)}});
        }
        j["bindings"] = std::move(bindings);
        behaviors.push_back(std::move(j));
    }
    doc["behaviors"] = std::move(behaviors);

    ordered_json interactions = ordered_json::array();
    for (const InteractionRule& rule : bp.interactions) {
        ordered_json j;
        j["id"] = rule.id;
        j["subject"] = rule.subject;
        j["trigger"] = std::string(to_string(rule.trigger));
        if (rule.arg) j["arg"] = *rule.arg;
        if (rule.object) j["object"] = *rule.object;
        j["effect"] = std::string(to_string(rule.effect));
        if (rule.effect_arg) j["effectArg"] = *rule.effect_arg;
        interactions.push_back(std::move(j));
    }
    doc["interactions"] = std::move(interactions);

    ordered_json ui = ordered_json::array();
    for (const UiElement& u : bp.ui) {
        ui.push_back({{"id", u.id}, {"kind", std::string(to_string(u.kind))}, {"initialText", u.initial_text}});
    }
    doc["ui"] = std::move(ui);

    ordered_json functions = ordered_json::object();
    for (const auto& [k, v] : bp.naming.functions) functions[k] = v;
    ordered_json components = ordered_json::object();
    for (const auto& [k, v] : bp.naming.components) components[k] = v;
    doc["naming"] = {{"functions", std::move(functions)}, {"components", std::move(components)}};
    return doc;
}

std::string canonical_serialize(const GameBlueprint& bp) {
    return to_ordered_json(bp).dump(2) + "\n";
}

std::string blueprint_hash(const GameBlueprint& bp) {
    return sha256_hex(canonical_serialize(bp));
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(s.front())) return false;
    return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c); });
}

std::string_view to_string(Shape s) { return kShapes.name(s); }
std::string_view to_string(BehaviorKind k) { return kKinds.name(k); }
std::string_view to_string(Trigger t) { return kTriggers.name(t); }
std::string_view to_string(Effect e) { return kEffects.name(e); }
std::string_view to_string(UiKind k) { return kUiKinds.name(k); }
std::string_view to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

std::optional<BehaviorKind> behavior_kind_from_string(std::string_view s) { return kKinds.parse(s); }

std::string format_ref(const BindingRef& ref) {
    switch (ref.kind) {
    case BindingRef::Kind::Entity:
        return "entity:" + ref.target;
    case BindingRef::Kind::Ui:
        return "ui:" + ref.target;
    case BindingRef::Kind::Literal:
        break;
    }
    return scalar_json(ref.literal).dump();
}

std::vector<std::string_view> required_function_keys(BehaviorKind kind) {
    switch (kind) {
    case BehaviorKind::PlayerMovement:
        return {fn::kMove};
    case BehaviorKind::CameraFollow:
        return {fn::kFollow};
    case BehaviorKind::NpcPath:
        return {fn::kPatrol};
    case BehaviorKind::Collectible:
    case BehaviorKind::Hazard:
    case BehaviorKind::Goal:
        return {fn::kReportContact};
    case BehaviorKind::UiManager:
        return {fn::kUpdateScore, fn::kShowMessage};
    case BehaviorKind::GameManager:
        return {fn::kReportContact, fn::kGameOver, fn::kWin, fn::kAddScore};
    case BehaviorKind::Custom:
        break;
    }
    return {};
}

std::string default_function_name(std::string_view key) {
    if (key == fn::kMove) return "Move";
    if (key == fn::kFollow) return "Follow";
    if (key == fn::kPatrol) return "Patrol";
    if (key == fn::kReportContact) return "ReportContact";
    if (key == fn::kGameOver) return "TriggerGameOver";
    if (key == fn::kWin) return "TriggerWin";
    if (key == fn::kAddScore) return "AddScore";
    if (key == fn::kUpdateScore) return "UpdateScore";
    if (key == fn::kShowMessage) return "ShowMessage";
    std::string out(key);
    if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
    return out;
}

std::string default_type_name(BehaviorKind kind) {
    switch (kind) {
    case BehaviorKind::PlayerMovement:
        return "PlayerController";
    case BehaviorKind::CameraFollow:
        return "CameraFollow";
    case BehaviorKind::NpcPath:
        return "NpcPathFollower";
    case BehaviorKind::Collectible:
        return "Collectible";
    case BehaviorKind::Hazard:
        return "Hazard";
    case BehaviorKind::Goal:
        return "Goal";
    case BehaviorKind::UiManager:
        return "UIManager";
    case BehaviorKind::GameManager:
        return "GameManager";
    case BehaviorKind::Custom:
        break;
    }
    return "CustomBehavior";
}

std::string function_name(const GameBlueprint& bp, std::string_view key) {
    auto it = bp.naming.functions.find(std::string(key));
    if (it != bp.naming.functions.end()) return it->second;
    return default_function_name(key);
}

GameBlueprint with_naming_defaults(GameBlueprint bp) {
    std::set<std::string> used_functions;
    for (const auto& [key, name] : bp.naming.functions) used_functions.insert(name);

    auto ensure_function = [&](std::string_view key) {
        if (bp.naming.functions.count(std::string(key))) return;
        std::string name = default_function_name(key);
        std::string candidate = name;
        for (int n = 2; used_functions.count(candidate); ++n) candidate = name + std::to_string(n);
        used_functions.insert(candidate);
        bp.naming.functions.emplace(std::string(key), candidate);
    };

    std::vector<BehaviorKind> kinds;
    for (const auto& b : bp.behaviors) {
        if (std::find(kinds.begin(), kinds.end(), b.kind) == kinds.end()) kinds.push_back(b.kind);
    }
    if (std::find(kinds.begin(), kinds.end(), BehaviorKind::GameManager) == kinds.end()) {
        kinds.push_back(BehaviorKind::GameManager);
    }

    for (BehaviorKind kind : kinds) {
        const std::string key(to_string(kind));
        if (!bp.naming.components.count(key)) {
            auto it = std::find_if(bp.behaviors.begin(), bp.behaviors.end(),
                                   [&](const auto& b) { return b.kind == kind; });
            bp.naming.components.emplace(key, it != bp.behaviors.end() ? it->type_name : default_type_name(kind));
        }
        for (std::string_view fk : required_function_keys(kind)) ensure_function(fk);
    }
    return bp;
}

} // namespace unigen
