#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "unigen/error.hpp"

namespace unigen {

using Vec3 = std::array<double, 3>;
using Color = std::array<double, 4>;

enum class Shape { Cube, Sphere, Capsule, Cylinder, Plane, Asset };

enum class BehaviorKind {
    PlayerMovement,
    CameraFollow,
    NpcPath,
    Collectible,
    Hazard,
    Goal,
    UiManager,
    GameManager,
    Custom,
};

enum class Trigger { Collision, TriggerEnter, KeyPress, ScoreReaches };

enum class Effect { GameOver, Win, ScoreDelta, DestroyObject, UiMessage, Custom };

enum class UiKind { ScoreText, MessageText };

/// Scalar accepted in behavior params and literal bindings.
using Scalar = std::variant<double, std::string, bool>;

struct Physics {
    bool rigidbody = false;
    bool use_gravity = false;
    bool collider_is_trigger = false;

    bool operator==(const Physics&) const = default;
};

struct Entity {
    std::string id;
    std::string name;
    Shape shape = Shape::Cube;
    std::optional<std::string> asset_path;
    Vec3 position{0, 0, 0};
    Vec3 rotation{0, 0, 0};
    Vec3 scale{1, 1, 1};
    Physics physics;
    Color color{1, 1, 1, 1};
    std::vector<std::string> tags;

    bool operator==(const Entity&) const = default;
};

/// A binding target: `entity:<id>`, `ui:<id>`, or a literal scalar.
struct BindingRef {
    enum class Kind { Entity, Ui, Literal };

    Kind kind = Kind::Literal;
    std::string target; // entity or ui id
    Scalar literal = 0.0;

    static BindingRef entity(std::string id) { return {Kind::Entity, std::move(id), 0.0}; }
    static BindingRef ui(std::string id) { return {Kind::Ui, std::move(id), 0.0}; }
    static BindingRef value(Scalar v) { return {Kind::Literal, {}, std::move(v)}; }

    bool operator==(const BindingRef&) const = default;
};

struct Binding {
    std::string field;
    BindingRef ref;

    bool operator==(const Binding&) const = default;
};

struct BehaviorSpec {
    std::string id;
    std::string entity_id;
    BehaviorKind kind = BehaviorKind::Custom;
    std::string type_name;
    std::map<std::string, Scalar> params;
    std::vector<Binding> bindings;

    bool operator==(const BehaviorSpec&) const = default;
};

struct InteractionRule {
    std::string id;
    std::string subject;
    Trigger trigger = Trigger::Collision;
    std::optional<std::string> arg;
    std::optional<std::string> object;
    Effect effect = Effect::Custom;
    std::optional<std::string> effect_arg;

    bool operator==(const InteractionRule&) const = default;
};

struct UiElement {
    std::string id;
    UiKind kind = UiKind::MessageText;
    std::string initial_text;

    bool operator==(const UiElement&) const = default;
};

struct NamingRegistry {
    std::map<std::string, std::string> functions;  // semantic key -> function name
    std::map<std::string, std::string> components; // semantic key -> type name

    bool operator==(const NamingRegistry&) const = default;
};

struct BlueprintMeta {
    std::string name;
    std::string description;

    bool operator==(const BlueprintMeta&) const = default;
};

struct GameBlueprint {
    BlueprintMeta meta;
    std::vector<Entity> entities;
    std::vector<BehaviorSpec> behaviors;
    std::vector<InteractionRule> interactions;
    std::vector<UiElement> ui;
    NamingRegistry naming;

    const Entity* find_entity(std::string_view id) const;
    const UiElement* find_ui(std::string_view id) const;
    bool has_kind(BehaviorKind kind) const;

    bool operator==(const GameBlueprint&) const = default;
};

// Scene objects the scene builder always creates. Behaviors may attach to
// them and bindings may reference them, but entities may not reuse the ids.
inline constexpr std::string_view kMainCameraId = "mainCamera";
inline constexpr std::string_view kDirectionalLightId = "directionalLight";
inline constexpr std::string_view kUiCanvasId = "uiCanvas";

bool is_scaffold_id(std::string_view id);

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string path;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
    std::vector<Diagnostic> diagnostics;

    bool valid() const;
    std::size_t error_count() const;
    std::size_t count(std::string_view code) const;
    void add(Severity severity, std::string code, std::string path, std::string message);
    void append(const ValidationReport& other);
    std::string to_text() const;
};

nlohmann::json to_json(const ValidationReport& report);

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& detail);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& detail);
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct ParseResult {
    GameBlueprint blueprint;
    ValidationReport warnings; // UNKNOWN_KEY diagnostics
};

/// Parses a blueprint document, filling defaults for omitted optional fields.
/// Throws SyntaxError for malformed text and SchemaError for shape problems.
ParseResult parse_blueprint(std::string_view text);
ParseResult parse_blueprint(const nlohmann::json& document);

/// Checks every semantic invariant; never throws.
ValidationReport validate(const GameBlueprint& bp);

/// Deterministic document text with every field explicit and a trailing newline.
std::string canonical_serialize(const GameBlueprint& bp);
nlohmann::ordered_json to_ordered_json(const GameBlueprint& bp);

/// SHA-256 of the canonical serialization.
std::string blueprint_hash(const GameBlueprint& bp);

bool is_identifier(std::string_view s);

std::string_view to_string(Shape s);
std::string_view to_string(BehaviorKind k);
std::string_view to_string(Trigger t);
std::string_view to_string(Effect e);
std::string_view to_string(UiKind k);
std::string_view to_string(Severity s);
std::optional<BehaviorKind> behavior_kind_from_string(std::string_view s);

std::string format_ref(const BindingRef& ref);

// Function-name semantic keys used by the standard script patterns.
namespace fn {
inline constexpr std::string_view kMove = "move";
inline constexpr std::string_view kFollow = "follow";
inline constexpr std::string_view kPatrol = "patrol";
inline constexpr std::string_view kReportContact = "reportContact";
inline constexpr std::string_view kGameOver = "gameOver";
inline constexpr std::string_view kWin = "win";
inline constexpr std::string_view kAddScore = "addScore";
inline constexpr std::string_view kUpdateScore = "updateScore";
inline constexpr std::string_view kShowMessage = "showMessage";
} // namespace fn

/// Semantic function keys a script of `kind` must define or call.
std::vector<std::string_view> required_function_keys(BehaviorKind kind);
std::string default_function_name(std::string_view key);
std::string default_type_name(BehaviorKind kind);

/// Registry value for `key`, falling back to the default name.
std::string function_name(const GameBlueprint& bp, std::string_view key);

/// Fills missing registry entries: one component entry per behavior kind
/// present (plus gameManager) and every function key those kinds need.
GameBlueprint with_naming_defaults(GameBlueprint bp);

} // namespace unigen
