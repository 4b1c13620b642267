// Deterministic C# sources for the standard behavior kinds. Every template is
// a pure function of (plan, blueprint).

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "unigen/generation.hpp"

namespace unigen {

namespace {

using Slots = std::map<std::string, std::string>;

std::string expand(std::string_view text, const Slots& slots) {
    std::string out;
    out.reserve(text.size() + 256);
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 2, "{{") == 0) {
            const std::size_t close = text.find("}}", i + 2);
            auto it = close == std::string_view::npos ? slots.end()
                                                      : slots.find(std::string(text.substr(i + 2, close - i - 2)));
            if (it == slots.end()) throw Error("TemplateError", "unfilled template slot near: " + std::string(text.substr(i, 40)));
            out += it->second;
            i = close + 2;
            continue;
        }
        out.push_back(text[i++]);
    }
    return out;
}

const BehaviorSpec* behavior_of(const ScriptPlan& plan, const GameBlueprint& bp) {
    if (!plan.behavior_id) return nullptr;
    for (const auto& b : bp.behaviors) {
        if (b.id == *plan.behavior_id) return &b;
    }
    return nullptr;
}

double param_number(const BehaviorSpec* b, const std::string& key, double fallback) {
    if (!b) return fallback;
    auto it = b->params.find(key);
    if (it == b->params.end()) return fallback;
    if (const double* d = std::get_if<double>(&it->second)) return *d;
    if (const std::string* s = std::get_if<std::string>(&it->second)) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
        if (ec == std::errc{} && ptr == s->data() + s->size()) return v;
    }
    return fallback;
}

bool param_flag(const BehaviorSpec* b, const std::string& key, bool fallback) {
    if (!b) return fallback;
    auto it = b->params.find(key);
    if (it == b->params.end()) return fallback;
    if (const bool* f = std::get_if<bool>(&it->second)) return *f;
    if (const std::string* s = std::get_if<std::string>(&it->second)) return *s == "true";
    return fallback;
}

std::optional<std::string> param_text(const BehaviorSpec* b, const std::string& key) {
    if (!b) return std::nullopt;
    auto it = b->params.find(key);
    if (it == b->params.end()) return std::nullopt;
    if (const std::string* s = std::get_if<std::string>(&it->second)) return *s;
    return std::nullopt;
}

std::string int_literal(double v) { return std::to_string(static_cast<long long>(v)); }

// "x,y,z;x,y,z" -> list of triples; malformed triples are skipped.
std::vector<Vec3> parse_triples(std::string_view text) {
    std::vector<Vec3> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(start, end - start);
        Vec3 v{};
        std::size_t k = 0;
        std::size_t pos = 0;
        bool ok = true;
        while (ok && k < 3) {
            while (pos < item.size() && item[pos] == ' ') ++pos;
            std::size_t comma = item.find(',', pos);
            std::string_view num = item.substr(pos, comma == std::string_view::npos ? item.size() - pos : comma - pos);
            while (!num.empty() && num.back() == ' ') num.remove_suffix(1);
            auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v[k]);
            ok = ec == std::errc{} && ptr == num.data() + num.size() && !num.empty();
            ++k;
            if (comma == std::string_view::npos) {
                ok = ok && k == 3;
                pos = item.size();
            } else {
                pos = comma + 1;
                if (k == 3) ok = false;
            }
        }
        if (ok) out.push_back(v);
        start = end + 1;
    }
    return out;
}

std::string vector3(const Vec3& v) {
    return "new Vector3(" + csharp::float_literal(v[0]) + ", " + csharp::float_literal(v[1]) + ", " +
           csharp::float_literal(v[2]) + ")";
}

std::string extra_fields(const ScriptPlan& plan, const std::set<std::string>& standard) {
    std::string out;
    for (const auto& binding : plan.required_fields) {
        if (standard.count(binding.field)) continue;
        std::string decl;
        switch (binding.ref.kind) {
        case BindingRef::Kind::Entity:
        case BindingRef::Kind::Ui:
            decl = "public GameObject " + binding.field + ";";
            break;
        case BindingRef::Kind::Literal:
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        decl = "public float " + binding.field + " = " + csharp::float_literal(v) + ";";
                    } else if constexpr (std::is_same_v<T, bool>) {
                        decl = "public bool " + binding.field + " = " + (v ? "true" : "false") + ";";
                    } else {
                        decl = "public string " + binding.field + " = " + csharp::string_literal(v) + ";";
                    }
                },
                binding.ref.literal);
            break;
        }
        out += "    " + decl + "\n";
    }
    return out;
}

Slots common_slots(const ScriptPlan& plan, const GameBlueprint& bp, const std::set<std::string>& standard_fields) {
    return {
        {"type", plan.type_name},
        {"gameManager", game_manager_type(bp)},
        {"reportContact", function_name(bp, fn::kReportContact)},
        {"extraFields", extra_fields(plan, standard_fields)},
    };
}

constexpr std::string_view kContactReporting = R"(
    void OnCollisionEnter(Collision collision)
    {
        {{gameManager}}.Instance.{{reportContact}}(gameObject, collision.gameObject, false);
    }

    void OnTriggerEnter(Collider other)
    {
        {{gameManager}}.Instance.{{reportContact}}(gameObject, other.gameObject, true);
    }
)";

constexpr std::string_view kPlayerMovement = R"(using UnityEngine;

// Player movement: WASD / arrow keys steer, Space jumps while grounded.
public class {{type}} : MonoBehaviour
{
    public float speed = {{speed}};
    public float jumpForce = {{jumpForce}};
{{extraFields}}
    private Rigidbody body;
    private bool grounded;

    void Awake()
    {
        body = GetComponent<Rigidbody>();
    }

    void Update()
    {
        if (body != null && grounded && Input.GetKeyDown(KeyCode.Space))
        {
            body.AddForce(Vector3.up * jumpForce, ForceMode.Impulse);
            grounded = false;
        }
    }

    void FixedUpdate()
    {
        Vector3 input = new Vector3(Input.GetAxis("Horizontal"), 0f, Input.GetAxis("Vertical"));
        {{move}}(input);
    }

    public void {{move}}(Vector3 direction)
    {
        if (direction.sqrMagnitude > 1f)
        {
            direction.Normalize();
        }
        if (body != null && !body.isKinematic)
        {
            body.AddForce(direction * speed, ForceMode.Acceleration);
        }
        else
        {
            transform.Translate(direction * speed * Time.fixedDeltaTime, Space.World);
        }
    }

    void OnCollisionEnter(Collision collision)
    {
        if (collision.contactCount > 0 && collision.GetContact(0).normal.y > 0.5f)
        {
            grounded = true;
        }
        {{gameManager}}.Instance.{{reportContact}}(gameObject, collision.gameObject, false);
    }

    void OnTriggerEnter(Collider other)
    {
        {{gameManager}}.Instance.{{reportContact}}(gameObject, other.gameObject, true);
    }
}
)";

constexpr std::string_view kCameraFollow = R"(using UnityEngine;

// Keeps the camera at a fixed offset from its target and looks at it.
public class {{type}} : MonoBehaviour
{
    public Transform target;
    public Vector3 offset = {{offset}};
    public float smoothSpeed = {{smoothSpeed}};
{{extraFields}}
    void LateUpdate()
    {
        {{follow}}();
    }

    public void {{follow}}()
    {
        if (target == null)
        {
            return;
        }
        Vector3 desired = target.position + offset;
        transform.position = Vector3.Lerp(transform.position, desired, smoothSpeed * Time.deltaTime);
        transform.LookAt(target);
    }
}
)";

constexpr std::string_view kNpcPath = R"(using UnityEngine;

// Moves between waypoints, either looping or ping-ponging.
public class {{type}} : MonoBehaviour
{
    public Vector3[] waypoints = new Vector3[] {{waypoints}};
    public float speed = {{speed}};
    public bool loop = {{loop}};
{{extraFields}}
    private int current;
    private int step = 1;

    void Update()
    {
        {{patrol}}();
    }

    public void {{patrol}}()
    {
        if (waypoints == null || waypoints.Length == 0)
        {
            return;
        }
        Vector3 goal = waypoints[current];
        transform.position = Vector3.MoveTowards(transform.position, goal, speed * Time.deltaTime);
        if ((transform.position - goal).sqrMagnitude < 0.0001f)
        {
            Advance();
        }
    }

    private void Advance()
    {
        if (waypoints.Length < 2)
        {
            return;
        }
        if (loop)
        {
            current = (current + 1) % waypoints.Length;
            return;
        }
        if (current + step < 0 || current + step >= waypoints.Length)
        {
            step = -step;
        }
        current += step;
    }
{{contactReporting}}}
)";

constexpr std::string_view kCollectible = R"(using UnityEngine;

// Pickup worth `points`; the state owner decides what contact means.
public class {{type}} : MonoBehaviour
{
    public int points = {{points}};
    public float spinSpeed = {{spinSpeed}};
{{extraFields}}
    void Update()
    {
        transform.Rotate(0f, spinSpeed * Time.deltaTime, 0f, Space.World);
    }
{{contactReporting}}}
)";

constexpr std::string_view kHazard = R"(using UnityEngine;

// Obstacle that ends the run on contact (see the state owner's rules).
public class {{type}} : MonoBehaviour
{
    public bool armed = {{armed}};
{{extraFields}}
    void OnCollisionEnter(Collision collision)
    {
        if (armed)
        {
            {{gameManager}}.Instance.{{reportContact}}(gameObject, collision.gameObject, false);
        }
    }

    void OnTriggerEnter(Collider other)
    {
        if (armed)
        {
            {{gameManager}}.Instance.{{reportContact}}(gameObject, other.gameObject, true);
        }
    }
}
)";

constexpr std::string_view kGoal = R"(using UnityEngine;

// Finish marker; reaching it is resolved by the state owner's rules.
public class {{type}} : MonoBehaviour
{
{{extraFields}}{{contactReporting}}}
)";

constexpr std::string_view kUiManager = R"(using UnityEngine;
using UnityEngine.UI;

// Single entry point for HUD text updates.
public class {{type}} : MonoBehaviour
{
    public static {{type}} Instance { get; private set; }

    public Text scoreText;
    public Text messageText;
    public string scorePrefix = {{scorePrefix}};
{{extraFields}}
    void Awake()
    {
        Instance = this;
    }

    public void {{updateScore}}(int score)
    {
        if (scoreText != null)
        {
            scoreText.text = scorePrefix + score;
        }
    }

    public void {{showMessage}}(string message)
    {
        if (messageText != null)
        {
            messageText.text = message;
            messageText.gameObject.SetActive(true);
        }
    }
}
)";

constexpr std::string_view kGameManager = R"(using System.Collections.Generic;
using UnityEngine;

// Owns score and win/lose state. Contact reports from every gameplay script
// and all interaction rules are resolved here.
public class {{type}} : MonoBehaviour
{
    private static {{type}} instance;

    public static {{type}} Instance
    {
        get
        {
            if (instance == null)
            {
                instance = FindObjectOfType<{{type}}>();
            }
            if (instance == null)
            {
                instance = new GameObject({{typeLiteral}}).AddComponent<{{type}}>();
            }
            return instance;
        }
    }

    public int score;
    public bool isGameOver;
    public bool hasWon;
{{extraFields}}
    private readonly Dictionary<string, int> contactFrames = new Dictionary<string, int>();
    private readonly HashSet<string> firedRules = new HashSet<string>();

    void Awake()
    {
        if (instance != null && instance != this)
        {
            Destroy(this);
            return;
        }
        instance = this;
    }

    void Start()
    {
        PushScore();
    }

    void Update()
    {
        if (isGameOver || hasWon)
        {
            return;
        }
{{keyRules}}    }

    public void {{reportContact}}(GameObject a, GameObject b, bool isTrigger)
    {
        if (a == null || b == null || isGameOver || hasWon)
        {
            return;
        }
        // Both parties may report the same contact; handle it once per frame.
        string key = string.CompareOrdinal(a.name, b.name) <= 0 ? a.name + "|" + b.name : b.name + "|" + a.name;
        int frame;
        if (contactFrames.TryGetValue(key, out frame) && frame == Time.frameCount)
        {
            return;
        }
        contactFrames[key] = Time.frameCount;
{{contactRules}}    }

    public void {{addScore}}(int amount)
    {
        score += amount;
        PushScore();
{{scoreRules}}    }

    public void {{gameOver}}()
    {
        if (isGameOver || hasWon)
        {
            return;
        }
        isGameOver = true;
        ShowText("Game Over");
        Time.timeScale = 0f;
    }

    public void {{win}}()
    {
        if (isGameOver || hasWon)
        {
            return;
        }
        hasWon = true;
        ShowText("You Win!");
        Time.timeScale = 0f;
    }

    private void PushScore()
    {
{{pushScore}}    }

    private void ShowText(string message)
    {
{{showText}}    }

    private static bool Matches(GameObject a, GameObject b, string first, string second)
    {
        return (a.name == first && b.name == second) || (a.name == second && b.name == first);
    }

    private static bool Involves(GameObject a, GameObject b, string name)
    {
        return a.name == name || b.name == name;
    }

    private static GameObject Pick(GameObject a, GameObject b, string name)
    {
        if (a.name == name)
        {
            return a;
        }
        return b.name == name ? b : GameObject.Find(name);
    }

    private static void DestroyIfPresent(GameObject target)
    {
        if (target != null)
        {
            Destroy(target);
        }
    }
}
)";

std::string key_code_expression(std::string_view key) {
    std::string k(key);
    if (k.size() == 1 && k[0] >= 'a' && k[0] <= 'z') k[0] = static_cast<char>(k[0] - 'a' + 'A');
    if (k.size() == 1 && k[0] >= '0' && k[0] <= '9') return "Input.GetKeyDown(KeyCode.Alpha" + k + ")";
    if (k == "space") k = "Space";
    if (is_identifier(k)) {
        if (k[0] >= 'a' && k[0] <= 'z') k[0] = static_cast<char>(k[0] - 'a' + 'A');
        return "Input.GetKeyDown(KeyCode." + k + ")";
    }
    return "Input.GetKeyDown(" + csharp::string_literal(key) + ")";
}

struct RuleContext {
    const GameBlueprint& bp;
    bool contact; // effect runs inside the contact handler, where a/b exist
};

std::string effect_statement(const InteractionRule& rule, const RuleContext& ctx) {
    const GameBlueprint& bp = ctx.bp;
    switch (rule.effect) {
    case Effect::GameOver:
        return function_name(bp, fn::kGameOver) + "();";
    case Effect::Win:
        return function_name(bp, fn::kWin) + "();";
    case Effect::ScoreDelta:
        return function_name(bp, fn::kAddScore) + "(" + (rule.effect_arg ? *rule.effect_arg : std::string("1")) + ");";
    case Effect::DestroyObject: {
        const std::string target = rule.object ? *rule.object : rule.subject;
        if (ctx.contact) return "DestroyIfPresent(Pick(a, b, " + csharp::string_literal(target) + "));";
        return "DestroyIfPresent(GameObject.Find(" + csharp::string_literal(target) + "));";
    }
    case Effect::UiMessage:
        return "ShowText(" + csharp::string_literal(rule.effect_arg.value_or("")) + ");";
    case Effect::Custom:
        return "Debug.Log(" + csharp::string_literal(rule.id + ": " + rule.effect_arg.value_or("custom effect")) + ");";
    }
    return {};
}

std::string rule_block(const std::string& comment, const std::string& condition, const std::vector<std::string>& body) {
    std::string out = "        // " + comment + "\n        if (" + condition + ")\n        {\n";
    for (const auto& s : body) out += "            " + s + "\n";
    return out + "        }\n";
}

std::string describe(const InteractionRule& r) {
    std::string d = r.id + ": " + r.subject + " " + std::string(to_string(r.trigger));
    if (r.object) d += " " + *r.object;
    if (r.arg) d += " " + *r.arg;
    return d + " -> " + std::string(to_string(r.effect));
}

std::vector<std::string> player_entities(const GameBlueprint& bp) {
    std::vector<std::string> ids;
    for (const auto& b : bp.behaviors) {
        if (b.kind == BehaviorKind::PlayerMovement &&
            std::find(ids.begin(), ids.end(), b.entity_id) == ids.end()) {
            ids.push_back(b.entity_id);
        }
    }
    return ids;
}

std::string contact_rules(const GameBlueprint& bp) {
    std::string out;
    std::set<std::string> covered;
    for (const auto& rule : bp.interactions) {
        if (rule.trigger != Trigger::Collision && rule.trigger != Trigger::TriggerEnter) continue;
        const std::string object = rule.object.value_or("");
        covered.insert(rule.subject);
        covered.insert(object);
        const std::string cond = std::string(rule.trigger == Trigger::Collision ? "!isTrigger" : "isTrigger") +
                                 " && Matches(a, b, " + csharp::string_literal(rule.subject) + ", " +
                                 csharp::string_literal(object) + ")";
        out += rule_block(describe(rule), cond, {effect_statement(rule, {bp, true})});
    }

    // Hazards, goals and collectibles without an explicit rule get their
    // conventional effect on contact with a player.
    const auto players = player_entities(bp);
    for (const auto& b : bp.behaviors) {
        if (b.kind != BehaviorKind::Hazard && b.kind != BehaviorKind::Goal && b.kind != BehaviorKind::Collectible) continue;
        if (covered.count(b.entity_id)) continue;
        std::string cond;
        if (players.empty()) {
            cond = "Involves(a, b, " + csharp::string_literal(b.entity_id) + ")";
        } else {
            for (const auto& p : players) {
                if (!cond.empty()) cond += " || ";
                cond += "Matches(a, b, " + csharp::string_literal(p) + ", " + csharp::string_literal(b.entity_id) + ")";
            }
        }
        std::vector<std::string> body;
        if (b.kind == BehaviorKind::Hazard) body.push_back(function_name(bp, fn::kGameOver) + "();");
        if (b.kind == BehaviorKind::Goal) body.push_back(function_name(bp, fn::kWin) + "();");
        if (b.kind == BehaviorKind::Collectible) {
            body.push_back(function_name(bp, fn::kAddScore) + "(" + int_literal(param_number(&b, "points", 1)) + ");");
            body.push_back("DestroyIfPresent(Pick(a, b, " + csharp::string_literal(b.entity_id) + "));");
        }
        out += rule_block("default " + std::string(to_string(b.kind)) + " rule for " + b.entity_id, cond, body);
    }
    return out;
}

std::string key_rules(const GameBlueprint& bp) {
    std::string out;
    for (const auto& rule : bp.interactions) {
        if (rule.trigger != Trigger::KeyPress) continue;
        out += rule_block(describe(rule), key_code_expression(rule.arg.value_or("")),
                          {effect_statement(rule, {bp, false})});
    }
    return out;
}

std::string score_rules(const GameBlueprint& bp) {
    std::string out;
    for (const auto& rule : bp.interactions) {
        if (rule.trigger != Trigger::ScoreReaches) continue;
        const std::string cond =
            "score >= " + rule.arg.value_or("0") + " && firedRules.Add(" + csharp::string_literal(rule.id) + ")";
        out += rule_block(describe(rule), cond, {effect_statement(rule, {bp, false})});
    }
    return out;
}

const BehaviorSpec* ui_manager(const GameBlueprint& bp) {
    for (const auto& b : bp.behaviors) {
        if (b.kind == BehaviorKind::UiManager) return &b;
    }
    return nullptr;
}

Vec3 entity_position(const GameBlueprint& bp, const std::optional<std::string>& id) {
    if (id) {
        if (const Entity* e = bp.find_entity(*id)) return e->position;
    }
    return {0, 0, 0};
}

} // namespace

ScriptArtifact template_generate(const ScriptPlan& plan, const GameBlueprint& bp) {
    const BehaviorSpec* b = behavior_of(plan, bp);
    std::string source;
    switch (plan.kind) {
    case BehaviorKind::PlayerMovement: {
        Slots s = common_slots(plan, bp, {"speed", "jumpForce"});
        s["speed"] = csharp::float_literal(param_number(b, "speed", 5));
        s["jumpForce"] = csharp::float_literal(param_number(b, "jumpForce", 5));
        s["move"] = function_name(bp, fn::kMove);
        source = expand(kPlayerMovement, s);
        break;
    }
    case BehaviorKind::CameraFollow: {
        Slots s = common_slots(plan, bp, {"target", "offset", "smoothSpeed"});
        Vec3 offset{param_number(b, "offsetX", 0), param_number(b, "offsetY", 5), param_number(b, "offsetZ", -10)};
        if (auto text = param_text(b, "offset")) {
            auto parsed = parse_triples(*text);
            if (parsed.size() == 1) offset = parsed.front();
        }
        s["offset"] = vector3(offset);
        s["smoothSpeed"] = csharp::float_literal(param_number(b, "smoothSpeed", 5));
        s["follow"] = function_name(bp, fn::kFollow);
        source = expand(kCameraFollow, s);
        break;
    }
    case BehaviorKind::NpcPath: {
        Slots s = common_slots(plan, bp, {"waypoints", "speed", "loop"});
        std::vector<Vec3> points;
        if (auto text = param_text(b, "waypoints")) {
            points = parse_triples(*text);
        } else {
            const Vec3 p = entity_position(bp, plan.entity_id);
            points = {p, {p[0] + 4, p[1], p[2]}};
        }
        std::string list = "{ ";
        for (std::size_t i = 0; i < points.size(); ++i) list += (i ? ", " : "") + vector3(points[i]);
        list += points.empty() ? "}" : " }";
        s["waypoints"] = list;
        s["speed"] = csharp::float_literal(param_number(b, "speed", 2));
        s["loop"] = param_flag(b, "loop", true) ? "true" : "false";
        s["patrol"] = function_name(bp, fn::kPatrol);
        s["contactReporting"] = expand(kContactReporting, s);
        source = expand(kNpcPath, s);
        break;
    }
    case BehaviorKind::Collectible: {
        Slots s = common_slots(plan, bp, {"points", "spinSpeed"});
        s["points"] = int_literal(param_number(b, "points", 1));
        s["spinSpeed"] = csharp::float_literal(param_number(b, "spinSpeed", 90));
        s["contactReporting"] = expand(kContactReporting, s);
        source = expand(kCollectible, s);
        break;
    }
    case BehaviorKind::Hazard: {
        Slots s = common_slots(plan, bp, {"armed"});
        s["armed"] = param_flag(b, "armed", true) ? "true" : "false";
        source = expand(kHazard, s);
        break;
    }
    case BehaviorKind::Goal: {
        Slots s = common_slots(plan, bp, {});
        s["contactReporting"] = expand(kContactReporting, s);
        source = expand(kGoal, s);
        break;
    }
    case BehaviorKind::UiManager: {
        Slots s = common_slots(plan, bp, {"scoreText", "messageText", "scorePrefix"});
        s["scorePrefix"] = csharp::string_literal(param_text(b, "scorePrefix").value_or("Score: "));
        s["updateScore"] = function_name(bp, fn::kUpdateScore);
        s["showMessage"] = function_name(bp, fn::kShowMessage);
        source = expand(kUiManager, s);
        break;
    }
    case BehaviorKind::GameManager: {
        Slots s = common_slots(plan, bp, {"score", "isGameOver", "hasWon"});
        s["typeLiteral"] = csharp::string_literal(plan.type_name);
        s["gameOver"] = function_name(bp, fn::kGameOver);
        s["win"] = function_name(bp, fn::kWin);
        s["addScore"] = function_name(bp, fn::kAddScore);
        s["keyRules"] = key_rules(bp);
        s["contactRules"] = contact_rules(bp);
        s["scoreRules"] = score_rules(bp);
        if (const BehaviorSpec* ui = ui_manager(bp)) {
            const std::string inst = ui->type_name + ".Instance";
            s["pushScore"] = "        if (" + inst + " != null)\n        {\n            " + inst + "." +
                             function_name(bp, fn::kUpdateScore) + "(score);\n        }\n";
            s["showText"] = "        if (" + inst + " != null)\n        {\n            " + inst + "." +
                            function_name(bp, fn::kShowMessage) +
                            "(message);\n            return;\n        }\n        Debug.Log(message);\n";
        } else {
            s["pushScore"] = "        Debug.Log(\"Score: \" + score);\n";
            s["showText"] = "        Debug.Log(message);\n";
        }
        source = expand(kGameManager, s);
        break;
    }
    case BehaviorKind::Custom:
        throw Error("TemplateUnavailable", "no standard template for custom behavior '" + plan.type_name + "'");
    }
    return make_artifact(plan.type_name, ScriptRole::Runtime, std::move(source));
}

} // namespace unigen
