#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "unigen/blueprint.hpp"

using namespace unigen;
using unigen::testing::load_blueprint;
using unigen::testing::random_blueprint;

namespace {

const char* kMinimal = R"({"meta":{"name":"m"},"entities":[{"id":"p","shape":"cube"}],
  "behaviors":[{"id":"b","entityId":"p","kind":"playerMovement","typeName":"Mover"}]})";

GameBlueprint minimal() { return parse_blueprint(std::string_view(kMinimal)).blueprint; }

} // namespace

TEST(Blueprint, FillsDefaults) {
    const GameBlueprint bp = minimal();
    ASSERT_EQ(bp.entities.size(), 1u);
    EXPECT_EQ(bp.entities[0].name, "p");
    EXPECT_EQ(bp.entities[0].scale, (Vec3{1, 1, 1}));
    EXPECT_EQ(bp.entities[0].color, (Color{1, 1, 1, 1}));
    EXPECT_TRUE(bp.interactions.empty());
    EXPECT_TRUE(validate(bp).valid());
}

TEST(Blueprint, UnknownKeysWarn) {
    const auto r = parse_blueprint(std::string_view(R"({"meta":{"name":"m"},"entities":[],"extra":1})"));
    EXPECT_EQ(r.warnings.count("UNKNOWN_KEY"), 1u);
}

TEST(Blueprint, SyntaxErrorCarriesPosition) {
    try {
        parse_blueprint(std::string_view("{\n  \"meta\": ,\n}"));
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(Blueprint, SchemaErrorNamesPath) {
    try {
        parse_blueprint(std::string_view(R"({"meta":{"name":"m"},"entities":[{"id":"a","shape":"cone"}]})"));
        FAIL();
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.path(), "/entities/0/shape");
    }
}

TEST(Blueprint, BindingRefs) {
    const auto bp = load_blueprint("data/obstacle_run.blueprint.json");
    const auto& cam = bp.behaviors[1];
    ASSERT_EQ(cam.bindings.size(), 1u);
    EXPECT_EQ(cam.bindings[0].ref, BindingRef::entity("player"));
    EXPECT_EQ(format_ref(BindingRef::ui("x")), "ui:x");
}

TEST(Blueprint, ObstacleRunIsValid) {
    const auto report = validate(load_blueprint("data/obstacle_run.blueprint.json"));
    EXPECT_TRUE(report.valid()) << report.to_text();
    EXPECT_TRUE(validate(load_blueprint("data/templates.blueprint.json")).valid());
}

TEST(Blueprint, CanonicalSerializationIsStable) {
    const auto bp = load_blueprint("data/obstacle_run.blueprint.json");
    const std::string text = canonical_serialize(bp);
    EXPECT_EQ(text.back(), '\n');
    EXPECT_EQ(canonical_serialize(parse_blueprint(std::string_view(text)).blueprint), text);
    EXPECT_EQ(blueprint_hash(bp).size(), 64u);
}

TEST(Blueprint, RandomRoundTrip) {
    std::mt19937 rng(20240601);
    for (int i = 0; i < 100; ++i) {
        const GameBlueprint bp = random_blueprint(rng);
        ASSERT_TRUE(validate(bp).valid()) << validate(bp).to_text();
        const std::string text = canonical_serialize(bp);
        const GameBlueprint back = parse_blueprint(std::string_view(text)).blueprint;
        EXPECT_EQ(back, bp) << text;
        EXPECT_EQ(canonical_serialize(back), text);
    }
}

TEST(Blueprint, FaultClasses) {
    auto expect_code = [](GameBlueprint bp, auto mutate, const char* code) {
        mutate(bp);
        EXPECT_GE(validate(bp).count(code), 1u) << code << "\n" << validate(bp).to_text();
    };
    const GameBlueprint base = minimal();
    expect_code(base, [](GameBlueprint& bp) { bp.behaviors[0].entity_id = "ghost"; }, "DANGLING_REF");
    expect_code(base, [](GameBlueprint& bp) { bp.behaviors[0].id = "p"; }, "DUPLICATE_ID");
    expect_code(base, [](GameBlueprint& bp) { bp.behaviors.push_back(bp.behaviors[0]); bp.behaviors[1].id = "c"; },
                "DUPLICATE_TYPENAME");
    expect_code(base, [](GameBlueprint& bp) { bp.entities[0].scale[1] = 0; }, "NONPOSITIVE_SCALE");
    expect_code(base, [](GameBlueprint& bp) { bp.entities[0].shape = Shape::Asset; }, "MISSING_ASSET_PATH");
    expect_code(base, [](GameBlueprint& bp) { bp.interactions.push_back({"k", "p", Trigger::KeyPress, {}, {}, Effect::Win, {}}); },
                "MISSING_ARG");
}

TEST(Blueprint, ReservedIds) {
    GameBlueprint bp = minimal();
    bp.entities[0].id = "mainCamera";
    EXPECT_EQ(validate(bp).count("RESERVED_ID"), 1u);
}

TEST(Blueprint, NoPlayerIsOnlyAWarning) {
    GameBlueprint bp = minimal();
    bp.behaviors.clear();
    const auto report = validate(bp);
    EXPECT_TRUE(report.valid());
    EXPECT_EQ(report.count("NO_PLAYER"), 1u);
}
