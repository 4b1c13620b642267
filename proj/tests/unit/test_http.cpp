#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "test_support.hpp"
#include "unigen/fsutil.hpp"
#include "unigen/http_api.hpp"

using namespace unigen;
using nlohmann::json;
using unigen::testing::data_path;
using unigen::testing::TempDir;
namespace fs = std::filesystem;

namespace {

class Api : public ::testing::Test {
protected:
    void SetUp() override {
        StoreConfig config;
        config.root = dir_.path();
        config.prompts_dir = fs::path(UNIGEN_SOURCE_DIR) / "prompts";
        store_ = std::make_unique<RunStore>(config);
        RunOptions defaults{CodegenMode::Llm, GatewayMode::Replay, fixture("transcript.jsonl")};
        install_api(server_, *store_, defaults);
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    }

    void TearDown() override {
        server_.stop();
        thread_.join();
    }

    static fs::path fixture(const std::string& name) { return data_path("fixtures/obstacle_run") / name; }

    httplib::Result post(const std::string& path, const json& body) {
        return client_->Post(path, body.dump(), "application/json");
    }

    std::string create() {
        auto res = post("/api/runs", {{"requirement", read_file(fixture("requirement.txt"))}});
        EXPECT_EQ(res->status, 201) << res->body;
        return json::parse(res->body)["id"];
    }

    TempDir dir_;
    std::unique_ptr<RunStore> store_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::unique_ptr<httplib::Client> client_;
};

} // namespace

TEST_F(Api, RunLifecycle) {
    const std::string id = create();
    auto res = post("/api/runs/" + id + "/advance", {{"auto", true}});
    ASSERT_EQ(res->status, 200) << res->body;
    EXPECT_EQ(json::parse(res->body)["stage"], "Assembled");

    res = client_->Get("/api/runs/" + id);
    ASSERT_EQ(res->status, 200);
    const json snap = json::parse(res->body);
    EXPECT_EQ(snap["run"]["id"], id);
    EXPECT_FALSE(snap["run"].contains("transcript"));
    const auto total = snap["events"].size();

    res = client_->Get("/api/runs/" + id + "/events?since=3");
    EXPECT_EQ(json::parse(res->body).size(), total - 3);

    res = client_->Get("/api/runs/" + id + "/files");
    const json files = json::parse(res->body);
    EXPECT_NE(std::find(files.begin(), files.end(), "project/manifest.json"), files.end());

    res = client_->Get("/api/runs/" + id + "/files/project/Assets/Runtime/PlayerController.cs");
    ASSERT_EQ(res->status, 200);
    EXPECT_NE(res->body.find("class PlayerController"), std::string::npos);

    res = post("/api/runs/" + id + "/debug",
               {{"message", read_file(fixture("debug_message.txt"))}, {"log", read_file(fixture("compile.log"))}});
    ASSERT_EQ(res->status, 200) << res->body;
    EXPECT_EQ(json::parse(res->body)["patchId"], 1);

    res = client_->Get("/api/runs");
    EXPECT_EQ(json::parse(res->body).size(), 1u);
}

TEST_F(Api, ErrorStatuses) {
    auto res = post("/api/runs", {{"requirement", "  "}});
    EXPECT_EQ(res->status, 400);
    EXPECT_EQ(json::parse(res->body)["code"], "EmptyRequirement");

    res = client_->Post("/api/runs", "not json", "application/json");
    EXPECT_EQ(res->status, 400);

    res = client_->Get("/api/runs/0099");
    EXPECT_EQ(res->status, 404);
    EXPECT_EQ(json::parse(res->body)["code"], "UnknownRun");

    const std::string id = create();
    res = post("/api/runs/" + id + "/debug", {{"message", "fix"}});
    EXPECT_EQ(res->status, 409);
    EXPECT_EQ(json::parse(res->body)["code"], "WrongStage");

    res = client_->Get("/api/runs/" + id + "/files/nope.txt");
    EXPECT_EQ(res->status, 404);

    res = post("/api/runs", {{"requirement", "x"}, {"options", {{"codegen", "magic"}}}});
    EXPECT_EQ(res->status, 400);
}

TEST(HttpStatus, Mapping) {
    EXPECT_EQ(http_status_for("UnknownRun"), 404);
    EXPECT_EQ(http_status_for("StaleBase"), 409);
    EXPECT_EQ(http_status_for("Busy"), 409);
    EXPECT_EQ(http_status_for("PatchRejected"), 422);
    EXPECT_EQ(http_status_for("Whatever"), 500);
}
