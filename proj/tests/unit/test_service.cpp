#include <gtest/gtest.h>

#include <httplib.h>

#include <thread>

#include "aquacad/service.hpp"
#include "aquacad/synthetic.hpp"
#include "oracles.hpp"

using namespace aquacad;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kScene = SyntheticSceneSpec{}.scene_id;

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    data_ = dir_.path() / "data";
    write_synthetic_scene(data_ / kScene, SyntheticSceneSpec{});
    fs::copy_file(testutil::fixture_dir() / "published_registry.jsonl", dir_.path() / "registry.jsonl");
    ServiceConfig cfg;
    cfg.data_root = data_;
    cfg.registry_path = dir_.path() / "registry.jsonl";
    cfg.boundaries_path = testutil::fixture_dir() / "boundaries.json";
    service_ = std::make_unique<Service>(cfg);
    service_->mount(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(60, 0);
    return c;
  }
  static json seed_body(long col, long row) { return {{"seed", {{"col", col}, {"row", row}}}}; }

  testutil::TempDir dir_;
  fs::path data_;
  httplib::Server server_;
  std::unique_ptr<Service> service_;
  int port_ = 0;
  std::thread thread_;
};

double disk_area() { return area_km2(disk_mask(256, 256, 128, 128, 30)); }

}  // namespace

TEST_F(ServiceTest, ListsScenes) {
  auto res = client().Get("/scenes");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const json j = json::parse(res->body);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["id"], kScene);
  EXPECT_EQ(j[0]["width"], 256);
  EXPECT_EQ(j[0]["utm_zone"], 18);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST_F(ServiceTest, EmptyDataRootListsNothing) {
  ServiceConfig cfg;
  cfg.data_root = dir_.path() / "nothing_here";
  cfg.registry_path = dir_.path() / "r2.jsonl";
  Service s(cfg);
  const auto r = s.list_scenes();
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body), json::array());
}

TEST_F(ServiceTest, CompositeAndIndexImages) {
  auto c = client();
  auto res = c.Get("/scenes/" + kScene + "/composite?bands=5,4,3");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "image/x-portable-pixmap");
  EXPECT_EQ(res->body.substr(0, 2), "P6");
  EXPECT_EQ(res->body.size(), std::string("P6\n256 256\n255\n").size() + 256 * 256 * 3);

  res = c.Get("/scenes/" + kScene + "/composite");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);

  res = c.Get("/scenes/" + kScene + "/composite?bands=9,4,3");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_TRUE(json::parse(res->body).contains("code"));

  res = c.Get("/scenes/LT50080662099001XXX00/composite");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(json::parse(res->body)["code"], "not_found");

  res = c.Get("/scenes/" + kScene + "/index?kind=ndwi");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body.substr(0, 2), "P5");
  res = c.Get("/scenes/" + kScene + "/index?kind=evi");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST_F(ServiceTest, SegmentCenterOfDisk) {
  auto c = client();
  auto res = c.Post("/scenes/" + kScene + "/segment", seed_body(128, 128).dump(), "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  const json j = json::parse(res->body);
  EXPECT_NEAR(j["area_km2"].get<double>(), disk_area(), 0.02 * disk_area());
  EXPECT_GT(j["perimeter_km"].get<double>(), 0);
  EXPECT_TRUE(j["border_ring"].is_array());
  EXPECT_TRUE(j["mask"]["runs"].is_array());

  auto again = c.Post("/scenes/" + kScene + "/segment", json{{"seed", {128, 128}}}.dump(), "application/json");
  ASSERT_TRUE(again);
  EXPECT_EQ(again->body, res->body);
  EXPECT_EQ(service_->cache().loads(), 1u);
}

TEST_F(ServiceTest, SegmentErrors) {
  auto c = client();
  auto res = c.Post("/scenes/" + kScene + "/segment", seed_body(20, 20).dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);
  EXPECT_EQ(json::parse(res->body)["code"], "segmentation_failed");

  res = c.Post("/scenes/" + kScene + "/segment", "{\"seed\": \"middle\"}", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  res = c.Post("/scenes/" + kScene + "/segment", "not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  res = c.Post("/scenes/" + kScene + "/segment", json{{"seed", {128, 128}}, {"window", 100}}.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  res = c.Post("/scenes/" + kScene + "/segment", seed_body(900, 5).dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  res = c.Post("/scenes/LT50080662099001XXX00/segment", seed_body(1, 1).dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
}

TEST_F(ServiceTest, RegisterListAndTimeline) {
  auto c = client();
  json body = seed_body(128, 128);
  body["scene_id"] = kScene;
  body["name"] = "Synth";
  body["cuenca"] = "Test";
  auto res = c.Post("/registry", body.dump(), "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201) << res->body;
  const json rec = json::parse(res->body);
  EXPECT_EQ(rec["id"], 10);
  EXPECT_EQ(rec["year"], 1999);
  ASSERT_TRUE(rec.contains("mask_file"));
  EXPECT_TRUE(fs::exists(dir_.path() / rec["mask_file"].get<std::string>()));

  res = c.Post("/registry", body.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);

  res = c.Get("/registry?name=Synth");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body).size(), 1u);
  res = c.Get("/registry");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body).size(), 10u);

  res = c.Get("/registry/Pelagatos/timeline");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const json t = json::parse(res->body);
  EXPECT_EQ(t["deltas"], json::array({0.2214, -0.2286}));
  EXPECT_EQ(t["points"][1]["area_km2"], 1.9953);

  res = c.Get("/registry/Nowhere/timeline");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
}

TEST_F(ServiceTest, RegisterInvalidRecord) {
  json rec = {{"scene_id", "LT50080662009179CUB00"}, {"year", 2009}, {"name", "Bad"}, {"cuenca", "Santa"},
              {"area_km2", -1.0}, {"centroid_lat", -8.0}, {"centroid_lon", -77.0}};
  auto res = client().Post("/registry", json{{"record", rec}}.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  const json j = json::parse(res->body);
  EXPECT_EQ(j["code"], "invalid_request");
  EXPECT_EQ(j["detail"], json::array({"area_km2"}));
}

TEST_F(ServiceTest, ConcurrentRegistrationsKeepFileValid) {
  std::vector<std::thread> threads;
  std::atomic<int> created{0};
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      json rec = {{"scene_id", "LT50080662009179CUB00"}, {"year", 2009}, {"name", "C" + std::to_string(i)},
                  {"cuenca", "Santa"}, {"area_km2", 1.0 + i}, {"centroid_lat", -8.0}, {"centroid_lon", -77.0}};
      auto res = client().Post("/registry", json{{"record", rec}}.dump(), "application/json");
      if (res && res->status == 201) ++created;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(created.load(), 8);
  const auto all = Registry(dir_.path() / "registry.jsonl").load();
  EXPECT_EQ(all.size(), 17u);
}

TEST_F(ServiceTest, PreflightAndUnknownRoute) {
  auto c = client();
  auto res = c.Options("/registry");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 204);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  res = c.Get("/nope");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(json::parse(res->body)["code"], "not_found");
}

TEST(SceneCacheTest, EvictsLeastRecentlyUsed) {
  std::atomic<int> calls{0};
  SceneCache cache(2, [&](const std::string& id) {
    ++calls;
    SceneData d;
    d.ref.scene_id = id;
    return d;
  });
  cache.get("a");
  cache.get("b");
  cache.get("a");
  cache.get("c");  // evicts b
  EXPECT_EQ(cache.size(), 2u);
  EXPECT_EQ(calls.load(), 3);
  cache.get("a");
  EXPECT_EQ(calls.load(), 3);
  cache.get("b");
  EXPECT_EQ(calls.load(), 4);
  EXPECT_EQ(cache.loads(), 4u);
}

TEST(SceneCacheTest, FailedLoadIsNotCached) {
  int calls = 0;
  SceneCache cache(2, [&](const std::string&) -> SceneData {
    ++calls;
    throw NotFound("x");
  });
  EXPECT_THROW(cache.get("a"), NotFound);
  EXPECT_THROW(cache.get("a"), NotFound);
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(cache.size(), 0u);
}

TEST(SceneCacheTest, ConcurrentGetsShareOneLoad) {
  std::atomic<int> calls{0};
  SceneCache cache(2, [&](const std::string& id) {
    ++calls;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    SceneData d;
    d.ref.scene_id = id;
    return d;
  });
  std::vector<std::thread> ts;
  for (int i = 0; i < 6; ++i) ts.emplace_back([&] { cache.get("a"); });
  for (auto& t : ts) t.join();
  EXPECT_EQ(calls.load(), 1);
}
