#include <gtest/gtest.h>

#include <random>

#include "aquacad/errors.hpp"
#include "aquacad/pipeline.hpp"
#include "aquacad/synthetic.hpp"
#include "oracles.hpp"

using namespace aquacad;

TEST(RunLength, RoundTrip) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const Mask m = oracle::random_mask(rng, 1 + rng() % 40, 1 + rng() % 40, (rng() % 100) / 100.0);
    const auto runs = run_length_encode(m);
    ASSERT_EQ(runs.size() % 2, 0u);
    ASSERT_EQ(run_length_decode(m.width(), m.height(), runs), m);
  }
  EXPECT_TRUE(run_length_encode(Mask(3, 3, 0)).empty());
  EXPECT_THROW(run_length_decode(2, 2, {3, 5}), Error);
}

TEST(UtmToPixel, InvertsPixelToUtm) {
  const GeoTransform gt{190000, 9098000, 30, 18, Hemisphere::kSouth};
  for (long r : {0L, 5L, 77L})
    for (long c : {0L, 9L, 200L}) EXPECT_EQ(utm_to_pixel(pixel_to_utm(r, c, gt), gt), (PixelCoord{r, c}));
}

TEST(SyntheticScene, EndToEnd) {
  testutil::TempDir dir;
  SyntheticSceneSpec spec;
  const auto ref = write_synthetic_scene(dir.path(), spec);
  EXPECT_EQ(resolve_scene(dir.path(), spec.scene_id).scene_id, spec.scene_id);
  EXPECT_EQ(resolve_scene(dir.path(), dir.path().string()).scene_id, spec.scene_id);
  EXPECT_THROW(resolve_scene(dir.path(), "LT50080661999201SYN00"), NotFound);

  const SceneData scene = load_scene(ref);
  const IndexGrid idx = compute_index(scene.stack, IndexKind::kMndwi);
  const LakeAnalysis lake = analyze_lake(idx, scene.geo, {128, 128}, {}, nullptr);
  const Mask truth = disk_mask(spec.width, spec.height, 128, 128, 30);
  const double expect = area_km2(truth);
  EXPECT_NEAR(lake.metrics.area_km2, expect, 0.02 * expect);
  EXPECT_NEAR(lake.metrics.centroid_pixel.row, 128, 0.5);
  EXPECT_FALSE(lake.admin.found());
  ASSERT_GE(lake.ring.size(), 4u);
  EXPECT_EQ(lake.ring.front(), lake.ring.back());

  const auto j = lake_json(lake);
  EXPECT_EQ(j["pixel_count"], lake.metrics.pixel_count);
  const auto back = run_length_decode(j["mask"]["width"], j["mask"]["height"],
                                      j["mask"]["runs"].get<std::vector<std::uint64_t>>());
  EXPECT_EQ(back, lake.segmentation.region.member);

  auto rec = make_record(lake, spec.scene_id, "Synth", "Test");
  EXPECT_TRUE(validate(rec).empty());
  EXPECT_EQ(rec.year, 1999);
  Registry reg(dir.path() / "r.jsonl");
  attach_mask(reg, lake, rec);
  ASSERT_TRUE(rec.mask_file.has_value());
  EXPECT_TRUE(std::filesystem::exists(dir.path() / *rec.mask_file));
}
