#include <gtest/gtest.h>

#include <random>

#include "aquacad/errors.hpp"
#include "aquacad/morphology.hpp"
#include "aquacad/segmentation.hpp"
#include "oracles.hpp"

using namespace aquacad;

namespace {

Mask pad(const Mask& m, int r, std::uint8_t fill) {
  Mask out(m.width() + 2 * r, m.height() + 2 * r, fill);
  for (std::size_t row = 0; row < m.height(); ++row)
    for (std::size_t c = 0; c < m.width(); ++c) out(row + r, c + r) = m(row, c);
  return out;
}

Mask unpad(const Mask& m, int r) {
  Mask out(m.width() - 2 * r, m.height() - 2 * r);
  for (std::size_t row = 0; row < out.height(); ++row)
    for (std::size_t c = 0; c < out.width(); ++c) out(row, c) = m(row + r, c + r);
  return out;
}

Mask single(std::size_t w, std::size_t h, long r, long c) {
  Mask m(w, h, 0);
  m(r, c) = 1;
  return m;
}

}  // namespace

TEST(StructuringElement, Octagon3Definition) {
  const auto se = StructuringElement::octagon(3);
  EXPECT_EQ(se.offsets().size(), 37u);
  EXPECT_EQ(se.radius(), 3);
  std::vector<Offset> expect;
  for (auto [dr, dc] : oracle::octagon3()) expect.push_back({dr, dc});
  auto got = se.offsets();
  std::sort(got.begin(), got.end());
  std::sort(expect.begin(), expect.end());
  EXPECT_EQ(got, expect);
}

TEST(StructuringElement, RejectsAsymmetricOrOriginless) {
  EXPECT_THROW(StructuringElement({{0, 0}, {0, 1}}), DomainError);
  EXPECT_THROW(StructuringElement({{0, 1}, {0, -1}}), DomainError);
  EXPECT_NO_THROW(StructuringElement({{0, 0}, {0, 1}, {0, -1}}));
}

TEST(Dilate, SinglePixelGivesFootprint) {
  const auto se = StructuringElement::octagon(3);
  const Mask d = dilate(single(15, 15, 7, 7), se);
  EXPECT_EQ(popcount(d), 37u);
  for (const auto& o : se.offsets()) EXPECT_EQ(d(7 + o.drow, 7 + o.dcol), 1);
  EXPECT_EQ(popcount(dilate(Mask(9, 9, 0), se)), 0u);
}

TEST(Dilate, AgreesWithSetOracle) {
  std::mt19937_64 rng(77);
  const auto se = StructuringElement::octagon(3);
  for (int i = 0; i < 100; ++i) {
    const Mask a = oracle::random_mask(rng, 1 + i % 23, 1 + i % 17, 0.1);
    EXPECT_EQ(dilate(a, se), oracle::dilate_set(a, oracle::octagon3()));
    EXPECT_EQ(erode(a, se), oracle::erode_set(a, oracle::octagon3()));
  }
}

TEST(Erode, FullGridLosesThreePixelFrame) {
  const Mask e = erode(Mask(20, 12, 1), StructuringElement::octagon(3));
  for (long r = 0; r < 12; ++r)
    for (long c = 0; c < 20; ++c) EXPECT_EQ(e(r, c), r >= 3 && r < 9 && c >= 3 && c < 17) << r << "," << c;
}

TEST(Erode, SinglePixelVanishesAndOpeningKeepsIt) {
  const auto se = StructuringElement::octagon(3);
  EXPECT_EQ(popcount(erode(single(15, 15, 7, 7), se)), 0u);
  const Mask opened = erode(dilate(single(15, 15, 7, 7), se), se);
  EXPECT_EQ(opened(7, 7), 1);
}

TEST(MorphologyProperties, RandomMasksOctagon3) {
  std::mt19937_64 rng(424242);
  const auto se = StructuringElement::octagon(3);
  const int r = se.radius();
  std::uniform_real_distribution<double> density(0.05, 0.95);
  for (int i = 0; i < 500; ++i) {
    const Mask a = oracle::random_mask(rng, 64, 64, density(rng));
    Mask b = a;  // superset
    for (auto& v : b.values()) v |= (rng() % 7 == 0);
    const Mask da = dilate(a, se), ea = erode(a, se);
    // duality, complement padded with true outside the image
    ASSERT_EQ(ea, mask_not(unpad(dilate(pad(mask_not(a), r, 1), se), r)));
    ASSERT_TRUE(is_subset(a, da));
    ASSERT_TRUE(is_subset(ea, a));
    ASSERT_TRUE(is_subset(da, dilate(b, se)));
    ASSERT_TRUE(is_subset(ea, erode(b, se)));
    const Mask f = fill_holes(a);
    ASSERT_EQ(fill_holes(f), f);
    ASSERT_TRUE(is_subset(a, f));
  }
}
