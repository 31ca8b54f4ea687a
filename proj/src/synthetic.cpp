#include "aquacad/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>

#include "aquacad/errors.hpp"

namespace aquacad {

namespace fs = std::filesystem;

Mask disk_mask(std::size_t width, std::size_t height, long center_row, long center_col, double radius) {
  Mask m(width, height, 0);
  const double r2 = radius * radius;
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const double dr = static_cast<double>(static_cast<long>(r) - center_row);
      const double dc = static_cast<double>(static_cast<long>(c) - center_col);
      m(r, c) = dr * dr + dc * dc <= r2;
    }
  }
  return m;
}

IndexGrid synthetic_disk_index(const SyntheticDiskSpec& spec) {
  const Mask disk = disk_mask(spec.width, spec.height, spec.center_row, spec.center_col, spec.radius);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma);
  IndexGrid g;
  g.kind = IndexKind::kMndwi;
  g.polarity = WaterPolarity::kHighIsWater;
  g.values = Grid<float>(spec.width, spec.height, 0.0f);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double base = disk.values()[i] ? spec.inside : spec.outside;
    g.values.values()[i] = static_cast<float>(base + (spec.noise_sigma > 0 ? noise(rng) : 0.0));
  }
  return g;
}

ScenePackageRef write_synthetic_scene(const fs::path& dir, const SyntheticSceneSpec& spec) {
  if (!is_landsat5_scene_id(spec.scene_id)) throw DomainError("not a Landsat-5 scene id: " + spec.scene_id);
  fs::create_directories(dir);

  Mask water(spec.width, spec.height, 0);
  for (const auto& lake : spec.lakes) {
    const Mask d = disk_mask(spec.width, spec.height, lake.center_row, lake.center_col, lake.radius);
    for (std::size_t i = 0; i < water.size(); ++i) water.values()[i] |= d.values()[i];
  }

  // mean ND per band: {land, water}
  const std::map<int, std::pair<double, double>> levels{
      {1, {70, 60}}, {2, {40, 90}}, {3, {45, 50}}, {4, {110, 15}}, {5, {120, 8}}, {7, {80, 6}}};

  ScenePackageRef ref;
  ref.scene_id = spec.scene_id;
  ref.root_path = dir;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.nd_noise_sigma);
  for (const auto& [band, lv] : levels) {
    Grid<std::uint8_t> nd(spec.width, spec.height, 0);
    for (std::size_t i = 0; i < nd.size(); ++i) {
      const double v = (water.values()[i] ? lv.second : lv.first) + (spec.nd_noise_sigma > 0 ? noise(rng) : 0.0);
      nd.values()[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 1L, 254L));
    }
    const fs::path file = dir / (spec.scene_id + "_B" + std::to_string(band) + (spec.tiff ? ".TIF" : ".PGM"));
    write_file_bytes(file, spec.tiff ? encode_tiff(nd) : encode_pgm(nd));
    ref.band_files[band] = file;
  }

  MtlMetadata m;
  m.scene_id = spec.scene_id;
  const int year = scene_year(spec.scene_id).value_or(1999);
  const auto jan1 = std::chrono::sys_days{std::chrono::year{year} / std::chrono::January / 1};
  m.acquisition_date = std::chrono::year_month_day{jan1 + std::chrono::days{spec.day_of_year - 1}};
  m.day_of_year = spec.day_of_year;
  m.sun_elevation_deg = spec.sun_elevation_deg;
  m.sun_azimuth_deg = 60;
  m.dmax = 255;
  const std::map<int, RadianceBounds> bounds{{1, {-1.52, 193}}, {2, {-2.84, 365}},  {3, {-1.17, 264}},
                                             {4, {-1.51, 221}}, {5, {-0.37, 30.2}}, {7, {-0.15, 16.5}}};
  m.radiance = bounds;
  m.utm_zone = spec.utm_zone;
  m.corner_ul_easting = spec.ul_easting;
  m.corner_ul_northing = spec.ul_northing;
  m.corner_ul_latitude = spec.ul_latitude;
  m.pixel_size = 30;
  m.rows = static_cast<int>(spec.height);
  m.cols = static_cast<int>(spec.width);
  m.cloud_cover = 0;
  ref.mtl_file = dir / (spec.scene_id + "_MTL.TXT");
  const std::string text = serialize_mtl(m);
  write_file_bytes(ref.mtl_file, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  return ref;
}

}  // namespace aquacad
