#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aquacad/grid.hpp"
#include "aquacad/indices.hpp"
#include "aquacad/ingest.hpp"

namespace aquacad {

/// Pixels with (row - r0)^2 + (col - c0)^2 <= radius^2.
Mask disk_mask(std::size_t width, std::size_t height, long center_row, long center_col, double radius);

struct SyntheticDiskSpec {
  std::size_t width = 512;
  std::size_t height = 512;
  long center_row = 256;
  long center_col = 256;
  double radius = 41;
  double inside = 0.8;
  double outside = -0.2;
  double noise_sigma = 0.05;
  std::uint64_t seed = 1;
};

/// High-is-water MNDWI-like grid: disk at `inside`, background at
/// `outside`, plus Gaussian noise from a seeded mt19937_64.
IndexGrid synthetic_disk_index(const SyntheticDiskSpec& spec);

struct SyntheticLake {
  long center_row = 0;
  long center_col = 0;
  double radius = 0;
};

struct SyntheticSceneSpec {
  std::string scene_id = "LT50080661999200SYN00";
  std::size_t width = 256;
  std::size_t height = 256;
  std::vector<SyntheticLake> lakes{{128, 128, 30}};
  double nd_noise_sigma = 3;
  std::uint64_t seed = 7;
  int day_of_year = 200;
  double sun_elevation_deg = 55;
  int utm_zone = 18;
  double ul_easting = 190000;
  double ul_northing = 9098000;
  double ul_latitude = -8.15;
  bool tiff = false;  // PGM band files otherwise
};

/// Writes <dir>/<scene_id>_MTL.TXT and the six reflective band files.
/// Water pixels are bright in band 2 and dark in bands 4, 5 and 7.
ScenePackageRef write_synthetic_scene(const std::filesystem::path& dir, const SyntheticSceneSpec& spec);

}  // namespace aquacad
