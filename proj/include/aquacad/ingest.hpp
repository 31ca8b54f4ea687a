#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aquacad/grid.hpp"
#include "aquacad/sensor_table.hpp"

namespace aquacad {

/// The six reflective TM bands. Band 6 (thermal) is never read.
inline constexpr std::array<int, 6> kReflectiveBands{1, 2, 3, 4, 5, 7};

bool is_reflective_band(int band) noexcept;

/// True for ids shaped like "LT50070692008122CUB00":
/// LT5 + path(3) + row(3) + year(4) + day-of-year(3) + 5-char suffix.
bool is_landsat5_scene_id(std::string_view id);

/// Acquisition year embedded in a scene id; nullopt if the id is malformed.
std::optional<int> scene_year(std::string_view id);

struct ScenePackageRef {
  std::string scene_id;
  std::filesystem::path root_path;
  std::map<int, std::filesystem::path> band_files;
  std::filesystem::path mtl_file;
};

struct InvalidPackage {
  std::filesystem::path path;
  std::string scene_id;  // empty when no MTL was found
  std::string reason;
  std::vector<int> missing_bands;
};

struct DiscoveryReport {
  std::vector<ScenePackageRef> packages;  // sorted by scene_id
  std::vector<InvalidPackage> invalid;    // sorted by path
};

/// Scans `root` and each of its immediate subdirectories for a scene
/// package: a `<id>_MTL.TXT` file plus `<id>_B{1,2,3,4,5,7}` band files
/// (.TIF, .TIFF or .PGM, any case). Incomplete packages are reported, not
/// dropped.
DiscoveryReport discover_packages(const std::filesystem::path& root);

struct RadianceBounds {
  double lmin = 0;
  double lmax = 0;
  friend bool operator==(const RadianceBounds&, const RadianceBounds&) = default;
};

struct MtlMetadata {
  std::string scene_id;
  std::chrono::year_month_day acquisition_date{};
  int day_of_year = 0;
  double sun_elevation_deg = 0;
  double sun_azimuth_deg = 0;
  int dmax = 255;
  std::map<int, RadianceBounds> radiance;
  /// Bands whose radiance bounds were absent and taken from the sensor table.
  std::vector<int> radiance_fallback_bands;
  int utm_zone = 0;
  double corner_ul_easting = 0;
  double corner_ul_northing = 0;
  std::optional<double> corner_ul_latitude;
  double pixel_size = 30;
  int rows = 0;
  int cols = 0;
  double cloud_cover = 0;

  /// South when the UL corner latitude is negative, or (absent that) when
  /// the product uses negative northings; North otherwise.
  Hemisphere hemisphere() const noexcept;

  friend bool operator==(const MtlMetadata&, const MtlMetadata&) = default;
};

/// Parses MTL `KEY = VALUE` text with GROUP/END_GROUP nesting. Both the
/// pre-2012 key vocabulary (LMAX_BAND1, QCALMAX_BAND1, ...) and the 2012
/// vocabulary (RADIANCE_MAXIMUM_BAND_1, ...) are accepted. Each field has
/// an alias list (older name first) and the first alias present wins; a key
/// repeated in the document keeps its first value. Unknown keys are ignored.
/// Radiance bounds absent for a band come from `fallback` and the band is
/// listed in radiance_fallback_bands.
MtlMetadata parse_mtl(std::string_view text,
                      const SensorTable& fallback = SensorTable::standard());

MtlMetadata read_mtl_file(const std::filesystem::path& path,
                          const SensorTable& fallback = SensorTable::standard());

/// Canonical MTL text (2012 vocabulary). Radiance keys are omitted for
/// fallback bands so that parse(serialize(m)) == m.
std::string serialize_mtl(const MtlMetadata& metadata);

struct BandRaster {
  int band_number = 0;
  Grid<std::uint8_t> nd;
  std::size_t width() const noexcept { return nd.width(); }
  std::size_t height() const noexcept { return nd.height(); }
};

enum class ByteOrder { kLittle, kBig };

/// Decodes the baseline subset: one 8-bit sample per pixel, no
/// compression, strip organised, either byte order.
Grid<std::uint8_t> decode_tiff(std::span<const std::uint8_t> bytes);
Grid<std::uint8_t> decode_pgm(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_tiff(const Grid<std::uint8_t>& grid,
                                      ByteOrder order = ByteOrder::kLittle,
                                      std::size_t rows_per_strip = 0);
/// Binary P5, maxval 255. `comment` lines are emitted after the magic.
std::vector<std::uint8_t> encode_pgm(const Grid<std::uint8_t>& grid,
                                     const std::vector<std::string>& comment = {});

/// Format chosen by magic bytes (II, MM or P5).
BandRaster read_band_raster(const std::filesystem::path& path, int band_number = 0);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

struct ScenePackage {
  MtlMetadata metadata;
  std::map<int, BandRaster> bands;
};

/// Parses the MTL and decodes all six reflective bands (in parallel).
/// Checks that every band matches the MTL dimensions and dmax.
ScenePackage load_package(const ScenePackageRef& ref,
                          const SensorTable& fallback = SensorTable::standard());

}  // namespace aquacad
