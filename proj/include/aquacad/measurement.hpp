#pragma once

#include <cstdint>

#include "aquacad/grid.hpp"
#include "aquacad/ingest.hpp"

namespace aquacad {

/// TM reflective pixels are 30 m on a side.
inline constexpr double kPixelSideKm = 0.030;
inline constexpr double kPixelAreaKm2 = 0.0009;
/// Diagonal step weight of the perimeter pair count (not sqrt(2)).
inline constexpr double kDiagonalWeight = 1.41;

struct PerimeterResult {
  double perimeter_km = 0;
  std::int64_t side_pairs = 0;      // pLado
  std::int64_t diagonal_pairs = 0;  // pDiag
};

struct FractionalPixel {
  double row = 0;
  double col = 0;
};

struct UtmPoint {
  double easting = 0;
  double northing = 0;
};

/// Pixel-centre georeferencing of a scene.
struct GeoTransform {
  double ul_easting = 0;
  double ul_northing = 0;
  double pixel_size = 30;
  int utm_zone = 0;
  Hemisphere hemisphere = Hemisphere::kNorth;

  static GeoTransform from(const MtlMetadata& metadata);
};

/// Member pixel count times 0.0009 km^2.
double area_km2(const Mask& region);

/// Boundary pixels are interior members (not on the outermost image frame)
/// with at least one non-member 4-neighbour. Scanning the interior rows
/// then columns, a boundary pixel adds 1 to side_pairs if its right or
/// lower neighbour is a boundary pixel, and 1 to diagonal_pairs if its
/// lower-left or lower-right neighbour is. The perimeter is
/// 0.030 (side_pairs + 1.41 diagonal_pairs) km.
PerimeterResult perimeter_km(const Mask& region);

/// Mean member (row, col). Throws DomainError for an empty region.
FractionalPixel centroid(const Mask& region);

/// easting = ul_easting + col * size, northing = ul_northing - row * size.
UtmPoint pixel_to_utm(double row, double col, const GeoTransform& gt);

struct RegionMetrics {
  double area_km2 = 0;
  double perimeter_km = 0;
  std::int64_t side_pairs = 0;
  std::int64_t diagonal_pairs = 0;
  std::size_t pixel_count = 0;
  FractionalPixel centroid_pixel;
  UtmPoint centroid_utm;
};

RegionMetrics measure_region(const Mask& region, const GeoTransform& gt);

}  // namespace aquacad
