#include "aquacad/measurement.hpp"

#include "aquacad/errors.hpp"

namespace aquacad {

GeoTransform GeoTransform::from(const MtlMetadata& metadata) {
  return {metadata.corner_ul_easting, metadata.corner_ul_northing, metadata.pixel_size,
          metadata.utm_zone, metadata.hemisphere()};
}

double area_km2(const Mask& region) { return static_cast<double>(popcount(region)) * kPixelAreaKm2; }

PerimeterResult perimeter_km(const Mask& region) {
  const std::size_t h = region.height();
  const std::size_t w = region.width();
  PerimeterResult result;
  if (h < 3 || w < 3) return result;

  Mask boundary(w, h, 0);
  for (std::size_t r = 1; r + 1 < h; ++r) {
    for (std::size_t c = 1; c + 1 < w; ++c) {
      if (!region(r, c)) continue;
      boundary(r, c) = !region(r - 1, c) || !region(r + 1, c) || !region(r, c - 1) || !region(r, c + 1);
    }
  }
  for (std::size_t r = 1; r + 1 < h; ++r) {
    for (std::size_t c = 1; c + 1 < w; ++c) {
      if (!boundary(r, c)) continue;
      if (boundary(r, c + 1) || boundary(r + 1, c)) ++result.side_pairs;
      if (boundary(r + 1, c - 1) || boundary(r + 1, c + 1)) ++result.diagonal_pairs;
    }
  }
  result.perimeter_km = static_cast<double>(result.side_pairs) * kPixelSideKm +
                        kDiagonalWeight * static_cast<double>(result.diagonal_pairs) * kPixelSideKm;
  return result;
}

FractionalPixel centroid(const Mask& region) {
  double sum_r = 0;
  double sum_c = 0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < region.height(); ++r) {
    for (std::size_t c = 0; c < region.width(); ++c) {
      if (!region(r, c)) continue;
      sum_r += static_cast<double>(r);
      sum_c += static_cast<double>(c);
      ++n;
    }
  }
  if (n == 0) throw DomainError("centroid of an empty region");
  return {sum_r / static_cast<double>(n), sum_c / static_cast<double>(n)};
}

UtmPoint pixel_to_utm(double row, double col, const GeoTransform& gt) {
  return {gt.ul_easting + col * gt.pixel_size, gt.ul_northing - row * gt.pixel_size};
}

RegionMetrics measure_region(const Mask& region, const GeoTransform& gt) {
  RegionMetrics m;
  m.pixel_count = popcount(region);
  m.area_km2 = static_cast<double>(m.pixel_count) * kPixelAreaKm2;
  const auto perimeter = perimeter_km(region);
  m.perimeter_km = perimeter.perimeter_km;
  m.side_pairs = perimeter.side_pairs;
  m.diagonal_pairs = perimeter.diagonal_pairs;
  m.centroid_pixel = centroid(region);
  m.centroid_utm = pixel_to_utm(m.centroid_pixel.row, m.centroid_pixel.col, gt);
  return m;
}

}  // namespace aquacad
