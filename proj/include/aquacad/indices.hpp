#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "aquacad/calibration.hpp"
#include "aquacad/grid.hpp"

namespace aquacad {

enum class IndexKind { kNdvi, kNdwi, kMndwi };
enum class WaterPolarity { kHighIsWater, kLowIsWater };

std::string to_string(IndexKind kind);
/// Accepts "ndvi", "ndwi", "mndwi" in any case; throws DomainError otherwise.
IndexKind parse_index_kind(std::string_view text);

/// The two bands of a normalized difference (a - b) / (a + b):
///   NDVI  = (NIR - red)   / (NIR + red)    bands 4, 3
///   NDWI  = (SWIR - NIR)  / (SWIR + NIR)   bands 5, 4
///   MNDWI = (green - NIR) / (green + NIR)  bands 2, 4
struct IndexBands {
  int positive;
  int negative;
};
IndexBands index_bands(IndexKind kind);
WaterPolarity water_polarity(IndexKind kind);

struct IndexGrid {
  IndexKind kind = IndexKind::kMndwi;
  WaterPolarity polarity = WaterPolarity::kHighIsWater;
  Grid<float> values;
  /// Pixels whose denominator was zero; their value is 0.
  std::size_t degenerate_count = 0;
};

/// (a - b) / (a + b), 0 when a + b == 0.
inline double normalized_difference(double a, double b) {
  const double sum = a + b;
  return sum == 0 ? 0.0 : (a - b) / sum;
}

IndexGrid compute_index(const Grid<float>& positive, const Grid<float>& negative, IndexKind kind);
IndexGrid compute_index(const ReflectanceStack& stack, IndexKind kind);

}  // namespace aquacad
