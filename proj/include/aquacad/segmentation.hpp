#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aquacad/errors.hpp"
#include "aquacad/grid.hpp"
#include "aquacad/indices.hpp"
#include "aquacad/morphology.hpp"

namespace aquacad {

/// Seed-driven segmentation failed on valid input (no bimodal histogram,
/// no water near the seed).
class SegmentationFailure : public DomainError {
 public:
  using DomainError::DomainError;
};

/// One connected region plus the seed it was grown from.
struct RegionMask {
  Mask member;
  PixelCoord seed;
};

struct SegmentParams {
  int window = 101;     // odd, pixels
  int max_radius = 25;  // pixels
  StructuringElement se = StructuringElement::octagon(3);
  /// Windows whose Otsu separability falls below this are rejected as
  /// holding a single class (e.g. a seed on dry land). 0 disables the check.
  double min_separability = 0.75;
};

struct SegmentationResult {
  RegionMask region;
  Mask border;
  double threshold = 0;
  double separability = 0;
  IndexKind index_kind = IndexKind::kMndwi;
  int window = 0;
  int max_radius = 0;
  std::vector<std::string> flags;
};

using Histogram256 = std::array<std::uint64_t, 256>;

/// Otsu's cut over a 256-bin histogram: the bin t maximizing the
/// between-class variance of {0..t} vs {t+1..255}, compared exactly.
/// Ties go to the lower t. nullopt when fewer than two bins are occupied.
std::optional<int> otsu_cut(const Histogram256& histogram);

/// Histogram of the window centred on `seed` (clipped to the grid),
/// quantized to 256 bins over the window's own [min, max]. Returns the
/// Otsu threshold mapped back to index units, i.e. the lower edge of bin
/// cut + 1. Throws SegmentationFailure("no bimodal structure") for a
/// constant window.
double local_threshold(const Grid<float>& values, PixelCoord seed, int window);

struct WindowThreshold {
  double threshold = 0;
  int cut = 0;
  Histogram256 histogram{};
  /// Between-class over total variance of the histogram at `cut`, in
  /// [0, 1]; about 0.64 for a single Gaussian, near 1 for two well
  /// separated classes.
  double separability = 0;
};

/// local_threshold plus the histogram it was derived from.
WindowThreshold analyze_window(const Grid<float>& values, PixelCoord seed, int window);

/// Between-class over total variance of `histogram` split after bin `cut`.
double otsu_separability(const Histogram256& histogram, int cut);
double local_threshold(const IndexGrid& grid, PixelCoord seed, int window);

/// High-is-water: value >= threshold; low-is-water: value <= threshold.
Mask binarize(const Grid<float>& values, double threshold, WaterPolarity polarity);

/// The 8-connected component containing `seed`, or if the seed pixel is
/// false, the component holding the true pixel nearest the seed (Euclidean,
/// ties to smaller (row, col)) provided it lies within `max_radius`.
RegionMask component_near(const Mask& binary, PixelCoord seed, int max_radius);

/// Sets every false pixel that is not 4-connected to the image border.
Mask fill_holes(const Mask& mask);
RegionMask fill_holes(const RegionMask& region);

/// dilate(region) minus erode(dilate(region)).
Mask extract_border(const Mask& region, const StructuringElement& se);

/// Threshold, binarize, pick the nearest component, fill, outline.
SegmentationResult segment_at_seed(const IndexGrid& grid, PixelCoord seed,
                                   const SegmentParams& params = {});

/// Outer boundary of the 8-connected component containing the first
/// member in raster order, traced clockwise (Moore neighbourhood). The
/// first vertex is not repeated at the end. Empty for an empty mask.
std::vector<PixelCoord> trace_outline(const Mask& mask);

}  // namespace aquacad
