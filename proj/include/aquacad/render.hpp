#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aquacad/calibration.hpp"
#include "aquacad/grid.hpp"

namespace aquacad {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

using GrayImage = Grid<std::uint8_t>;
using RgbImage = Grid<Rgb>;

/// Percentile pair for the linear display stretch.
struct Stretch {
  double low_pct = 2;
  double high_pct = 98;
};

/// Percentile with linear interpolation between order statistics
/// (pct in [0, 100]).
double percentile(std::span<const float> values, double pct);

/// Linear map of [p_low, p_high] onto [0, 255], clamped outside; a grid
/// whose stretch range is empty renders as uniform 128.
GrayImage render_grayscale(const Grid<float>& values, Stretch stretch = {});

/// Each channel stretched independently; `band_order` gives the band for
/// red, green and blue.
RgbImage false_color(const ReflectanceStack& stack, std::array<int, 3> band_order = {5, 4, 3},
                     Stretch stretch = {});

/// Border pixels painted with `color`; all other pixels untouched.
RgbImage overlay_border(const RgbImage& image, const Mask& border, Rgb color = {255, 255, 0});

/// Binary PPM (P6), maxval 255.
std::vector<std::uint8_t> encode_ppm(const RgbImage& image);

/// Parses "5,4,3"; throws DomainError unless three reflective band numbers.
std::array<int, 3> parse_band_order(std::string_view text);

}  // namespace aquacad
