#include "aquacad/render.hpp"

#include <algorithm>
#include <cmath>

#include "aquacad/errors.hpp"
#include "aquacad/ingest.hpp"
#include "text_util.hpp"

namespace aquacad {

double percentile(std::span<const float> values, double pct) {
  if (values.empty()) throw DomainError("percentile of no values");
  if (!(pct >= 0 && pct <= 100)) throw DomainError("percentile must be within [0, 100]");
  std::vector<float> sorted(values.begin(), values.end());
  const double rank = pct / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(lo), sorted.end());
  const double lo_value = sorted[lo];
  double hi_value = lo_value;
  if (hi != lo) {
    hi_value = *std::min_element(sorted.begin() + static_cast<std::ptrdiff_t>(lo) + 1, sorted.end());
  }
  return lo_value + (rank - static_cast<double>(lo)) * (hi_value - lo_value);
}

GrayImage render_grayscale(const Grid<float>& values, Stretch stretch) {
  if (!(stretch.low_pct >= 0 && stretch.low_pct < stretch.high_pct && stretch.high_pct <= 100)) {
    throw DomainError("stretch needs 0 <= low < high <= 100");
  }
  GrayImage out(values.width(), values.height(), 128);
  if (values.empty()) return out;
  const double lo = percentile(values.values(), stretch.low_pct);
  const double hi = percentile(values.values(), stretch.high_pct);
  if (!(hi > lo)) return out;
  std::transform(values.values().begin(), values.values().end(), out.values().begin(), [&](float v) {
    const double scaled = (static_cast<double>(v) - lo) / (hi - lo) * 255.0;
    return static_cast<std::uint8_t>(std::lround(std::clamp(scaled, 0.0, 255.0)));
  });
  return out;
}

RgbImage false_color(const ReflectanceStack& stack, std::array<int, 3> band_order, Stretch stretch) {
  std::array<GrayImage, 3> channels;
  for (std::size_t i = 0; i < 3; ++i) channels[i] = render_grayscale(stack.band(band_order[i]), stretch);
  RgbImage out(channels[0].width(), channels[0].height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values()[i] = {channels[0].values()[i], channels[1].values()[i], channels[2].values()[i]};
  }
  return out;
}

RgbImage overlay_border(const RgbImage& image, const Mask& border, Rgb color) {
  if (!image.same_shape(border)) throw DomainError("border mask and image differ in size");
  RgbImage out = image;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (border.values()[i]) out.values()[i] = color;
  }
  return out;
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& image) {
  const std::string header = "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + 3 * image.size());
  for (const auto& px : image.values()) {
    out.push_back(px.r);
    out.push_back(px.g);
    out.push_back(px.b);
  }
  return out;
}

std::array<int, 3> parse_band_order(std::string_view text) {
  std::array<int, 3> order{};
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto band = detail::parse_long(detail::trim(text.substr(pos, comma - pos)));
    if (!band || n >= 3 || !is_reflective_band(static_cast<int>(*band))) {
      throw DomainError("band order must be three reflective bands like 5,4,3, got '" + std::string(text) + "'");
    }
    order[n++] = static_cast<int>(*band);
    pos = comma + 1;
  }
  if (n != 3) throw DomainError("band order must list exactly three bands, got '" + std::string(text) + "'");
  return order;
}

}  // namespace aquacad
