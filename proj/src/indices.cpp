#include "aquacad/indices.hpp"

#include "aquacad/errors.hpp"
#include "text_util.hpp"

namespace aquacad {

std::string to_string(IndexKind kind) {
  switch (kind) {
    case IndexKind::kNdvi: return "ndvi";
    case IndexKind::kNdwi: return "ndwi";
    case IndexKind::kMndwi: return "mndwi";
  }
  return "unknown";
}

IndexKind parse_index_kind(std::string_view text) {
  const auto name = detail::upper(text);
  if (name == "NDVI") return IndexKind::kNdvi;
  if (name == "NDWI") return IndexKind::kNdwi;
  if (name == "MNDWI") return IndexKind::kMndwi;
  throw DomainError("unknown index kind '" + std::string(text) + "' (expected ndvi, ndwi or mndwi)");
}

IndexBands index_bands(IndexKind kind) {
  switch (kind) {
    case IndexKind::kNdvi: return {4, 3};
    case IndexKind::kNdwi: return {5, 4};
    case IndexKind::kMndwi: return {2, 4};
  }
  throw DomainError("unknown index kind");
}

WaterPolarity water_polarity(IndexKind kind) {
  return kind == IndexKind::kNdvi ? WaterPolarity::kLowIsWater : WaterPolarity::kHighIsWater;
}

IndexGrid compute_index(const Grid<float>& positive, const Grid<float>& negative, IndexKind kind) {
  if (!positive.same_shape(negative)) throw DomainError("index input bands differ in size");
  IndexGrid out{kind, water_polarity(kind), Grid<float>(positive.width(), positive.height()), 0};
  auto a = positive.values();
  auto b = negative.values();
  auto v = out.values.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double sum = static_cast<double>(a[i]) + b[i];
    if (sum == 0) {
      v[i] = 0;
      ++out.degenerate_count;
    } else {
      v[i] = static_cast<float>((static_cast<double>(a[i]) - b[i]) / sum);
    }
  }
  return out;
}

IndexGrid compute_index(const ReflectanceStack& stack, IndexKind kind) {
  const auto bands = index_bands(kind);
  for (int band : {bands.positive, bands.negative}) {
    if (!stack.bands.contains(band)) {
      throw NotFound(to_string(kind) + " needs band " + std::to_string(band) +
                     ", which the stack lacks");
    }
  }
  return compute_index(stack.band(bands.positive), stack.band(bands.negative), kind);
}

}  // namespace aquacad
