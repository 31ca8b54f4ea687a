#include "aquacad/morphology.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "aquacad/errors.hpp"

namespace aquacad {

StructuringElement::StructuringElement(std::vector<Offset> offsets) {
  std::set<Offset> unique(offsets.begin(), offsets.end());
  if (!unique.contains(Offset{0, 0})) throw DomainError("structuring element must contain (0,0)");
  for (const auto& o : unique) {
    if (!unique.contains(Offset{-o.drow, -o.dcol})) {
      throw DomainError("structuring element must be symmetric");
    }
    radius_ = std::max({radius_, std::abs(o.drow), std::abs(o.dcol)});
  }
  offsets_.assign(unique.begin(), unique.end());
}

StructuringElement StructuringElement::octagon(int radius) {
  if (radius < 0) throw DomainError("octagon radius must be non-negative");
  std::vector<Offset> offsets;
  for (int dr = -radius; dr <= radius; ++dr) {
    for (int dc = -radius; dc <= radius; ++dc) {
      if (std::abs(dr) + std::abs(dc) <= radius + 1) offsets.push_back({dr, dc});
    }
  }
  return StructuringElement(std::move(offsets));
}

StructuringElement StructuringElement::square(int radius) {
  if (radius < 0) throw DomainError("square radius must be non-negative");
  std::vector<Offset> offsets;
  for (int dr = -radius; dr <= radius; ++dr) {
    for (int dc = -radius; dc <= radius; ++dc) offsets.push_back({dr, dc});
  }
  return StructuringElement(std::move(offsets));
}

Mask dilate(const Mask& mask, const StructuringElement& se) {
  Mask out(mask.width(), mask.height(), 0);
  const long h = static_cast<long>(mask.height());
  const long w = static_cast<long>(mask.width());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      if (!mask(r, c)) continue;
      for (const auto& o : se.offsets()) {
        const long rr = r + o.drow;
        const long cc = c + o.dcol;
        if (rr >= 0 && rr < h && cc >= 0 && cc < w) out(rr, cc) = 1;
      }
    }
  }
  return out;
}

Mask erode(const Mask& mask, const StructuringElement& se) {
  Mask out(mask.width(), mask.height(), 0);
  const long h = static_cast<long>(mask.height());
  const long w = static_cast<long>(mask.width());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      if (!mask(r, c)) continue;
      bool keep = true;
      for (const auto& o : se.offsets()) {
        const long rr = r + o.drow;
        const long cc = c + o.dcol;
        if (rr < 0 || rr >= h || cc < 0 || cc >= w || !mask(rr, cc)) {
          keep = false;
          break;
        }
      }
      out(r, c) = keep;
    }
  }
  return out;
}

Mask mask_not(const Mask& mask) {
  Mask out(mask.width(), mask.height());
  std::transform(mask.values().begin(), mask.values().end(), out.values().begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(!v); });
  return out;
}

namespace {
template <typename Op>
Mask combine(const Mask& a, const Mask& b, Op op) {
  if (!a.same_shape(b)) throw DomainError("mask dimensions differ");
  Mask out(a.width(), a.height());
  std::transform(a.values().begin(), a.values().end(), b.values().begin(), out.values().begin(),
                 [&](std::uint8_t x, std::uint8_t y) { return static_cast<std::uint8_t>(op(x != 0, y != 0)); });
  return out;
}
}  // namespace

Mask mask_and(const Mask& a, const Mask& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; });
}

Mask mask_and_not(const Mask& a, const Mask& b) {
  return combine(a, b, [](bool x, bool y) { return x && !y; });
}

bool is_subset(const Mask& a, const Mask& b) {
  if (!a.same_shape(b)) throw DomainError("mask dimensions differ");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.values()[i] && !b.values()[i]) return false;
  }
  return true;
}

}  // namespace aquacad
