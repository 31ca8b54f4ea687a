#pragma once

#include <vector>

#include "aquacad/grid.hpp"

namespace aquacad {

struct Offset {
  int drow = 0;
  int dcol = 0;
  friend auto operator<=>(const Offset&, const Offset&) = default;
};

/// Set of pixel offsets. Always contains (0,0) and is symmetric under
/// negation, so dilation and erosion need no reflection.
class StructuringElement {
 public:
  /// Throws DomainError if the invariants do not hold.
  explicit StructuringElement(std::vector<Offset> offsets);

  /// {(dr, dc) : |dr| <= r, |dc| <= r, |dr| + |dc| <= r + 1}; r = 3 gives
  /// the 37-pixel octagon used for lake borders.
  static StructuringElement octagon(int radius = 3);
  static StructuringElement square(int radius);

  const std::vector<Offset>& offsets() const noexcept { return offsets_; }
  /// Largest |dr| or |dc|.
  int radius() const noexcept { return radius_; }

 private:
  std::vector<Offset> offsets_;
  int radius_ = 0;
};

/// Minkowski sum. Offsets landing outside the image are dropped.
Mask dilate(const Mask& mask, const StructuringElement& se);

/// {x : x + b in A for all b}. A pixel whose footprint leaves the image is
/// not a member.
Mask erode(const Mask& mask, const StructuringElement& se);

Mask mask_not(const Mask& mask);
Mask mask_and(const Mask& a, const Mask& b);
Mask mask_and_not(const Mask& a, const Mask& b);
/// True when every member of `a` is a member of `b`.
bool is_subset(const Mask& a, const Mask& b);

}  // namespace aquacad
