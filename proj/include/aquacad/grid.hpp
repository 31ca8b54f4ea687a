#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aquacad {

/// Integer pixel position. Signed so that offsets and out-of-range seeds can
/// be represented without wrap-around.
struct PixelCoord {
  long row = 0;
  long col = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

enum class Hemisphere { kNorth, kSouth };

/// Dense row-major 2-D array. Row 0 is the top (northernmost) image line.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height, fill) {}
  Grid(std::size_t width, std::size_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_) {
      throw std::invalid_argument(
          "grid data has " + std::to_string(data_.size()) +
          " entries, expected " + std::to_string(width_ * height_));
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(long row, long col) const noexcept {
    return row >= 0 && col >= 0 && static_cast<std::size_t>(row) < height_ &&
           static_cast<std::size_t>(col) < width_;
  }
  bool contains(PixelCoord p) const noexcept { return contains(p.row, p.col); }

  T& operator()(std::size_t row, std::size_t col) noexcept {
    return data_[row * width_ + col];
  }
  const T& operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * width_ + col];
  }

  const T& at(long row, long col) const {
    if (!contains(row, col)) throw std::out_of_range("grid index out of range");
    return (*this)(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  std::span<const T> row(std::size_t r) const noexcept {
    return std::span<const T>(data_).subspan(r * width_, width_);
  }

  bool same_shape(const auto& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

/// Binary image; every entry is 0 or 1.
using Mask = Grid<std::uint8_t>;

inline std::size_t popcount(const Mask& mask) {
  std::size_t n = 0;
  for (auto v : mask.values()) n += v != 0;
  return n;
}

}  // namespace aquacad
