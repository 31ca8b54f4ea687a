#include "aquacad/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <cstdio>
#include <limits>

namespace aquacad {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

// 384-bit unsigned integer, little-endian limbs.
using Wide = std::array<std::uint64_t, 6>;

Wide widen(u128 v) { return {static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(v >> 64), 0, 0, 0, 0}; }

Wide multiply(const Wide& a, u128 b) {
  const std::uint64_t bl[2] = {static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(b >> 64)};
  Wide out{};
  for (int j = 0; j < 2; ++j) {
    u128 carry = 0;
    for (int i = 0; i + j < 6; ++i) {
      const u128 cur = static_cast<u128>(a[i]) * bl[j] + out[i + j] + carry;
      out[i + j] = static_cast<std::uint64_t>(cur);
      carry = cur >> 64;
    }
  }
  return out;
}

int compare(const Wide& a, const Wide& b) {
  for (int i = 5; i >= 0; --i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

// Between-class variance of a cut is D^2 / (N0 N1 N^2) with
// D = N1 S0 - N0 S1; N^2 is common to all cuts and dropped.
struct CutScore {
  u128 d_abs;
  u128 denominator;
};

bool greater(const CutScore& a, const CutScore& b) {
  // a.d^2 / a.den > b.d^2 / b.den  <=>  a.d^2 b.den > b.d^2 a.den
  const Wide lhs = multiply(multiply(widen(a.d_abs), a.d_abs), b.denominator);
  const Wide rhs = multiply(multiply(widen(b.d_abs), b.d_abs), a.denominator);
  return compare(lhs, rhs) > 0;
}

}  // namespace

std::optional<int> otsu_cut(const Histogram256& histogram) {
  i128 total_n = 0;
  i128 total_s = 0;
  for (int i = 0; i < 256; ++i) {
    total_n += histogram[i];
    total_s += static_cast<i128>(histogram[i]) * i;
  }
  std::optional<int> best;
  CutScore best_score{0, 1};
  i128 n0 = 0;
  i128 s0 = 0;
  for (int t = 0; t < 255; ++t) {
    n0 += histogram[t];
    s0 += static_cast<i128>(histogram[t]) * t;
    const i128 n1 = total_n - n0;
    const i128 s1 = total_s - s0;
    if (n0 == 0 || n1 == 0) continue;
    const i128 d = n1 * s0 - n0 * s1;
    const CutScore score{static_cast<u128>(d < 0 ? -d : d), static_cast<u128>(n0) * static_cast<u128>(n1)};
    if (!best || greater(score, best_score)) {
      best = t;
      best_score = score;
    }
  }
  return best;
}

double otsu_separability(const Histogram256& histogram, int cut) {
  double n = 0, s = 0, n0 = 0, s0 = 0, ss = 0;
  for (int i = 0; i < 256; ++i) {
    const double h = static_cast<double>(histogram[i]);
    n += h;
    s += h * i;
    ss += h * i * i;
    if (i <= cut) {
      n0 += h;
      s0 += h * i;
    }
  }
  const double n1 = n - n0;
  if (n == 0 || n0 == 0 || n1 == 0) return 0;
  const double mean = s / n;
  const double total = ss / n - mean * mean;
  if (!(total > 0)) return 0;
  const double m0 = s0 / n0;
  const double m1 = (s - s0) / n1;
  const double between = (n0 / n) * (n1 / n) * (m0 - m1) * (m0 - m1);
  return std::min(1.0, between / total);
}

double local_threshold(const Grid<float>& values, PixelCoord seed, int window) {
  return analyze_window(values, seed, window).threshold;
}

WindowThreshold analyze_window(const Grid<float>& values, PixelCoord seed, int window) {
  if (window < 3 || window % 2 == 0) {
    throw DomainError("threshold window must be odd and at least 3, got " + std::to_string(window));
  }
  if (!values.contains(seed)) throw DomainError("seed lies outside the image");
  const long half = window / 2;
  const long r0 = std::max(0L, seed.row - half);
  const long r1 = std::min(static_cast<long>(values.height()) - 1, seed.row + half);
  const long c0 = std::max(0L, seed.col - half);
  const long c1 = std::min(static_cast<long>(values.width()) - 1, seed.col + half);

  float lo = std::numeric_limits<float>::infinity();
  float hi = -std::numeric_limits<float>::infinity();
  for (long r = r0; r <= r1; ++r) {
    for (long c = c0; c <= c1; ++c) {
      lo = std::min(lo, values(r, c));
      hi = std::max(hi, values(r, c));
    }
  }
  if (!(hi > lo)) throw SegmentationFailure("no bimodal structure in the window around the seed");

  const double span = static_cast<double>(hi) - lo;
  Histogram256 histogram{};
  for (long r = r0; r <= r1; ++r) {
    for (long c = c0; c <= c1; ++c) {
      const double scaled = (static_cast<double>(values(r, c)) - lo) / span * 256.0;
      ++histogram[std::min(255, static_cast<int>(scaled))];
    }
  }
  const auto cut = otsu_cut(histogram);
  if (!cut) throw SegmentationFailure("no bimodal structure in the window around the seed");
  WindowThreshold out;
  out.threshold = lo + (*cut + 1) * span / 256.0;
  out.cut = *cut;
  out.histogram = histogram;
  out.separability = otsu_separability(histogram, *cut);
  return out;
}

double local_threshold(const IndexGrid& grid, PixelCoord seed, int window) {
  return local_threshold(grid.values, seed, window);
}

Mask binarize(const Grid<float>& values, double threshold, WaterPolarity polarity) {
  Mask out(values.width(), values.height());
  const bool high = polarity == WaterPolarity::kHighIsWater;
  std::transform(values.values().begin(), values.values().end(), out.values().begin(),
                 [&](float v) {
                   return static_cast<std::uint8_t>(high ? v >= threshold : v <= threshold);
                 });
  return out;
}

namespace {

constexpr std::array<Offset, 8> kNeighbours8{{{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};
constexpr std::array<Offset, 4> kNeighbours4{{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};

template <std::size_t N>
void flood(const Mask& allowed, Mask& reached, std::deque<PixelCoord>& queue,
           const std::array<Offset, N>& neighbours) {
  while (!queue.empty()) {
    const PixelCoord p = queue.front();
    queue.pop_front();
    for (const auto& o : neighbours) {
      const long r = p.row + o.drow;
      const long c = p.col + o.dcol;
      if (allowed.contains(r, c) && allowed(r, c) && !reached(r, c)) {
        reached(r, c) = 1;
        queue.push_back({r, c});
      }
    }
  }
}

}  // namespace

RegionMask component_near(const Mask& binary, PixelCoord seed, int max_radius) {
  if (max_radius < 0) throw DomainError("max_radius must be non-negative");
  if (!binary.contains(seed)) throw DomainError("seed lies outside the image");
  PixelCoord start = seed;
  if (!binary(seed.row, seed.col)) {
    std::optional<PixelCoord> nearest;
    long best = std::numeric_limits<long>::max();
    const long r0 = std::max(0L, seed.row - max_radius);
    const long r1 = std::min(static_cast<long>(binary.height()) - 1, seed.row + max_radius);
    const long c0 = std::max(0L, seed.col - max_radius);
    const long c1 = std::min(static_cast<long>(binary.width()) - 1, seed.col + max_radius);
    const long limit = static_cast<long>(max_radius) * max_radius;
    // Raster order visits ties in (row, col) order, so strict < keeps the smallest.
    for (long r = r0; r <= r1; ++r) {
      for (long c = c0; c <= c1; ++c) {
        if (!binary(r, c)) continue;
        const long d2 = (r - seed.row) * (r - seed.row) + (c - seed.col) * (c - seed.col);
        if (d2 <= limit && d2 < best) {
          best = d2;
          nearest = PixelCoord{r, c};
        }
      }
    }
    if (!nearest) throw SegmentationFailure("no water body near seed");
    start = *nearest;
  }
  RegionMask region{Mask(binary.width(), binary.height(), 0), seed};
  region.member(start.row, start.col) = 1;
  std::deque<PixelCoord> queue{start};
  flood(binary, region.member, queue, kNeighbours8);
  return region;
}

Mask fill_holes(const Mask& mask) {
  const Mask background = mask_not(mask);
  Mask outside(mask.width(), mask.height(), 0);
  std::deque<PixelCoord> queue;
  const long h = static_cast<long>(mask.height());
  const long w = static_cast<long>(mask.width());
  auto seed = [&](long r, long c) {
    if (background(r, c) && !outside(r, c)) {
      outside(r, c) = 1;
      queue.push_back({r, c});
    }
  };
  for (long c = 0; c < w; ++c) {
    seed(0, c);
    seed(h - 1, c);
  }
  for (long r = 0; r < h; ++r) {
    seed(r, 0);
    seed(r, w - 1);
  }
  flood(background, outside, queue, kNeighbours4);
  return mask_not(outside);
}

RegionMask fill_holes(const RegionMask& region) { return {fill_holes(region.member), region.seed}; }

Mask extract_border(const Mask& region, const StructuringElement& se) {
  const Mask dilated = dilate(region, se);
  const Mask eroded = erode(dilated, se);
  return mask_and_not(dilated, eroded);
}

namespace {

struct Box {
  long r0, r1, c0, c1;  // inclusive
};

std::optional<Box> bounding_box(const Mask& mask) {
  std::optional<Box> box;
  for (long r = 0; r < static_cast<long>(mask.height()); ++r) {
    for (long c = 0; c < static_cast<long>(mask.width()); ++c) {
      if (!mask(r, c)) continue;
      if (!box) {
        box = Box{r, r, c, c};
      } else {
        box->r0 = std::min(box->r0, r);
        box->r1 = std::max(box->r1, r);
        box->c0 = std::min(box->c0, c);
        box->c1 = std::max(box->c1, c);
      }
    }
  }
  return box;
}

Box expand(const Box& b, long margin, const Mask& within) {
  return {std::max(0L, b.r0 - margin), std::min(static_cast<long>(within.height()) - 1, b.r1 + margin),
          std::max(0L, b.c0 - margin), std::min(static_cast<long>(within.width()) - 1, b.c1 + margin)};
}

Mask crop(const Mask& mask, const Box& b) {
  Mask out(static_cast<std::size_t>(b.c1 - b.c0 + 1), static_cast<std::size_t>(b.r1 - b.r0 + 1));
  for (long r = b.r0; r <= b.r1; ++r) {
    for (long c = b.c0; c <= b.c1; ++c) out(r - b.r0, c - b.c0) = mask(r, c);
  }
  return out;
}

void paste(Mask& into, const Mask& part, const Box& b) {
  for (long r = b.r0; r <= b.r1; ++r) {
    for (long c = b.c0; c <= b.c1; ++c) into(r, c) = part(r - b.r0, c - b.c0);
  }
}

}  // namespace

SegmentationResult segment_at_seed(const IndexGrid& grid, PixelCoord seed, const SegmentParams& params) {
  if (!grid.values.contains(seed)) {
    throw DomainError("seed (" + std::to_string(seed.col) + "," + std::to_string(seed.row) +
                      ") lies outside the " + std::to_string(grid.values.width()) + "x" +
                      std::to_string(grid.values.height()) + " image");
  }
  SegmentationResult result;
  result.index_kind = grid.kind;
  result.window = params.window;
  result.max_radius = params.max_radius;
  const WindowThreshold wt = analyze_window(grid.values, seed, params.window);
  result.threshold = wt.threshold;
  result.separability = wt.separability;
  if (wt.separability < params.min_separability) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "no water body near seed: window histogram is not bimodal (separability %.3f < %.3f)",
                  wt.separability, params.min_separability);
    throw SegmentationFailure(buf);
  }

  const long half = params.window / 2;
  if (seed.row < half || seed.col < half ||
      seed.row + half >= static_cast<long>(grid.values.height()) ||
      seed.col + half >= static_cast<long>(grid.values.width())) {
    result.flags.push_back("threshold window clipped at image edge");
  }

  const Mask binary = binarize(grid.values, result.threshold, grid.polarity);
  if (!binary(seed.row, seed.col)) result.flags.push_back("seed pixel is not water; nearest body used");
  RegionMask region = component_near(binary, seed, params.max_radius);

  const Box box = *bounding_box(region.member);
  if (box.r0 == 0 || box.c0 == 0 || box.r1 + 1 == static_cast<long>(grid.values.height()) ||
      box.c1 + 1 == static_cast<long>(grid.values.width())) {
    result.flags.push_back("region touches the image edge");
  }

  // Holes and borders only depend on a neighbourhood of the region, so both
  // are computed on crops and pasted back.
  const Box fill_box = expand(box, 1, region.member);
  Mask filled = region.member;
  paste(filled, fill_holes(crop(region.member, fill_box)), fill_box);

  const Box border_box = expand(box, 2L * params.se.radius() + 1, region.member);
  Mask border(grid.values.width(), grid.values.height(), 0);
  paste(border, extract_border(crop(filled, border_box), params.se), border_box);

  result.region = RegionMask{std::move(filled), seed};
  result.border = std::move(border);
  return result;
}

std::vector<PixelCoord> trace_outline(const Mask& mask) {
  // Clockwise on screen (row axis points down): W, NW, N, NE, E, SE, S, SW.
  static constexpr std::array<Offset, 8> kDirs{{{0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}}};
  std::optional<PixelCoord> start;
  for (long r = 0; r < static_cast<long>(mask.height()) && !start; ++r) {
    for (long c = 0; c < static_cast<long>(mask.width()); ++c) {
      if (mask(r, c)) {
        start = PixelCoord{r, c};
        break;
      }
    }
  }
  if (!start) return {};
  auto member = [&](long r, long c) { return mask.contains(r, c) && mask(r, c); };
  auto direction_of = [&](PixelCoord from, PixelCoord to) {
    for (int d = 0; d < 8; ++d) {
      if (from.row + kDirs[d].drow == to.row && from.col + kDirs[d].dcol == to.col) return d;
    }
    return 0;
  };

  std::vector<PixelCoord> outline{*start};
  PixelCoord current = *start;
  int back = 0;  // west of the first raster pixel is background
  const std::size_t limit = 8 * popcount(mask) + 8;
  for (std::size_t step = 0; step < limit; ++step) {
    std::optional<PixelCoord> next;
    int next_back = 0;
    for (int k = 1; k <= 8; ++k) {
      const int d = (back + k) % 8;
      const PixelCoord p{current.row + kDirs[d].drow, current.col + kDirs[d].dcol};
      if (member(p.row, p.col)) {
        const int prev = (back + k - 1) % 8;
        const PixelCoord b{current.row + kDirs[prev].drow, current.col + kDirs[prev].dcol};
        next = p;
        next_back = direction_of(p, b);
        break;
      }
    }
    if (!next) break;  // isolated pixel
    // Back at the start and about to repeat the first move: closed.
    if (current == *start && outline.size() > 1 && *next == outline[1]) break;
    current = *next;
    back = next_back;
    outline.push_back(current);
  }
  if (outline.size() > 1 && outline.back() == *start) outline.pop_back();
  return outline;
}

}  // namespace aquacad
