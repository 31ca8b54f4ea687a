#pragma once

// Independent reference implementations used as test oracles. None of
// these share code with the library.

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "aquacad/grid.hpp"

namespace oracle {

struct Perimeter {
  long long p_lado = 0;
  long long p_diag = 0;
  double km = 0;
  long long area = 0;
};

/// Boundary pair count, 1-based loops over a 0/1 image.
Perimeter calcular_perimetro(const aquacad::Mask& imagen);

/// Forward transverse Mercator on the Hayford ellipsoid (Krueger series to
/// n^6). Returns (easting, northing); adds 1e7 m false northing in the south.
std::pair<double, double> hayford_forward(double lat_deg, double lon_deg, int zone, bool south);

/// Exhaustive Otsu: every cut 0..254 scored by exact integer
/// between-class variance, first maximum wins. -1 if no valid cut.
int otsu_exhaustive(const std::array<std::uint64_t, 256>& histogram);

/// Crossing count of a ray cast upward (+lat) from the point.
bool inside_even_odd(double lon, double lat, const std::vector<std::vector<std::pair<double, double>>>& rings);

/// Set-arithmetic morphology on coordinate lists.
aquacad::Mask dilate_set(const aquacad::Mask& a, const std::vector<std::pair<int, int>>& se);
aquacad::Mask erode_set(const aquacad::Mask& a, const std::vector<std::pair<int, int>>& se);
std::vector<std::pair<int, int>> octagon3();

/// Random blob: union of a few random discs and rectangles.
aquacad::Mask random_blob(std::mt19937_64& rng, std::size_t max_side);
aquacad::Mask random_mask(std::mt19937_64& rng, std::size_t w, std::size_t h, double density);

}  // namespace oracle

namespace testutil {

std::filesystem::path fixture_dir();

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_text(const std::filesystem::path& p);
void write_text(const std::filesystem::path& p, const std::string& text);

}  // namespace testutil
