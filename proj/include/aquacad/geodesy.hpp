#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aquacad/grid.hpp"

namespace aquacad {

/// Reference ellipsoid given by its semi-axes.
struct Ellipsoid {
  double semi_major = 0;
  double semi_minor = 0;

  /// International 1924 (Hayford): a = 6378388.0, b = 6356911.946130.
  static Ellipsoid hayford() { return {6378388.0, 6356911.946130}; }

  double first_eccentricity() const;
  double second_eccentricity() const;
  /// c = a^2 / b
  double polar_radius() const;
};

struct UtmCoord {
  double easting = 0;
  double northing = 0;
  int zone = 0;
  Hemisphere hemisphere = Hemisphere::kNorth;
};

struct GeodeticCoord {
  double latitude = 0;   // degrees
  double longitude = 0;  // degrees
};

/// Which form of the intermediate eta term the latitude series uses.
enum class LatitudeSeries {
  /// eta = b (1 - zeta) + phi'
  kZeta,
  /// eta = b (1 - xi) + phi'. Off by ~2e-3 deg of latitude in the Andes.
  kXi,
};

/// UTM to geodetic latitude/longitude on the Hayford ellipsoid with the
/// Coticchia-Surace series. A negative northing is first shifted by
/// +10 000 000 m (Landsat products express southern scenes that way), then
/// southern coordinates have the false northing removed. The central
/// meridian is zone * 6 - 183. Throws DomainError for a zone outside 1..60.
GeodeticCoord utm_to_geodetic(const UtmCoord& u, LatitudeSeries series = LatitudeSeries::kZeta);

struct LonLat {
  double lon = 0;
  double lat = 0;
  friend bool operator==(const LonLat&, const LonLat&) = default;
};

using Ring = std::vector<LonLat>;

enum class AdminLevel { kRegion, kProvincia, kDistrito };

std::string to_string(AdminLevel level);
AdminLevel parse_admin_level(std::string_view text);

struct AdminBoundary {
  std::string name;
  AdminLevel level = AdminLevel::kDistrito;
  /// Enclosing units, outermost first: a distrito lists [region, provincia].
  std::vector<std::string> parents;
  /// Closed loops (first vertex == last). Holes are simply further rings;
  /// membership is even-odd over all rings of the entry.
  std::vector<Ring> rings;
};

/// Administrative polygons loaded from the boundary JSON file:
/// [{"name": ..., "level": "region"|"provincia"|"distrito",
///   "parents": [...], "rings": [[[lon, lat], ...], ...]}, ...]
class AdminBoundarySet {
 public:
  AdminBoundarySet() = default;
  explicit AdminBoundarySet(std::vector<AdminBoundary> entries);

  static AdminBoundarySet parse_json(std::string_view text);
  static AdminBoundarySet load(const std::filesystem::path& path);

  const std::vector<AdminBoundary>& entries() const noexcept { return entries_; }

 private:
  std::vector<AdminBoundary> entries_;
};

/// Even-odd ray casting over every ring; a point on an edge is inside.
bool point_in_rings(double lon, double lat, const std::vector<Ring>& rings);

struct AdminLocation {
  std::optional<std::string> region;
  std::optional<std::string> provincia;
  std::optional<std::string> distrito;
  /// More than one unit of the innermost matching level contained the point;
  /// the lexicographically first name was used.
  bool ambiguous = false;

  bool found() const noexcept { return region || provincia || distrito; }
};

/// The innermost level containing the point decides; names of the enclosing
/// levels come from that unit's parents.
AdminLocation locate_admin(const GeodeticCoord& p, const AdminBoundarySet& boundaries);

}  // namespace aquacad
