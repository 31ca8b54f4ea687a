#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aquacad/geodesy.hpp"
#include "aquacad/grid.hpp"
#include "json.hpp"

namespace aquacad {

/// One registered water body.
struct CadastralRecord {
  std::int64_t id = 0;  // assigned by Registry::append
  std::string scene_id;
  int year = 0;
  std::string name;
  std::string cuenca;
  double area_km2 = 0;
  /// Absent for records transcribed from published tables that only list
  /// areas and centroids.
  std::optional<double> perimeter_km;
  double centroid_lat = 0;
  double centroid_lon = 0;
  std::optional<std::string> region;
  std::optional<std::string> provincia;
  std::optional<std::string> distrito;
  std::string registered_at;  // ISO 8601, UTC
  Ring border_ring;           // closed (lon, lat) loop, may be empty
  std::optional<std::string> mask_file;  // PGM artifact, relative to the registry
};

void to_json(nlohmann::json& j, const CadastralRecord& r);
void from_json(const nlohmann::json& j, CadastralRecord& r);

/// Names of the fields that break a record's invariants (empty if valid).
std::vector<std::string> validate(const CadastralRecord& r);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// Append-only line-delimited JSON registry. The first line is a schema
/// header, every further line one record. Appends from this process are
/// serialized by a mutex, across processes by an advisory file lock.
class Registry {
 public:
  static constexpr int kSchemaVersion = 1;

  explicit Registry(std::filesystem::path path);

  const std::filesystem::path& path() const noexcept { return path_; }

  /// Validates, rejects a duplicate (scene_id, name) with Conflict, assigns
  /// the next id and appends one line. Returns the id.
  std::int64_t append(CadastralRecord record);

  /// All records; empty when the file does not exist yet.
  std::vector<CadastralRecord> load() const;
  std::vector<CadastralRecord> find(const std::string& name) const;

  /// Directory holding segmentation mask artifacts.
  std::filesystem::path mask_directory() const;

  /// Writes `mask` (0/1) as a 0/255 PGM named after the scene and lake and
  /// returns its path relative to the registry directory. `origin` is the
  /// position of the mask's top-left pixel in the scene.
  std::string store_mask(const std::string& scene_id, const std::string& name, const Mask& mask,
                         PixelCoord origin) const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
};

std::vector<CadastralRecord> parse_registry(std::string_view text);

struct TimelinePoint {
  int year = 0;
  double area_km2 = 0;
};

struct Timeline {
  std::string name;
  std::vector<TimelinePoint> points;  // strictly increasing years
  std::vector<double> deltas;         // points[i+1] - points[i], to 1e-4 km^2
};

/// Reported areas and timeline deltas are whole multiples of 1/kAreaScale km^2.
inline constexpr double kAreaScale = 1e4;

/// Area history of the named lake. Several records for one year collapse
/// to the most recently registered one. Throws NotFound for an unknown name.
Timeline timeline(std::span<const CadastralRecord> records, const std::string& name);

inline constexpr std::size_t kMaxExportRingVertices = 500;

/// Uniformly decimates a closed ring to at most `max_vertices` vertices
/// (closing vertex included). Rings already small enough are unchanged.
Ring decimate_ring(const Ring& ring, std::size_t max_vertices = kMaxExportRingVertices);

/// KML 2.2 document with one Placemark per record: a centroid Point, the
/// border Polygon when the record has one, and area/perimeter/year as
/// ExtendedData.
std::string export_kml(std::span<const CadastralRecord> records);

}  // namespace aquacad
