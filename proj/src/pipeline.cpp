#include "aquacad/pipeline.hpp"

#include <cmath>

#include "aquacad/errors.hpp"

namespace aquacad {

namespace fs = std::filesystem;

ScenePackageRef resolve_scene(const fs::path& data_root, const std::string& id_or_path) {
  std::error_code ec;
  if (fs::is_directory(id_or_path, ec)) {
    auto report = discover_packages(id_or_path);
    if (report.packages.size() == 1) return report.packages.front();
    if (!report.invalid.empty()) {
      throw IoError("package " + id_or_path + " is invalid: " + report.invalid.front().reason);
    }
  }
  if (data_root.empty()) throw NotFound("scene '" + id_or_path + "' not found (no data root configured)");
  const auto report = discover_packages(data_root);
  for (const auto& ref : report.packages) {
    if (ref.scene_id == id_or_path) return ref;
  }
  for (const auto& bad : report.invalid) {
    if (bad.scene_id == id_or_path) throw IoError("scene " + id_or_path + " is invalid: " + bad.reason);
  }
  throw NotFound("scene '" + id_or_path + "' not found under " + data_root.string());
}

SceneData load_scene(const ScenePackageRef& ref, const CalibrationOptions& options) {
  const ScenePackage pkg = load_package(ref);
  SceneData scene{ref, calibrate_scene(pkg, options), GeoTransform::from(pkg.metadata)};
  return scene;
}

LakeAnalysis analyze_lake(const IndexGrid& grid, const GeoTransform& geo, PixelCoord seed,
                          const SegmentParams& params, const AdminBoundarySet* boundaries) {
  LakeAnalysis lake;
  lake.segmentation = segment_at_seed(grid, seed, params);
  lake.metrics = measure_region(lake.segmentation.region.member, geo);
  lake.centroid = utm_to_geodetic(
      {lake.metrics.centroid_utm.easting, lake.metrics.centroid_utm.northing, geo.utm_zone, geo.hemisphere});
  if (boundaries) lake.admin = locate_admin(lake.centroid, *boundaries);
  lake.outline = trace_outline(lake.segmentation.border);
  for (const auto& p : lake.outline) {
    const UtmPoint u = pixel_to_utm(static_cast<double>(p.row), static_cast<double>(p.col), geo);
    const GeodeticCoord g = utm_to_geodetic({u.easting, u.northing, geo.utm_zone, geo.hemisphere});
    lake.ring.push_back({g.longitude, g.latitude});
  }
  if (!lake.ring.empty()) lake.ring.push_back(lake.ring.front());
  return lake;
}

PixelCoord utm_to_pixel(const UtmPoint& p, const GeoTransform& geo) {
  return {std::lround((geo.ul_northing - p.northing) / geo.pixel_size),
          std::lround((p.easting - geo.ul_easting) / geo.pixel_size)};
}

std::vector<std::uint64_t> run_length_encode(const Mask& mask) {
  std::vector<std::uint64_t> runs;
  const auto values = mask.values();
  std::size_t i = 0;
  while (i < values.size()) {
    if (!values[i]) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < values.size() && values[i]) ++i;
    runs.push_back(start);
    runs.push_back(i - start);
  }
  return runs;
}

Mask run_length_decode(std::size_t width, std::size_t height, const std::vector<std::uint64_t>& runs) {
  if (runs.size() % 2 != 0) throw ParseError("run-length data must hold (start, length) pairs");
  Mask mask(width, height, 0);
  for (std::size_t k = 0; k < runs.size(); k += 2) {
    if (runs[k] > mask.size() || runs[k + 1] > mask.size() - runs[k]) {
      throw ParseError("run-length data exceeds the mask");
    }
    for (std::uint64_t i = 0; i < runs[k + 1]; ++i) mask.values()[runs[k] + i] = 1;
  }
  return mask;
}

nlohmann::json lake_json(const LakeAnalysis& lake, bool include_mask) {
  const auto& seg = lake.segmentation;
  const auto& m = lake.metrics;
  nlohmann::json j;
  j["index_kind"] = to_string(seg.index_kind);
  j["threshold"] = seg.threshold;
  j["separability"] = seg.separability;
  j["window"] = seg.window;
  j["max_radius"] = seg.max_radius;
  j["seed"] = {{"col", seg.region.seed.col}, {"row", seg.region.seed.row}};
  j["flags"] = seg.flags;
  j["pixel_count"] = m.pixel_count;
  j["area_km2"] = m.area_km2;
  j["perimeter_km"] = m.perimeter_km;
  j["side_pairs"] = m.side_pairs;
  j["diagonal_pairs"] = m.diagonal_pairs;
  j["centroid_pixel"] = {{"row", m.centroid_pixel.row}, {"col", m.centroid_pixel.col}};
  j["centroid_utm"] = {{"easting", m.centroid_utm.easting}, {"northing", m.centroid_utm.northing}};
  j["centroid"] = {{"lat", lake.centroid.latitude}, {"lon", lake.centroid.longitude}};
  auto name_or_null = [](const std::optional<std::string>& s) {
    return s ? nlohmann::json(*s) : nlohmann::json(nullptr);
  };
  j["admin"] = {{"region", name_or_null(lake.admin.region)},
                {"provincia", name_or_null(lake.admin.provincia)},
                {"distrito", name_or_null(lake.admin.distrito)},
                {"ambiguous", lake.admin.ambiguous}};
  auto outline = nlohmann::json::array();
  for (const auto& p : lake.outline) outline.push_back({p.col, p.row});
  j["border_ring"] = std::move(outline);
  if (include_mask) {
    const Mask& member = seg.region.member;
    j["mask"] = {{"width", member.width()}, {"height", member.height()}, {"runs", run_length_encode(member)}};
  }
  return j;
}

CadastralRecord make_record(const LakeAnalysis& lake, const std::string& scene_id, const std::string& name,
                            const std::string& cuenca) {
  CadastralRecord r;
  r.scene_id = scene_id;
  r.year = scene_year(scene_id).value_or(0);
  r.name = name;
  r.cuenca = cuenca;
  r.area_km2 = lake.metrics.area_km2;
  r.perimeter_km = lake.metrics.perimeter_km;
  r.centroid_lat = lake.centroid.latitude;
  r.centroid_lon = lake.centroid.longitude;
  r.region = lake.admin.region;
  r.provincia = lake.admin.provincia;
  r.distrito = lake.admin.distrito;
  r.border_ring = lake.ring;
  return r;
}

void attach_mask(const Registry& registry, const LakeAnalysis& lake, CadastralRecord& record) {
  const Mask& member = lake.segmentation.region.member;
  long r0 = static_cast<long>(member.height()), r1 = -1, c0 = static_cast<long>(member.width()), c1 = -1;
  for (long r = 0; r < static_cast<long>(member.height()); ++r) {
    for (long c = 0; c < static_cast<long>(member.width()); ++c) {
      if (!member(r, c)) continue;
      r0 = std::min(r0, r);
      r1 = std::max(r1, r);
      c0 = std::min(c0, c);
      c1 = std::max(c1, c);
    }
  }
  if (r1 < 0) return;
  Mask crop(static_cast<std::size_t>(c1 - c0 + 1), static_cast<std::size_t>(r1 - r0 + 1));
  for (long r = r0; r <= r1; ++r) {
    for (long c = c0; c <= c1; ++c) crop(r - r0, c - c0) = member(r, c);
  }
  record.mask_file = registry.store_mask(record.scene_id, record.name, crop, {r0, c0});
}

nlohmann::json timeline_json(const Timeline& t) {
  nlohmann::json j;
  j["name"] = t.name;
  auto points = nlohmann::json::array();
  for (const auto& p : t.points) points.push_back({{"year", p.year}, {"area_km2", p.area_km2}});
  j["points"] = std::move(points);
  j["deltas"] = t.deltas;
  return j;
}

}  // namespace aquacad
