#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aquacad/cadastre.hpp"
#include "aquacad/calibration.hpp"
#include "aquacad/geodesy.hpp"
#include "aquacad/indices.hpp"
#include "aquacad/ingest.hpp"
#include "aquacad/measurement.hpp"
#include "aquacad/segmentation.hpp"
#include "json.hpp"

namespace aquacad {

/// Finds a scene by id under `data_root`; `id_or_path` may also be a
/// package directory. Throws NotFound.
ScenePackageRef resolve_scene(const std::filesystem::path& data_root, const std::string& id_or_path);

/// A calibrated scene ready for index computation.
struct SceneData {
  ScenePackageRef ref;
  ReflectanceStack stack;
  GeoTransform geo;
};

SceneData load_scene(const ScenePackageRef& ref, const CalibrationOptions& options = {});

/// Everything measured about one segmented lake.
struct LakeAnalysis {
  SegmentationResult segmentation;
  RegionMetrics metrics;
  GeodeticCoord centroid;
  AdminLocation admin;
  std::vector<PixelCoord> outline;  // outer contour of the border mask
  Ring ring;                        // outline in lon/lat, closed
};

LakeAnalysis analyze_lake(const IndexGrid& grid, const GeoTransform& geo, PixelCoord seed,
                          const SegmentParams& params = {}, const AdminBoundarySet* boundaries = nullptr);

/// Nearest pixel to a UTM position of the scene.
PixelCoord utm_to_pixel(const UtmPoint& p, const GeoTransform& geo);

/// Run-length encoding of a mask in row-major order: alternating
/// (start index, run length) pairs of member pixels.
std::vector<std::uint64_t> run_length_encode(const Mask& mask);
Mask run_length_decode(std::size_t width, std::size_t height, const std::vector<std::uint64_t>& runs);

/// Response body of the segment endpoint and the `segment` command.
nlohmann::json lake_json(const LakeAnalysis& lake, bool include_mask = true);

/// Record for the registry (id and timestamp are left for Registry::append).
CadastralRecord make_record(const LakeAnalysis& lake, const std::string& scene_id, const std::string& name,
                            const std::string& cuenca);

/// Stores the region mask cropped to its bounding box next to the registry
/// and sets record.mask_file.
void attach_mask(const Registry& registry, const LakeAnalysis& lake, CadastralRecord& record);

nlohmann::json timeline_json(const Timeline& t);

}  // namespace aquacad
