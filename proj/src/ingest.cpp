#include "aquacad/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iterator>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>

#include "aquacad/errors.hpp"
#include "text_util.hpp"

namespace aquacad {

namespace fs = std::filesystem;
using detail::format_double;
using detail::parse_double;
using detail::trim;
using detail::upper;

bool is_reflective_band(int band) noexcept {
  return std::find(kReflectiveBands.begin(), kReflectiveBands.end(), band) !=
         kReflectiveBands.end();
}

bool is_landsat5_scene_id(std::string_view id) {
  static const std::regex pattern("LT5[0-9]{3}[0-9]{3}[0-9]{4}[0-9]{3}[A-Z0-9]{5}");
  return std::regex_match(id.begin(), id.end(), pattern);
}

std::optional<int> scene_year(std::string_view id) {
  if (!is_landsat5_scene_id(id)) return std::nullopt;
  return static_cast<int>(*detail::parse_long(id.substr(9, 4)));
}

// ---------------------------------------------------------------------------
// Package discovery

namespace {

struct DirectoryScan {
  std::map<std::string, fs::path> mtl_by_id;
  std::map<std::string, std::map<int, fs::path>> bands_by_id;
};

DirectoryScan scan_directory(const fs::path& dir) {
  static const std::regex band_name("(.+)_B([0-9])\\.(TIF|TIFF|PGM)");
  DirectoryScan scan;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = upper(entry.path().filename().string());
    const std::string original = entry.path().filename().string();
    constexpr std::string_view kMtlSuffix = "_MTL.TXT";
    if (name.size() > kMtlSuffix.size() && name.ends_with(kMtlSuffix)) {
      scan.mtl_by_id[original.substr(0, name.size() - kMtlSuffix.size())] = entry.path();
      continue;
    }
    std::smatch m;
    if (std::regex_match(name, m, band_name)) {
      const int band = m[2].str()[0] - '0';
      if (!is_reflective_band(band)) continue;
      scan.bands_by_id[original.substr(0, m[1].length())][band] = entry.path();
    }
  }
  if (ec) throw IoError("cannot read directory " + dir.string() + ": " + ec.message());
  return scan;
}

void collect(const fs::path& dir, DiscoveryReport& report) {
  DirectoryScan scan = scan_directory(dir);
  for (const auto& [id, mtl] : scan.mtl_by_id) {
    if (!is_landsat5_scene_id(id)) {
      report.invalid.push_back({dir, id, "scene id does not match the Landsat-5 pattern", {}});
      continue;
    }
    const auto& bands = scan.bands_by_id[id];
    std::vector<int> missing;
    for (int b : kReflectiveBands) {
      if (!bands.contains(b)) missing.push_back(b);
    }
    if (!missing.empty()) {
      std::string reason = "missing band";
      for (int b : missing) reason += " " + std::to_string(b);
      report.invalid.push_back({dir, id, reason, missing});
      continue;
    }
    report.packages.push_back({id, dir, bands, mtl});
  }
  for (const auto& [id, bands] : scan.bands_by_id) {
    if (!scan.mtl_by_id.contains(id) && !bands.empty()) {
      report.invalid.push_back({dir, id, "band files without an MTL file", {}});
    }
  }
}

}  // namespace

DiscoveryReport discover_packages(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw IoError("data root is not a readable directory: " + root.string());
  }
  DiscoveryReport report;
  collect(root, report);
  std::vector<fs::path> subdirs;
  for (const auto& entry : fs::directory_iterator(root, ec)) {
    if (entry.is_directory()) subdirs.push_back(entry.path());
  }
  if (ec) throw IoError("cannot read directory " + root.string() + ": " + ec.message());
  for (const auto& dir : subdirs) collect(dir, report);

  std::sort(report.packages.begin(), report.packages.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.scene_id, a.root_path) < std::tie(b.scene_id, b.root_path);
            });
  std::sort(report.invalid.begin(), report.invalid.end(), [](const auto& a, const auto& b) {
    return std::tie(a.path, a.scene_id) < std::tie(b.path, b.scene_id);
  });
  return report;
}

// ---------------------------------------------------------------------------
// MTL

Hemisphere MtlMetadata::hemisphere() const noexcept {
  if (corner_ul_latitude) return *corner_ul_latitude < 0 ? Hemisphere::kSouth : Hemisphere::kNorth;
  return corner_ul_northing < 0 ? Hemisphere::kSouth : Hemisphere::kNorth;
}

namespace {

class MtlDocument {
 public:
  explicit MtlDocument(std::string_view text) {
    std::vector<std::pair<std::string, int>> groups;
    int line_no = 0;
    bool ended = false;
    std::size_t pos = 0;
    while (pos <= text.size() && !ended) {
      auto nl = text.find('\n', pos);
      std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      line = trim(line);
      if (line.empty()) continue;
      if (line == "END") {
        ended = true;
        break;
      }
      auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("expected KEY = VALUE, got '" + std::string(line) + "'", line_no);
      }
      std::string key(trim(line.substr(0, eq)));
      std::string_view value = trim(line.substr(eq + 1));
      if (key.empty()) throw ParseError("empty key", line_no);
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        value = value.substr(1, value.size() - 2);
      } else if (!value.empty() && value.front() == '"') {
        throw ParseError("unterminated string for " + key, line_no);
      }
      if (key == "GROUP") {
        groups.emplace_back(std::string(value), line_no);
      } else if (key == "END_GROUP") {
        if (groups.empty()) {
          throw ParseError("END_GROUP = " + std::string(value) + " without open GROUP", line_no);
        }
        if (groups.back().first != value) {
          throw ParseError("END_GROUP = " + std::string(value) + " closes GROUP = " +
                               groups.back().first + " opened on line " +
                               std::to_string(groups.back().second),
                           line_no);
        }
        groups.pop_back();
      } else {
        values_.try_emplace(key, std::string(value), line_no);
      }
    }
    if (!groups.empty()) {
      throw ParseError("GROUP = " + groups.back().first + " is never closed",
                       groups.back().second);
    }
  }

  /// First alias present in the document, in alias-list order.
  const std::pair<std::string, int>* find(std::initializer_list<std::string_view> aliases,
                                          std::string* key_out = nullptr) const {
    for (auto alias : aliases) {
      if (auto it = values_.find(std::string(alias)); it != values_.end()) {
        if (key_out) *key_out = it->first;
        return &it->second;
      }
    }
    return nullptr;
  }

  std::string text(std::initializer_list<std::string_view> aliases) const {
    if (auto* v = find(aliases)) return v->first;
    throw ParseError("missing required key " + std::string(*aliases.begin()));
  }

  std::optional<double> optional_number(std::initializer_list<std::string_view> aliases) const {
    std::string key;
    auto* v = find(aliases, &key);
    if (!v) return std::nullopt;
    auto parsed = parse_double(v->first);
    if (!parsed) throw ParseError(key + " is not a number: '" + v->first + "'", v->second);
    return parsed;
  }

  double number(std::initializer_list<std::string_view> aliases) const {
    if (auto v = optional_number(aliases)) return *v;
    throw ParseError("missing required key " + std::string(*aliases.begin()));
  }

  int integer(std::initializer_list<std::string_view> aliases) const {
    std::string key;
    double v = number(aliases);
    find(aliases, &key);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      throw ParseError(key + " must be an integer");
    }
    return static_cast<int>(v);
  }

 private:
  std::unordered_map<std::string, std::pair<std::string, int>> values_;
};

std::chrono::year_month_day parse_date(const std::string& text) {
  int y = 0;
  unsigned m = 0, d = 0;
  char dash1 = 0, dash2 = 0;
  std::istringstream in(text);
  if (!(in >> y >> dash1 >> m >> dash2 >> d) || dash1 != '-' || dash2 != '-') {
    throw ParseError("acquisition date '" + text + "' is not YYYY-MM-DD");
  }
  std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{m},
                                   std::chrono::day{d}};
  if (!date.ok()) throw ParseError("acquisition date '" + text + "' is not a calendar date");
  return date;
}

std::string band_key(std::string_view prefix, int band, std::string_view infix = "") {
  return std::string(prefix) + std::string(infix) + std::to_string(band);
}

}  // namespace

MtlMetadata parse_mtl(std::string_view text, const SensorTable& fallback) {
  const MtlDocument doc(text);
  MtlMetadata m;

  if (auto* id = doc.find({"LANDSAT_SCENE_ID"})) {
    m.scene_id = id->first;
  } else if (auto* name = doc.find({"METADATA_L1_FILE_NAME", "METADATA_FILE_NAME"});
             name && upper(name->first).ends_with("_MTL.TXT")) {
    m.scene_id = name->first.substr(0, name->first.size() - 8);
  } else {
    throw ParseError("missing required key LANDSAT_SCENE_ID");
  }

  m.acquisition_date = parse_date(doc.text({"ACQUISITION_DATE", "DATE_ACQUIRED"}));
  using std::chrono::sys_days;
  const auto jan1 = std::chrono::year_month_day{m.acquisition_date.year(),
                                                std::chrono::January, std::chrono::day{1}};
  m.day_of_year = static_cast<int>((sys_days(m.acquisition_date) - sys_days(jan1)).count()) + 1;

  m.sun_elevation_deg = doc.number({"SUN_ELEVATION"});
  m.sun_azimuth_deg = doc.number({"SUN_AZIMUTH"});
  m.dmax = doc.integer({"QCALMAX_BAND1", "QUANTIZE_CAL_MAX_BAND_1"});

  for (int band : kReflectiveBands) {
    const std::string old_max = band_key("LMAX_BAND", band);
    const std::string old_min = band_key("LMIN_BAND", band);
    const std::string new_max = band_key("RADIANCE_MAXIMUM_BAND_", band);
    const std::string new_min = band_key("RADIANCE_MINIMUM_BAND_", band);
    auto lmax = doc.optional_number({old_max, new_max});
    auto lmin = doc.optional_number({old_min, new_min});
    if (lmax && lmin) {
      m.radiance[band] = {*lmin, *lmax};
    } else if (!lmax && !lmin) {
      const auto& sensor = fallback.band(band);
      m.radiance[band] = {sensor.lmin, sensor.lmax};
      m.radiance_fallback_bands.push_back(band);
    } else {
      throw ParseError("missing required key " + (lmax ? old_min : old_max));
    }
  }

  m.utm_zone = std::abs(doc.integer({"ZONE_NUMBER", "UTM_ZONE"}));
  m.corner_ul_easting = doc.number({"PRODUCT_UL_CORNER_MAPX", "CORNER_UL_PROJECTION_X_PRODUCT"});
  m.corner_ul_northing = doc.number({"PRODUCT_UL_CORNER_MAPY", "CORNER_UL_PROJECTION_Y_PRODUCT"});
  m.corner_ul_latitude = doc.optional_number({"PRODUCT_UL_CORNER_LAT", "CORNER_UL_LAT_PRODUCT"});
  m.pixel_size = doc.number({"GRID_CELL_SIZE_REF", "GRID_CELL_SIZE_REFLECTIVE"});
  m.rows = doc.integer({"PRODUCT_LINES_REF", "REFLECTIVE_LINES"});
  m.cols = doc.integer({"PRODUCT_SAMPLES_REF", "REFLECTIVE_SAMPLES"});
  m.cloud_cover = doc.number({"CLOUD_COVER"});

  if (!(m.sun_elevation_deg > 0 && m.sun_elevation_deg < 90)) {
    throw DomainError("SUN_ELEVATION must be in (0, 90), got " + format_double(m.sun_elevation_deg));
  }
  if (m.dmax < 1) throw DomainError("QCALMAX must be at least 1");
  for (const auto& [band, r] : m.radiance) {
    if (!(r.lmax > r.lmin)) {
      throw DomainError("band " + std::to_string(band) + " radiance maximum must exceed minimum");
    }
  }
  if (m.rows <= 0 || m.cols <= 0) throw DomainError("image dimensions must be positive");
  if (!(m.pixel_size > 0)) throw DomainError("grid cell size must be positive");
  if (m.utm_zone < 1 || m.utm_zone > 60) {
    throw DomainError("UTM zone must be in 1..60, got " + std::to_string(m.utm_zone));
  }
  return m;
}

MtlMetadata read_mtl_file(const fs::path& path, const SensorTable& fallback) {
  auto bytes = read_file_bytes(path);
  try {
    return parse_mtl(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                     fallback);
  } catch (const ParseError& e) {
    throw ParseError(path.filename().string() + ": " + e.what());
  }
}

std::string serialize_mtl(const MtlMetadata& m) {
  std::ostringstream out;
  auto kv = [&](int depth, std::string_view key, const std::string& value) {
    out << std::string(2 * depth, ' ') << key << " = " << value << '\n';
  };
  auto open = [&](int depth, std::string_view name) { kv(depth, "GROUP", std::string(name)); };
  auto close = [&](int depth, std::string_view name) { kv(depth, "END_GROUP", std::string(name)); };
  auto quoted = [](const std::string& s) { return '"' + s + '"'; };

  char date[16];
  std::snprintf(date, sizeof date, "%04d-%02u-%02u", static_cast<int>(m.acquisition_date.year()),
                static_cast<unsigned>(m.acquisition_date.month()),
                static_cast<unsigned>(m.acquisition_date.day()));

  open(0, "L1_METADATA_FILE");
  open(1, "METADATA_FILE_INFO");
  kv(2, "LANDSAT_SCENE_ID", quoted(m.scene_id));
  close(1, "METADATA_FILE_INFO");
  open(1, "PRODUCT_METADATA");
  kv(2, "SPACECRAFT_ID", quoted("LANDSAT_5"));
  kv(2, "SENSOR_ID", quoted("TM"));
  kv(2, "DATE_ACQUIRED", date);
  if (m.corner_ul_latitude) kv(2, "CORNER_UL_LAT_PRODUCT", format_double(*m.corner_ul_latitude));
  kv(2, "CORNER_UL_PROJECTION_X_PRODUCT", format_double(m.corner_ul_easting));
  kv(2, "CORNER_UL_PROJECTION_Y_PRODUCT", format_double(m.corner_ul_northing));
  kv(2, "REFLECTIVE_LINES", std::to_string(m.rows));
  kv(2, "REFLECTIVE_SAMPLES", std::to_string(m.cols));
  close(1, "PRODUCT_METADATA");
  open(1, "IMAGE_ATTRIBUTES");
  kv(2, "CLOUD_COVER", format_double(m.cloud_cover));
  kv(2, "SUN_AZIMUTH", format_double(m.sun_azimuth_deg));
  kv(2, "SUN_ELEVATION", format_double(m.sun_elevation_deg));
  close(1, "IMAGE_ATTRIBUTES");
  open(1, "MIN_MAX_RADIANCE");
  for (const auto& [band, r] : m.radiance) {
    if (std::find(m.radiance_fallback_bands.begin(), m.radiance_fallback_bands.end(), band) !=
        m.radiance_fallback_bands.end()) {
      continue;
    }
    kv(2, band_key("RADIANCE_MAXIMUM_BAND_", band), format_double(r.lmax));
    kv(2, band_key("RADIANCE_MINIMUM_BAND_", band), format_double(r.lmin));
  }
  close(1, "MIN_MAX_RADIANCE");
  open(1, "MIN_MAX_PIXEL_VALUE");
  for (int band : kReflectiveBands) {
    kv(2, band_key("QUANTIZE_CAL_MAX_BAND_", band), std::to_string(m.dmax));
  }
  close(1, "MIN_MAX_PIXEL_VALUE");
  open(1, "PROJECTION_PARAMETERS");
  kv(2, "MAP_PROJECTION", quoted("UTM"));
  kv(2, "UTM_ZONE", std::to_string(m.utm_zone));
  kv(2, "GRID_CELL_SIZE_REFLECTIVE", format_double(m.pixel_size));
  close(1, "PROJECTION_PARAMETERS");
  close(0, "L1_METADATA_FILE");
  out << "END\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Rasters

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  return bytes;
}

void write_file_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path.string());
}

namespace {

enum : std::uint16_t {
  kTagImageWidth = 256,
  kTagImageLength = 257,
  kTagBitsPerSample = 258,
  kTagCompression = 259,
  kTagPhotometric = 262,
  kTagStripOffsets = 273,
  kTagSamplesPerPixel = 277,
  kTagRowsPerStrip = 278,
  kTagStripByteCounts = 279,
  kTagPlanarConfiguration = 284,
  kTagTileWidth = 322,
  kTagSampleFormat = 339,
};

enum : std::uint16_t { kTypeByte = 1, kTypeShort = 3, kTypeLong = 4 };

class TiffReader {
 public:
  explicit TiffReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {
    if (bytes.size() < 8) throw IoError("TIFF header truncated");
    if (bytes[0] == 'I' && bytes[1] == 'I') {
      little_ = true;
    } else if (bytes[0] == 'M' && bytes[1] == 'M') {
      little_ = false;
    } else {
      throw ParseError("not a TIFF file");
    }
    const auto magic = u16(2);
    if (magic == 43) throw UnsupportedFeature("unsupported TIFF feature: BigTIFF");
    if (magic != 42) throw ParseError("bad TIFF magic number");
  }

  std::uint16_t u16(std::size_t at) const {
    need(at, 2);
    return little_ ? static_cast<std::uint16_t>(bytes_[at] | bytes_[at + 1] << 8)
                   : static_cast<std::uint16_t>(bytes_[at] << 8 | bytes_[at + 1]);
  }
  std::uint32_t u32(std::size_t at) const {
    need(at, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      const std::uint32_t byte = bytes_[at + (little_ ? 3 - i : i)];
      v = v << 8 | byte;
    }
    return v;
  }

  void need(std::size_t at, std::size_t n) const {
    if (at > bytes_.size() || n > bytes_.size() - at) throw IoError("TIFF data truncated");
  }

  /// Integer values of one IFD entry at `entry` (12 bytes).
  std::vector<std::uint32_t> values(std::size_t entry) const {
    const auto type = u16(entry + 2);
    const auto count = u32(entry + 4);
    std::size_t size = 0;
    switch (type) {
      case kTypeByte: size = 1; break;
      case kTypeShort: size = 2; break;
      case kTypeLong: size = 4; break;
      default:
        throw UnsupportedFeature("unsupported TIFF feature: field type " + std::to_string(type) +
                                 " for tag " + std::to_string(u16(entry)));
    }
    if (count > bytes_.size()) throw IoError("TIFF data truncated");
    std::size_t at = entry + 8;
    if (size * count > 4) at = u32(entry + 8);
    need(at, size * count);
    std::vector<std::uint32_t> out(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      out[i] = size == 1 ? bytes_[at + i] : size == 2 ? u16(at + 2 * i) : u32(at + 4 * i);
    }
    return out;
  }

  std::span<const std::uint8_t> bytes() const { return bytes_; }

 private:
  std::span<const std::uint8_t> bytes_;
  bool little_ = true;
};

}  // namespace

Grid<std::uint8_t> decode_tiff(std::span<const std::uint8_t> bytes) {
  const TiffReader tiff(bytes);
  const std::size_t ifd = tiff.u32(4);
  const std::size_t entries = tiff.u16(ifd);
  std::map<std::uint16_t, std::vector<std::uint32_t>> tags;
  for (std::size_t i = 0; i < entries; ++i) {
    const std::size_t entry = ifd + 2 + 12 * i;
    const auto tag = tiff.u16(entry);
    switch (tag) {
      case kTagImageWidth:
      case kTagImageLength:
      case kTagBitsPerSample:
      case kTagCompression:
      case kTagStripOffsets:
      case kTagSamplesPerPixel:
      case kTagRowsPerStrip:
      case kTagStripByteCounts:
      case kTagPlanarConfiguration:
      case kTagSampleFormat:
        tags[tag] = tiff.values(entry);
        break;
      case kTagTileWidth:
        throw UnsupportedFeature("unsupported TIFF feature: tiled organisation");
      default:
        break;  // GeoTIFF keys, photometric, resolution, ...
    }
  }
  auto scalar = [&](std::uint16_t tag, std::optional<std::uint32_t> fallback) -> std::uint32_t {
    auto it = tags.find(tag);
    if (it == tags.end() || it->second.empty()) {
      if (fallback) return *fallback;
      throw ParseError("TIFF is missing required tag " + std::to_string(tag));
    }
    return it->second.front();
  };
  auto all_equal = [&](std::uint16_t tag, std::uint32_t expected, std::uint32_t fallback) {
    auto it = tags.find(tag);
    if (it == tags.end()) return fallback == expected;
    return std::all_of(it->second.begin(), it->second.end(),
                       [&](std::uint32_t v) { return v == expected; });
  };

  const std::size_t width = scalar(kTagImageWidth, std::nullopt);
  const std::size_t height = scalar(kTagImageLength, std::nullopt);
  if (const auto c = scalar(kTagCompression, 1); c != 1) {
    throw UnsupportedFeature("unsupported TIFF feature: compression " + std::to_string(c));
  }
  if (!all_equal(kTagBitsPerSample, 8, 1)) {
    throw UnsupportedFeature("unsupported TIFF feature: BitsPerSample must be 8");
  }
  if (const auto spp = scalar(kTagSamplesPerPixel, 1); spp != 1) {
    throw UnsupportedFeature("unsupported TIFF feature: " + std::to_string(spp) +
                             " samples per pixel");
  }
  if (!all_equal(kTagSampleFormat, 1, 1)) {
    throw UnsupportedFeature("unsupported TIFF feature: non-integer sample format");
  }
  if (scalar(kTagPlanarConfiguration, 1) != 1) {
    throw UnsupportedFeature("unsupported TIFF feature: planar configuration");
  }
  if (width == 0 || height == 0) throw ParseError("TIFF has zero dimensions");

  const std::size_t rows_per_strip =
      std::min<std::size_t>(scalar(kTagRowsPerStrip, 0xFFFFFFFFu), height);
  if (rows_per_strip == 0) throw ParseError("TIFF RowsPerStrip is zero");
  const auto offsets = tags.count(kTagStripOffsets) ? tags.at(kTagStripOffsets)
                                                    : throw ParseError("TIFF has no StripOffsets");
  const auto counts = tags.count(kTagStripByteCounts)
                          ? tags.at(kTagStripByteCounts)
                          : throw ParseError("TIFF has no StripByteCounts");
  const std::size_t strips = (height + rows_per_strip - 1) / rows_per_strip;
  if (offsets.size() != strips || counts.size() != strips) {
    throw ParseError("TIFF strip tables have " + std::to_string(offsets.size()) +
                     " entries, expected " + std::to_string(strips));
  }

  std::vector<std::uint8_t> pixels(width * height);
  for (std::size_t s = 0; s < strips; ++s) {
    const std::size_t rows = std::min(rows_per_strip, height - s * rows_per_strip);
    const std::size_t expected = rows * width;
    if (counts[s] < expected) {
      throw IoError("truncated TIFF strip " + std::to_string(s) + ": " +
                    std::to_string(counts[s]) + " bytes, expected " + std::to_string(expected));
    }
    if (offsets[s] > bytes.size() || counts[s] > bytes.size() - offsets[s]) {
      throw IoError("truncated TIFF strip " + std::to_string(s) + ": data runs past end of file");
    }
    std::copy_n(bytes.begin() + offsets[s], expected,
                pixels.begin() + static_cast<std::ptrdiff_t>(s * rows_per_strip * width));
  }
  return Grid<std::uint8_t>(width, height, std::move(pixels));
}

std::vector<std::uint8_t> encode_tiff(const Grid<std::uint8_t>& grid, ByteOrder order,
                                      std::size_t rows_per_strip) {
  if (grid.empty()) throw DomainError("cannot encode an empty grid as TIFF");
  const bool little = order == ByteOrder::kLittle;
  const std::size_t width = grid.width();
  const std::size_t height = grid.height();
  if (rows_per_strip == 0 || rows_per_strip > height) rows_per_strip = height;
  const std::size_t strips = (height + rows_per_strip - 1) / rows_per_strip;

  std::vector<std::uint8_t> out;
  auto put16 = [&](std::uint16_t v) {
    if (little) {
      out.push_back(static_cast<std::uint8_t>(v));
      out.push_back(static_cast<std::uint8_t>(v >> 8));
    } else {
      out.push_back(static_cast<std::uint8_t>(v >> 8));
      out.push_back(static_cast<std::uint8_t>(v));
    }
  };
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      const int shift = little ? 8 * i : 8 * (3 - i);
      out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
  };

  out.push_back(little ? 'I' : 'M');
  out.push_back(little ? 'I' : 'M');
  put16(42);
  const std::size_t pixel_start = 8;
  std::size_t ifd = pixel_start + grid.size();
  ifd += ifd % 2;
  put32(static_cast<std::uint32_t>(ifd));
  out.insert(out.end(), grid.values().begin(), grid.values().end());
  out.resize(ifd, 0);

  constexpr std::uint16_t kEntries = 9;
  const std::size_t arrays = ifd + 2 + 12 * kEntries + 4;
  const std::size_t offsets_at = arrays;
  const std::size_t counts_at = arrays + 4 * strips;

  struct Entry {
    std::uint16_t tag, type;
    std::uint32_t count, value;
  };
  const auto strip_bytes = [&](std::size_t s) {
    return static_cast<std::uint32_t>(std::min(rows_per_strip, height - s * rows_per_strip) * width);
  };
  const Entry table[kEntries] = {
      {kTagImageWidth, kTypeLong, 1, static_cast<std::uint32_t>(width)},
      {kTagImageLength, kTypeLong, 1, static_cast<std::uint32_t>(height)},
      {kTagBitsPerSample, kTypeShort, 1, 8},
      {kTagCompression, kTypeShort, 1, 1},
      {kTagPhotometric, kTypeShort, 1, 1},
      {kTagStripOffsets, kTypeLong, static_cast<std::uint32_t>(strips),
       strips == 1 ? static_cast<std::uint32_t>(pixel_start) : static_cast<std::uint32_t>(offsets_at)},
      {kTagSamplesPerPixel, kTypeShort, 1, 1},
      {kTagRowsPerStrip, kTypeLong, 1, static_cast<std::uint32_t>(rows_per_strip)},
      {kTagStripByteCounts, kTypeLong, static_cast<std::uint32_t>(strips),
       strips == 1 ? strip_bytes(0) : static_cast<std::uint32_t>(counts_at)},
  };
  put16(kEntries);
  for (const auto& e : table) {
    put16(e.tag);
    put16(e.type);
    put32(e.count);
    if (e.type == kTypeShort) {
      put16(static_cast<std::uint16_t>(e.value));
      put16(0);
    } else {
      put32(e.value);
    }
  }
  put32(0);
  if (strips > 1) {
    for (std::size_t s = 0; s < strips; ++s) {
      put32(static_cast<std::uint32_t>(pixel_start + s * rows_per_strip * width));
    }
    for (std::size_t s = 0; s < strips; ++s) put32(strip_bytes(s));
  }
  return out;
}

Grid<std::uint8_t> decode_pgm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_number = [&](const char* what) {
    skip_space();
    std::size_t value = 0;
    std::size_t digits = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos++] - '0');
      if (++digits > 9) throw ParseError(std::string("PGM ") + what + " too large");
    }
    if (digits == 0) throw ParseError(std::string("PGM header: expected ") + what);
    return value;
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw ParseError("not a binary PGM (P5) file");
  }
  pos = 2;
  const std::size_t width = read_number("width");
  const std::size_t height = read_number("height");
  const std::size_t maxval = read_number("maxval");
  if (maxval == 0 || maxval > 255) {
    throw UnsupportedFeature("unsupported PGM maxval " + std::to_string(maxval));
  }
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw ParseError("PGM header not terminated");
  ++pos;
  if (width == 0 || height == 0) throw ParseError("PGM has zero dimensions");
  if (bytes.size() - pos < width * height) throw IoError("truncated PGM pixel data");
  std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + width * height));
  return Grid<std::uint8_t>(width, height, std::move(pixels));
}

std::vector<std::uint8_t> encode_pgm(const Grid<std::uint8_t>& grid,
                                     const std::vector<std::string>& comment) {
  std::string header = "P5\n";
  for (const auto& line : comment) header += "# " + line + "\n";
  header += std::to_string(grid.width()) + " " + std::to_string(grid.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), grid.values().begin(), grid.values().end());
  return out;
}

BandRaster read_band_raster(const fs::path& path, int band_number) {
  const auto bytes = read_file_bytes(path);
  BandRaster raster;
  raster.band_number = band_number;
  try {
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
      raster.nd = decode_pgm(bytes);
    } else {
      raster.nd = decode_tiff(bytes);
    }
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  } catch (const UnsupportedFeature& e) {
    throw UnsupportedFeature(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return raster;
}

ScenePackage load_package(const ScenePackageRef& ref, const SensorTable& fallback) {
  ScenePackage pkg;
  pkg.metadata = read_mtl_file(ref.mtl_file, fallback);
  std::map<int, std::future<BandRaster>> pending;
  for (int band : kReflectiveBands) {
    auto it = ref.band_files.find(band);
    if (it == ref.band_files.end()) {
      throw IoError("scene " + ref.scene_id + " is missing band " + std::to_string(band));
    }
    pending[band] = std::async(std::launch::async, [path = it->second, band] {
      return read_band_raster(path, band);
    });
  }
  for (auto& [band, future] : pending) {
    BandRaster raster = future.get();
    if (raster.width() != static_cast<std::size_t>(pkg.metadata.cols) ||
        raster.height() != static_cast<std::size_t>(pkg.metadata.rows)) {
      throw IoError("band " + std::to_string(band) + " is " + std::to_string(raster.width()) +
                    "x" + std::to_string(raster.height()) + " but the MTL declares " +
                    std::to_string(pkg.metadata.cols) + "x" + std::to_string(pkg.metadata.rows));
    }
    const auto peak = *std::max_element(raster.nd.values().begin(), raster.nd.values().end());
    if (peak > pkg.metadata.dmax) {
      throw DomainError("band " + std::to_string(band) + " holds ND " + std::to_string(peak) +
                        " above QCALMAX " + std::to_string(pkg.metadata.dmax));
    }
    pkg.bands.emplace(band, std::move(raster));
  }
  return pkg;
}

}  // namespace aquacad
