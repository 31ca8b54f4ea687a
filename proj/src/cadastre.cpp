#include "aquacad/cadastre.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "aquacad/errors.hpp"
#include "aquacad/ingest.hpp"
#include "text_util.hpp"

namespace aquacad {

namespace fs = std::filesystem;

namespace {

template <typename T>
void put_optional(nlohmann::json& j, const char* key, const std::optional<T>& value) {
  j[key] = value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

template <typename T>
std::optional<T> get_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

void to_json(nlohmann::json& j, const CadastralRecord& r) {
  j = nlohmann::json::object();
  j["id"] = r.id;
  j["scene_id"] = r.scene_id;
  j["year"] = r.year;
  j["name"] = r.name;
  j["cuenca"] = r.cuenca;
  j["area_km2"] = r.area_km2;
  put_optional(j, "perimeter_km", r.perimeter_km);
  j["centroid_lat"] = r.centroid_lat;
  j["centroid_lon"] = r.centroid_lon;
  put_optional(j, "region", r.region);
  put_optional(j, "provincia", r.provincia);
  put_optional(j, "distrito", r.distrito);
  j["registered_at"] = r.registered_at;
  auto ring = nlohmann::json::array();
  for (const auto& v : r.border_ring) ring.push_back({v.lon, v.lat});
  j["border_ring"] = std::move(ring);
  put_optional(j, "mask_file", r.mask_file);
}

void from_json(const nlohmann::json& j, CadastralRecord& r) {
  r.id = j.value("id", std::int64_t{0});
  r.scene_id = j.at("scene_id").get<std::string>();
  r.year = j.at("year").get<int>();
  r.name = j.at("name").get<std::string>();
  r.cuenca = j.value("cuenca", std::string{});
  r.area_km2 = j.at("area_km2").get<double>();
  r.perimeter_km = get_optional<double>(j, "perimeter_km");
  r.centroid_lat = j.at("centroid_lat").get<double>();
  r.centroid_lon = j.at("centroid_lon").get<double>();
  r.region = get_optional<std::string>(j, "region");
  r.provincia = get_optional<std::string>(j, "provincia");
  r.distrito = get_optional<std::string>(j, "distrito");
  r.registered_at = j.value("registered_at", std::string{});
  r.border_ring.clear();
  if (j.contains("border_ring")) {
    for (const auto& v : j.at("border_ring")) r.border_ring.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  }
  r.mask_file = get_optional<std::string>(j, "mask_file");
}

std::vector<std::string> validate(const CadastralRecord& r) {
  std::vector<std::string> bad;
  if (!is_landsat5_scene_id(r.scene_id)) bad.push_back("scene_id");
  if (auto year = scene_year(r.scene_id); year && *year != r.year) bad.push_back("year");
  if (r.name.empty()) bad.push_back("name");
  if (!(r.area_km2 > 0) || !std::isfinite(r.area_km2)) bad.push_back("area_km2");
  if (r.perimeter_km && !(*r.perimeter_km >= 0)) bad.push_back("perimeter_km");
  if (!(std::abs(r.centroid_lat) <= 90)) bad.push_back("centroid_lat");
  if (!(std::abs(r.centroid_lon) <= 180)) bad.push_back("centroid_lon");
  for (const auto& v : r.border_ring) {
    if (!(std::abs(v.lat) <= 90 && std::abs(v.lon) <= 180)) {
      bad.push_back("border_ring");
      break;
    }
  }
  return bad;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

nlohmann::json header_line() {
  return {{"schema", "aquacad-registry"}, {"version", Registry::kSchemaVersion}};
}

class FileLock {
 public:
  explicit FileLock(const fs::path& path) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw IoError("cannot open registry " + path.string() + ": " + std::strerror(errno));
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw IoError("cannot lock registry " + path.string() + ": " + std::strerror(errno));
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

  void write_all(const std::string& data) const {
    const char* p = data.data();
    std::size_t left = data.size();
    while (left > 0) {
      const ssize_t n = ::write(fd_, p, left);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw IoError(std::string("registry write failed: ") + std::strerror(errno));
      }
      p += n;
      left -= static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0) throw IoError(std::string("registry fsync failed: ") + std::strerror(errno));
  }

 private:
  int fd_ = -1;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string sanitize(std::string_view name) {
  std::string out;
  for (char ch : name) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                    ch == '-' || ch == '_';
    out += ok ? ch : '_';
  }
  return out.empty() ? "_" : out;
}

}  // namespace

std::vector<CadastralRecord> parse_registry(std::string_view text) {
  std::vector<CadastralRecord> records;
  std::size_t pos = 0;
  int line_no = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = detail::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("registry is not valid JSON: ") + e.what(), line_no);
    }
    if (!header_seen) {
      if (!j.is_object() || j.value("schema", "") != "aquacad-registry") {
        throw ParseError("registry header line missing", line_no);
      }
      if (j.value("version", 0) > Registry::kSchemaVersion) {
        throw ParseError("registry schema version " + std::to_string(j.value("version", 0)) + " is newer than supported",
                         line_no);
      }
      header_seen = true;
      continue;
    }
    try {
      records.push_back(j.get<CadastralRecord>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad registry record: ") + e.what(), line_no);
    }
  }
  return records;
}

Registry::Registry(fs::path path) : path_(std::move(path)) {}

std::vector<CadastralRecord> Registry::load() const {
  std::lock_guard lock(mutex_);
  return parse_registry(read_text(path_));
}

std::vector<CadastralRecord> Registry::find(const std::string& name) const {
  auto records = load();
  std::erase_if(records, [&](const auto& r) { return r.name != name; });
  return records;
}

std::int64_t Registry::append(CadastralRecord record) {
  if (auto bad = validate(record); !bad.empty()) throw ValidationError(std::move(bad));
  std::lock_guard lock(mutex_);
  if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
  const FileLock file(path_);
  const std::string existing_text = read_text(path_);
  const auto existing = parse_registry(existing_text);
  std::int64_t next_id = 1;
  for (const auto& r : existing) {
    if (r.scene_id == record.scene_id && r.name == record.name) {
      throw Conflict("record for '" + record.name + "' in scene " + record.scene_id + " already exists");
    }
    next_id = std::max(next_id, r.id + 1);
  }
  record.id = next_id;
  if (record.registered_at.empty()) record.registered_at = utc_timestamp();

  std::string out;
  if (detail::trim(existing_text).empty()) out += header_line().dump() + "\n";
  else if (existing_text.back() != '\n') out += "\n";
  out += nlohmann::json(record).dump() + "\n";
  file.write_all(out);
  return record.id;
}

fs::path Registry::mask_directory() const {
  return path_.parent_path() / (path_.stem().string() + "_masks");
}

std::string Registry::store_mask(const std::string& scene_id, const std::string& name, const Mask& mask,
                                 PixelCoord origin) const {
  const fs::path dir = mask_directory();
  fs::create_directories(dir);
  Grid<std::uint8_t> image(mask.width(), mask.height());
  std::transform(mask.values().begin(), mask.values().end(), image.values().begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 255 : 0); });
  const std::string file = sanitize(scene_id) + "_" + sanitize(name) + ".pgm";
  write_file_bytes(dir / file, encode_pgm(image, {"scene " + scene_id, "origin_row " + std::to_string(origin.row),
                                                  "origin_col " + std::to_string(origin.col)}));
  return (fs::path(dir.filename()) / file).string();
}

// ---------------------------------------------------------------------------
// Timeline

Timeline timeline(std::span<const CadastralRecord> records, const std::string& name) {
  std::map<int, const CadastralRecord*> by_year;
  for (const auto& r : records) {
    if (r.name != name) continue;
    auto& slot = by_year[r.year];
    if (!slot || r.id >= slot->id) slot = &r;
  }
  if (by_year.empty()) throw NotFound("no records for water body '" + name + "'");
  Timeline t{name, {}, {}};
  for (const auto& [year, r] : by_year) t.points.push_back({year, r->area_km2});
  for (std::size_t i = 1; i < t.points.size(); ++i) {
    // areas are stated to 1e-4 km^2; snapping the difference to that grid
    // gives 1.9953 - 1.7739 == 0.2214 rather than 0.22140000000000004
    const double d = t.points[i].area_km2 - t.points[i - 1].area_km2;
    t.deltas.push_back(std::round(d * kAreaScale) / kAreaScale + 0.0);  // + 0.0 drops -0
  }
  return t;
}

// ---------------------------------------------------------------------------
// KML

Ring decimate_ring(const Ring& ring, std::size_t max_vertices) {
  if (ring.size() <= max_vertices || max_vertices < 4) return ring;
  const bool closed = ring.front() == ring.back();
  const std::size_t open = closed ? ring.size() - 1 : ring.size();
  const std::size_t keep = max_vertices - 1;
  Ring out;
  out.reserve(max_vertices);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(ring[i * open / keep]);
  out.push_back(out.front());
  return out;
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string coordinate(const LonLat& v) {
  return detail::format_double(v.lon) + "," + detail::format_double(v.lat);
}

void data(std::ostringstream& out, std::string_view key, const std::string& value) {
  out << "        <Data name=\"" << key << "\"><value>" << xml_escape(value) << "</value></Data>\n";
}

}  // namespace

std::string export_kml(std::span<const CadastralRecord> records) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<kml xmlns=\"http://www.opengis.net/kml/2.2\">\n"
      << "  <Document>\n"
      << "    <name>Water body cadastre</name>\n";
  for (const auto& r : records) {
    out << "    <Placemark>\n"
        << "      <name>" << xml_escape(r.name) << "</name>\n"
        << "      <description>" << xml_escape(r.name + " (" + std::to_string(r.year) + "), basin " + r.cuenca)
        << "</description>\n"
        << "      <ExtendedData>\n";
    data(out, "scene_id", r.scene_id);
    data(out, "year", std::to_string(r.year));
    data(out, "cuenca", r.cuenca);
    data(out, "area_km2", detail::format_double(r.area_km2));
    if (r.perimeter_km) data(out, "perimeter_km", detail::format_double(*r.perimeter_km));
    if (r.region) data(out, "region", *r.region);
    if (r.provincia) data(out, "provincia", *r.provincia);
    if (r.distrito) data(out, "distrito", *r.distrito);
    out << "      </ExtendedData>\n";
    const std::string point =
        "<Point><coordinates>" + coordinate({r.centroid_lon, r.centroid_lat}) + "</coordinates></Point>";
    if (r.border_ring.size() >= 4) {
      out << "      <MultiGeometry>\n        " << point << "\n"
          << "        <Polygon><outerBoundaryIs><LinearRing><coordinates>";
      const Ring ring = decimate_ring(r.border_ring);
      for (std::size_t i = 0; i < ring.size(); ++i) out << (i ? " " : "") << coordinate(ring[i]);
      out << "</coordinates></LinearRing></outerBoundaryIs></Polygon>\n"
          << "      </MultiGeometry>\n";
    } else {
      out << "      " << point << "\n";
    }
    out << "    </Placemark>\n";
  }
  out << "  </Document>\n</kml>\n";
  return out.str();
}

}  // namespace aquacad
