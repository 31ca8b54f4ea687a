#include "aquacad/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "aquacad/errors.hpp"

namespace aquacad {

double Ellipsoid::first_eccentricity() const {
  return std::sqrt(semi_major * semi_major - semi_minor * semi_minor) / semi_major;
}

double Ellipsoid::second_eccentricity() const {
  return std::sqrt(semi_major * semi_major - semi_minor * semi_minor) / semi_minor;
}

double Ellipsoid::polar_radius() const { return semi_major * semi_major / semi_minor; }

GeodeticCoord utm_to_geodetic(const UtmCoord& u, LatitudeSeries series) {
  if (u.zone < 1 || u.zone > 60) {
    throw DomainError("UTM zone must be in 1..60, got " + std::to_string(u.zone));
  }
  const Ellipsoid ellipsoid = Ellipsoid::hayford();
  const double ep = ellipsoid.second_eccentricity();
  const double ep2 = ep * ep;
  const double c = ellipsoid.polar_radius();

  double y = u.northing;
  if (y < 0) y += 10000000.0;
  const double x = u.easting - 500000.0;
  if (u.hemisphere == Hemisphere::kSouth) y -= 10000000.0;
  const double central_meridian = u.zone * 6.0 - 183.0;

  const double phi = y / (6366197.724 * 0.9996);
  const double cos_phi = std::cos(phi);
  const double cos2 = cos_phi * cos_phi;
  const double nu = c * 0.9996 / std::sqrt(1 + ep2 * cos2);
  const double a = x / nu;
  const double a1 = std::sin(2 * phi);
  const double a2 = a1 * cos2;
  const double j2 = phi + a1 / 2;
  const double j4 = (3 * j2 + a2) / 4;
  const double j6 = (5 * j4 + a2 * cos2) / 3;
  const double alpha = 0.75 * ep2;
  const double beta = 5 * alpha * alpha / 3;
  const double gamma = 35 * alpha * alpha * alpha / 27;
  const double b_phi = 0.9996 * c * (phi - alpha * j2 + beta * j4 - gamma * j6);
  const double b = (y - b_phi) / nu;
  const double zeta = ep2 * a * a * cos2 / 2;
  const double xi = a * (1 - zeta / 3);
  const double eta = series == LatitudeSeries::kZeta ? b * (1 - zeta) + phi : b * (1 - xi) + phi;
  const double delta_lambda = std::atan(std::sinh(xi) / std::cos(eta));
  const double tau = std::atan(std::cos(delta_lambda) * std::tan(eta));

  GeodeticCoord out;
  out.longitude = delta_lambda * 180 / std::numbers::pi + central_meridian;
  out.latitude = (phi + (1 + ep2 * cos2 - 1.5 * ep2 * std::sin(phi) * cos_phi * (tau - phi)) * (tau - phi)) *
                 180 / std::numbers::pi;
  return out;
}

std::string to_string(AdminLevel level) {
  switch (level) {
    case AdminLevel::kRegion: return "region";
    case AdminLevel::kProvincia: return "provincia";
    case AdminLevel::kDistrito: return "distrito";
  }
  return "unknown";
}

AdminLevel parse_admin_level(std::string_view text) {
  if (text == "region") return AdminLevel::kRegion;
  if (text == "provincia") return AdminLevel::kProvincia;
  if (text == "distrito") return AdminLevel::kDistrito;
  throw ParseError("unknown administrative level '" + std::string(text) + "'");
}

AdminBoundarySet::AdminBoundarySet(std::vector<AdminBoundary> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.name.empty()) throw ParseError("boundary entry without a name");
    const std::size_t needed_parents = e.level == AdminLevel::kDistrito    ? 2
                                       : e.level == AdminLevel::kProvincia ? 1
                                                                           : 0;
    if (e.parents.size() < needed_parents) {
      throw ParseError(to_string(e.level) + " '" + e.name + "' needs " + std::to_string(needed_parents) +
                       " parent names");
    }
    if (e.rings.empty()) throw ParseError("'" + e.name + "' has no rings");
    for (const auto& ring : e.rings) {
      if (ring.size() < 4 || !(ring.front() == ring.back())) {
        throw ParseError("'" + e.name + "' has a ring that is not closed or has fewer than 4 vertices");
      }
    }
  }
}

AdminBoundarySet AdminBoundarySet::parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("boundary JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("boundary JSON must be a top-level list");
  std::vector<AdminBoundary> entries;
  try {
    for (const auto& item : doc) {
      AdminBoundary b;
      b.name = item.at("name").get<std::string>();
      b.level = parse_admin_level(item.at("level").get<std::string>());
      if (item.contains("parents")) b.parents = item.at("parents").get<std::vector<std::string>>();
      for (const auto& ring : item.at("rings")) {
        Ring r;
        for (const auto& v : ring) {
          if (!v.is_array() || v.size() < 2) throw ParseError("vertex of '" + b.name + "' is not [lon, lat]");
          r.push_back({v[0].get<double>(), v[1].get<double>()});
        }
        b.rings.push_back(std::move(r));
      }
      entries.push_back(std::move(b));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("boundary JSON: ") + e.what());
  }
  return AdminBoundarySet(std::move(entries));
}

AdminBoundarySet AdminBoundarySet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open boundary file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

namespace {

bool on_segment(double x, double y, const LonLat& a, const LonLat& b) {
  const double cross = (b.lon - a.lon) * (y - a.lat) - (b.lat - a.lat) * (x - a.lon);
  const double scale = std::max({std::abs(b.lon - a.lon), std::abs(b.lat - a.lat), 1e-300});
  if (std::abs(cross) > 1e-12 * scale) return false;
  return x >= std::min(a.lon, b.lon) && x <= std::max(a.lon, b.lon) && y >= std::min(a.lat, b.lat) &&
         y <= std::max(a.lat, b.lat);
}

}  // namespace

bool point_in_rings(double lon, double lat, const std::vector<Ring>& rings) {
  bool inside = false;
  for (const auto& ring : rings) {
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
      const auto& a = ring[i];
      const auto& b = ring[j];
      if (on_segment(lon, lat, a, b)) return true;
      if ((a.lat > lat) != (b.lat > lat)) {
        const double x_cross = a.lon + (lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
        if (lon < x_cross) inside = !inside;
      }
    }
  }
  return inside;
}

AdminLocation locate_admin(const GeodeticCoord& p, const AdminBoundarySet& boundaries) {
  for (AdminLevel level : {AdminLevel::kDistrito, AdminLevel::kProvincia, AdminLevel::kRegion}) {
    std::vector<const AdminBoundary*> hits;
    for (const auto& e : boundaries.entries()) {
      if (e.level == level && point_in_rings(p.longitude, p.latitude, e.rings)) hits.push_back(&e);
    }
    if (hits.empty()) continue;
    std::sort(hits.begin(), hits.end(), [](const auto* a, const auto* b) { return a->name < b->name; });
    const AdminBoundary& hit = *hits.front();
    AdminLocation loc;
    loc.ambiguous = hits.size() > 1;
    switch (level) {
      case AdminLevel::kDistrito:
        loc.distrito = hit.name;
        loc.region = hit.parents[0];
        loc.provincia = hit.parents[1];
        break;
      case AdminLevel::kProvincia:
        loc.provincia = hit.name;
        loc.region = hit.parents[0];
        break;
      case AdminLevel::kRegion:
        loc.region = hit.name;
        break;
    }
    return loc;
  }
  return {};
}

}  // namespace aquacad
