#include "aquacad/calibration.hpp"

#include <array>
#include <cmath>
#include <future>
#include <numbers>

#include "aquacad/errors.hpp"

namespace aquacad {

namespace {
double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
}  // namespace

void BandCalibration::validate() const {
  if (!(lmax > lmin)) throw DomainError("band " + std::to_string(band) + ": lmax must exceed lmin");
  if (!(esun > 0)) throw DomainError("band " + std::to_string(band) + ": irradiance must be positive");
  if (dmax < 1) throw DomainError("band " + std::to_string(band) + ": dmax must be at least 1");
}

BandCalibration BandCalibration::from(const MtlMetadata& metadata, int band,
                                      const SensorTable& table) {
  auto it = metadata.radiance.find(band);
  if (it == metadata.radiance.end()) {
    throw NotFound("metadata has no radiance bounds for band " + std::to_string(band));
  }
  BandCalibration cal{band, it->second.lmin, it->second.lmax, table.band(band).esun, metadata.dmax};
  cal.validate();
  return cal;
}

SolarGeometry SolarGeometry::from(int day_of_year, double elevation_deg) {
  if (!(elevation_deg > 0 && elevation_deg < 90)) {
    throw DomainError("sun elevation must be in (0, 90) degrees");
  }
  return {day_of_year, elevation_deg, 90.0 - elevation_deg, aquacad::earth_sun_distance(day_of_year)};
}

double AtmosphericParams::downward(int band) const {
  auto it = t1.find(band);
  return it == t1.end() ? default_downward_transmittance(band) : it->second;
}

double default_downward_transmittance(int band) {
  switch (band) {
    case 1: return 0.70;
    case 2: return 0.78;
    case 3: return 0.85;
    case 4: return 0.91;
    case 5:
    case 7: return 1.0;
    default: throw DomainError("no transmittance for band " + std::to_string(band));
  }
}

double radiance_of(int nd, const BandCalibration& cal) {
  if (nd < 0 || nd > cal.dmax) {
    throw DomainError("digital number " + std::to_string(nd) + " outside [0, " +
                      std::to_string(cal.dmax) + "]");
  }
  // lerp is exact at both ends, the textbook lmin + nd (lmax - lmin) / dmax
  // misses lmax by an ulp for some bounds
  return std::lerp(cal.lmin, cal.lmax, static_cast<double>(nd) / cal.dmax);
}

double earth_sun_distance(int day_of_year) {
  if (day_of_year < 1 || day_of_year > 366) {
    throw DomainError("day of year " + std::to_string(day_of_year) + " outside 1..366");
  }
  return 1.0 - 0.01674 * std::cos(deg2rad(0.98563 * (day_of_year - 4)));
}

double toa_reflectance(double radiance, const BandCalibration& cal, const SolarGeometry& sol) {
  const double d = sol.earth_sun_distance;
  return std::numbers::pi * d * d * radiance / (cal.esun * std::cos(deg2rad(sol.zenith_deg)));
}

int dark_object_level(const Grid<std::uint8_t>& nd, double fraction) {
  if (nd.empty()) throw DomainError("dark object of an empty grid");
  std::array<std::size_t, 256> histogram{};
  for (auto v : nd.values()) ++histogram[v];
  const double target = fraction * static_cast<double>(nd.size());
  std::size_t cumulative = 0;
  for (int level = 0; level < 256; ++level) {
    cumulative += histogram[level];
    if (cumulative > 0 && static_cast<double>(cumulative) >= target) return level;
  }
  return 255;
}

double dark_object_radiance(const Grid<std::uint8_t>& nd, const BandCalibration& cal,
                            double fraction) {
  return radiance_of(dark_object_level(nd, fraction), cal);
}

double surface_reflectance(double radiance, double dark_radiance, const BandCalibration& cal,
                           const SolarGeometry& sol, const AtmosphericParams& atm) {
  const double d = sol.earth_sun_distance;
  return std::numbers::pi * d * d * (radiance - dark_radiance) /
         (cal.esun * std::cos(deg2rad(sol.zenith_deg)) * atm.downward(cal.band) * atm.t2);
}

std::size_t ReflectanceStack::width() const { return bands.empty() ? 0 : bands.begin()->second.width(); }
std::size_t ReflectanceStack::height() const { return bands.empty() ? 0 : bands.begin()->second.height(); }

const Grid<float>& ReflectanceStack::band(int number) const {
  auto it = bands.find(number);
  if (it == bands.end()) throw NotFound("reflectance stack has no band " + std::to_string(number));
  return it->second;
}

ReflectanceStack calibrate_scene(const ScenePackage& pkg, const CalibrationOptions& options,
                                 const SensorTable& table) {
  ReflectanceStack stack;
  stack.metadata = pkg.metadata;
  stack.solar = SolarGeometry::from(pkg.metadata.day_of_year, pkg.metadata.sun_elevation_deg);
  stack.atmosphere.t2 = std::cos(deg2rad(stack.solar.zenith_deg));

  std::map<int, BandCalibration> cals;
  for (int band : kReflectiveBands) {
    if (!pkg.bands.contains(band)) {
      throw IoError("scene " + pkg.metadata.scene_id + " is missing band " + std::to_string(band));
    }
    cals[band] = BandCalibration::from(pkg.metadata, band, table);
    stack.atmosphere.t1[band] = default_downward_transmittance(band);
    const auto& nd = pkg.bands.at(band).nd;
    auto override_it = options.dark_radiance_override.find(band);
    stack.atmosphere.dark_radiance[band] =
        override_it != options.dark_radiance_override.end()
            ? override_it->second
            : dark_object_radiance(nd, cals[band], options.dark_object_fraction);
  }

  struct BandResult {
    Grid<float> rho;
    std::size_t negatives = 0;
  };
  std::map<int, std::future<BandResult>> pending;
  for (int band : kReflectiveBands) {
    pending[band] = std::async(std::launch::async, [&, band] {
      const auto& cal = cals.at(band);
      const auto& nd = pkg.bands.at(band).nd;
      const double dark = stack.atmosphere.dark_radiance.at(band);
      // One lookup entry per possible digital number.
      std::vector<float> lut(static_cast<std::size_t>(cal.dmax) + 1);
      for (int level = 0; level <= cal.dmax; ++level) {
        lut[level] = static_cast<float>(
            surface_reflectance(radiance_of(level, cal), dark, cal, stack.solar, stack.atmosphere));
      }
      BandResult result{Grid<float>(nd.width(), nd.height()), 0};
      auto out = result.rho.values();
      auto in = nd.values();
      for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] > cal.dmax) {
          throw DomainError("band " + std::to_string(band) + " holds ND above dmax");
        }
        out[i] = lut[in[i]];
        result.negatives += out[i] < 0;
      }
      return result;
    });
  }
  for (auto& [band, future] : pending) {
    auto result = future.get();
    stack.bands.emplace(band, std::move(result.rho));
    stack.negative_counts[band] = result.negatives;
  }
  return stack;
}

}  // namespace aquacad
