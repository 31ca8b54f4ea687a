#pragma once

#include <cstdint>
#include <map>

#include "aquacad/grid.hpp"
#include "aquacad/ingest.hpp"
#include "aquacad/sensor_table.hpp"

namespace aquacad {

struct BandCalibration {
  int band = 0;
  double lmin = 0;
  double lmax = 0;
  double esun = 0;  // exo-atmospheric solar irradiance
  int dmax = 255;

  /// Throws DomainError unless lmax > lmin, esun > 0 and dmax >= 1.
  void validate() const;

  /// Radiance bounds and dmax from the MTL, irradiance from the sensor table.
  static BandCalibration from(const MtlMetadata& metadata, int band,
                              const SensorTable& table = SensorTable::standard());
};

struct SolarGeometry {
  int day_of_year = 0;
  double elevation_deg = 0;
  double zenith_deg = 0;          // 90 - elevation
  double earth_sun_distance = 1;  // AU

  static SolarGeometry from(int day_of_year, double elevation_deg);
};

/// Dark-object subtraction inputs. `t1` is the downward transmittance per
/// band, `t2` the upward transmittance (cos z).
struct AtmosphericParams {
  std::map<int, double> dark_radiance;
  std::map<int, double> t1;
  double t2 = 1;

  double downward(int band) const;
};

/// Per-band downward transmittance: 0.70, 0.78, 0.85, 0.91 for bands 1-4
/// and 1.0 for the SWIR bands 5 and 7.
double default_downward_transmittance(int band);

inline constexpr double kDefaultDarkObjectFraction = 1e-4;

/// L = lmin + nd * (lmax - lmin) / dmax. Throws DomainError if nd is
/// outside [0, dmax].
double radiance_of(int nd, const BandCalibration& cal);

/// d = 1 - 0.01674 cos(0.98563 (dda - 4)), cosine argument in degrees.
double earth_sun_distance(int day_of_year);

/// Top-of-atmosphere reflectance pi d^2 L / (E cos z).
double toa_reflectance(double radiance, const BandCalibration& cal, const SolarGeometry& sol);

/// Smallest ND whose cumulative histogram count reaches `fraction` of the
/// pixels.
int dark_object_level(const Grid<std::uint8_t>& nd, double fraction = kDefaultDarkObjectFraction);

/// Radiance of the dark-object level.
double dark_object_radiance(const Grid<std::uint8_t>& nd, const BandCalibration& cal,
                            double fraction = kDefaultDarkObjectFraction);

/// Surface reflectance pi d^2 (L - La) / (E cos z t1 t2). Negative values
/// are returned as-is.
double surface_reflectance(double radiance, double dark_radiance, const BandCalibration& cal,
                           const SolarGeometry& sol, const AtmosphericParams& atm);

struct ReflectanceStack {
  MtlMetadata metadata;
  SolarGeometry solar;
  AtmosphericParams atmosphere;
  std::map<int, Grid<float>> bands;
  std::map<int, std::size_t> negative_counts;

  std::size_t width() const;
  std::size_t height() const;
  const Grid<float>& band(int number) const;  // NotFound if absent
};

struct CalibrationOptions {
  double dark_object_fraction = kDefaultDarkObjectFraction;
  /// Replaces the histogram-derived dark radiance for the listed bands.
  std::map<int, double> dark_radiance_override;
};

/// ND -> radiance -> surface reflectance for the six reflective bands
/// (bands processed in parallel).
ReflectanceStack calibrate_scene(const ScenePackage& pkg, const CalibrationOptions& options = {},
                                 const SensorTable& table = SensorTable::standard());

}  // namespace aquacad
