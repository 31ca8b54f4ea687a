#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace aquacad {

struct SensorBand {
  double lmin = 0;
  double lmax = 0;
  double esun = 0;
};

/// Per-band radiometric constants of the TM sensor, loaded from the
/// versioned text table shipped in data/.
class SensorTable {
 public:
  static SensorTable parse(std::string_view text);
  static SensorTable load(const std::filesystem::path& path);

  /// Table at $AQUACAD_SENSOR_TABLE, or the copy installed with the build.
  /// Loaded once and cached.
  static const SensorTable& standard();

  int version() const noexcept { return version_; }
  const std::map<int, SensorBand>& bands() const noexcept { return bands_; }
  bool has(int band) const { return bands_.contains(band); }
  const SensorBand& band(int band) const;

 private:
  int version_ = 0;
  std::map<int, SensorBand> bands_;
};

}  // namespace aquacad
