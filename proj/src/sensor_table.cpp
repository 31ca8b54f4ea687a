#include "aquacad/sensor_table.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aquacad/errors.hpp"

#ifndef AQUACAD_DATA_DIR
#define AQUACAD_DATA_DIR "data"
#endif

namespace aquacad {

SensorTable SensorTable::parse(std::string_view text) {
  SensorTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first == "version") {
      if (!(fields >> table.version_) || table.version_ < 1) {
        throw ParseError("bad version line", line_no);
      }
      continue;
    }
    int band = 0;
    SensorBand values;
    try {
      band = std::stoi(first);
    } catch (const std::exception&) {
      throw ParseError("expected band number, got '" + first + "'", line_no);
    }
    if (!(fields >> values.lmin >> values.lmax >> values.esun)) {
      throw ParseError("expected 'band lmin lmax esun'", line_no);
    }
    std::string extra;
    if (fields >> extra) throw ParseError("trailing field '" + extra + "'", line_no);
    if (!(values.lmax > values.lmin) || !(values.esun > 0)) {
      throw ParseError("band " + std::to_string(band) +
                           " needs lmax > lmin and esun > 0",
                       line_no);
    }
    if (!table.bands_.emplace(band, values).second) {
      throw ParseError("duplicate band " + std::to_string(band), line_no);
    }
  }
  if (table.version_ == 0) throw ParseError("sensor table has no version line");
  return table;
}

SensorTable SensorTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sensor table " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

const SensorTable& SensorTable::standard() {
  static const SensorTable table = [] {
    if (const char* env = std::getenv("AQUACAD_SENSOR_TABLE"); env && *env) {
      return load(env);
    }
    return load(std::filesystem::path(AQUACAD_DATA_DIR) / "tm5_sensor_constants.txt");
  }();
  return table;
}

const SensorBand& SensorTable::band(int band) const {
  auto it = bands_.find(band);
  if (it == bands_.end()) {
    throw NotFound("sensor table has no band " + std::to_string(band));
  }
  return it->second;
}

}  // namespace aquacad
