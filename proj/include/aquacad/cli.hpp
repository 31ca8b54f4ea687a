#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aquacad/render.hpp"

namespace aquacad {

/// Command-line settings. Precedence: flag, then config file, then the
/// AQUA_DATA_ROOT environment variable (data root only), then defaults.
struct CliConfig {
  std::filesystem::path data_root;
  std::filesystem::path registry_path;  // default <data_root>/registry.jsonl
  std::filesystem::path boundaries_path;
  int window = 101;
  int max_radius = 25;
  double min_separability = 0.75;
  Stretch stretch;
};

/// Malformed arguments; the CLI exits with 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config file: one `key = value` per line, '#' starts a comment. Keys:
/// data_root, registry, boundaries, window, max_radius, min_separability,
/// stretch_low, stretch_high. Unknown keys and bad values raise UsageError.
CliConfig parse_cli_config(std::string_view text, CliConfig base = {});

/// "COL,ROW" or "E,N" pairs.
std::pair<long, long> parse_int_pair(std::string_view text);
std::pair<double, double> parse_real_pair(std::string_view text);

/// Runs one command. JSON results go to `out`, diagnostics to `err`.
/// Returns 0 on success, 1 on a domain error, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aquacad
