#include "aquacad/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "aquacad/cadastre.hpp"
#include "aquacad/errors.hpp"
#include "aquacad/pipeline.hpp"
#include "aquacad/service.hpp"
#include "text_util.hpp"

namespace aquacad {

namespace fs = std::filesystem;
using nlohmann::json;

CliConfig parse_cli_config(std::string_view text, CliConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(detail::trim(s.substr(0, eq)));
    const std::string_view value = detail::trim(s.substr(eq + 1));
    auto bad = [&] { return UsageError("config line " + std::to_string(line_no) + ": bad value for " + key); };
    if (key == "data_root") {
      base.data_root = std::string(value);
    } else if (key == "registry") {
      base.registry_path = std::string(value);
    } else if (key == "boundaries") {
      base.boundaries_path = std::string(value);
    } else if (key == "window" || key == "max_radius") {
      const auto v = detail::parse_long(value);
      if (!v || *v < 0 || *v > 100000) throw bad();
      (key == "window" ? base.window : base.max_radius) = static_cast<int>(*v);
    } else if (key == "min_separability") {
      const auto v = detail::parse_double(value);
      if (!v || *v < 0 || *v > 1) throw bad();
      base.min_separability = *v;
    } else if (key == "stretch_low" || key == "stretch_high") {
      const auto v = detail::parse_double(value);
      if (!v || *v < 0 || *v > 100) throw bad();
      (key == "stretch_low" ? base.stretch.low_pct : base.stretch.high_pct) = *v;
    } else {
      throw UsageError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return base;
}

std::pair<long, long> parse_int_pair(std::string_view text) {
  const auto comma = text.find(',');
  if (comma != std::string_view::npos) {
    const auto a = detail::parse_long(detail::trim(text.substr(0, comma)));
    const auto b = detail::parse_long(detail::trim(text.substr(comma + 1)));
    if (a && b) return {*a, *b};
  }
  throw UsageError("expected two integers A,B, got '" + std::string(text) + "'");
}

std::pair<double, double> parse_real_pair(std::string_view text) {
  const auto comma = text.find(',');
  if (comma != std::string_view::npos) {
    const auto a = detail::parse_double(detail::trim(text.substr(0, comma)));
    const auto b = detail::parse_double(detail::trim(text.substr(comma + 1)));
    if (a && b) return {*a, *b};
  }
  throw UsageError("expected two numbers A,B, got '" + std::string(text) + "'");
}

namespace {

struct GlobalFlags {
  std::string data_root, registry, boundaries, config;
};

struct SeedFlags {
  std::string seed, seed_utm, kind = "mndwi";
  std::optional<int> window, max_radius;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "seed pixel COL,ROW");
    cmd->add_option("--seed-utm", seed_utm, "seed position E,N in the scene's UTM zone");
    cmd->add_option("--kind", kind, "ndvi, ndwi or mndwi")->capture_default_str();
    cmd->add_option("--window", window, "threshold window (odd pixels)");
    cmd->add_option("--max-radius", max_radius, "seed snap radius (pixels)");
  }
};

struct Context {
  CliConfig config;
  std::ostream& out;
  std::ostream& err;

  void emit(const json& j) const { out << j.dump(2) << '\n'; }
};

void write_text(const fs::path& path, const std::string& text) {
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

PixelCoord resolve_seed(const SeedFlags& f, const GeoTransform& geo) {
  if (!f.seed.empty() && !f.seed_utm.empty()) throw UsageError("give either --seed or --seed-utm, not both");
  if (!f.seed.empty()) {
    const auto [col, row] = parse_int_pair(f.seed);
    return {row, col};
  }
  if (!f.seed_utm.empty()) {
    const auto [e, n] = parse_real_pair(f.seed_utm);
    return utm_to_pixel({e, n}, geo);
  }
  throw UsageError("a seed is required (--seed COL,ROW or --seed-utm E,N)");
}

SegmentParams segment_params(const SeedFlags& f, const CliConfig& c) {
  SegmentParams p;
  p.window = f.window.value_or(c.window);
  p.max_radius = f.max_radius.value_or(c.max_radius);
  p.min_separability = c.min_separability;
  return p;
}

std::optional<AdminBoundarySet> boundaries_of(const CliConfig& c) {
  if (c.boundaries_path.empty()) return std::nullopt;
  return AdminBoundarySet::load(c.boundaries_path);
}

json grid_stats(const Grid<float>& g) {
  double lo = 0, hi = 0, sum = 0;
  bool first = true;
  for (float v : g.values()) {
    if (first) {
      lo = hi = v;
      first = false;
    }
    lo = std::min<double>(lo, v);
    hi = std::max<double>(hi, v);
    sum += v;
  }
  return {{"min", lo}, {"max", hi}, {"mean", g.empty() ? 0.0 : sum / static_cast<double>(g.size())}};
}

std::string iso_date(const std::chrono::year_month_day& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

LakeAnalysis segment_scene(const Context& ctx, const std::string& scene_arg, const SeedFlags& f, std::string& scene_id) {
  const IndexKind kind = parse_index_kind(f.kind);
  const ScenePackageRef ref = resolve_scene(ctx.config.data_root, scene_arg);
  scene_id = ref.scene_id;
  const SceneData scene = load_scene(ref);
  const PixelCoord seed = resolve_seed(f, scene.geo);
  const auto admin = boundaries_of(ctx.config);
  return analyze_lake(compute_index(scene.stack, kind), scene.geo, seed, segment_params(f, ctx.config),
                      admin ? &*admin : nullptr);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Water-body cadastre from Landsat-5 TM scene packages", "aquacad"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--data-root", g.data_root, "directory of scene packages (env AQUA_DATA_ROOT)");
  app.add_option("--registry", g.registry, "registry file (default <data-root>/registry.jsonl)");
  app.add_option("--boundaries", g.boundaries, "administrative boundary JSON");
  app.add_option("--config", g.config, "key = value config file");

  std::string dir, scene, out_file, name, cuenca, bands = "5,4,3", host = "127.0.0.1";
  std::string kind = "mndwi";
  int port = 8080;
  SeedFlags seg, reg;

  auto* c_ingest = app.add_subcommand("ingest", "discover scene packages under a directory");
  c_ingest->add_option("dir", dir, "directory")->required();
  auto* c_cal = app.add_subcommand("calibrate", "calibrate a scene and summarise its reflectance");
  c_cal->add_option("scene", scene, "scene id or package directory")->required();
  auto* c_index = app.add_subcommand("index", "compute a water index");
  c_index->add_option("scene", scene)->required();
  c_index->add_option("--kind", kind, "ndvi, ndwi or mndwi")->capture_default_str();
  c_index->add_option("--out", out_file, "write a grayscale PGM rendering");
  auto* c_seg = app.add_subcommand("segment", "segment the water body at a seed");
  c_seg->add_option("scene", scene)->required();
  seg.add_to(c_seg);
  auto* c_reg = app.add_subcommand("register", "segment and append the water body to the registry");
  c_reg->add_option("scene", scene)->required();
  reg.add_to(c_reg);
  c_reg->add_option("--name", name, "water body name")->required();
  c_reg->add_option("--cuenca", cuenca, "hydrographic basin")->required();
  auto* c_tl = app.add_subcommand("timeline", "area history of a water body");
  c_tl->add_option("--name", name)->required();
  auto* c_kml = app.add_subcommand("export-kml", "export the registry as KML");
  c_kml->add_option("--out", out_file)->required();
  c_kml->add_option("--name", name, "only this water body");
  auto* c_render = app.add_subcommand("render", "false-colour composite as PPM");
  c_render->add_option("scene", scene)->required();
  c_render->add_option("--composite", bands, "bands for R,G,B")->capture_default_str();
  c_render->add_option("--out", out_file)->required();
  auto* c_serve = app.add_subcommand("serve", "run the HTTP API");
  c_serve->add_option("--port", port)->capture_default_str();
  c_serve->add_option("--host", host)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "aquacad: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    CliConfig config;
    if (const char* env = std::getenv("AQUA_DATA_ROOT"); env && *env) config.data_root = env;
    if (!g.config.empty()) {
      std::ifstream in(g.config);
      if (!in) throw UsageError("cannot read config file " + g.config);
      std::stringstream ss;
      ss << in.rdbuf();
      config = parse_cli_config(ss.str(), config);
    }
    if (!g.data_root.empty()) config.data_root = g.data_root;
    if (!g.registry.empty()) config.registry_path = g.registry;
    if (!g.boundaries.empty()) config.boundaries_path = g.boundaries;
    if (config.registry_path.empty()) {
      config.registry_path = config.data_root.empty() ? fs::path("registry.jsonl") : config.data_root / "registry.jsonl";
    }
    Context ctx{config, out, err};

    if (c_ingest->parsed()) {
      const auto report = discover_packages(dir);
      json j{{"packages", json::array()}, {"invalid", json::array()}};
      for (const auto& p : report.packages) {
        json b = json::object();
        for (const auto& [band, file] : p.band_files) b[std::to_string(band)] = file.string();
        j["packages"].push_back(
            {{"scene_id", p.scene_id}, {"path", p.root_path.string()}, {"mtl", p.mtl_file.string()}, {"bands", b}});
      }
      for (const auto& p : report.invalid) {
        j["invalid"].push_back({{"path", p.path.string()},
                                {"scene_id", p.scene_id},
                                {"reason", p.reason},
                                {"missing_bands", p.missing_bands}});
      }
      ctx.emit(j);
    } else if (c_cal->parsed()) {
      const ScenePackageRef ref = resolve_scene(config.data_root, scene);
      const SceneData s = load_scene(ref);
      const auto& st = s.stack;
      json j{{"scene_id", ref.scene_id},
             {"date", iso_date(st.metadata.acquisition_date)},
             {"day_of_year", st.solar.day_of_year},
             {"sun_elevation_deg", st.solar.elevation_deg},
             {"zenith_deg", st.solar.zenith_deg},
             {"earth_sun_distance", st.solar.earth_sun_distance},
             {"width", st.width()},
             {"height", st.height()},
             {"radiance_fallback_bands", st.metadata.radiance_fallback_bands},
             {"bands", json::object()}};
      for (const auto& [band, grid] : st.bands) {
        json b = grid_stats(grid);
        b["lmin"] = st.metadata.radiance.at(band).lmin;
        b["lmax"] = st.metadata.radiance.at(band).lmax;
        b["dark_radiance"] = st.atmosphere.dark_radiance.at(band);
        b["t1"] = st.atmosphere.downward(band);
        b["negative_count"] = st.negative_counts.count(band) ? st.negative_counts.at(band) : 0;
        j["bands"][std::to_string(band)] = b;
      }
      ctx.emit(j);
    } else if (c_index->parsed()) {
      const IndexKind k = parse_index_kind(kind);
      const ScenePackageRef ref = resolve_scene(config.data_root, scene);
      const IndexGrid grid = compute_index(load_scene(ref).stack, k);
      json j = grid_stats(grid.values);
      j["scene_id"] = ref.scene_id;
      j["kind"] = to_string(k);
      j["polarity"] = grid.polarity == WaterPolarity::kHighIsWater ? "high_is_water" : "low_is_water";
      j["width"] = grid.values.width();
      j["height"] = grid.values.height();
      j["degenerate_count"] = grid.degenerate_count;
      if (!out_file.empty()) {
        write_file_bytes(out_file, encode_pgm(render_grayscale(grid.values, config.stretch)));
        j["out"] = out_file;
      }
      ctx.emit(j);
    } else if (c_seg->parsed()) {
      std::string scene_id;
      const LakeAnalysis lake = segment_scene(ctx, scene, seg, scene_id);
      json j = lake_json(lake);
      j["scene_id"] = scene_id;
      ctx.emit(j);
    } else if (c_reg->parsed()) {
      std::string scene_id;
      const LakeAnalysis lake = segment_scene(ctx, scene, reg, scene_id);
      Registry registry(config.registry_path);
      CadastralRecord record = make_record(lake, scene_id, name, cuenca);
      if (auto bad = validate(record); !bad.empty()) throw ValidationError(bad);
      for (const auto& r : registry.load()) {
        if (r.scene_id == scene_id && r.name == name) {
          throw Conflict("record for '" + name + "' in scene " + scene_id + " already exists");
        }
      }
      attach_mask(registry, lake, record);
      const auto id = registry.append(record);
      for (const auto& r : registry.find(name)) {
        if (r.id == id) ctx.emit(r);
      }
    } else if (c_tl->parsed()) {
      const auto records = Registry(config.registry_path).load();
      ctx.emit(timeline_json(timeline(records, name)));
    } else if (c_kml->parsed()) {
      const auto records = name.empty() ? Registry(config.registry_path).load() : Registry(config.registry_path).find(name);
      write_text(out_file, export_kml(records));
      ctx.emit({{"out", out_file}, {"placemarks", records.size()}});
    } else if (c_render->parsed()) {
      const auto order = parse_band_order(bands);
      const ScenePackageRef ref = resolve_scene(config.data_root, scene);
      const RgbImage img = false_color(load_scene(ref).stack, order, config.stretch);
      write_file_bytes(out_file, encode_ppm(img));
      ctx.emit({{"scene_id", ref.scene_id},
                {"out", out_file},
                {"bands", order},
                {"width", img.width()},
                {"height", img.height()}});
    } else if (c_serve->parsed()) {
      if (port <= 0 || port > 65535) throw UsageError("--port must be in 1..65535");
      ServiceConfig sc;
      sc.data_root = config.data_root;
      sc.registry_path = config.registry_path;
      if (!config.boundaries_path.empty()) sc.boundaries_path = config.boundaries_path;
      sc.segment_defaults.window = config.window;
      sc.segment_defaults.max_radius = config.max_radius;
      sc.segment_defaults.min_separability = config.min_separability;
      sc.stretch = config.stretch;
      serve(sc, host, port);
    }
    return 0;
  } catch (const UsageError& e) {
    err << "aquacad: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "aquacad: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "aquacad: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace aquacad
