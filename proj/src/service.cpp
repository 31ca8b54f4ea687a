#include "aquacad/service.hpp"

#include <algorithm>

#include "aquacad/errors.hpp"
#include "aquacad/segmentation.hpp"
#include "httplib.h"
#include "text_util.hpp"

namespace aquacad {

namespace fs = std::filesystem;
using nlohmann::json;

const IndexGrid& CachedScene::index(IndexKind kind) const {
  std::promise<std::shared_ptr<const IndexGrid>> promise;
  std::shared_future<std::shared_ptr<const IndexGrid>> future;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    auto it = indices_.find(kind);
    if (it == indices_.end()) {
      future = promise.get_future().share();
      indices_.emplace(kind, future);
      owner = true;
    } else {
      future = it->second;
    }
  }
  if (owner) {
    try {
      promise.set_value(std::make_shared<const IndexGrid>(compute_index(data_.stack, kind)));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return *future.get();
}

SceneCache::SceneCache(std::size_t capacity, Loader loader)
    : capacity_(std::max<std::size_t>(capacity, 1)), loader_(std::move(loader)) {}

std::shared_ptr<const CachedScene> SceneCache::get(const std::string& scene_id) {
  std::promise<std::shared_ptr<const CachedScene>> promise;
  std::shared_future<std::shared_ptr<const CachedScene>> future;
  bool owner = false;
  std::uint64_t token = 0;
  {
    std::lock_guard lock(mutex_);
    auto it = std::find_if(lru_.begin(), lru_.end(), [&](const Entry& e) { return e.id == scene_id; });
    if (it != lru_.end()) {
      lru_.splice(lru_.begin(), lru_, it);
      future = it->scene;
    } else {
      future = promise.get_future().share();
      token = ++loads_;
      lru_.push_front({scene_id, future, token});
      while (lru_.size() > capacity_) lru_.pop_back();
      owner = true;
    }
  }
  if (owner) {
    try {
      promise.set_value(std::make_shared<const CachedScene>(loader_(scene_id)));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard lock(mutex_);
      lru_.remove_if([&](const Entry& e) { return e.token == token; });
    }
  }
  return future.get();
}

std::size_t SceneCache::size() const {
  std::lock_guard lock(mutex_);
  return lru_.size();
}

std::size_t SceneCache::loads() const {
  std::lock_guard lock(mutex_);
  return loads_;
}

namespace {

HttpResult json_result(int status, const json& body) { return {status, "application/json", body.dump()}; }

HttpResult error_body(int status, const std::string& code, const std::string& message, json detail = nullptr) {
  return json_result(status, {{"code", code}, {"message", message}, {"detail", std::move(detail)}});
}

std::string iso_date(const std::chrono::year_month_day& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

json parse_body(const std::string& body) {
  try {
    json j = json::parse(body);
    if (!j.is_object()) throw ParseError("request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON body: ") + e.what());
  }
}

PixelCoord seed_of(const json& j) {
  if (!j.contains("seed")) throw ParseError("missing 'seed'");
  const json& s = j.at("seed");
  long col = 0, row = 0;
  if (s.is_array() && s.size() == 2 && s[0].is_number_integer() && s[1].is_number_integer()) {
    col = s[0].get<long>();
    row = s[1].get<long>();
  } else if (s.is_object() && s.contains("col") && s.contains("row") && s["col"].is_number_integer() &&
             s["row"].is_number_integer()) {
    col = s["col"].get<long>();
    row = s["row"].get<long>();
  } else {
    throw ParseError("'seed' must be {\"col\": C, \"row\": R} or [C, R] with integers");
  }
  if (col < 0 || row < 0) throw ValidationError({"seed"});
  return {row, col};
}

int int_field(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ParseError(std::string("'") + key + "' must be an integer");
  return j.at(key).get<int>();
}

std::string string_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) throw ParseError(std::string("missing string '") + key + "'");
  return j.at(key).get<std::string>();
}

}  // namespace

HttpResult error_result(std::exception_ptr error) {
  try {
    std::rethrow_exception(error);
  } catch (const NotFound& e) {
    return error_body(404, "not_found", e.what());
  } catch (const Conflict& e) {
    return error_body(409, "conflict", e.what());
  } catch (const ValidationError& e) {
    return error_body(400, "invalid_request", e.what(), e.fields());
  } catch (const ParseError& e) {
    return error_body(400, "invalid_request", e.what());
  } catch (const SegmentationFailure& e) {
    return error_body(422, "segmentation_failed", e.what());
  } catch (const DomainError& e) {
    return error_body(400, "invalid_request", e.what());
  } catch (const UnsupportedFeature& e) {
    return error_body(500, "unsupported_data", e.what());
  } catch (const std::exception& e) {
    return error_body(500, "internal", e.what());
  } catch (...) {
    return error_body(500, "internal", "unknown error");
  }
}

Service::Service(ServiceConfig config)
    : config_(std::move(config)),
      registry_(config_.registry_path),
      cache_(config_.cache_capacity, [root = config_.data_root](const std::string& id) {
        return load_scene(resolve_scene(root, id));
      }) {
  if (config_.boundaries_path) boundaries_ = AdminBoundarySet::load(*config_.boundaries_path);
}

HttpResult Service::list_scenes() const {
  auto out = json::array();
  std::error_code ec;
  if (config_.data_root.empty() || !fs::is_directory(config_.data_root, ec)) return json_result(200, out);
  for (const auto& ref : discover_packages(config_.data_root).packages) {
    const MtlMetadata m = read_mtl_file(ref.mtl_file);
    const double e0 = m.corner_ul_easting, n0 = m.corner_ul_northing;
    const double e1 = e0 + (m.cols - 1) * m.pixel_size, n1 = n0 - (m.rows - 1) * m.pixel_size;
    out.push_back({{"id", ref.scene_id},
                   {"date", iso_date(m.acquisition_date)},
                   {"width", m.cols},
                   {"height", m.rows},
                   {"utm_zone", m.utm_zone},
                   {"hemisphere", m.hemisphere() == Hemisphere::kSouth ? "S" : "N"},
                   {"bounds", {{"min_easting", e0}, {"max_easting", e1}, {"min_northing", n1}, {"max_northing", n0}}},
                   {"cloud_cover", m.cloud_cover}});
  }
  return json_result(200, out);
}

HttpResult Service::composite(const std::string& scene_id, const std::string& bands) {
  const auto order = parse_band_order(bands.empty() ? "5,4,3" : bands);
  const auto scene = cache_.get(scene_id);
  const auto img = encode_ppm(false_color(scene->data().stack, order, config_.stretch));
  return {200, "image/x-portable-pixmap", std::string(img.begin(), img.end())};
}

HttpResult Service::index_image(const std::string& scene_id, const std::string& kind) {
  const IndexKind k = parse_index_kind(kind.empty() ? "mndwi" : kind);
  const auto scene = cache_.get(scene_id);
  const auto img = encode_pgm(render_grayscale(scene->index(k).values, config_.stretch));
  return {200, "image/x-portable-graymap", std::string(img.begin(), img.end())};
}

LakeAnalysis Service::run_segment(const std::string& scene_id, const json& request) {
  const PixelCoord seed = seed_of(request);
  SegmentParams params = config_.segment_defaults;
  params.window = int_field(request, "window", params.window);
  params.max_radius = int_field(request, "max_radius", params.max_radius);
  if (request.contains("min_separability")) {
    if (!request["min_separability"].is_number()) throw ParseError("'min_separability' must be a number");
    params.min_separability = request["min_separability"].get<double>();
  }
  std::vector<std::string> bad;
  if (params.window < 3 || params.window % 2 == 0) bad.push_back("window");
  if (params.max_radius < 0) bad.push_back("max_radius");
  if (!(params.min_separability >= 0 && params.min_separability <= 1)) bad.push_back("min_separability");
  if (!bad.empty()) throw ValidationError(bad);
  const IndexKind kind = request.contains("kind") ? parse_index_kind(string_field(request, "kind")) : IndexKind::kMndwi;
  const auto scene = cache_.get(scene_id);
  return analyze_lake(scene->index(kind), scene->data().geo, seed, params, boundaries_ ? &*boundaries_ : nullptr);
}

HttpResult Service::segment(const std::string& scene_id, const std::string& body) {
  const json request = parse_body(body);
  json out = lake_json(run_segment(scene_id, request));
  out["scene_id"] = scene_id;
  return json_result(200, out);
}

HttpResult Service::register_lake(const std::string& body) {
  const json request = parse_body(body);
  CadastralRecord record;
  if (request.contains("record")) {
    try {
      record = request.at("record").get<CadastralRecord>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad record: ") + e.what());
    }
  } else {
    const std::string scene_id = string_field(request, "scene_id");
    const LakeAnalysis lake = run_segment(scene_id, request);
    record = make_record(lake, scene_id, string_field(request, "name"), string_field(request, "cuenca"));
    if (auto bad = validate(record); !bad.empty()) throw ValidationError(bad);
    for (const auto& r : registry_.load()) {
      if (r.scene_id == record.scene_id && r.name == record.name) {
        throw Conflict("record for '" + record.name + "' in scene " + record.scene_id + " already exists");
      }
    }
    attach_mask(registry_, lake, record);
  }
  record.id = registry_.append(record);
  for (const auto& r : registry_.find(record.name)) {
    if (r.id == record.id) return json_result(201, r);
  }
  return json_result(201, record);
}

HttpResult Service::list_registry(const std::string& name) const {
  const auto records = name.empty() ? registry_.load() : registry_.find(name);
  return json_result(200, records);
}

HttpResult Service::timeline(const std::string& name) const {
  const auto records = registry_.load();
  return json_result(200, timeline_json(aquacad::timeline(records, name)));
}

void Service::mount(httplib::Server& server) {
  server.set_default_headers({{"Access-Control-Allow-Origin", config_.cors_origin},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  auto wrap = [](auto handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      HttpResult r;
      try {
        r = handler(req);
      } catch (...) {
        r = error_result(std::current_exception());
      }
      res.status = r.status;
      res.set_content(r.body, r.content_type);
    };
  };
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.Get("/scenes", wrap([this](const httplib::Request&) { return list_scenes(); }));
  server.Get(R"(/scenes/([^/]+)/composite)", wrap([this](const httplib::Request& req) {
               return composite(req.matches[1], req.get_param_value("bands"));
             }));
  server.Get(R"(/scenes/([^/]+)/index)", wrap([this](const httplib::Request& req) {
               return index_image(req.matches[1], req.get_param_value("kind"));
             }));
  server.Post(R"(/scenes/([^/]+)/segment)",
              wrap([this](const httplib::Request& req) { return segment(req.matches[1], req.body); }));
  server.Post("/registry", wrap([this](const httplib::Request& req) { return register_lake(req.body); }));
  server.Get("/registry", wrap([this](const httplib::Request& req) { return list_registry(req.get_param_value("name")); }));
  server.Get(R"(/registry/([^/]+)/timeline)", wrap([this](const httplib::Request& req) {
               return timeline(req.matches[1]);
             }));
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const HttpResult r = error_body(res.status, res.status == 404 ? "not_found" : "http_error",
                                    res.status == 404 ? "no such route" : "request failed");
    res.set_content(r.body, r.content_type);
  });
}

void serve(const ServiceConfig& config, const std::string& host, int port) {
  httplib::Server server;
  Service service(config);
  service.mount(server);
  std::fprintf(stderr, "listening on %s:%d\n", host.c_str(), port);
  if (!server.listen(host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace aquacad
