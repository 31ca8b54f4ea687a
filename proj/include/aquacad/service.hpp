#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "aquacad/cadastre.hpp"
#include "aquacad/geodesy.hpp"
#include "aquacad/pipeline.hpp"
#include "aquacad/render.hpp"

namespace httplib {
class Server;
}

namespace aquacad {

struct ServiceConfig {
  std::filesystem::path data_root;
  std::filesystem::path registry_path;
  std::optional<std::filesystem::path> boundaries_path;
  std::size_t cache_capacity = 3;
  SegmentParams segment_defaults;
  Stretch stretch;
  std::string cors_origin = "*";
};

/// Calibrated scene plus lazily computed index grids.
class CachedScene {
 public:
  explicit CachedScene(SceneData data) : data_(std::move(data)) {}
  const SceneData& data() const noexcept { return data_; }
  const IndexGrid& index(IndexKind kind) const;

 private:
  SceneData data_;
  mutable std::mutex mutex_;
  mutable std::map<IndexKind, std::shared_future<std::shared_ptr<const IndexGrid>>> indices_;
};

/// Least-recently-used cache of calibrated scenes. Concurrent requests for
/// the same scene share one load.
class SceneCache {
 public:
  using Loader = std::function<SceneData(const std::string&)>;

  SceneCache(std::size_t capacity, Loader loader);

  std::shared_ptr<const CachedScene> get(const std::string& scene_id);
  std::size_t size() const;
  std::size_t loads() const;

 private:
  struct Entry {
    std::string id;
    std::shared_future<std::shared_ptr<const CachedScene>> scene;
    std::uint64_t token = 0;
  };
  std::size_t capacity_;
  Loader loader_;
  mutable std::mutex mutex_;
  std::list<Entry> lru_;  // most recent first
  std::uint64_t loads_ = 0;
};

struct HttpResult {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Request handlers, usable without a socket; `mount` wires them to routes.
class Service {
 public:
  explicit Service(ServiceConfig config);

  HttpResult list_scenes() const;
  HttpResult composite(const std::string& scene_id, const std::string& bands);
  HttpResult index_image(const std::string& scene_id, const std::string& kind);
  HttpResult segment(const std::string& scene_id, const std::string& body);
  HttpResult register_lake(const std::string& body);
  HttpResult list_registry(const std::string& name) const;
  HttpResult timeline(const std::string& name) const;

  void mount(httplib::Server& server);

  const ServiceConfig& config() const noexcept { return config_; }
  SceneCache& cache() noexcept { return cache_; }

 private:
  LakeAnalysis run_segment(const std::string& scene_id, const nlohmann::json& request);

  ServiceConfig config_;
  std::optional<AdminBoundarySet> boundaries_;
  Registry registry_;
  SceneCache cache_;
};

/// JSON error body {code, message, detail} and its HTTP status for the
/// exception currently being handled.
HttpResult error_result(std::exception_ptr error);

/// Blocks serving on host:port until the process is stopped.
void serve(const ServiceConfig& config, const std::string& host, int port);

}  // namespace aquacad
