#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "s2s/cornerseries.hpp"
#include "s2s/geometry.hpp"

namespace s2s {

/// Malformed or out-of-range input data; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A scene file bundles the geometry, the right-hand side, and an optional
/// "params" object of run parameters (same names as the CLI flags).
struct SceneFile {
  SectorScene scene;
  AnalyticRHS f = AnalyticRHS::constant(1.0);
  nlohmann::json params = nlohmann::json::object();
};

/// Strict parse: unknown keys at any level raise ConfigError.
SceneFile parse_scene_file(const nlohmann::json& j);

/// Reads and parses `path`; missing or unreadable file raises ConfigError.
SceneFile load_scene_file(const std::string& path);

nlohmann::json scene_to_json(const SectorScene& s);

}  // namespace s2s
