#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cycleflux/cycle_flux.hpp"
#include "cycleflux/models.hpp"
#include "cycleflux/network.hpp"

namespace cycleflux {

/// A model to build: one of the two device builders or an explicit network.
struct ModelConfig {
  std::variant<PumpParams, TransistorParams, NetworkSpec> model;
  GraphMode mode = GraphMode::collapsed;
};

std::string_view model_name(const ModelConfig& config);
TransitionNetwork build_model(const ModelConfig& config);

/// Named parameters of the builder models. Explicit networks accept only
/// "rate_scale", which multiplies every rate.
std::vector<std::string_view> parameter_names(const ModelConfig& config);
double get_parameter(const ModelConfig& config, std::string_view name);
void set_parameter(ModelConfig& config, std::string_view name, double value);

struct GridSpec {
  std::string parameter;
  double start = 0.0;
  double stop = 1.0;
  std::size_t count = 2;
  bool log_scale = false;

  /// Grid values; endpoints are exact. Throws InvalidParameter for count < 2
  /// or a non-positive log range.
  std::vector<double> values() const;
};

/// Contents of a --config file:
///
///   {
///     "model": "pump" | "transistor" | "network",
///     "mode": "collapsed" | "multigraph",
///     "params": {"eps_U": 1.0, "dT": 0.2},            builder models
///     "network": {...} or "network_file": "net.json",  network model
///     "sweep": {"parameter": "T_M", "start": 0.01, "stop": 1.0, "count": 100,
///               "scale": "linear" | "log"},
///     "top_k": 5,
///     "rank_key": "traffic" | "net"
///   }
struct RunConfig {
  ModelConfig model;
  std::optional<GridSpec> sweep;
  std::size_t top_k = 5;
  RankKey rank_key = RankKey::traffic;
};

/// base_dir resolves a relative "network_file".
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace cycleflux
