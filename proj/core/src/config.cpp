#include "cycleflux/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cycleflux/error.hpp"
#include "cycleflux/network_json.hpp"
#include "json_detail.hpp"

namespace cycleflux {

namespace {

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

void scale_rates(NetworkSpec& spec, double factor) {
  for (auto& c : spec.channels) {
    c.rate_forward *= factor;
    c.rate_backward *= factor;
  }
}

}  // namespace

std::string_view model_name(const ModelConfig& config) {
  return std::visit(overloaded{[](const PumpParams&) { return std::string_view("pump"); },
                               [](const TransistorParams&) { return std::string_view("transistor"); },
                               [](const NetworkSpec&) { return std::string_view("network"); }},
                    config.model);
}

TransitionNetwork build_model(const ModelConfig& config) {
  return std::visit(overloaded{[&](const PumpParams& p) { return build_pump(p, config.mode); },
                               [&](const TransistorParams& p) { return build_transistor(p, config.mode); },
                               [&](const NetworkSpec& s) {
                                 NetworkSpec copy = s;
                                 copy.mode = config.mode;
                                 return build_network(std::move(copy));
                               }},
                    config.model);
}

std::vector<std::string_view> parameter_names(const ModelConfig& config) {
  return std::visit(overloaded{[](const PumpParams& p) { return parameter_names(p); },
                               [](const TransistorParams& p) { return parameter_names(p); },
                               [](const NetworkSpec&) { return std::vector<std::string_view>{"rate_scale"}; }},
                    config.model);
}

double get_parameter(const ModelConfig& config, std::string_view name) {
  return std::visit(overloaded{[&](const PumpParams& p) { return get_parameter(p, name); },
                               [&](const TransistorParams& p) { return get_parameter(p, name); },
                               [&](const NetworkSpec&) -> double {
                                 if (name == "rate_scale") return 1.0;
                                 throw Error(ErrorCode::invalid_parameter,
                                             "network models only accept 'rate_scale'");
                               }},
                    config.model);
}

void set_parameter(ModelConfig& config, std::string_view name, double value) {
  std::visit(overloaded{[&](PumpParams& p) { set_parameter(p, name, value); },
                        [&](TransistorParams& p) { set_parameter(p, name, value); },
                        [&](NetworkSpec& s) {
                          if (name != "rate_scale") {
                            throw Error(ErrorCode::invalid_parameter, "network models only accept 'rate_scale'");
                          }
                          if (!(value > 0.0)) throw Error(ErrorCode::invalid_parameter, "rate_scale must be positive");
                          scale_rates(s, value);
                        }},
             config.model);
}

std::vector<double> GridSpec::values() const {
  if (count < 2) throw Error(ErrorCode::invalid_parameter, "sweep count must be at least 2");
  if (!std::isfinite(start) || !std::isfinite(stop)) {
    throw Error(ErrorCode::invalid_parameter, "sweep range must be finite");
  }
  if (log_scale && !(start > 0.0 && stop > 0.0)) {
    throw Error(ErrorCode::invalid_parameter, "log sweep needs a positive range");
  }
  std::vector<double> out(count);
  const double n = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / n;
    out[i] = log_scale ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                       : start + t * (stop - start);
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  using nlohmann::json;
  RunConfig run;
  try {
    const json doc = json::parse(text.begin(), text.end());
    if (!doc.is_object()) throw Error(ErrorCode::parse_error, "config must be a JSON object");
    const std::string model = doc.value("model", std::string("pump"));
    if (auto m = doc.find("mode"); m != doc.end()) run.model.mode = parse_graph_mode(m->get<std::string>());

    if (model == "pump") {
      run.model.model = PumpParams{};
    } else if (model == "transistor") {
      run.model.model = TransistorParams{};
    } else if (model == "network") {
      NetworkSpec spec;
      if (auto n = doc.find("network"); n != doc.end()) {
        spec = detail::parse_network_spec(*n);
      } else if (auto f = doc.find("network_file"); f != doc.end()) {
        std::filesystem::path path = f->get<std::string>();
        if (path.is_relative()) path = base_dir / path;
        spec = load_network_spec(path);
      } else {
        throw Error(ErrorCode::parse_error, "network model needs 'network' or 'network_file'");
      }
      // The network's own mode applies unless the config sets one.
      if (!doc.contains("mode")) run.model.mode = spec.mode;
      run.model.model = std::move(spec);
    } else {
      throw Error(ErrorCode::parse_error, "unknown model '" + model + "'");
    }

    if (auto params = doc.find("params"); params != doc.end()) {
      if (!params->is_object()) throw Error(ErrorCode::parse_error, "'params' must be an object");
      for (const auto& [name, value] : params->items()) {
        if (!value.is_number()) throw Error(ErrorCode::parse_error, "parameter '" + name + "' must be a number");
        set_parameter(run.model, name, value.get<double>());
      }
    }

    if (auto s = doc.find("sweep"); s != doc.end()) {
      GridSpec grid;
      grid.parameter = s->at("parameter").get<std::string>();
      grid.start = s->at("start").get<double>();
      grid.stop = s->at("stop").get<double>();
      grid.count = s->at("count").get<std::size_t>();
      const std::string scale = s->value("scale", std::string("linear"));
      if (scale != "linear" && scale != "log") throw Error(ErrorCode::parse_error, "unknown sweep scale '" + scale + "'");
      grid.log_scale = scale == "log";
      get_parameter(run.model, grid.parameter);  // validates the name
      run.sweep = grid;
    }
    run.top_k = doc.value("top_k", run.top_k);
    if (auto k = doc.find("rank_key"); k != doc.end()) run.rank_key = parse_rank_key(k->get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("invalid config: ") + e.what());
  }
  return run;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.parent_path());
}

}  // namespace cycleflux
