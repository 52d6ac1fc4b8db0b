#pragma once

#include <json.hpp>

#include "cycleflux/network.hpp"

namespace cycleflux::detail {

NetworkSpec parse_network_spec(const nlohmann::json& doc);

}  // namespace cycleflux::detail
