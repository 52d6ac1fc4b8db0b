#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cycleflux/network.hpp"

namespace cycleflux {

/// JSON model description:
///
///   {
///     "mode": "collapsed" | "multigraph",
///     "states":     [{"label": "|0⟩", "energy": 0.0, "quantum_numbers": {"n": 0}}, ...],
///     "reservoirs": [{"id": 1, "name": "L", "statistics": "boson", "T": 1.0, "mu": 0.0,
///                     "coupling": 0.01}, ...],
///     "channels":   [{"from": 0, "to": 1, "reservoir": 1, "rate_fw": 0.5, "rate_bw": 0.2,
///                     "transported": {"energy": 1.0}}, ...]
///   }
///
/// "from"/"to" accept a state index or a state label. "mode", "name", "mu",
/// "quantum_numbers" and "transported" are optional. Doubles are written in
/// shortest round-trip form, so write -> read reproduces the spec exactly.
NetworkSpec network_spec_from_json(std::string_view text);
std::string network_spec_to_json(const NetworkSpec& spec, int indent = 2);

NetworkSpec load_network_spec(const std::filesystem::path& path);
void save_network_spec(const NetworkSpec& spec, const std::filesystem::path& path);

}  // namespace cycleflux
