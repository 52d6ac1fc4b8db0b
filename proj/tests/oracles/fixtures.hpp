#pragma once

// Small networks shared by the tests.

#include <optional>
#include <string>

#include "cycleflux/error.hpp"
#include "cycleflux/network.hpp"
#include "oracles.hpp"

namespace fixtures {

inline cycleflux::ReservoirSpec bath(int id = 1, double temperature = 1.0) {
  return {id, "bath" + std::to_string(id), cycleflux::Statistics::boson, temperature, 0.0, 1.0};
}

inline cycleflux::NetworkSpec states(std::size_t n) {
  cycleflux::NetworkSpec spec;
  for (std::size_t i = 0; i < n; ++i) spec.states.push_back({i, "s" + std::to_string(i), 0.0, {}});
  spec.reservoirs.push_back(bath());
  return spec;
}

/// n-ring with every rate equal to k in both directions.
inline cycleflux::TransitionNetwork ring(std::size_t n, double k = 1.0) {
  auto spec = states(n);
  for (std::size_t i = 0; i < n; ++i) spec.channels.push_back({i, (i + 1) % n, 1, k, k, {}});
  return cycleflux::build_network(spec);
}

/// Two states with k(0->1) = a and k(1->0) = b.
inline cycleflux::TransitionNetwork two_state(double a, double b) {
  auto spec = states(2);
  spec.channels.push_back({0, 1, 1, a, b, {}});
  return cycleflux::build_network(spec);
}

inline cycleflux::TransitionNetwork from_rates(const oracle::Rates& k,
                                               cycleflux::GraphMode mode = cycleflux::GraphMode::collapsed) {
  auto spec = states(k.size());
  spec.mode = mode;
  for (std::size_t a = 0; a < k.size(); ++a) {
    for (std::size_t b = a + 1; b < k.size(); ++b) {
      if (k[a][b] > 0.0 || k[b][a] > 0.0) spec.channels.push_back({a, b, 1, k[a][b], k[b][a], {}});
    }
  }
  return cycleflux::build_network(spec);
}

inline oracle::Rates rates_of(const cycleflux::TransitionNetwork& net) {
  oracle::Rates k(net.size(), std::vector<double>(net.size(), 0.0));
  for (const auto& c : net.channels()) {
    k[c.from][c.to] += c.rate_forward;
    k[c.to][c.from] += c.rate_backward;
  }
  return k;
}

/// Code of the cycleflux::Error thrown by f, if any.
template <class F>
std::optional<cycleflux::ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const cycleflux::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace fixtures
