#pragma once

#include <compare>
#include <string>
#include <vector>

#include "cycleflux/network.hpp"

namespace cycleflux {

/// A closed, self-avoiding walk. edges[i] joins vertices[i] to
/// vertices[(i + 1) % size()].
struct Cycle {
  std::vector<StateId> vertices;
  std::vector<EdgeId> edges;

  std::size_t size() const { return vertices.size(); }
  StateId next(std::size_t i) const { return vertices[(i + 1) % vertices.size()]; }

  friend auto operator<=>(const Cycle&, const Cycle&) = default;
  friend bool operator==(const Cycle&, const Cycle&) = default;
};

/// Orientation-free identity of a cycle. `cycle` is the canonical forward
/// traversal; `reversed` records whether the input ran the other way.
///
/// Canonical form: rotated to start at the smallest vertex id, then oriented
/// so the second vertex is smaller than the last. Two-vertex cycles (only in
/// multigraph mode) break the tie with the smaller edge id first.
struct CanonicalCycle {
  Cycle cycle;
  bool reversed = false;

  friend auto operator<=>(const CanonicalCycle&, const CanonicalCycle&) = default;
  friend bool operator==(const CanonicalCycle&, const CanonicalCycle&) = default;
};

CanonicalCycle canonical_form(const Cycle& cycle);

/// Canonical form from a vertex list alone, resolving edges in a collapsed
/// network. Throws DanglingReference if consecutive vertices are not adjacent.
CanonicalCycle canonical_form(const TransitionNetwork& net, const std::vector<StateId>& vertices);

/// Same cycle, traversed in the opposite direction.
Cycle reverse(const Cycle& cycle);

/// +1 if the cycle traverses edge from `from` to the other end, -1 for the
/// opposite direction, 0 if the edge is not on the cycle.
int traversal_sign(const Cycle& cycle, EdgeId edge, StateId from);

struct EnumerationOptions {
  std::size_t max_cycles = 2'000'000;
};

/// All simple cycles of the network in canonical forward form, sorted by key.
/// Collapsed mode excludes 2-cycles; multigraph mode includes a 2-cycle for
/// each pair of distinct parallel edges. Throws CycleBudgetExceeded.
std::vector<Cycle> enumerate_cycles(const TransitionNetwork& net, EnumerationOptions options = {});

/// Labels joined by arrows and closed, e.g. "|00⟩→|10⟩→|00⟩" style.
std::string format_cycle(const TransitionNetwork& net, const Cycle& cycle);

}  // namespace cycleflux
