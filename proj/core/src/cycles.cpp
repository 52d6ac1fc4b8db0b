#include "cycleflux/cycles.hpp"

#include <algorithm>

#include "cycleflux/error.hpp"

namespace cycleflux {

Cycle reverse(const Cycle& cycle) {
  Cycle out;
  const std::size_t k = cycle.size();
  out.vertices.reserve(k);
  out.edges.reserve(k);
  out.vertices.push_back(cycle.vertices[0]);
  for (std::size_t i = k - 1; i >= 1; --i) out.vertices.push_back(cycle.vertices[i]);
  for (std::size_t i = k; i-- > 0;) out.edges.push_back(cycle.edges[i]);
  return out;
}

CanonicalCycle canonical_form(const Cycle& cycle) {
  const std::size_t k = cycle.size();
  const auto first = std::min_element(cycle.vertices.begin(), cycle.vertices.end());
  const auto offset = static_cast<std::size_t>(first - cycle.vertices.begin());

  Cycle rotated;
  rotated.vertices.reserve(k);
  rotated.edges.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    rotated.vertices.push_back(cycle.vertices[(offset + i) % k]);
    rotated.edges.push_back(cycle.edges[(offset + i) % k]);
  }

  bool flip = false;
  if (k >= 3) {
    flip = rotated.vertices[1] > rotated.vertices.back();
  } else if (k == 2) {
    flip = rotated.edges[0] > rotated.edges[1];
  }
  if (flip) return {reverse(rotated), true};
  return {std::move(rotated), false};
}

CanonicalCycle canonical_form(const TransitionNetwork& net, const std::vector<StateId>& vertices) {
  Cycle c;
  c.vertices = vertices;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const StateId a = vertices[i];
    const StateId b = vertices[(i + 1) % vertices.size()];
    if (a >= net.size() || b >= net.size()) {
      throw Error(ErrorCode::dangling_reference, "cycle references a missing state");
    }
    auto between = net.edges_between(a, b);
    if (between.empty()) {
      throw Error(ErrorCode::dangling_reference,
                  "states " + std::to_string(a) + " and " + std::to_string(b) + " are not adjacent");
    }
    c.edges.push_back(between.front());
  }
  return canonical_form(c);
}

int traversal_sign(const Cycle& cycle, EdgeId edge, StateId from) {
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (cycle.edges[i] == edge) return cycle.vertices[i] == from ? 1 : -1;
  }
  return 0;
}

namespace {

// Johnson's elementary-circuit search on the symmetric directed support.
class JohnsonSearch {
 public:
  JohnsonSearch(const TransitionNetwork& net, EnumerationOptions options)
      : net_(net), options_(options), n_(net.size()), blocked_(n_, false), blocked_by_(n_), active_(n_, false) {
    neighbors_.resize(n_);
    for (StateId v = 0; v < n_; ++v) {
      for (const auto& nb : net.neighbors(v)) neighbors_[v].push_back(nb.state);
      std::sort(neighbors_[v].begin(), neighbors_[v].end());
      neighbors_[v].erase(std::unique(neighbors_[v].begin(), neighbors_[v].end()), neighbors_[v].end());
    }
  }

  std::vector<Cycle> run() {
    for (start_ = 0; start_ < n_; ++start_) {
      mark_component();
      if (std::count(active_.begin(), active_.end(), true) < 2) continue;
      for (StateId v = 0; v < n_; ++v) {
        blocked_[v] = false;
        blocked_by_[v].clear();
      }
      circuit(start_);
    }
    std::sort(found_.begin(), found_.end());
    return std::move(found_);
  }

 private:
  void mark_component() {
    std::fill(active_.begin(), active_.end(), false);
    std::vector<StateId> stack{start_};
    active_[start_] = true;
    while (!stack.empty()) {
      StateId v = stack.back();
      stack.pop_back();
      for (StateId w : neighbors_[v]) {
        if (w > start_ && !active_[w]) {
          active_[w] = true;
          stack.push_back(w);
        }
      }
    }
  }

  void unblock(StateId v) {
    blocked_[v] = false;
    auto pending = std::move(blocked_by_[v]);
    blocked_by_[v].clear();
    for (StateId w : pending) {
      if (blocked_[w]) unblock(w);
    }
  }

  bool circuit(StateId v) {
    bool closed = false;
    path_.push_back(v);
    blocked_[v] = true;
    for (StateId w : neighbors_[v]) {
      if (!active_[w]) continue;
      if (w == start_) {
        emit();
        closed = true;
      } else if (!blocked_[w] && circuit(w)) {
        closed = true;
      }
    }
    if (closed) {
      unblock(v);
    } else {
      for (StateId w : neighbors_[v]) {
        if (!active_[w]) continue;
        auto& list = blocked_by_[w];
        if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
      }
    }
    path_.pop_back();
    return closed;
  }

  void emit() {
    const std::size_t k = path_.size();
    if (k == 2) {
      if (net_.mode() == GraphMode::collapsed) return;
      auto parallel = net_.edges_between(path_[0], path_[1]);
      for (std::size_t i = 0; i < parallel.size(); ++i) {
        for (std::size_t j = i + 1; j < parallel.size(); ++j) {
          push(Cycle{path_, {parallel[i], parallel[j]}});
        }
      }
      return;
    }
    // Each undirected cycle is met in both directions; keep the canonical one.
    if (path_[1] > path_.back()) return;
    Cycle c{path_, std::vector<EdgeId>(k)};
    expand(c, 0);
  }

  void expand(Cycle& c, std::size_t step) {
    if (step == c.size()) {
      push(c);
      return;
    }
    for (EdgeId e : net_.edges_between(c.vertices[step], c.next(step))) {
      c.edges[step] = e;
      expand(c, step + 1);
    }
  }

  void push(Cycle c) {
    if (found_.size() >= options_.max_cycles) {
      throw Error(ErrorCode::cycle_budget_exceeded,
                  "more than " + std::to_string(options_.max_cycles) + " cycles");
    }
    found_.push_back(std::move(c));
  }

  const TransitionNetwork& net_;
  EnumerationOptions options_;
  std::size_t n_;
  std::vector<std::vector<StateId>> neighbors_;
  std::vector<bool> blocked_;
  std::vector<std::vector<StateId>> blocked_by_;
  std::vector<bool> active_;
  std::vector<StateId> path_;
  std::vector<Cycle> found_;
  StateId start_ = 0;
};

}  // namespace

std::vector<Cycle> enumerate_cycles(const TransitionNetwork& net, EnumerationOptions options) {
  return JohnsonSearch(net, options).run();
}

std::string format_cycle(const TransitionNetwork& net, const Cycle& cycle) {
  std::string out;
  for (StateId v : cycle.vertices) {
    out += net.states()[v].label;
    out += "→";
  }
  if (!cycle.vertices.empty()) out += net.states()[cycle.vertices.front()].label;
  return out;
}

}  // namespace cycleflux
