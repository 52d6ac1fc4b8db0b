#include "cycleflux/network_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cycleflux/error.hpp"
#include "json_detail.hpp"

namespace cycleflux {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + ": missing key '" + key + "'");
  return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) fail(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

StateId state_ref(const json& v, const std::vector<StateNode>& states, const std::string& where) {
  if (v.is_number_integer()) {
    const auto i = v.get<long long>();
    if (i < 0 || static_cast<std::size_t>(i) >= states.size()) {
      throw Error(ErrorCode::dangling_reference, where + ": state index " + std::to_string(i) + " out of range");
    }
    return static_cast<StateId>(i);
  }
  if (v.is_string()) {
    const auto label = v.get<std::string>();
    for (const auto& s : states) {
      if (s.label == label) return s.id;
    }
    throw Error(ErrorCode::dangling_reference, where + ": unknown state label '" + label + "'");
  }
  fail(where + ": state reference must be an index or a label");
}

}  // namespace

NetworkSpec detail::parse_network_spec(const json& doc) {
  if (!doc.is_object()) fail("network description must be a JSON object");

  NetworkSpec spec;
  if (auto it = doc.find("mode"); it != doc.end()) spec.mode = parse_graph_mode(it->get<std::string>());

  const json& states = require(doc, "states", "network");
  if (!states.is_array()) fail("'states' must be an array");
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    const json& s = states[i];
    StateNode node;
    node.id = i;
    node.label = require(s, "label", where).get<std::string>();
    node.energy = number(s, "energy", where);
    if (auto q = s.find("quantum_numbers"); q != s.end()) {
      for (const auto& [name, value] : q->items()) node.quantum_numbers[name] = value.get<double>();
    }
    spec.states.push_back(std::move(node));
  }

  const json& reservoirs = require(doc, "reservoirs", "network");
  if (!reservoirs.is_array()) fail("'reservoirs' must be an array");
  for (std::size_t i = 0; i < reservoirs.size(); ++i) {
    const std::string where = "reservoirs[" + std::to_string(i) + "]";
    const json& r = reservoirs[i];
    ReservoirSpec res;
    res.id = require(r, "id", where).get<int>();
    res.name = r.value("name", std::to_string(res.id));
    res.statistics = parse_statistics(require(r, "statistics", where).get<std::string>());
    res.temperature = number(r, "T", where);
    res.chemical_potential = r.value("mu", 0.0);
    res.coupling = number(r, "coupling", where);
    spec.reservoirs.push_back(std::move(res));
  }

  const json& channels = require(doc, "channels", "network");
  if (!channels.is_array()) fail("'channels' must be an array");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const std::string where = "channels[" + std::to_string(i) + "]";
    const json& c = channels[i];
    TransitionChannel ch;
    ch.from = state_ref(require(c, "from", where), spec.states, where);
    ch.to = state_ref(require(c, "to", where), spec.states, where);
    ch.reservoir = require(c, "reservoir", where).get<int>();
    ch.rate_forward = number(c, "rate_fw", where);
    ch.rate_backward = number(c, "rate_bw", where);
    if (auto t = c.find("transported"); t != c.end()) {
      for (const auto& [name, value] : t->items()) ch.transported[parse_quantity(name)] = value.get<double>();
    }
    spec.channels.push_back(std::move(ch));
  }
  return spec;
}

NetworkSpec network_spec_from_json(std::string_view text) {
  try {
    return detail::parse_network_spec(json::parse(text.begin(), text.end()));
  } catch (const json::exception& e) {
    fail(std::string("invalid network JSON: ") + e.what());
  }
}

std::string network_spec_to_json(const NetworkSpec& spec, int indent) {
  json doc;
  doc["mode"] = std::string(to_string(spec.mode));
  json states = json::array();
  for (const auto& s : spec.states) {
    json qn = json::object();
    for (const auto& [k, v] : s.quantum_numbers) qn[k] = v;
    states.push_back({{"label", s.label}, {"energy", s.energy}, {"quantum_numbers", qn}});
  }
  json reservoirs = json::array();
  for (const auto& r : spec.reservoirs) {
    reservoirs.push_back({{"id", r.id},
                          {"name", r.name},
                          {"statistics", std::string(to_string(r.statistics))},
                          {"T", r.temperature},
                          {"mu", r.chemical_potential},
                          {"coupling", r.coupling}});
  }
  json channels = json::array();
  for (const auto& c : spec.channels) {
    json t = json::object();
    for (const auto& [q, v] : c.transported) t[std::string(to_string(q))] = v;
    channels.push_back({{"from", c.from},
                        {"to", c.to},
                        {"reservoir", c.reservoir},
                        {"rate_fw", c.rate_forward},
                        {"rate_bw", c.rate_backward},
                        {"transported", t}});
  }
  doc["states"] = std::move(states);
  doc["reservoirs"] = std::move(reservoirs);
  doc["channels"] = std::move(channels);
  return doc.dump(indent) + "\n";
}

NetworkSpec load_network_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return network_spec_from_json(buf.str());
}

void save_network_spec(const NetworkSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write '" + path.string() + "'");
  out << network_spec_to_json(spec);
}

}  // namespace cycleflux
