// cycleflux: cycle-flux analysis of Markov transition networks.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cycleflux/analysis.hpp"
#include "cycleflux/config.hpp"
#include "cycleflux/csv.hpp"
#include "cycleflux/error.hpp"
#include "cycleflux/network_json.hpp"
#include "cycleflux/stochastic.hpp"
#include "cycleflux/sweep.hpp"

using namespace cycleflux;

namespace {

struct Common {
  std::string config;
  std::string mode;
  std::string output;
  std::string rank_key;
  std::size_t top_k = 0;
  std::vector<std::string> set;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("--mode", c.mode, "collapsed or multigraph")->check(CLI::IsMember({"collapsed", "multigraph"}));
  cmd->add_option("-o,--output", c.output, "write CSV here instead of stdout");
  cmd->add_option("--set", c.set, "override a parameter, name=value (repeatable)");
}

void add_ranking(CLI::App* cmd, Common& c) {
  cmd->add_option("-k,--top-k", c.top_k, "number of ranked cycles");
  cmd->add_option("--rank-key", c.rank_key, "traffic or net")->check(CLI::IsMember({"traffic", "net"}));
}

RunConfig load(const Common& c) {
  RunConfig run = load_run_config(c.config);
  if (!c.mode.empty()) run.model.mode = parse_graph_mode(c.mode);
  if (c.top_k) run.top_k = c.top_k;
  if (!c.rank_key.empty()) run.rank_key = parse_rank_key(c.rank_key);
  for (const auto& s : c.set) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::parse_error, "--set expects name=value, got '" + s + "'");
    set_parameter(run.model, s.substr(0, eq), std::stod(s.substr(eq + 1)));
  }
  return run;
}

// stdout unless a path was given.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw Error(ErrorCode::invalid_parameter, "cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// Left-justify by code points, not bytes; labels carry arrows and kets.
std::string pad(const std::string& s, std::size_t width) {
  std::size_t points = 0;
  for (unsigned char ch : s) points += (ch & 0xC0) != 0x80;
  return points >= width ? s : s + std::string(width - points, ' ');
}

int analyze(const Common& c) {
  const RunConfig run = load(c);
  const auto net = build_model(run.model);
  const auto a = analyze_point(net, {run.top_k, run.rank_key});

  std::printf("model: %s (%s)\n", std::string(model_name(run.model)).c_str(),
              std::string(to_string(net.mode())).c_str());
  std::printf("states: %zu, edges: %zu, channels: %zu\n", net.size(), net.edges().size(), net.channels().size());
  std::printf("cycles: %zu canonical, %zu directed\n\n", a.cycle_count, 2 * a.cycle_count);

  std::printf("steady state\n");
  for (StateId s = 0; s < net.size(); ++s) {
    std::printf("  %s %.10g\n", pad(net.states()[s].label, 10).c_str(), a.p[s]);
  }
  std::printf("\ncurrents into the system\n  %-6s %14s %14s %14s %14s\n", "res", "energy", "heat", "particle",
              "spin");
  auto cell = [](const std::optional<double>& v) {
    char buf[32];
    if (!v) return std::string("-");
    std::snprintf(buf, sizeof buf, "%.6e", *v);
    return std::string(buf);
  };
  for (const auto& r : a.currents.reservoirs) {
    std::printf("  %-6s %14s %14s %14s %14s\n", net.reservoir(r.reservoir).name.c_str(), cell(r.energy).c_str(),
                cell(r.heat).c_str(), cell(r.particle).c_str(), cell(r.spin).c_str());
  }
  std::printf("\nchecks\n");
  std::printf("  stationarity residual     %.3e\n", a.stationarity_residual);
  std::printf("  tree-theorem difference   %.3e\n", a.tree_theorem_difference);
  std::printf("  Kirchhoff divergence      %.3e\n", a.max_divergence);
  std::printf("  decomposition residual    %.3e\n", a.decomposition_residual);
  std::printf("  entropy production        %.6e\n", a.entropy_production);

  std::printf("\ntop %zu cycles by %s\n", a.ranked.size(), std::string(to_string(run.rank_key)).c_str());
  for (std::size_t i = 0; i < a.ranked.size(); ++i) {
    const auto& r = a.ranked[i];
    std::printf("  %2zu  J+ %.6e  J- %.6e  net %+.6e  %s\n", i + 1, r.j_forward, r.j_backward, r.j_net,
                format_cycle(net, r.cycle).c_str());
  }
  if (!c.output.empty()) {
    Sink sink(c.output);
    write_ranked_csv(sink.stream(), net, a.ranked);
  }
  return 0;
}

int rank(const Common& c) {
  const RunConfig run = load(c);
  const auto net = build_model(run.model);
  const auto ranked = rank_cycles(net, run.top_k, run.rank_key);
  Sink sink(c.output);
  write_ranked_csv(sink.stream(), net, ranked);
  return 0;
}

int sweep(const Common& c, unsigned threads, const std::string& currents) {
  const RunConfig run = load(c);
  if (!run.sweep) throw Error(ErrorCode::parse_error, "config has no \"sweep\" section");
  SweepSpec spec{run.model, *run.sweep, {run.top_k, run.rank_key}, threads};
  const auto result = run_sweep(spec);
  Sink sink(c.output);
  write_sweep_csv(sink.stream(), result);
  if (!currents.empty()) {
    Sink long_form(currents);
    write_currents_csv(long_form.stream(), result);
  }
  return 0;
}

int simulate(const Common& c, double time, std::uint64_t seed) {
  const RunConfig run = load(c);
  const auto net = build_model(run.model);
  const auto records = all_cycle_fluxes(net);
  const auto report = simulate_and_count(net, time, seed);
  std::fprintf(stderr, "seed %llu, %llu jumps, %llu two-step excursions discarded\n",
               static_cast<unsigned long long>(seed), static_cast<unsigned long long>(report.jumps),
               static_cast<unsigned long long>(report.discarded_excursions));
  auto cmp = compare_with_analytic(report, records);
  std::sort(cmp.begin(), cmp.end(), [](const FluxComparison& a, const FluxComparison& b) {
    return std::max(a.analytic_forward, a.analytic_backward) > std::max(b.analytic_forward, b.analytic_backward);
  });
  if (run.top_k && cmp.size() > run.top_k) cmp.resize(run.top_k);
  Sink sink(c.output);
  CsvWriter csv(sink.stream());
  csv.header({"cycle", "count_forward", "count_backward", "j_forward", "j_forward_err", "j_forward_exact",
              "z_forward", "j_backward", "j_backward_err", "j_backward_exact", "z_backward"});
  for (const auto& x : cmp) {
    const auto& e = x.estimate;
    csv.field(format_cycle(net, e.cycle));
    csv.field(static_cast<unsigned long long>(e.forward_count));
    csv.field(static_cast<unsigned long long>(e.backward_count));
    csv.field(e.forward);
    csv.field(e.forward_stderr);
    csv.field(x.analytic_forward);
    csv.field(x.z_forward);
    csv.field(e.backward);
    csv.field(e.backward_stderr);
    csv.field(x.analytic_backward);
    csv.field(x.z_backward);
    csv.end_row();
  }
  return 0;
}

struct GridArgs {
  double from = 0.01;
  double to = 3.0;
  std::size_t points = 300;
};

int threshold(const Common& c, const GridArgs& g, const std::vector<double>& w_m) {
  const RunConfig run = load(c);
  const auto* p = std::get_if<TransistorParams>(&run.model.model);
  if (!p) throw Error(ErrorCode::invalid_parameter, "threshold needs the transistor model");
  const auto grid = GridSpec{"T_M", g.from, g.to, g.points, false}.values();
  const auto rows = switch_threshold(*p, w_m, grid, run.model.mode);
  Sink sink(c.output);
  write_threshold_csv(sink.stream(), rows);
  return 0;
}

int amplify(const Common& c, const GridArgs& g, const std::string& parameter, int res_a, int res_b,
            double tolerance) {
  const RunConfig run = load(c);
  const auto probe = make_current_probe(run.model, parameter, res_a, res_b);
  const auto amp = converged_amplification(probe, g.from, g.to, g.points, tolerance);
  std::fprintf(stderr, "%zu points after %zu halvings, last change %.2f%%%s\n", amp.count, amp.halvings,
               100.0 * amp.max_change, amp.converged ? "" : " (not converged)");

  std::vector<double> x, jm;
  for (std::size_t i = 0; i < amp.count; ++i) {
    x.push_back(g.from + (g.to - g.from) * static_cast<double>(i) / static_cast<double>(amp.count - 1));
    jm.push_back(probe(x.back()).second);
  }
  for (const auto& iv : detect_ndtc(x, jm)) {
    std::fprintf(stderr, "negative differential conductance of reservoir %d on [%g, %g]\n", res_b, iv.lo, iv.hi);
  }
  const auto& r = amp.result;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    if (!r.divergence[i]) continue;
    const double h = x[1] - x[0];
    const auto d = refine_divergence(probe, r.x[i] - h, r.x[i] + h);
    std::fprintf(stderr, "divergence near %s = %.8g, alpha %.3g after %zu levels\n", parameter.c_str(), d.location,
                 d.alpha, d.levels);
  }
  Sink sink(c.output);
  write_amplification_csv(sink.stream(), r);
  return 0;
}

int export_network(const Common& c) {
  const RunConfig run = load(c);
  const auto net = build_model(run.model);
  Sink sink(c.output);
  sink.stream() << network_spec_to_json(net.spec()) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-flux analysis of Markov transition networks"};
  app.require_subcommand(1);

  Common c;
  unsigned threads = 0;
  std::string currents;
  double time = 1e6;
  std::uint64_t seed = 1;
  GridArgs grid;
  std::vector<double> w_m{0.5, 1.0, 1.5, 2.0, 2.5};
  std::string parameter = "T_M";
  int res_a = 1, res_b = 2;
  double tolerance = 0.05;

  auto* analyze_cmd = app.add_subcommand("analyze", "steady state, currents, checks and top cycles");
  add_common(analyze_cmd, c);
  add_ranking(analyze_cmd, c);

  auto* rank_cmd = app.add_subcommand("rank", "ranked cycle table as CSV");
  add_common(rank_cmd, c);
  add_ranking(rank_cmd, c);

  auto* sweep_cmd = app.add_subcommand("sweep", "run the config's parameter sweep");
  add_common(sweep_cmd, c);
  add_ranking(sweep_cmd, c);
  sweep_cmd->add_option("-j,--threads", threads, "worker threads (0: hardware)");
  sweep_cmd->add_option("--currents", currents, "also write long-format currents CSV");

  auto* sim_cmd = app.add_subcommand("simulate", "Gillespie trajectory with cycle counting");
  add_common(sim_cmd, c);
  sim_cmd->add_option("-k,--top-k", c.top_k, "rows to print, by analytic traffic");
  sim_cmd->add_option("-t,--time", time, "simulated time")->check(CLI::PositiveNumber);
  sim_cmd->add_option("-s,--seed", seed, "mt19937_64 seed");

  auto* thr_cmd = app.add_subcommand("threshold", "half-plateau switch threshold of the transistor");
  add_common(thr_cmd, c);
  thr_cmd->add_option("--w-m", w_m, "qubit splittings");
  thr_cmd->add_option("--from", grid.from, "lowest T_M");
  thr_cmd->add_option("--to", grid.to, "highest T_M");
  thr_cmd->add_option("--points", grid.points, "grid points");

  auto* amp_cmd = app.add_subcommand("amplify", "amplification factor with grid refinement");
  add_common(amp_cmd, c);
  amp_cmd->add_option("-p,--parameter", parameter, "swept parameter");
  amp_cmd->add_option("--from", grid.from, "grid start");
  amp_cmd->add_option("--to", grid.to, "grid end");
  amp_cmd->add_option("--points", grid.points, "initial grid points");
  amp_cmd->add_option("--out-reservoir", res_a, "reservoir of the amplified current");
  amp_cmd->add_option("--gate-reservoir", res_b, "reservoir of the gate current");
  amp_cmd->add_option("--tolerance", tolerance, "relative change that counts as converged");

  auto* export_cmd = app.add_subcommand("export", "write the built network as JSON");
  add_common(export_cmd, c);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze_cmd) return analyze(c);
    if (*rank_cmd) return rank(c);
    if (*sweep_cmd) return sweep(c, threads, currents);
    if (*sim_cmd) return simulate(c, time, seed);
    if (*thr_cmd) return threshold(c, grid, w_m);
    if (*amp_cmd) {
      if (amp_cmd->count("--points") == 0) grid.points = 30;
      if (amp_cmd->count("--from") == 0) grid.from = 0.05;
      if (amp_cmd->count("--to") == 0) grid.to = 1.5;
      return amplify(c, grid, parameter, res_a, res_b, tolerance);
    }
    if (*export_cmd) return export_network(c);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
