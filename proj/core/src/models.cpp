#include "cycleflux/models.hpp"

#include <array>
#include <cmath>

#include "cycleflux/error.hpp"

namespace cycleflux {

double fermi_occupation(double w, double temperature, double mu) {
  if (!(temperature > 0.0)) throw Error(ErrorCode::invalid_parameter, "temperature must be positive");
  const double x = (w - mu) / temperature;
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double bose_occupation(double w, double temperature) {
  if (!(w > 0.0)) {
    throw Error(ErrorCode::non_positive_frequency, "bosonic occupation needs w > 0, got " + std::to_string(w));
  }
  if (!(temperature > 0.0)) throw Error(ErrorCode::invalid_parameter, "temperature must be positive");
  const double x = w / temperature;
  return std::exp(-x) / -std::expm1(-x);
}

namespace {

struct RatePair {
  double forward;
  double backward;
};

// In-rate Γ f and out-rate Γ (1 - f) for adding one fermion of energy de.
RatePair fermion_rates(double de, const ReservoirSpec& r) {
  return {r.coupling * fermi_occupation(de, r.temperature, r.chemical_potential),
          r.coupling * fermi_occupation(-de, r.temperature, -r.chemical_potential)};
}

// Absorption γ N(|ΔE|), emission γ (N(|ΔE|) + 1).
RatePair boson_rates(double de, const ReservoirSpec& r, const std::string& where) {
  if (de == 0.0) throw Error(ErrorCode::zero_gap_channel, where + " has zero energy gap");
  const double n = bose_occupation(std::abs(de), r.temperature);
  const double up = r.coupling * n;
  const double down = r.coupling * (n + 1.0);
  return de > 0.0 ? RatePair{up, down} : RatePair{down, up};
}

template <class Params>
struct Field {
  std::string_view name;
  double Params::*member;
};

constexpr std::array<Field<PumpParams>, 15> pump_fields{{
    {"eps_U", &PumpParams::eps_U},   {"eps_up", &PumpParams::eps_up}, {"eps_dn", &PumpParams::eps_dn},
    {"U", &PumpParams::U},           {"T1", &PumpParams::T1},         {"T2", &PumpParams::T2},
    {"T3", &PumpParams::T3},         {"T4", &PumpParams::T4},         {"mu1", &PumpParams::mu1},
    {"mu2", &PumpParams::mu2},       {"mu3", &PumpParams::mu3},       {"Gamma1", &PumpParams::Gamma1},
    {"Gamma2", &PumpParams::Gamma2}, {"Gamma3", &PumpParams::Gamma3}, {"Gamma4", &PumpParams::Gamma4},
}};

constexpr std::array<Field<TransistorParams>, 14> transistor_fields{{
    {"w_L", &TransistorParams::w_L},         {"w_M", &TransistorParams::w_M},
    {"w_R", &TransistorParams::w_R},         {"w_LM", &TransistorParams::w_LM},
    {"w_MR", &TransistorParams::w_MR},       {"w_LR", &TransistorParams::w_LR},
    {"w0_L", &TransistorParams::w0_L},       {"w0_R", &TransistorParams::w0_R},
    {"T_L", &TransistorParams::T_L},         {"T_M", &TransistorParams::T_M},
    {"T_R", &TransistorParams::T_R},         {"gamma_L", &TransistorParams::gamma_L},
    {"gamma_M", &TransistorParams::gamma_M}, {"gamma_R", &TransistorParams::gamma_R},
}};

template <class Params, std::size_t N>
double Params::*lookup(const std::array<Field<Params>, N>& fields, std::string_view name) {
  for (const auto& f : fields) {
    if (f.name == name) return f.member;
  }
  throw Error(ErrorCode::invalid_parameter, "unknown parameter '" + std::string(name) + "'");
}

int qutrit_z(char c) {
  switch (c) {
    case 'p': case '+': return 1;
    case 'm': case '-': return -1;
    case 'G': return 0;
  }
  throw Error(ErrorCode::invalid_parameter, std::string("bad qutrit state '") + c + "'");
}

int qubit_z(char c) {
  if (c == 'u') return 1;
  if (c == 'd') return -1;
  throw Error(ErrorCode::invalid_parameter, std::string("bad qubit state '") + c + "'");
}

constexpr std::array<char, 3> qutrit_states{'+', '-', 'G'};
constexpr std::array<char, 2> qubit_states{'u', 'd'};

}  // namespace

double pump_energy(const PumpParams& p, int n_upper, int lower) {
  const double lower_level = lower == 1 ? p.eps_up : lower == 2 ? p.eps_dn : 0.0;
  const int n_lower = lower == 0 ? 0 : 1;
  return p.eps_U * n_upper + lower_level + p.U * n_lower * n_upper;
}

TransitionNetwork build_pump(const PumpParams& p, GraphMode mode) {
  NetworkSpec spec;
  spec.mode = mode;
  constexpr std::array<const char*, 3> lower_names{"0", "↑", "↓"};
  constexpr std::array<double, 3> lower_spin{0.0, 0.5, -0.5};
  auto id = [](int nu, int lower) { return static_cast<StateId>(nu * 3 + lower); };
  for (int nu = 0; nu < 2; ++nu) {
    for (int lower = 0; lower < 3; ++lower) {
      StateNode s;
      s.label = "|" + std::to_string(nu) + lower_names[lower] + "⟩";
      s.energy = pump_energy(p, nu, lower);
      s.quantum_numbers = {{"n_U", nu}, {"n_L", lower == 0 ? 0 : 1}, {"s_z", lower_spin[lower]}};
      spec.states.push_back(std::move(s));
    }
  }
  using namespace pump_reservoir;
  spec.reservoirs = {
      {upper_1, "1", Statistics::fermion, p.T1, p.mu1, p.Gamma1},
      {upper_2, "2", Statistics::fermion, p.T2, p.mu2, p.Gamma2},
      {lower_electron, "3", Statistics::fermion, p.T3, p.mu3, p.Gamma3},
      {magnon, "4", Statistics::boson, p.T4, 0.0, p.Gamma4},
  };
  auto energy = [&](StateId s) { return spec.states[s].energy; };

  // Upper dot: |0x⟩ -> |1x⟩, one channel per spinless reservoir.
  for (int lower = 0; lower < 3; ++lower) {
    const StateId a = id(0, lower), b = id(1, lower);
    const double de = energy(b) - energy(a);
    for (int r : {upper_1, upper_2}) {
      const auto rates = fermion_rates(de, spec.reservoirs[static_cast<std::size_t>(r - 1)]);
      spec.channels.push_back({a, b, r, rates.forward, rates.backward,
                               {{Quantity::energy, de}, {Quantity::particle, 1.0}, {Quantity::spin, 0.0}}});
    }
  }
  // Lower dot: |y0⟩ -> |yσ⟩ through the spinful reservoir.
  for (int nu = 0; nu < 2; ++nu) {
    for (int lower = 1; lower < 3; ++lower) {
      const StateId a = id(nu, 0), b = id(nu, lower);
      const double de = energy(b) - energy(a);
      const auto rates = fermion_rates(de, spec.reservoirs[2]);
      spec.channels.push_back({a, b, lower_electron, rates.forward, rates.backward,
                               {{Quantity::energy, de}, {Quantity::particle, 1.0}, {Quantity::spin, lower_spin[lower]}}});
    }
  }
  // Magnon flips |y↑⟩ -> |y↓⟩; the system loses one unit of spin to bath 4.
  for (int nu = 0; nu < 2; ++nu) {
    const StateId a = id(nu, 1), b = id(nu, 2);
    const double de = energy(b) - energy(a);
    const auto rates = boson_rates(de, spec.reservoirs[3], "magnon edge " + spec.states[a].label);
    spec.channels.push_back({a, b, magnon, rates.forward, rates.backward,
                             {{Quantity::energy, de}, {Quantity::particle, 0.0}, {Quantity::spin, -1.0}}});
  }
  return build_network(std::move(spec));
}

double transistor_energy(const TransistorParams& p, char l, char m, char r) {
  const int zl = qutrit_z(l), zr = qutrit_z(r), zm = qubit_z(m);
  const int dl = zl != 0 ? 1 : 0, dr = zr != 0 ? 1 : 0;
  return 0.5 * p.w_L * zl + 0.5 * p.w_M * zm + 0.5 * p.w_R * zr + 0.5 * p.w_LM * zl * zm +
         0.5 * p.w_MR * zr * zm + 0.5 * p.w_LR * zl * zr + p.w0_L * dl + p.w0_R * dr;
}

std::string transistor_label(char l, char m, char r) {
  auto q = [](char c) -> std::string {
    if (c == 'p') return "+";
    if (c == 'm') return "-";
    return std::string(1, c);
  };
  return "|" + q(l) + (m == 'u' ? "↑" : "↓") + q(r) + "⟩";
}

TransitionNetwork build_transistor(const TransistorParams& p, GraphMode mode) {
  NetworkSpec spec;
  spec.mode = mode;
  auto index = [](std::size_t li, std::size_t mi, std::size_t ri) { return li * 6 + mi * 3 + ri; };
  for (char l : qutrit_states) {
    for (char m : qubit_states) {
      for (char r : qutrit_states) {
        StateNode s;
        s.label = transistor_label(l, m, r);
        s.energy = transistor_energy(p, l, m, r);
        s.quantum_numbers = {{"sz_L", qutrit_z(l)}, {"sz_M", qubit_z(m)}, {"sz_R", qutrit_z(r)}};
        spec.states.push_back(std::move(s));
      }
    }
  }
  using namespace transistor_reservoir;
  spec.reservoirs = {
      {left, "L", Statistics::boson, p.T_L, 0.0, p.gamma_L},
      {middle, "M", Statistics::boson, p.T_M, 0.0, p.gamma_M},
      {right, "R", Statistics::boson, p.T_R, 0.0, p.gamma_R},
  };
  auto add = [&](StateId a, StateId b, int reservoir) {
    const double de = spec.states[b].energy - spec.states[a].energy;
    const auto rates = boson_rates(de, spec.reservoirs[static_cast<std::size_t>(reservoir - 1)],
                                   spec.states[a].label + " ↔ " + spec.states[b].label);
    spec.channels.push_back({a, b, reservoir, rates.forward, rates.backward, {{Quantity::energy, de}}});
  };
  constexpr std::size_t ground = 2;
  for (std::size_t mi = 0; mi < 2; ++mi) {
    for (std::size_t ri = 0; ri < 3; ++ri) {
      for (std::size_t li = 0; li < 2; ++li) add(index(ground, mi, ri), index(li, mi, ri), left);
    }
  }
  for (std::size_t mi = 0; mi < 2; ++mi) {
    for (std::size_t li = 0; li < 3; ++li) {
      for (std::size_t ri = 0; ri < 2; ++ri) add(index(li, mi, ground), index(li, mi, ri), right);
    }
  }
  for (std::size_t li = 0; li < 3; ++li) {
    for (std::size_t ri = 0; ri < 3; ++ri) add(index(li, 1, ri), index(li, 0, ri), middle);
  }
  return build_network(std::move(spec));
}

std::vector<std::string_view> parameter_names(const PumpParams&) {
  std::vector<std::string_view> out;
  for (const auto& f : pump_fields) out.push_back(f.name);
  out.push_back("dT");
  return out;
}

std::vector<std::string_view> parameter_names(const TransistorParams&) {
  std::vector<std::string_view> out;
  for (const auto& f : transistor_fields) out.push_back(f.name);
  return out;
}

double get_parameter(const PumpParams& p, std::string_view name) {
  if (name == "dT") return p.T1 - p.T2;
  return p.*lookup(pump_fields, name);
}

double get_parameter(const TransistorParams& p, std::string_view name) {
  return p.*lookup(transistor_fields, name);
}

void set_parameter(PumpParams& p, std::string_view name, double value) {
  if (name == "dT") {
    p.T1 = p.T2 + value;
    return;
  }
  p.*lookup(pump_fields, name) = value;
}

void set_parameter(TransistorParams& p, std::string_view name, double value) {
  p.*lookup(transistor_fields, name) = value;
}

}  // namespace cycleflux
