#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cycleflux/network.hpp"

namespace cycleflux {

/// 1 / (exp((w - mu) / T) + 1).
double fermi_occupation(double w, double temperature, double mu = 0.0);

/// 1 / (exp(w / T) - 1); throws NonPositiveFrequency for w <= 0.
double bose_occupation(double w, double temperature);

/// Coulomb-coupled double dot: the upper dot exchanges spinless electrons
/// with reservoirs 1 and 2, the lower dot exchanges spinful electrons with
/// reservoir 3 and flips spin by absorbing or emitting magnons of bath 4.
struct PumpParams {
  double eps_U = 1.0;
  double eps_up = -1.0;
  double eps_dn = 1.0;
  double U = 3.0;
  double T1 = 1.0;
  double T2 = 1.0;
  double T3 = 1.0;
  double T4 = 1.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
  double Gamma1 = 0.01;
  double Gamma2 = 0.01;
  double Gamma3 = 0.01;
  double Gamma4 = 0.01;
};

/// Qutrit-qubit-qutrit transistor; the gate (middle) bath sets T_M.
/// gamma_L defaults to a tenth of the other couplings.
struct TransistorParams {
  double w_L = 1.0;
  double w_M = 1.0;
  double w_R = 1.0;
  double w_LM = 10.0;
  double w_MR = 10.0;
  double w_LR = 0.0;
  double w0_L = 3.0;
  double w0_R = 3.0;
  double T_L = 2.5;
  double T_M = 0.5;
  double T_R = 0.2;
  double gamma_L = 0.001;
  double gamma_M = 0.01;
  double gamma_R = 0.01;
};

/// Reservoir ids used by the builders.
namespace pump_reservoir {
inline constexpr int upper_1 = 1;
inline constexpr int upper_2 = 2;
inline constexpr int lower_electron = 3;
inline constexpr int magnon = 4;
}  // namespace pump_reservoir

namespace transistor_reservoir {
inline constexpr int left = 1;
inline constexpr int middle = 2;
inline constexpr int right = 3;
}  // namespace transistor_reservoir

/// Six states |n_U, lower⟩ labelled |00⟩ |0↑⟩ |0↓⟩ |10⟩ |1↑⟩ |1↓⟩ (ids 0..5).
TransitionNetwork build_pump(const PumpParams& p, GraphMode mode = GraphMode::collapsed);
double pump_energy(const PumpParams& p, int n_upper, int lower /* 0 empty, 1 up, 2 down */);

/// Eighteen states |l m r⟩ with l, r in {+, −, G} and m in {↑, ↓}.
TransitionNetwork build_transistor(const TransistorParams& p, GraphMode mode = GraphMode::collapsed);
/// Energy of |l m r⟩; l and r take 'p', 'm', 'G' (also '+', '-'), m takes 'u'/'d'.
double transistor_energy(const TransistorParams& p, char l, char m, char r);
std::string transistor_label(char l, char m, char r);

/// Named parameter access for sweeps and configuration files. The pump also
/// accepts "dT", which sets T1 = T2 + value.
std::vector<std::string_view> parameter_names(const PumpParams&);
std::vector<std::string_view> parameter_names(const TransistorParams&);
double get_parameter(const PumpParams& p, std::string_view name);
double get_parameter(const TransistorParams& p, std::string_view name);
void set_parameter(PumpParams& p, std::string_view name, double value);
void set_parameter(TransistorParams& p, std::string_view name, double value);

}  // namespace cycleflux
