#pragma once
#include <string>
#include <vector>

#include "nlhf/scattering.hpp"

namespace nlhf {

// Angular factor <l_f 0|cos theta|l_i 0> = l_> / sqrt((2 l_i + 1)(2 l_f + 1)); 0 if |dl| != 1.
double dipole_angular(int l_i, int l_f);

struct DipoleElement {
  double value = 0;
  bool allowed = false;  // false: |l_f - l_i| != 1
};

// A * int P_f r P_i dr.
DipoleElement dipole_length(const Orbital& initial, const std::vector<double>& final_P, int l_f,
                            const RadialGrid& grid);
// -A * int P_f (d/dr - (l_i+1)/r or + l_i/r) P_i dr / omega (bare gradient form).
DipoleElement dipole_velocity(const Orbital& initial, const std::vector<double>& final_P, int l_f,
                              double omega, const RadialGrid& grid);

struct DipolePair {
  std::string transition;
  double omega = 0;
  double d_length = 0, d_velocity = 0;
  double relative_discrepancy = 0;
};
DipolePair dipole_pair(const Orbital& initial, const std::vector<double>& final_P, int l_f,
                       double omega, const RadialGrid& grid, std::string label = {});

// Operator whose eigenstates are the final states of excitations out of shell `hole`: the
// frozen-core HF operator, the full local potential, or the shell's own no-self-action potential.
ChannelOperator final_state_operator(const SCFResult& core, std::size_t hole, int l_f);
ChannelOperator final_state_operator(const SCFResult& core, std::size_t hole, int l_f,
                                     const RadialGrid& grid);

// Hybrid grid on which continuum waves up to eps_max are resolved (k h <= 0.2).
RadialGrid continuum_grid(const SCFResult& core, double eps_max);

// Initial shell -> continuum eps l_f (energy-normalized final state, on continuum_grid).
DipolePair continuum_pair(const SCFResult& core, int n, int l, int l_f, double eps);
// Initial shell -> index-th unoccupied bound state of channel l_f.
DipolePair bound_pair(const SCFResult& core, int n, int l, int l_f, int index = 0);

enum class Form { kLength, kVelocity };
Form parse_form(const std::string& tag);
std::string to_string(Form f);

struct SumRuleReport {
  Scheme scheme = Scheme::kHF;
  Form form = Form::kLength;
  double omega_max = 0;
  double partial_sum = 0;
  double discrete_sum = 0, continuum_sum = 0;
  int electrons = 0;
  std::vector<std::string> failed_channels;  // channels left out of the sum
  bool complete = true;
};

// f = (2/3) omega (2 l_f + 1) / l_> d^2 per electron. Occupancy-weighted f-values to unoccupied bound states plus a 64-point geometric
// continuum quadrature per channel, counting transitions with omega <= omega_max.
SumRuleReport oscillator_sum(const SCFResult& core, Form form, double omega_max,
                             const ScatteringOptions& opt = {});

}  // namespace nlhf
