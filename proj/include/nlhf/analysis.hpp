#pragma once
#include <vector>

#include "nlhf/tail.hpp"

namespace nlhf {

struct NodeReport {
  int n = 1, l = 0;
  std::vector<double> positions;
  int count = 0;
  double amplitude_floor = 1e-30;
};

// Sign changes of a refined orbital. Crossings within 1e-3 a.u. of either end and
// crossings between samples below floor*max|P| are ignored. Unrefined input whose
// tail sinks into roundoff throws PrecisionError.
NodeReport count_nodes(const RefinedOrbital& orbital, double amplitude_floor = 1e-30);

struct MixingCoefficient {
  double value = 0;
  bool allowed = false;  // false: dipole selection violated or inner == outer
};

// C = w * int P_o r P_i dr with w the closed-shell k=1 weight (2 l_o + 1)(l_i 1 l_o; 0 0 0)^2.
MixingCoefficient mixing_coefficient(const Orbital& inner, const Orbital& outer,
                                     const RadialGrid& grid);

struct TailTerm {
  int n = 2;
  double beta = 0;  // sqrt(2|E_o|)
  double C = 0;
  double multiplicity = 1;  // identical outer electrons contributing
};

struct TailModel {
  double alpha = 0;  // sqrt(2|E_i|)
  std::vector<TailTerm> terms;
  // phi(r) = alpha^{3/2} e^{-alpha r} - sum m beta^{3/2} C (beta r)^{n-1} e^{-beta r} / (alpha r)^2
  double log10_abs(double r) const;
  int sign(double r) const;
  double slope(double r) const;  // d ln|phi| / dr
};

TailModel predict_tail(const Orbital& inner, const std::vector<Orbital>& outers,
                       const RadialGrid& grid);

struct Enhancement {
  double rho = 0;
  double r_at_rho = 0;       // r(rho) of the plot transform
  double log10_rho_reading;  // log10 |phi_HF / phi_H| at r(rho)
  double log10_r_reading;    // same at r = rho
};

Enhancement tail_enhancement(const RefinedOrbital& hartree, const RefinedOrbital& hf, double rho,
                             const PlotTransform& t = {});

}  // namespace nlhf
