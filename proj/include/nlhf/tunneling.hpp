#pragma once

namespace nlhf {

// Static-field ionization estimates, all densities in log10.
struct TunnelingInput {
  double I_i = 5, I_o = 0.5;  // inner / outer binding energies (a.u.)
  double E_field = 1;         // a.u.
  int n = 1, n_i = 1;         // outer / inner principal quantum numbers
  double C_n = 1;
  int N_o = 1;
};

void validate(const TunnelingInput& in);

// I^{n+1/2} (I/E)^{2(n-1)} exp(-2 sqrt(2I) I/E) at the exit point I/E.
double bare_density(double I, int n_level, double E_field);

struct ExchangeDensity {
  double log10_value = 0;
  bool deep_regime = true;  // false: the own-decay term of the two-term form dominates
};
// beta^3 C^2 / (alpha r_i)^4 (beta r_i)^{2n-2} e^{-2 beta r_i} N_o^2, r_i = I_i / E.
// Outside the deep regime the full two-term amplitude is returned instead.
ExchangeDensity exchange_density(const TunnelingInput& in);

enum class EtaConvention {
  kClosedForm,  // C^2 (sqrt(2 I_o) I_i/E)^{2(n-n_i)} exp(2 sqrt(2 I_i) I_i/E) N_o^2
  kRatio,       // exchange_density - bare_density(I_i, n_i)
};
double eta(const TunnelingInput& in, EtaConvention c = EtaConvention::kClosedForm);

// C^2 N_o^2 E^4 exp(-2 sqrt(2 I_o) I_i / E), prefactor 1.
double tau(const TunnelingInput& in);

struct TunnelingReport {
  double bare_inner = 0, bare_outer = 0, exchange_inner = 0;
  double eta = 0, tau = 0;
  bool deep_regime = true;
  double intensity_w_cm2 = 0;  // field intensity for display
};
TunnelingReport tunneling_report(const TunnelingInput& in);

// 1 a.u. field corresponds to 3.51e16 W/cm^2.
double field_intensity_w_cm2(double E_field);

}  // namespace nlhf
