#include "nlhf/tunneling.hpp"

#include <cmath>
#include <limits>

#include "nlhf/errors.hpp"

namespace nlhf {

namespace {
constexpr double kLn10 = 2.302585092994046;
double lg(double v) { return std::log10(v); }
}  // namespace

void validate(const TunnelingInput& in) {
  if (!(in.I_i > in.I_o && in.I_o > 0)) throw ConfigError("tunneling: need I_i > I_o > 0");
  if (!(in.E_field > 0)) throw ConfigError("tunneling: need E > 0");
  if (!(in.n >= in.n_i && in.n_i >= 1)) throw ConfigError("tunneling: need n >= n_i >= 1");
  if (in.N_o < 1) throw ConfigError("tunneling: need N_o >= 1");
}

double bare_density(double I, int n_level, double E) {
  if (!(I > 0) || !(E > 0)) throw DomainError("tunneling: need I > 0 and E > 0");
  return (n_level + 0.5) * lg(I) + 2.0 * (n_level - 1) * lg(I / E) -
         2.0 * std::sqrt(2 * I) * (I / E) / kLn10;
}

ExchangeDensity exchange_density(const TunnelingInput& in) {
  validate(in);
  ExchangeDensity d;
  if (in.C_n == 0) {
    d.log10_value = -std::numeric_limits<double>::infinity();
    return d;
  }
  const double a = std::sqrt(2 * in.I_i), b = std::sqrt(2 * in.I_o), ri = in.I_i / in.E_field;
  // ln of the two amplitudes of the two-term form
  const double own = 1.5 * std::log(a) - a * ri;
  const double ex = 1.5 * std::log(b) + std::log(std::abs(in.C_n)) + std::log(in.N_o) -
                    2 * std::log(a * ri) + (in.n - 1) * std::log(b * ri) - b * ri;
  d.deep_regime = ex > own;
  if (d.deep_regime) {
    d.log10_value = 2 * ex / kLn10;
  } else {
    // |e^own - sign(C) e^ex|^2
    double big = std::max(own, ex), small = std::min(own, ex);
    double rel = std::exp(small - big);
    double amp = in.C_n > 0 ? 1 - rel : 1 + rel;
    d.log10_value = 2 * (big + std::log(std::abs(amp))) / kLn10;
  }
  return d;
}

double eta(const TunnelingInput& in, EtaConvention c) {
  validate(in);
  if (c == EtaConvention::kRatio)
    return exchange_density(in).log10_value - bare_density(in.I_i, in.n_i, in.E_field);
  return 2 * lg(std::abs(in.C_n)) + 2 * lg(in.N_o) +
         2.0 * (in.n - in.n_i) * lg(std::sqrt(2 * in.I_o) * in.I_i / in.E_field) +
         2 * std::sqrt(2 * in.I_i) * in.I_i / in.E_field / kLn10;
}

double tau(const TunnelingInput& in) {
  validate(in);
  return 2 * lg(std::abs(in.C_n)) + 2 * lg(in.N_o) + 4 * lg(in.E_field) -
         2 * std::sqrt(2 * in.I_o) * in.I_i / in.E_field / kLn10;
}

double field_intensity_w_cm2(double E) { return 3.50944758e16 * E * E; }

TunnelingReport tunneling_report(const TunnelingInput& in) {
  validate(in);
  TunnelingReport r;
  r.bare_inner = bare_density(in.I_i, in.n_i, in.E_field);
  r.bare_outer = bare_density(in.I_o, in.n, in.E_field);
  auto ex = exchange_density(in);
  r.exchange_inner = ex.log10_value;
  r.deep_regime = ex.deep_regime;
  r.eta = eta(in);
  r.tau = tau(in);
  r.intensity_w_cm2 = field_intensity_w_cm2(in.E_field);
  return r;
}

}  // namespace nlhf
