#include "nlhf/model.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_coulomb.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "nlhf/errors.hpp"
#include "nlhf/hydrogenic.hpp"

namespace nlhf {

std::string to_string(Kind k) { return k == Kind::kNormal ? "normal" : "singular"; }

namespace {

void check_shell(double Z, int n, int l) {
  if (!(Z > 0)) throw DomainError("Z must be positive");
  if (n < 1 || l < 0 || l >= n) throw DomainError("need 0 <= l < n");
}

double mean_radius(int n, int l, double Zp) { return (3.0 * n * n - l * (l + 1.0)) / (2.0 * Zp); }

void fill(CoulombModelSolution& s) {
  const double n2 = double(s.n) * s.n;
  s.E1 = -s.Z1 * s.Z1 / (2 * n2);
  s.E2 = -s.Z2 * s.Z2 / (2 * n2);
  s.R1 = mean_radius(s.n, s.l, s.Z1);
  s.R2 = mean_radius(s.n, s.l, s.Z2);
  s.E_total = coulomb_total_energy(s);
}

}  // namespace

CoulombModelSolution coulomb_normal(double Z, int n, int l, double alpha) {
  check_shell(Z, n, l);
  if (!(alpha >= 0)) throw DomainError("alpha must be non-negative");
  CoulombModelSolution s;
  s.Z = Z, s.n = n, s.l = l, s.alpha = alpha, s.N = 4 * l + 2;
  const double z = Z / (1 + alpha / (double(n) * n) * (4 * l + 1));
  s.Z1 = s.Z2 = z;
  s.kind = Kind::kNormal;
  fill(s);
  return s;
}

CoulombModelSolution coulomb_singular_family(double Z, int n, int l, double Z1) {
  check_shell(Z, n, l);
  const double total = Z / (2 * l + 1);
  if (!(Z1 > 0 && Z1 < total)) throw DomainError("family parameter Z1 must lie in (0, Z/(2l+1))");
  CoulombModelSolution s;
  s.Z = Z, s.n = n, s.l = l, s.alpha = double(n) * n, s.N = 4 * l + 2;
  s.Z1 = Z1;
  s.Z2 = total - Z1;
  s.kind = Kind::kSingular;
  fill(s);
  return s;
}

double coulomb_total_energy(const CoulombModelSolution& s) {
  const double n2 = double(s.n) * s.n;
  const double m = 2 * s.l + 1;
  const double r1 = s.Z1 / n2, r2 = s.Z2 / n2;
  const double one = m * (-s.Z1 * s.Z1 - s.Z2 * s.Z2) / (2 * n2);
  // ordered pairs i != k: m(m-1) within each group, 2 m^2 across
  const double pairs = s.alpha * (m * (m - 1) * (r1 * r1 + r2 * r2) + 2 * m * m * r1 * r2);
  return one - 0.5 * pairs;
}

double coulomb_closed_form_energy(double Z, int n, int l, double alpha) {
  const double n2 = double(n) * n;
  const double N = 4 * l + 2;
  return -Z * Z * N / (2 * n2) / (1 + alpha / n2 * (N - 1));
}

double coulomb_equation_residual(const CoulombModelSolution& s) {
  const double a = s.alpha / (double(s.n) * s.n);
  const double m = 2 * s.l + 1;
  const double r1 = s.Z1 - (s.Z - a * ((m - 1) * s.Z1 + m * s.Z2));
  const double r2 = s.Z2 - (s.Z - a * ((m - 1) * s.Z2 + m * s.Z1));
  return std::max(std::abs(r1), std::abs(r2));
}

double oscillator_energy(double omega, double beta, double w1, double w2) {
  const double u1 = w1 * w1, u2 = w2 * w2;
  return 0.5 * (u1 * u1 + u2 * u2) + beta * u1 * u2 - omega * omega * (u1 + u2);
}

namespace {

OscillatorModelSolution finish(OscillatorModelSolution s) {
  s.E1 = 1.5 * s.w1;
  s.E2 = 1.5 * s.w2;
  s.extent1 = std::sqrt(1.5 / s.w1);
  s.extent2 = std::sqrt(1.5 / s.w2);
  s.energy = oscillator_energy(s.omega, s.beta, s.w1, s.w2);
  return s;
}

}  // namespace

OscillatorModelSolution oscillator_normal(double omega, double beta, int N1, int N2) {
  if (!(omega > 0)) throw DomainError("omega must be positive");
  if (N1 < 1 || N2 < 1) throw DomainError("group sizes must be positive");
  const double w2 = omega * omega / (1 + beta);
  if (!(w2 > 0) || !std::isfinite(w2))
    throw NumericalError("oscillator instability: effective frequency squared is not positive");
  OscillatorModelSolution s;
  s.omega = omega, s.beta = beta, s.N1 = N1, s.N2 = N2;
  s.w1 = s.w2 = std::sqrt(w2);
  s.kind = Kind::kNormal;
  return finish(s);
}

OscillatorModelSolution oscillator_family(double omega, double w1, int N1, int N2) {
  if (!(omega > 0)) throw DomainError("omega must be positive");
  if (!(w1 > 0 && w1 < omega)) throw DomainError("family parameter w1 must lie in (0, omega)");
  OscillatorModelSolution s;
  s.omega = omega, s.beta = 1, s.N1 = N1, s.N2 = N2;
  s.w1 = w1;
  s.w2 = std::sqrt(omega * omega - w1 * w1);
  s.kind = Kind::kSingular;
  return finish(s);
}

ChiForm parse_chi_form(const std::string& tag) {
  if (tag == "inverse" || tag == "inverse-denominator") return ChiForm::kInverseDenominator;
  if (tag == "printed" || tag == "as-printed") return ChiForm::kAsPrinted;
  throw ConfigError("unknown chi form '" + tag + "' (inverse|printed)");
}

std::string to_string(ChiForm f) {
  return f == ChiForm::kInverseDenominator ? "inverse-denominator" : "as-printed";
}

namespace {

struct FixedRule {
  std::unique_ptr<gsl_integration_fixed_workspace, void (*)(gsl_integration_fixed_workspace*)> w;
  explicit FixedRule(const gsl_integration_fixed_type* t, size_t n, double a, double b)
      : w(gsl_integration_fixed_alloc(t, n, a, b, 0, 0), gsl_integration_fixed_free) {}
  size_t size() const { return gsl_integration_fixed_n(w.get()); }
  const double* nodes() const { return gsl_integration_fixed_nodes(w.get()); }
  const double* weights() const { return gsl_integration_fixed_weights(w.get()); }
};

// Energy-normalized Coulomb continuum sqrt(2 / pi k) F_l(-Z/k, k r).
double coulomb_continuum(int l, double Z, double k, double r) {
  gsl_sf_result F, G, Fp, Gp;
  double eF = 0, eG = 0;
  const int status = gsl_sf_coulomb_wave_FG_e(-Z / k, k * r, l, 0, &F, &Fp, &G, &Gp, &eF, &eG);
  if (status != GSL_SUCCESS && status != GSL_EOVRFLW) throw NumericalError("Coulomb wave evaluation failed: " + std::string(gsl_strerror(status)) + " k=" + std::to_string(k) + " r=" + std::to_string(r) + " l=" + std::to_string(l));
  return std::sqrt(2 / (std::numbers::pi * k)) * F.val * std::exp(eF);
}

}  // namespace

double hydrogenic_inverse_r(int n1, int l1, int n2, int l2, double Z) {
  check_shell(Z, n1, l1);
  check_shell(Z, n2, l2);
  // P1 P2 / r = poly(r) exp(-s r); degree below 2 * nodes - 1 for 80 nodes
  const double s = Z * (1.0 / n1 + 1.0 / n2);
  FixedRule rule(gsl_integration_fixed_laguerre, 80, 0, 1);
  double sum = 0;
  for (size_t i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes()[i];
    const double r = x / s;
    sum += rule.weights()[i] * std::exp(x) * hydrogenic_P(n1, l1, Z, r) * hydrogenic_P(n2, l2, Z, r) / r;
  }
  return sum / s;
}

double rpa_chi(double Z_eff, int n, int l, int basis_size, bool continuum, ChiForm form) {
  check_shell(Z_eff, n, l);
  if (basis_size < 0) throw DomainError("basis size must be non-negative");
  if (basis_size == 0) return 0;
  const double Ei = hydrogenic_energy(n, Z_eff);
  auto term = [&](double m2, double Ej) {
    return form == ChiForm::kInverseDenominator ? 2 * m2 / (Ei - Ej) : m2 * (Ej - Ei);
  };
  double chi = 0;
  int used = 0;
  for (int np = l + 1; used < basis_size; ++np) {
    if (np == n) continue;
    const double m = hydrogenic_inverse_r(np, l, n, l, Z_eff);
    chi += term(m * m, hydrogenic_energy(np, Z_eff));
    ++used;
  }
  if (!continuum) return chi;

  // k = Z u / (1 - u), 32-point Gauss-Legendre in u (tail beyond k = 32 Z dropped); radial integral by Gauss-Legendre over
  // the bound-state extent.
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  FixedRule ku(gsl_integration_fixed_legendre, 32, 0, 0.97);  // k up to 32 Z_eff
  const double r_max = 80.0 * n / Z_eff;
  FixedRule rr(gsl_integration_fixed_legendre, 1200, 0, r_max);
  std::vector<double> bound(rr.size());
  for (size_t j = 0; j < rr.size(); ++j) bound[j] = hydrogenic_P(n, l, Z_eff, rr.nodes()[j]);
  for (size_t i = 0; i < ku.size(); ++i) {
    const double u = ku.nodes()[i];
    const double k = Z_eff * u / (1 - u);
    const double dk = Z_eff / ((1 - u) * (1 - u));
    double m = 0;
    for (size_t j = 0; j < rr.size(); ++j) {
      const double r = rr.nodes()[j];
      m += rr.weights()[j] * coulomb_continuum(l, Z_eff, k, r) * bound[j] / r;
    }
    chi += ku.weights()[i] * dk * k * term(m * m, 0.5 * k * k);  // dE = k dk
  }
  gsl_set_error_handler(old);
  return chi;
}

namespace {

// Fixed point of alpha = -1 / chi(Z_eff(alpha)), Z_eff from the normal solution.
double critical_alpha(double Z, int n, int l, int basis, ChiForm form, bool continuum, bool& found, double& chi_out) {
  const double n2 = double(n) * n;
  auto chi_at = [&](double a) { return rpa_chi(Z / (1 + a / n2 * (4 * l + 1)), n, l, basis, continuum, form); };
  found = false;
  chi_out = chi_at(0);
  if (!(chi_out < 0)) return 0;
  double a = -1 / chi_out;
  for (int it = 0; it < 50; ++it) {
    chi_out = chi_at(a);
    if (!(chi_out < 0)) return 0;
    const double next = -1 / chi_out;
    const bool done = std::abs(next - a) <= 1e-12 * next;
    a = next;
    if (done) {
      found = true;
      return a;
    }
  }
  throw ConvergenceError("critical alpha iteration did not converge");
}

}  // namespace

InstabilityResult rpa_instability(double Z, int n, int l, int basis_size, ChiForm form, bool continuum) {
  check_shell(Z, n, l);
  if (basis_size < 0) throw DomainError("basis size must be non-negative");
  InstabilityResult res;
  res.basis_size = basis_size;
  res.continuum = continuum;
  res.form = form;
  res.alpha_critical = critical_alpha(Z, n, l, basis_size, form, continuum, res.found, res.chi);
  if (res.found && basis_size >= 2) {
    bool half_found = false;
    double chi_half = 0;
    const double half = critical_alpha(Z, n, l, basis_size / 2, form, continuum, half_found, chi_half);
    res.drift = half_found ? std::abs(res.alpha_critical - half) / res.alpha_critical : 1.0;
  }
  return res;
}

}  // namespace nlhf
