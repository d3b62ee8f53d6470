#pragma once
#include <string>
#include <vector>

namespace nlhf {

// Hartree subshell nl with the separable repulsion alpha / (r1 r2), N = 4l + 2 electrons split
// into two groups of 2l + 1 with effective charges Z1, Z2.
enum class Kind { kNormal, kSingular };
std::string to_string(Kind k);

struct CoulombModelSolution {
  double Z = 1;
  int n = 1, l = 0;
  double alpha = 0;
  int N = 2;
  double Z1 = 0, Z2 = 0;
  Kind kind = Kind::kNormal;
  double E_total = 0;
  double E1 = 0, E2 = 0;  // one-particle energies -Z_p^2 / 2n^2
  double R1 = 0, R2 = 0;  // mean radii of the two groups
};

CoulombModelSolution coulomb_normal(double Z, int n, int l, double alpha);
// alpha = n^2 family, 0 < Z1 < Z/(2l+1).
CoulombModelSolution coulomb_singular_family(double Z, int n, int l, double Z1);
// sum E_k - 1/2 sum_{i != k} V_ik,ik with V = alpha <1/r>_i <1/r>_k, <1/r> = Z_eff / n^2.
double coulomb_total_energy(const CoulombModelSolution& s);
// -Z^2 N / 2n^2 [1 + (alpha/n^2)(N-1)]^{-1}
double coulomb_closed_form_energy(double Z, int n, int l, double alpha);
// Residual of the two-group self-consistency equations for (Z1, Z2).
double coulomb_equation_residual(const CoulombModelSolution& s);

struct OscillatorModelSolution {
  double omega = 1, beta = 0;
  double w1 = 0, w2 = 0;  // effective frequencies
  int N1 = 1, N2 = 1;
  Kind kind = Kind::kNormal;
  double E1 = 0, E2 = 0;  // one-particle energies 3/2 w_p (lowest level)
  double energy = 0;      // schematic functional, see oscillator_energy
  double extent1 = 0, extent2 = 0;  // sqrt(<r^2>) = sqrt(3 / 2 w_p)
};

// Normal solution w^2 = omega^2 / (1 + beta) (beta != 1).
OscillatorModelSolution oscillator_normal(double omega, double beta, int N1 = 1, int N2 = 1);
// beta = 1 family member with w1 given, w1^2 + w2^2 = omega^2.
OscillatorModelSolution oscillator_family(double omega, double w1, int N1 = 1, int N2 = 1);
// Functional whose stationarity gives w_p^2 = omega^2 - beta w_q^2:
//   1/2 (u1^2 + u2^2) + beta u1 u2 - omega^2 (u1 + u2),  u_p = w_p^2
double oscillator_energy(double omega, double beta, double w1, double w2);

enum class ChiForm {
  kInverseDenominator,  // chi = 2 sum |<j|1/r|i>|^2 / (E_i - E_j)  (static RPA limit)
  kAsPrinted,           // chi = sum |<j|1/r|i>|^2 (E_j - E_i)
};
ChiForm parse_chi_form(const std::string& tag);
std::string to_string(ChiForm f);

struct InstabilityResult {
  bool found = false;
  double alpha_critical = 0;
  double chi = 0;  // at alpha_critical (or alpha = 0 when not found)
  int basis_size = 0;
  bool continuum = true;
  double drift = 0;  // relative change of alpha_critical from basis_size/2 to basis_size
  ChiForm form = ChiForm::kInverseDenominator;
};

// Radial <n1 l1| 1/r |n2 l2> for hydrogenic orbitals of charge Z (Gauss-Laguerre, exact).
double hydrogenic_inverse_r(int n1, int l1, int n2, int l2, double Z);
// chi of state nl in the charge Z_eff over basis_size discrete same-l states (and the
// continuum if requested).
double rpa_chi(double Z_eff, int n, int l, int basis_size, bool continuum, ChiForm form);
InstabilityResult rpa_instability(double Z, int n, int l, int basis_size = 40,
                                  ChiForm form = ChiForm::kInverseDenominator, bool continuum = true);

}  // namespace nlhf
