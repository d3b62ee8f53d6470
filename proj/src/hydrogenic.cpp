#include "nlhf/hydrogenic.hpp"

#include <cmath>

namespace nlhf {

namespace {
// Generalized Laguerre L_k^a(x) by upward recurrence (stable for the k used here).
double laguerre(int k, double a, double x) {
  if (k == 0) return 1.0;
  double l0 = 1.0, l1 = 1.0 + a - x;
  for (int m = 1; m < k; ++m) {
    double l2 = ((2 * m + 1 + a - x) * l1 - (m + a) * l0) / (m + 1);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}
}  // namespace

double hydrogenic_P(int n, int l, double Z, double r) {
  double rho = 2.0 * Z * r / n;
  double lnN = 0.5 * (3 * std::log(2.0 * Z / n) + std::lgamma(n - l) - std::log(2.0 * n) -
                      std::lgamma(n + l + 1));
  double val = laguerre(n - l - 1, 2 * l + 1, rho);
  // r R = r N e^{-rho/2} rho^l L
  double lnmag = lnN - 0.5 * rho + (rho > 0 ? l * std::log(rho) : 0.0) + std::log(r);
  return std::exp(lnmag) * val;
}

std::vector<double> hydrogenic_P(int n, int l, double Z, const std::vector<double>& r) {
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = hydrogenic_P(n, l, Z, r[i]);
  return out;
}

}  // namespace nlhf
