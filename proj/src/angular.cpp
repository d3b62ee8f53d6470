#include "nlhf/angular.hpp"

#include <cmath>
#include <cstdlib>

namespace nlhf {

double threej_zero(int l1, int l2, int l3) {
  int L = l1 + l2 + l3;
  if (L % 2 || l3 < std::abs(l1 - l2) || l3 > l1 + l2 || l1 < 0 || l2 < 0) return 0.0;
  int g = L / 2;
  double lnv = 0.5 * (std::lgamma(L - 2 * l1 + 1) + std::lgamma(L - 2 * l2 + 1) +
                      std::lgamma(L - 2 * l3 + 1) - std::lgamma(L + 2)) +
               std::lgamma(g + 1) - std::lgamma(g - l1 + 1) - std::lgamma(g - l2 + 1) -
               std::lgamma(g - l3 + 1);
  double v = std::exp(lnv);
  return (g % 2) ? -v : v;
}

double exchange_coefficient(int la, int k, int lb) {
  double t = threej_zero(la, k, lb);
  return (2 * lb + 1) * t * t;
}

}  // namespace nlhf
