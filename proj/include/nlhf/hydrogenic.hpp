#pragma once
#include <vector>

namespace nlhf {

// Hydrogenic P_nl(r) = r R_nl(r) for charge Z, unit-normalized.
double hydrogenic_P(int n, int l, double Z, double r);
std::vector<double> hydrogenic_P(int n, int l, double Z, const std::vector<double>& r);
inline double hydrogenic_energy(int n, double Z) { return -Z * Z / (2.0 * n * n); }

}  // namespace nlhf
