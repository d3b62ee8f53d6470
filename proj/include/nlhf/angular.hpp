#pragma once

namespace nlhf {

// Wigner 3j symbol (l1 l2 l3; 0 0 0).
double threej_zero(int l1, int l2, int l3);

// Closed-shell exchange coefficient for an orbital of angular momentum la interacting with a
// filled shell lb through multipole k: (2lb+1) (la k lb; 000)^2.
double exchange_coefficient(int la, int k, int lb);

}  // namespace nlhf
