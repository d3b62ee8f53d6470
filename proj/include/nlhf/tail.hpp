#pragma once
#include <vector>

#include "nlhf/scf.hpp"

namespace nlhf {

// Radial orbital in log-magnitude/sign form: main-grid samples below r_from, the
// re-integrated tail beyond it. Represents amplitudes far below double underflow.
struct RefinedOrbital {
  int n = 1, l = 0;
  double energy = 0;
  double r_from = 0;
  bool refined = false;
  std::vector<double> r;
  std::vector<double> log_abs;  // ln|P|, -inf where P == 0
  std::vector<int> sign;        // -1, 0, +1

  std::size_t locate(double rr) const;
  double log10_abs_at(double rr) const;  // linear interpolation of ln|P|
  double slope_at(double rr) const;      // d ln|P| / dr
};

struct TailOptions {
  double step = 0.002;        // uniform r-step of the tail integration
  double extension = 30.0;    // a.u. integrated beyond the main grid
  double source_floor = 1e-6; // other shells are re-integrated where |P| < floor*max|P|
  int max_sweeps = 200;
  double tolerance = 1e-10;   // on ln|P| between sweeps
};

RefinedOrbital refine_tail(const SCFResult& result, int n, int l, double r_from,
                           const TailOptions& options = {});
// All occupied orbitals refined jointly; `r_from` < 0 picks the source_floor radius.
std::vector<RefinedOrbital> refine_all(const SCFResult& result, double r_from = -1,
                                       const TailOptions& options = {});

// Raw grid samples in the same representation (no tail treatment).
RefinedOrbital unrefined(const SCFResult& result, int n, int l);

}  // namespace nlhf
