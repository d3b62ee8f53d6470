#pragma once
#include <functional>
#include <vector>

#include "nlhf/scf.hpp"

namespace nlhf {

// Grid used for continuum work: log near the nucleus, uniform steps of about 0.02 a.u.
// outside, 40 a.u. long.
RadialGrid scattering_grid();

// Uniform grid h, 2h, ..., 40 a.u. for model wells.
RadialGrid well_grid(double h = 0.0025);
// Square well -depth for r < radius on well_grid(h); the edge node carries -depth/2, so the
// radius should be a multiple of h. depth = 0 is the free particle.
ChannelOperator well_operator(int l, double depth, double radius, double h = 0.0025);

struct ScatteringOptions {
  double r_match = 30.0;        // outer matching radius (a.u.)
  double match_span = 4.0;      // second matching point sits this much further in
  double range_tolerance = 1e-8;  // allowed deviation of r V from a constant -z at the matching radii
};

struct ContinuumState {
  int l = 0;
  double E = 0, k = 0;
  double delta = 0;  // phase modulo pi, in (-pi/2, pi/2]
  // P -> sin(kr - l pi/2 + delta) outside the potential (unit amplitude); with a -z/r tail
  // the Coulomb waves replace the free ones and delta is the phase relative to them
  std::vector<double> P;
  double wronskian_spread = 0;  // relative spread of W[P, F_l] over the matching region
};

// Operator of the continuum electron: the frozen-core HF operator (static exchange) for an
// hf core, the full local direct potential for the Hartree schemes.
ChannelOperator continuum_operator(const SCFResult& core, int l);

ContinuumState continuum_orbital(const ChannelOperator& op, double E,
                                 const ScatteringOptions& opt = {});
ContinuumState continuum_orbital(const SCFResult& core, int l, double E,
                                 const ScatteringOptions& opt = {});

// Energy-normalized continuum function sqrt(2/(pi k)) P.
std::vector<double> energy_normalized(const ContinuumState& s);

// Absolute phase from the WKB integral with the Langer-corrected local potential.
double wkb_phase(const ChannelOperator& op, double E, const ScatteringOptions& opt = {});

struct PhaseShiftCurve {
  int l = 0;
  std::vector<double> energies;  // ascending
  std::vector<double> deltas;    // continuous, absolute branch
  double reference_gap = 0;      // |delta - wkb| at the highest energy
};

// Geometric mesh from e_min to e_max.
std::vector<double> energy_mesh(double e_min = 1e-4, double e_max = 50.0, int points = 160);

// Phases tracked downward from the highest energy, whose branch is fixed by wkb_phase.
// Midpoints are inserted where consecutive phases differ by more than pi/4.
PhaseShiftCurve phase_curve(const ChannelOperator& op, const std::vector<double>& mesh,
                            const ScatteringOptions& opt = {});

struct LevinsonReport {
  int l = 0;
  double delta_zero = 0;  // extrapolated delta(0)/pi
  int n_bound = 0;        // extra bound states of the scattered electron
  int n_occupied = 0;     // occupied core shells with this l
  int nearest = 0;
  double deviation = 0;
  bool conclusive = false;  // deviation < 0.05
};

// delta(0) from the fit delta = d0 - a k + b k^2 over E in [1e-4, 1e-2].
double extrapolate_zero(const PhaseShiftCurve& curve);

LevinsonReport levinson_check(const PhaseShiftCurve& curve, const ChannelOperator& op,
                              int n_occupied);
LevinsonReport levinson_check(const PhaseShiftCurve& curve, const SCFResult& core);

}  // namespace nlhf
