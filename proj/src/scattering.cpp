#include "nlhf/scattering.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_coulomb.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "nlhf/errors.hpp"

namespace nlhf {

namespace {

// Unit-amplitude free waves outside the potential: F ~ sin(x - l pi/2 + coulomb terms),
// G ~ cos(...). eta = 0 gives the Riccati-Bessel pair x j_l, -x y_l.
void waves(int l, double eta, double x, double& F, double& G, double& Fp, double& Gp) {
  static const bool quiet = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)quiet;
  gsl_sf_result f, fp, gg, gp;
  double ef = 0, eg = 0;
  int st = gsl_sf_coulomb_wave_FG_e(eta, x, l, 0, &f, &fp, &gg, &gp, &ef, &eg);
  if ((st != GSL_SUCCESS && st != GSL_EOVRFLW) || ef != 0 || eg != 0) {
    if (eta != 0) throw NumericalError("continuum_scattering: Coulomb wave evaluation failed");
    gsl_sf_result j, y, j1, y1;
    if (gsl_sf_bessel_jl_e(l, x, &j) != GSL_SUCCESS || gsl_sf_bessel_yl_e(l, x, &y) != GSL_SUCCESS ||
        gsl_sf_bessel_jl_e(l + 1, x, &j1) != GSL_SUCCESS || gsl_sf_bessel_yl_e(l + 1, x, &y1) != GSL_SUCCESS)
      throw NumericalError("continuum_scattering: Riccati-Bessel evaluation failed");
    // (x f_l)' = (l+1) f_l - x f_{l+1}
    F = x * j.val;
    G = -x * y.val;
    Fp = (l + 1) * j.val - x * j1.val;
    Gp = -((l + 1) * y.val - x * y1.val);
    return;
  }
  F = f.val;
  G = gg.val;
  Fp = fp.val;
  Gp = gp.val;
}

// Charge z of the -z/r tail; the potential must be Coulombic to tolerance on [i1, i2].
double asymptotic_charge(const ChannelOperator& op, std::size_t i1, std::size_t i2, double tol) {
  const auto& g = op.grid();
  const double z = -g.r[i2] * op.potential()[i2];
  for (std::size_t i = i1; i <= i2; ++i)
    if (std::abs(g.r[i] * op.potential()[i] + z) > tol)
      throw NumericalError("continuum_scattering: potential not negligible at the matching radius; extend the grid");
  return std::abs(z) <= tol ? 0.0 : z;
}

double wrap_pi(double d) { return d - M_PI * std::round(d / M_PI); }

}  // namespace

RadialGrid well_grid(double h) {
  if (!(h > 0 && h < 1)) throw DomainError("continuum_scattering: well grid step must lie in (0, 1)");
  return build_grid(h, 40.0, static_cast<int>(std::lround(40.0 / h)), Mapping::kLinear);
}

ChannelOperator well_operator(int l, double depth, double radius, double h) {
  if (l < 0) throw DomainError("continuum_scattering: l must be non-negative");
  if (!(depth >= 0) || !(radius > 0)) throw DomainError("continuum_scattering: well needs depth >= 0, radius > 0");
  RadialGrid grid = well_grid(h);
  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r[i];
    if (std::abs(r - radius) < 0.5 * h) v[i] = -0.5 * depth;
    else if (r < radius) v[i] = -depth;
  }
  return ChannelOperator(grid, l, std::move(v), 0.0);
}

RadialGrid scattering_grid() { return build_grid(1e-6, 40.0, 3000, Mapping::kHybrid, 1.0); }

ChannelOperator continuum_operator(const SCFResult& core, int l) {
  return channel_operator(core, l);
}

ContinuumState continuum_orbital(const ChannelOperator& op, double E, const ScatteringOptions& opt) {
  if (!(E > 0)) throw DomainError("continuum_scattering: continuum energy must be positive");
  const auto& g = op.grid();
  const std::size_t N = g.size();
  const std::size_t i2 = g.locate(opt.r_match);
  const std::size_t i1 = g.locate(opt.r_match - opt.match_span);
  if (i2 + 4 >= N || i1 == 0 || i1 >= i2)
    throw NumericalError("continuum_scattering: matching radius outside the grid; extend the grid");
  const double z = asymptotic_charge(op, i1, i2, opt.range_tolerance);

  ContinuumState s;
  s.l = op.l();
  s.E = E;
  s.k = std::sqrt(2 * E);
  const double eta = -z / s.k;
  // Regular solution of rows 0..N-3: unit source in the last row.
  std::vector<double> rhs(N, 0.0);
  rhs.back() = 1.0;
  s.P = op.to_P(op.solve_shifted(E, rhs));

  double F1, G1, F2, G2, dF, dG;
  waves(s.l, eta, s.k * g.r[i1], F1, G1, dF, dG);
  waves(s.l, eta, s.k * g.r[i2], F2, G2, dF, dG);
  const double P1 = s.P[i1], P2 = s.P[i2];
  const double det = F1 * G2 - F2 * G1;
  const double c = (P1 * G2 - P2 * G1) / det;
  const double sn = (F1 * P2 - F2 * P1) / det;
  double A = std::hypot(c, sn);
  double d = std::atan2(sn, c);
  if (d > M_PI / 2) {
    d -= M_PI;
    A = -A;
  } else if (d <= -M_PI / 2) {
    d += M_PI;
    A = -A;
  }
  s.delta = d;
  for (auto& v : s.P) v /= A;

  // W[P,F] = k sin(delta) W_x[G,F], W[P,G] = k cos(delta) W_x[F,G]: both constant outside
  auto dP = derivative(g, s.P);
  double wf_lo = 1e300, wf_hi = -1e300, wg_lo = 1e300, wg_hi = -1e300;
  for (std::size_t i = i1; i <= i2; ++i) {
    double F, G, Fp, Gp;
    waves(s.l, eta, s.k * g.r[i], F, G, Fp, Gp);
    Fp *= s.k;
    Gp *= s.k;
    double wf = s.P[i] * Fp - dP[i] * F, wg = s.P[i] * Gp - dP[i] * G;
    wf_lo = std::min(wf_lo, wf);
    wf_hi = std::max(wf_hi, wf);
    wg_lo = std::min(wg_lo, wg);
    wg_hi = std::max(wg_hi, wg);
  }
  s.wronskian_spread = std::max(wf_hi - wf_lo, wg_hi - wg_lo) / s.k;
  return s;
}

ContinuumState continuum_orbital(const SCFResult& core, int l, double E, const ScatteringOptions& opt) {
  return continuum_orbital(continuum_operator(core, l), E, opt);
}

std::vector<double> energy_normalized(const ContinuumState& s) {
  std::vector<double> P = s.P;
  const double f = std::sqrt(2.0 / (M_PI * s.k));
  for (auto& v : P) v *= f;
  return P;
}

double wkb_phase(const ChannelOperator& op, double E, const ScatteringOptions& opt) {
  const auto& g = op.grid();
  const double k = std::sqrt(2 * E), lam = op.l() + 0.5;
  const std::size_t iR = g.locate(opt.r_match);
  const double R = g.r[iR];
  if (asymptotic_charge(op, g.locate(opt.r_match - opt.match_span), iR, opt.range_tolerance) != 0)
    throw DomainError("continuum_scattering: WKB branch reference needs a short-range potential");
  if (k * R <= lam) throw DomainError("continuum_scattering: WKB reference needs k r_match > l + 1/2");
  std::vector<double> p2(iR + 1);
  for (std::size_t i = 0; i <= iR; ++i)
    p2[i] = 2 * (E - op.potential()[i]) - lam * lam / (g.r[i] * g.r[i]);
  std::size_t it = iR;  // first point of the outermost allowed region
  while (it > 0 && p2[it - 1] > 0) --it;
  double integral = 0;
  if (it > 0) {
    // p^2 linear across the turning interval
    double rt = g.r[it - 1] + (g.r[it] - g.r[it - 1]) * (-p2[it - 1]) / (p2[it] - p2[it - 1]);
    integral += 2.0 / 3.0 * std::sqrt(p2[it]) * (g.r[it] - rt);
  }
  for (std::size_t i = it; i < iR; ++i)
    integral += 0.5 * (std::sqrt(p2[i]) + std::sqrt(p2[i + 1])) * (g.r[i + 1] - g.r[i]);
  const double free = std::sqrt(k * k * R * R - lam * lam) - lam * std::acos(lam / (k * R));
  return integral - free;
}

std::vector<double> energy_mesh(double e_min, double e_max, int points) {
  if (!(e_min > 0 && e_max > e_min && points >= 2))
    throw ConfigError("continuum_scattering: invalid energy mesh");
  std::vector<double> m(points);
  for (int i = 0; i < points; ++i)
    m[i] = e_min * std::pow(e_max / e_min, static_cast<double>(i) / (points - 1));
  return m;
}

PhaseShiftCurve phase_curve(const ChannelOperator& op, const std::vector<double>& mesh_in,
                            const ScatteringOptions& opt) {
  std::vector<double> mesh = mesh_in;
  std::sort(mesh.begin(), mesh.end());
  if (mesh.empty()) throw ConfigError("continuum_scattering: empty energy mesh");
  std::map<double, double> pts;
  auto raw = [&](double E) { return continuum_orbital(op, E, opt).delta; };

  const double Etop = mesh.back();
  const double ref = wkb_phase(op, Etop, opt);
  double dtop = raw(Etop);
  dtop += M_PI * std::round((ref - dtop) / M_PI);
  pts[Etop] = dtop;

  // Continue the branch from (Ehi, dhi) to Elo, bisecting where the phase moves fast.
  std::function<double(double, double, double, int)> track = [&](double Ehi, double dhi, double Elo,
                                                                  int depth) -> double {
    double d = dhi + wrap_pi(raw(Elo) - dhi);
    if (std::abs(d - dhi) <= M_PI / 4) return d;
    if (depth >= 12)
      throw NumericalError("continuum_scattering: phase branch tracking failed; refine the energy mesh");
    double Emid = std::sqrt(Ehi * Elo);
    double dmid = track(Ehi, dhi, Emid, depth + 1);
    pts[Emid] = dmid;
    return track(Emid, dmid, Elo, depth + 1);
  };
  double prev = dtop;
  for (std::size_t i = mesh.size() - 1; i-- > 0;) {
    prev = track(mesh[i + 1], prev, mesh[i], 0);
    pts[mesh[i]] = prev;
  }
  PhaseShiftCurve c;
  c.l = op.l();
  for (auto& [E, d] : pts) {
    c.energies.push_back(E);
    c.deltas.push_back(d);
  }
  c.reference_gap = std::abs(dtop - ref);
  return c;
}

double extrapolate_zero(const PhaseShiftCurve& c) {
  std::vector<double> ks, ds;
  for (std::size_t i = 0; i < c.energies.size(); ++i)
    if (c.energies[i] <= 1e-2 * (1 + 1e-12)) {
      ks.push_back(std::sqrt(2 * c.energies[i]));
      ds.push_back(c.deltas[i]);
    }
  if (ks.size() < 3) {
    if (c.deltas.empty()) throw ConfigError("continuum_scattering: empty phase curve");
    return c.deltas.front() / M_PI;
  }
  Eigen::MatrixXd A(ks.size(), 3);
  Eigen::VectorXd b(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    A(i, 0) = 1;
    A(i, 1) = ks[i];
    A(i, 2) = ks[i] * ks[i];
    b(i) = ds[i];
  }
  Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
  return x(0) / M_PI;
}

LevinsonReport levinson_check(const PhaseShiftCurve& curve, const ChannelOperator& op, int n_occupied) {
  LevinsonReport r;
  r.l = curve.l;
  r.delta_zero = extrapolate_zero(curve);
  r.n_occupied = n_occupied;
  r.n_bound = op.count_below(0.0) - n_occupied;
  r.nearest = static_cast<int>(std::lround(r.delta_zero));
  r.deviation = std::abs(r.delta_zero - r.nearest);
  r.conclusive = r.deviation < 0.05;
  return r;
}

LevinsonReport levinson_check(const PhaseShiftCurve& curve, const SCFResult& core) {
  int occ = 0;
  for (const auto& o : core.orbitals)
    if (o.l == curve.l) ++occ;
  auto op = continuum_operator(core, curve.l);
  // In a local potential the core-like bound states are ordinary bound states of the
  // scattered electron; only the nonlocal operator excludes them.
  auto r = levinson_check(curve, op, core.scheme == Scheme::kHF ? occ : 0);
  r.n_occupied = occ;
  return r;
}

}  // namespace nlhf
