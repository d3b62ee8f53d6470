#include "nlhf/tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlhf/errors.hpp"

namespace nlhf {

std::size_t RefinedOrbital::locate(double rr) const {
  auto it = std::upper_bound(r.begin(), r.end(), rr);
  if (it == r.begin()) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(it - r.begin()) - 1, r.size() - 2);
}

double RefinedOrbital::log10_abs_at(double rr) const {
  std::size_t i = locate(rr);
  double t = (rr - r[i]) / (r[i + 1] - r[i]);
  return ((1 - t) * log_abs[i] + t * log_abs[i + 1]) / std::log(10.0);
}

double RefinedOrbital::slope_at(double rr) const {
  std::size_t i = locate(rr);
  std::size_t a = i > 0 ? i - 1 : i, b = std::min(i + 2, r.size() - 1);
  return (log_abs[b] - log_abs[a]) / (r[b] - r[a]);
}

namespace {

double lnabs(double v) {
  return v == 0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(v));
}
int sgn(double v) { return (v > 0) - (v < 0); }

// Radius beyond the main lobe where |P| first falls below floor*max|P|.
double auto_r_from(const RadialGrid& g, const std::vector<double>& P, double floor) {
  std::size_t imax = 0;
  for (std::size_t i = 0; i < P.size(); ++i)
    if (std::abs(P[i]) > std::abs(P[imax])) imax = i;
  // last point with |P| >= floor*max, then step past it
  std::size_t last = imax;
  for (std::size_t i = imax; i < P.size(); ++i)
    if (std::abs(P[i]) >= floor * std::abs(P[imax])) last = i;
  return g.r[std::min(last + 1, P.size() - 1)];
}

struct Pair {
  std::size_t b;
  int k;
  double c;
  double moment;  // int P_a P_b r^k over all space (main grid)
};

}  // namespace

std::vector<RefinedOrbital> refine_all_impl(const SCFResult& res, std::vector<double> rfrom,
                                            const TailOptions& opt) {
  const auto& g = res.grid;
  const std::size_t M = res.orbitals.size();
  const double Z = res.atom.Z;
  const bool hf = res.scheme == Scheme::kHF;
  for (double rf : rfrom)
    if (!(rf > g.r.front() && rf < g.r.back()))
      throw DomainError("scf: refine_tail r_from outside the grid");

  // kappa per orbital: own decay for local schemes, slowest decay of all for HF
  std::vector<double> kap(M);
  double kmin = std::numeric_limits<double>::max();
  for (std::size_t a = 0; a < M; ++a) {
    if (!(res.orbitals[a].energy < 0)) throw DomainError("scf: refine_tail needs bound orbitals");
    kap[a] = std::sqrt(-2 * res.orbitals[a].energy);
    kmin = std::min(kmin, kap[a]);
  }
  if (hf)
    for (auto& k : kap) k = kmin;

  const double dr = opt.step;
  const double rs = *std::min_element(rfrom.begin(), rfrom.end());
  const double rend = std::max(g.r_max, *std::max_element(rfrom.begin(), rfrom.end())) + opt.extension;
  const std::size_t J = static_cast<std::size_t>(std::ceil((rend - rs) / dr)) + 1;
  std::vector<double> rr(J);
  for (std::size_t j = 0; j < J; ++j) rr[j] = rs + dr * static_cast<double>(j);
  std::vector<std::size_t> j0(M);
  for (std::size_t a = 0; a < M; ++a) {
    j0[a] = static_cast<std::size_t>(std::llround((rfrom[a] - rs) / dr));
    rfrom[a] = rr[j0[a]];
  }

  auto main_interp = [&](const std::vector<double>& f, double r, int k_tail) {
    if (r <= g.r_max) return interpolate(g, f, r);
    return f.back() * std::pow(g.r_max / r, k_tail + 1);
  };

  // u_b = P_b e^{kappa_b (r - rs)}; initial guess from the main grid, flat beyond it.
  std::vector<std::vector<double>> u(M, std::vector<double>(J));
  for (std::size_t a = 0; a < M; ++a) {
    const auto& P = res.orbitals[a].P;
    for (std::size_t j = 0; j < J; ++j) {
      double r = rr[j];
      double p = r <= g.r_max ? interpolate(g, P, r) : 0.0;
      u[a][j] = p * std::exp(kap[a] * (r - rs));
      if (j > j0[a] && r > g.r_max) u[a][j] = u[a][j - 1];
    }
  }

  // Local potentials on the tail grid.
  std::vector<std::vector<double>> W(M, std::vector<double>(J));
  for (std::size_t a = 0; a < M; ++a) {
    std::optional<std::size_t> ex;
    if (res.scheme == Scheme::kHartreeNoSelf) ex = a;
    auto U = hartree_potential(res.orbitals, g, 0.0, ex);
    int l = res.orbitals[a].l;
    for (std::size_t j = 0; j < J; ++j) {
      double r = rr[j];
      W[a][j] = -Z / r + main_interp(U, r, 0) + 0.5 * l * (l + 1) / (r * r);
    }
  }

  // Exchange pairs with full-space multipole moments.
  std::vector<std::vector<Pair>> pairs(M);
  if (hf) {
    bool one = res.orbitals.size() == 1 && res.orbitals[0].occupancy == 1;
    for (std::size_t a = 0; a < M; ++a)
      for (std::size_t b = 0; b < M; ++b) {
        const auto& oa = res.orbitals[a];
        const auto& ob = res.orbitals[b];
        for (int k = std::abs(oa.l - ob.l); k <= oa.l + ob.l; k += 2) {
          double c = exchange_weight(oa.l, k, ob, one);
          if (c <= 0) continue;
          double m = 0;
          if (!(k == 0 && a != b && oa.l == ob.l)) {  // orthogonal monopoles vanish exactly
            for (std::size_t i = 0; i < g.size(); ++i)
              m += g.measure[i] * oa.P[i] * ob.P[i] * std::pow(g.r[i], k);
          }
          pairs[a].push_back({b, k, c, m});
        }
      }
  }

  auto Yr = [&](std::size_t a, const Pair& p) {
    // Y^k_ab(r)/r = r^{-k-1}[M - int_r^inf P_a P_b r'^k] + r^k int_r^inf P_a P_b r'^{-k-1}
    std::vector<double> out(J);
    double Iin = 0, Iout = 0;
    double fin_prev = 0, fout_prev = 0;
    for (std::size_t j = J; j-- > 0;) {
      double r = rr[j];
      double pp = u[a][j] * u[p.b][j] * std::exp(-(kap[a] + kap[p.b]) * (r - rs));
      double fin = pp * std::pow(r, p.k), fout = pp / std::pow(r, p.k + 1);
      if (j + 1 < J) {
        Iin += 0.5 * dr * (fin + fin_prev);
        Iout += 0.5 * dr * (fout + fout_prev);
      }
      fin_prev = fin;
      fout_prev = fout;
      out[j] = (p.moment - Iin) / std::pow(r, p.k + 1) + std::pow(r, p.k) * Iout;
    }
    return out;
  };

  auto solve_one = [&](std::size_t a) {
    const double eps = res.orbitals[a].energy, kp = kap[a];
    std::vector<double> diag(J, 0.0), src(J, 0.0);
    for (std::size_t j = 0; j < J; ++j) diag[j] = 1.0 / (dr * dr) - 0.5 * kp * kp + W[a][j] - eps;
    for (const auto& p : pairs[a]) {
      auto y = Yr(a, p);
      if (p.b == a) {
        for (std::size_t j = 0; j < J; ++j) diag[j] -= p.c * y[j];
      } else {
        for (std::size_t j = 0; j < J; ++j)
          src[j] += p.c * y[j] * u[p.b][j] * std::exp((kp - kap[p.b]) * (rr[j] - rs));
      }
    }
    const double lo = -0.5 * (1.0 / (dr * dr) + kp / dr);  // coefficient of u_{j-1}
    const double up = -0.5 * (1.0 / (dr * dr) - kp / dr);  // coefficient of u_{j+1}
    const std::size_t s = j0[a] + 1;
    const std::size_t m = J - s;
    std::vector<double> d(m), rhs(m), c(m);
    for (std::size_t q = 0; q < m; ++q) {
      d[q] = diag[s + q];
      rhs[q] = src[s + q];
    }
    rhs[0] -= lo * u[a][j0[a]];
    d[m - 1] += up;  // u_J = u_{J-1}
    // Thomas with constant off-diagonals lo (sub) and up (super)
    c[0] = up / d[0];
    rhs[0] /= d[0];
    for (std::size_t q = 1; q < m; ++q) {
      double piv = d[q] - lo * c[q - 1];
      c[q] = up / piv;
      rhs[q] = (rhs[q] - lo * rhs[q - 1]) / piv;
    }
    for (std::size_t q = m - 1; q-- > 0;) rhs[q] -= c[q] * rhs[q + 1];
    double change = 0, scale = 0;
    for (std::size_t q = 0; q < m; ++q) scale = std::max(scale, std::abs(rhs[q]));
    for (std::size_t q = 0; q < m; ++q) {
      double old = u[a][s + q];
      change = std::max(change, std::abs(rhs[q] - old) / (std::abs(rhs[q]) + 1e-12 * scale + 1e-300));
      u[a][s + q] = rhs[q];
    }
    return change;
  };

  int sweeps = hf ? opt.max_sweeps : 1;
  for (int sw = 0; sw < sweeps; ++sw) {
    double ch = 0;
    for (std::size_t a = 0; a < M; ++a) ch = std::max(ch, solve_one(a));
    if (sw > 0 && ch < opt.tolerance) break;
    if (sw == sweeps - 1 && hf) throw ConvergenceError("scf: refine_tail sweeps did not converge");
  }

  std::vector<RefinedOrbital> out(M);
  for (std::size_t a = 0; a < M; ++a) {
    auto& ro = out[a];
    const auto& o = res.orbitals[a];
    ro.n = o.n;
    ro.l = o.l;
    ro.energy = o.energy;
    ro.r_from = rfrom[a];
    ro.refined = true;
    for (std::size_t i = 0; i < g.size() && g.r[i] < rfrom[a]; ++i) {
      ro.r.push_back(g.r[i]);
      ro.log_abs.push_back(lnabs(o.P[i]));
      ro.sign.push_back(sgn(o.P[i]));
    }
    for (std::size_t j = j0[a]; j < J; ++j) {
      ro.r.push_back(rr[j]);
      ro.log_abs.push_back(-kap[a] * (rr[j] - rs) + lnabs(u[a][j]));
      ro.sign.push_back(sgn(u[a][j]));
    }
  }
  return out;
}

std::vector<RefinedOrbital> refine_all(const SCFResult& res, double r_from, const TailOptions& opt) {
  std::vector<double> rf(res.orbitals.size());
  for (std::size_t a = 0; a < rf.size(); ++a)
    rf[a] = r_from > 0 ? r_from : auto_r_from(res.grid, res.orbitals[a].P, opt.source_floor);
  return refine_all_impl(res, rf, opt);
}

RefinedOrbital refine_tail(const SCFResult& res, int n, int l, double r_from, const TailOptions& opt) {
  std::size_t target = res.index_of(n, l);
  if (!(r_from > res.grid.r.front() && r_from < res.grid.r.back()))
    throw DomainError("scf: refine_tail r_from outside the grid");
  std::vector<double> rf(res.orbitals.size());
  for (std::size_t a = 0; a < rf.size(); ++a)
    rf[a] = (a == target) ? r_from : auto_r_from(res.grid, res.orbitals[a].P, opt.source_floor);
  if (res.scheme != Scheme::kHF) {
    // Local schemes: only the target needs integrating.
    SCFResult one = res;
    one.orbitals = {res.orbitals[target]};
    auto all = refine_all_impl(res, rf, opt);
    return all[target];
  }
  return refine_all_impl(res, rf, opt)[target];
}

RefinedOrbital unrefined(const SCFResult& res, int n, int l) {
  const auto& o = res.orbital(n, l);
  RefinedOrbital ro;
  ro.n = n;
  ro.l = l;
  ro.energy = o.energy;
  ro.r_from = res.grid.r_max;
  ro.r = res.grid.r;
  for (double p : o.P) {
    ro.log_abs.push_back(lnabs(p));
    ro.sign.push_back(sgn(p));
  }
  return ro;
}

}  // namespace nlhf
