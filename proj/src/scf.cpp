#include "nlhf/scf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nlhf/angular.hpp"
#include "nlhf/errors.hpp"
#include "nlhf/hydrogenic.hpp"

namespace nlhf {

Scheme parse_scheme(const std::string& tag) {
  if (tag == "hartree") return Scheme::kHartree;
  if (tag == "hartree-no-self-action") return Scheme::kHartreeNoSelf;
  if (tag == "hf") return Scheme::kHF;
  throw ConfigError("scf: unknown scheme '" + tag + "'");
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kHartree: return "hartree";
    case Scheme::kHartreeNoSelf: return "hartree-no-self-action";
    case Scheme::kHF: return "hf";
  }
  return "?";
}

std::string Orbital::label() const { return std::to_string(n) + l_letter(l); }

std::size_t SCFResult::index_of(int n, int l) const {
  for (std::size_t i = 0; i < orbitals.size(); ++i)
    if (orbitals[i].n == n && orbitals[i].l == l) return i;
  throw DomainError("scf: shell " + std::to_string(n) + l_letter(l) + " not in result");
}

const Orbital& SCFResult::orbital(int n, int l) const { return orbitals[index_of(n, l)]; }

double SCFResult::virial_ratio() const {
  return std::abs(2 * kinetic_energy + potential_energy) / std::abs(potential_energy);
}

std::vector<double> screening(const RadialGrid& grid, int k, const std::vector<double>& a,
                              const std::vector<double>& b) {
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = a[i] * b[i] * grid.measure[i];
  return multipole_apply(grid.r, k, f);
}

std::vector<double> hartree_potential(const std::vector<Orbital>& orbitals,
                                      const RadialGrid& grid, double Z,
                                      std::optional<std::size_t> exclude) {
  std::vector<double> U(grid.size());
  for (std::size_t i = 0; i < U.size(); ++i) U[i] = -Z / grid.r[i];
  for (std::size_t b = 0; b < orbitals.size(); ++b) {
    double q = orbitals[b].occupancy - ((exclude && *exclude == b) ? 1.0 : 0.0);
    if (q == 0) continue;
    auto y = screening(grid, 0, orbitals[b].P, orbitals[b].P);
    for (std::size_t i = 0; i < U.size(); ++i) U[i] += q * y[i];
  }
  return U;
}

double exchange_weight(int la, int k, const Orbital& b, bool one_electron_system) {
  double t = threej_zero(la, k, b.l);
  return (one_electron_system ? 1.0 : (2 * b.l + 1)) * t * t;
}

namespace {

bool one_electron(const std::vector<Orbital>& occ) {
  return occ.size() == 1 && occ[0].occupancy == 1;
}

std::vector<ExchangeTerm> exchange_terms(int l, const std::vector<Orbital>& occ,
                                         const std::vector<std::vector<double>>& P) {
  std::vector<ExchangeTerm> out;
  bool one = one_electron(occ);
  for (std::size_t b = 0; b < occ.size(); ++b) {
    for (int k = std::abs(l - occ[b].l); k <= l + occ[b].l; k += 2) {
      double c = exchange_weight(l, k, occ[b], one);
      if (c <= 0) continue;
      ExchangeTerm t;
      t.k = k;
      t.coefficient = c;
      t.orbital = P[b];
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<std::vector<double>> orbital_samples(const std::vector<Orbital>& occ) {
  std::vector<std::vector<double>> P;
  for (const auto& o : occ) P.push_back(o.P);
  return P;
}

double dot_measure(const RadialGrid& g, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += g.measure[i] * a[i] * b[i];
  return s;
}

void normalize(const RadialGrid& g, std::vector<double>& P) {
  double s = 1.0 / std::sqrt(dot_measure(g, P, P));
  for (auto& v : P) v *= s;
}

// Symmetric (Loewdin) orthonormalization of the same-l members of `P`.
void lowdin(const RadialGrid& g, const std::vector<Orbital>& shells,
            std::vector<std::vector<double>>& P) {
  std::map<int, std::vector<std::size_t>> by_l;
  for (std::size_t a = 0; a < shells.size(); ++a) by_l[shells[a].l].push_back(a);
  for (auto& [l, idx] : by_l) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd S(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        S(i, j) = dot_measure(g, P[idx[static_cast<std::size_t>(i)]], P[idx[static_cast<std::size_t>(j)]]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    Eigen::MatrixXd Sh = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                         es.eigenvectors().transpose();
    std::vector<std::vector<double>> out(idx.size(), std::vector<double>(g.size(), 0.0));
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) {
        double c = Sh(b, a);
        const auto& src = P[idx[static_cast<std::size_t>(b)]];
        auto& dst = out[static_cast<std::size_t>(a)];
        for (std::size_t i = 0; i < g.size(); ++i) dst[i] += c * src[i];
      }
    for (std::size_t a = 0; a < idx.size(); ++a) P[idx[a]] = std::move(out[a]);
  }
}

bool same_grid(const RadialGrid& a, const RadialGrid& b) {
  return a.size() == b.size() && a.mapping == b.mapping && a.r.front() == b.r.front() &&
         a.r.back() == b.r.back() && a.scale == b.scale;
}

}  // namespace

const std::vector<ExchangeTerm>& ExchangeKernel::for_l(int l) const {
  for (std::size_t i = 0; i < channels.size(); ++i)
    if (channels[i] == l) return terms[i];
  throw DomainError("scf: exchange kernel has no channel l=" + std::to_string(l));
}

Eigen::MatrixXd ExchangeKernel::sample(int l) const {
  const auto& ts = for_l(l);
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : ts)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        auto ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
        double rl = std::min(grid.r[ii], grid.r[jj]), rg = std::max(grid.r[ii], grid.r[jj]);
        K(i, j) += t.coefficient * t.orbital[ii] * t.orbital[jj] * std::pow(rl / rg, t.k) / rg;
      }
  return K;
}

ExchangeKernel build_exchange_kernel(const std::vector<Orbital>& occupied, const RadialGrid& grid,
                                     int max_l) {
  ExchangeKernel K;
  K.grid = grid;
  auto P = orbital_samples(occupied);
  for (int l = 0; l <= max_l; ++l) {
    K.channels.push_back(l);
    K.terms.push_back(exchange_terms(l, occupied, P));
  }
  return K;
}

std::vector<double> apply_exchange(const ExchangeKernel& kernel, const Orbital& target) {
  const auto& g = kernel.grid;
  std::vector<double> out(g.size(), 0.0);
  for (const auto& t : kernel.for_l(target.l)) {
    auto y = screening(g, t.k, t.orbital, target.P);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.coefficient * t.orbital[i] * y[i];
  }
  return out;
}

ChannelOperator channel_operator(const SCFResult& core, int l, const RadialGrid& grid,
                                 std::optional<std::size_t> self, Kinetic kinetic) {
  std::vector<Orbital> occ = core.orbitals;
  if (!same_grid(grid, core.grid))
    for (auto& o : occ) o.P = resample(core.grid, o.P, grid);
  std::optional<std::size_t> excl;
  if (core.scheme == Scheme::kHartreeNoSelf) excl = self;
  auto V = hartree_potential(occ, grid, core.atom.Z, excl);
  ChannelOperator op(grid, l, std::move(V), core.atom.Z, kinetic);
  if (core.scheme == Scheme::kHF)
    for (auto& t : exchange_terms(l, occ, orbital_samples(occ)))
      op.add_exchange(t.k, t.coefficient, std::move(t.orbital));
  return op;
}

ChannelOperator channel_operator(const SCFResult& core, int l, std::optional<std::size_t> self,
                                 Kinetic kinetic) {
  return channel_operator(core, l, core.grid, self, kinetic);
}

void evaluate_energy(SCFResult& res) {
  const auto& g = res.grid;
  const double Z = res.atom.Z;
  const bool one = one_electron(res.orbitals);
  auto P = orbital_samples(res.orbitals);
  std::vector<double> Udir(g.size(), 0.0);
  for (const auto& o : res.orbitals) {
    auto y = screening(g, 0, o.P, o.P);
    for (std::size_t i = 0; i < g.size(); ++i) Udir[i] += o.occupancy * y[i];
  }
  double T = 0, Vn = 0, Eee = 0, Ex = 0;
  std::map<int, ChannelOperator> kin;
  for (std::size_t a = 0; a < res.orbitals.size(); ++a) {
    const auto& o = res.orbitals[a];
    if (!kin.count(o.l))
      kin.emplace(o.l, ChannelOperator(g, o.l, std::vector<double>(g.size(), 0.0), Z, res.kinetic));
    const auto& op = kin.at(o.l);
    auto y = op.to_y(o.P);
    auto Ky = op.apply_kinetic(y);
    double t = 0;
    for (std::size_t i = 0; i < g.size(); ++i) t += y[i] * Ky[i];
    T += o.occupancy * t * g.h;
    double vn = 0, ee = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double w = g.measure[i] * o.P[i] * o.P[i];
      vn += -Z / g.r[i] * w;
      ee += Udir[i] * w;
    }
    if (res.scheme == Scheme::kHartreeNoSelf) {
      auto u = screening(g, 0, o.P, o.P);
      for (std::size_t i = 0; i < g.size(); ++i) ee -= u[i] * g.measure[i] * o.P[i] * o.P[i];
    }
    Vn += o.occupancy * vn;
    Eee += 0.5 * o.occupancy * ee;
    if (res.scheme == Scheme::kHF) {
      double x = 0;
      for (const auto& tm : exchange_terms(o.l, res.orbitals, P)) {
        auto y2 = screening(g, tm.k, tm.orbital, o.P);
        for (std::size_t i = 0; i < g.size(); ++i)
          x += tm.coefficient * g.measure[i] * o.P[i] * tm.orbital[i] * y2[i];
      }
      Ex -= 0.5 * o.occupancy * x;
    }
  }
  (void)one;
  res.kinetic_energy = T;
  res.potential_energy = Vn + Eee + Ex;
  res.total_energy = T + res.potential_energy;
}

double total_energy(const SCFResult& result) {
  SCFResult r = result;
  evaluate_energy(r);
  return r.total_energy;
}

SCFResult solve(const AtomSpec& atom, const RadialGrid& grid, Scheme scheme,
                const SCFOptions& opt) {
  validate(atom);
  SCFResult res;
  res.scheme = scheme;
  res.atom = atom;
  res.grid = grid;
  res.kinetic = opt.kinetic;
  const double Z = atom.Z;
  const std::size_t N = grid.size();

  auto shells = atom.shells;
  std::sort(shells.begin(), shells.end(),
            [](const Shell& a, const Shell& b) { return a.l != b.l ? a.l < b.l : a.n < b.n; });
  for (const auto& s : shells) {
    Orbital o;
    o.n = s.n;
    o.l = s.l;
    o.occupancy = s.occupancy;
    o.P = hydrogenic_P(s.n, s.l, slater_effective_charge(atom, s), grid.r);
    normalize(grid, o.P);
    res.orbitals.push_back(std::move(o));
  }
  const std::size_t M = res.orbitals.size();
  {
    auto P = orbital_samples(res.orbitals);
    lowdin(grid, res.orbitals, P);
    for (std::size_t a = 0; a < M; ++a) res.orbitals[a].P = P[a];
  }

  // Mixed inputs: electron-repulsion potential (per shell for no-self-action) and the
  // orbitals that generate the exchange operator.
  auto electron_part = [&](const std::vector<Orbital>& orbs, std::optional<std::size_t> ex) {
    auto U = hartree_potential(orbs, grid, 0.0, ex);
    return U;
  };
  std::vector<std::vector<double>> Uin;
  if (scheme == Scheme::kHartreeNoSelf)
    for (std::size_t a = 0; a < M; ++a) Uin.push_back(electron_part(res.orbitals, a));
  else
    Uin.push_back(electron_part(res.orbitals, std::nullopt));
  auto Xin = orbital_samples(res.orbitals);

  std::vector<Eigenpair> guess(M);
  std::vector<bool> have_guess(M, false);
  std::vector<double> eps_prev(M, 0.0);
  double E_prev = 0;

  for (int it = 1; it <= opt.max_iterations; ++it) {
    std::vector<Orbital> fresh = res.orbitals;
    auto solve_shell = [&](const ChannelOperator& op, std::size_t a) {
      int idx = fresh[a].n - fresh[a].l - 1;
      Eigenpair ep = op.eigenpair(idx, have_guess[a] ? &guess[a] : nullptr, 0.0);
      fresh[a].energy = ep.energy;
      fresh[a].P = op.to_P(ep.y);
      fresh[a].residual = ep.residual;
      guess[a] = std::move(ep);
      have_guess[a] = true;
    };
    auto potential = [&](const std::vector<double>& U) {
      std::vector<double> V(N);
      for (std::size_t i = 0; i < N; ++i) V[i] = -Z / grid.r[i] + U[i];
      return V;
    };
    if (scheme == Scheme::kHartreeNoSelf) {
      for (std::size_t a = 0; a < M; ++a) {
        ChannelOperator op(grid, fresh[a].l, potential(Uin[a]), Z, opt.kinetic);
        solve_shell(op, a);
      }
    } else {
      std::map<int, std::vector<std::size_t>> by_l;
      for (std::size_t a = 0; a < M; ++a) by_l[fresh[a].l].push_back(a);
      for (auto& [l, idx] : by_l) {
        ChannelOperator op(grid, l, potential(Uin[0]), Z, opt.kinetic);
        if (scheme == Scheme::kHF)
          for (auto& t : exchange_terms(l, res.orbitals, Xin))
            op.add_exchange(t.k, t.coefficient, std::move(t.orbital));
        for (auto a : idx) solve_shell(op, a);
      }
    }
    res.orbitals = fresh;
    evaluate_energy(res);
    res.energy_trace.push_back(res.total_energy);
    res.iterations = it;
    double de = std::abs(res.total_energy - E_prev), deps = 0;
    for (std::size_t a = 0; a < M; ++a) deps = std::max(deps, std::abs(fresh[a].energy - eps_prev[a]));
    for (std::size_t a = 0; a < M; ++a) eps_prev[a] = fresh[a].energy;
    E_prev = res.total_energy;
    if (it > 1 && de < opt.energy_tol && deps < opt.eigen_tol) {
      res.converged = true;
      break;
    }
    const double m = opt.mixing;
    if (scheme == Scheme::kHartreeNoSelf) {
      for (std::size_t a = 0; a < M; ++a) {
        auto Uo = electron_part(res.orbitals, a);
        for (std::size_t i = 0; i < N; ++i) Uin[a][i] = (1 - m) * Uin[a][i] + m * Uo[i];
      }
    } else {
      auto Uo = electron_part(res.orbitals, std::nullopt);
      for (std::size_t i = 0; i < N; ++i) Uin[0][i] = (1 - m) * Uin[0][i] + m * Uo[i];
      if (scheme == Scheme::kHF) {
        for (std::size_t a = 0; a < M; ++a)
          for (std::size_t i = 0; i < N; ++i) Xin[a][i] = (1 - m) * Xin[a][i] + m * res.orbitals[a].P[i];
        lowdin(grid, res.orbitals, Xin);
      }
    }
  }
  res.hartree_potential = hartree_potential(res.orbitals, grid, Z);
  if (!res.converged)
    throw ConvergenceError("scf: no convergence after " + std::to_string(opt.max_iterations) +
                               " iterations (" + to_string(scheme) + ")",
                           res.energy_trace);
  return res;
}

}  // namespace nlhf
