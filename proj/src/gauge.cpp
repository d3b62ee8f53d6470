#include "nlhf/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nlhf/errors.hpp"

namespace nlhf {

namespace {
// largest k h allowed on a continuum grid
constexpr double kMaxStepPhase = 0.2;
}  // namespace

double dipole_angular(int l_i, int l_f) {
  if (std::abs(l_i - l_f) != 1) return 0;
  return std::max(l_i, l_f) / std::sqrt((2.0 * l_i + 1) * (2.0 * l_f + 1));
}

DipoleElement dipole_length(const Orbital& in, const std::vector<double>& Pf, int l_f,
                            const RadialGrid& g) {
  DipoleElement d;
  const double A = dipole_angular(in.l, l_f);
  if (A == 0) return d;
  d.allowed = true;
  double s = 0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * Pf[i] * g.r[i] * in.P[i];
  d.value = A * s;
  return d;
}

DipoleElement dipole_velocity(const Orbital& in, const std::vector<double>& Pf, int l_f, double omega,
                              const RadialGrid& g) {
  if (!(omega > 0)) throw DomainError("observables_gauge: velocity form needs omega > 0");
  DipoleElement d;
  const double A = dipole_angular(in.l, l_f);
  if (A == 0) return d;
  d.allowed = true;
  const double c = l_f > in.l ? -(in.l + 1.0) : static_cast<double>(in.l);
  auto dP = derivative(g, in.P);
  double s = 0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * Pf[i] * (dP[i] + c * in.P[i] / g.r[i]);
  d.value = -A * s / omega;
  return d;
}

DipolePair dipole_pair(const Orbital& in, const std::vector<double>& Pf, int l_f, double omega,
                       const RadialGrid& g, std::string label) {
  DipolePair p;
  p.transition = std::move(label);
  p.omega = omega;
  p.d_length = dipole_length(in, Pf, l_f, g).value;
  p.d_velocity = dipole_velocity(in, Pf, l_f, omega, g).value;
  double m = std::max(std::abs(p.d_length), std::abs(p.d_velocity));
  p.relative_discrepancy = m > 0 ? std::abs(p.d_length - p.d_velocity) / m : 0;
  return p;
}

namespace {
int occupied_in(const SCFResult& core, int l) {
  int c = 0;
  for (const auto& o : core.orbitals)
    if (o.l == l) ++c;
  return c;
}
std::string shell_label(int n, int l) { return std::to_string(n) + l_letter(l); }
}  // namespace

ChannelOperator final_state_operator(const SCFResult& core, std::size_t hole, int l_f) {
  if (core.scheme == Scheme::kHartreeNoSelf) return channel_operator(core, l_f, hole);
  return channel_operator(core, l_f);
}

ChannelOperator final_state_operator(const SCFResult& core, std::size_t hole, int l_f,
                                     const RadialGrid& grid) {
  if (core.scheme == Scheme::kHartreeNoSelf) return channel_operator(core, l_f, grid, hole);
  return channel_operator(core, l_f, grid);
}

RadialGrid continuum_grid(const SCFResult& core, double eps_max) {
  const double r_max = std::min(core.grid.r.back(), 40.0);
  const double r_min = core.grid.r.front();
  // hybrid step is below (ln(r_max/r_min) + r_max) / (N - 1) everywhere
  const double k = std::sqrt(2 * std::max(eps_max, 0.0));
  const double span = std::log(r_max / r_min) + r_max;
  // no coarser near the nucleus than the core grid
  const double dx = std::log(core.grid.r[1] / r_min);
  const int N = static_cast<int>(std::ceil(span * std::max(k / kMaxStepPhase, 1 / dx))) + 1;
  return build_grid(r_min, r_max, N, Mapping::kHybrid, 1.0);
}

namespace {

bool resolves(const RadialGrid& g, double eps, const ScatteringOptions& opt) {
  const std::size_t i = g.locate(opt.r_match);
  if (i + 1 >= g.size()) return false;
  return std::sqrt(2 * eps) * (g.r[i + 1] - g.r[i]) <= kMaxStepPhase;
}

// Initial orbital and final-state operator on one grid. Off the core grid the initial orbital
// is re-solved with its own channel operator so that both states share the discretization.
struct Frame {
  RadialGrid grid;
  Orbital initial;
  ChannelOperator op;
};

Frame core_frame(const SCFResult& core, std::size_t hole, int l_f) {
  return {core.grid, core.orbitals[hole], final_state_operator(core, hole, l_f)};
}

Frame refined_frame(const SCFResult& core, std::size_t hole, int l_f, const RadialGrid& g) {
  const Orbital& o = core.orbitals[hole];
  int index = 0;
  for (const auto& other : core.orbitals)
    if (other.l == o.l && other.n < o.n) ++index;
  auto own = final_state_operator(core, hole, o.l, g);
  auto e = own.eigenpair(index);
  Orbital in = o;
  in.energy = e.energy;
  in.P = own.to_P(e.y);
  auto ref = resample(core.grid, o.P, g);
  double dot = 0;
  for (std::size_t i = 0; i < g.size(); ++i) dot += g.weights[i] * ref[i] * in.P[i];
  if (dot < 0)
    for (auto& v : in.P) v = -v;
  return {g, std::move(in), final_state_operator(core, hole, l_f, g)};
}

}  // namespace

DipolePair continuum_pair(const SCFResult& core, int n, int l, int l_f, double eps) {
  const std::size_t hole = core.index_of(n, l);
  const ScatteringOptions opt;
  Frame f = resolves(core.grid, eps, opt) ? core_frame(core, hole, l_f)
                                          : refined_frame(core, hole, l_f, continuum_grid(core, eps));
  auto s = continuum_orbital(f.op, eps, opt);
  return dipole_pair(f.initial, energy_normalized(s), l_f, eps - f.initial.energy, f.grid,
                     shell_label(n, l) + "->eps" + l_letter(l_f));
}

DipolePair bound_pair(const SCFResult& core, int n, int l, int l_f, int index) {
  const auto& in = core.orbital(n, l);
  auto op = final_state_operator(core, core.index_of(n, l), l_f);
  const int occ = occupied_in(core, l_f);
  auto e = op.eigenpair(occ + index);
  return dipole_pair(in, op.to_P(e.y), l_f, e.energy - in.energy, core.grid,
                     shell_label(n, l) + "->" + std::to_string(occ + index + l_f + 1) + l_letter(l_f));
}

Form parse_form(const std::string& tag) {
  if (tag == "length") return Form::kLength;
  if (tag == "velocity") return Form::kVelocity;
  throw ConfigError("observables_gauge: unknown form '" + tag + "' (length|velocity)");
}
std::string to_string(Form f) { return f == Form::kLength ? "length" : "velocity"; }

SumRuleReport oscillator_sum(const SCFResult& core, Form form, double omega_max,
                             const ScatteringOptions& opt) {
  SumRuleReport rep;
  rep.scheme = core.scheme;
  rep.form = form;
  rep.omega_max = omega_max;
  rep.electrons = core.atom.electron_count();
  const auto& g = core.grid;
  double eps_top = 0;
  for (const auto& o : core.orbitals) eps_top = std::max(eps_top, omega_max + o.energy);
  const RadialGrid cg = continuum_grid(core, eps_top);
  // f = (2/3) omega d^2 per electron of the initial shell
  auto fval_on = [&](const Frame& fr, const std::vector<double>& Pf, int lf, double w) {
    double d = form == Form::kLength ? dipole_length(fr.initial, Pf, lf, fr.grid).value
                                     : dipole_velocity(fr.initial, Pf, lf, w, fr.grid).value;
    return 2.0 / 3.0 * w * d * d * (2 * lf + 1) / std::max(fr.initial.l, lf);
  };
  std::map<std::pair<std::size_t, int>, Frame> native, refined;
  auto frame = [&](std::size_t hole, int lf, bool fine) -> const Frame& {
    auto& cache = fine ? refined : native;
    auto it = cache.find({hole, lf});
    if (it == cache.end())
      it = cache.emplace(std::pair{hole, lf}, fine ? refined_frame(core, hole, lf, cg) : core_frame(core, hole, lf)).first;
    return it->second;
  };
  constexpr int kMesh = 64;
  for (std::size_t a = 0; a < core.orbitals.size(); ++a) {
    const auto& in = core.orbitals[a];
    for (int lf : {in.l - 1, in.l + 1}) {
      if (lf < 0) continue;
      const auto& op = frame(a, lf, false).op;
      // unoccupied bound states
      const int occ = occupied_in(core, lf);
      const int nb = op.count_below(0.0);
      for (int k = occ; k < nb; ++k) {
        auto e = op.eigenpair(k);
        double w = e.energy - in.energy;
        if (w <= 0 || w > omega_max) continue;
        rep.discrete_sum += in.occupancy * fval_on(frame(a, lf, false), op.to_P(e.y), lf, w);
      }
      // continuum: trapezoid in ln(eps) on a geometric mesh
      const double top = omega_max + in.energy;
      if (top <= 1e-4) continue;
      try {
        auto mesh = energy_mesh(1e-4, top, kMesh);
        std::vector<double> f(kMesh);
        for (int k = 0; k < kMesh; ++k) {
          const Frame& fr = frame(a, lf, !resolves(g, mesh[k], opt));
          auto s = continuum_orbital(fr.op, mesh[k], opt);
          f[k] = fval_on(fr, energy_normalized(s), lf, mesh[k] - fr.initial.energy) * mesh[k];
        }
        double sum = f[0];  // [0, eps_min] with the integrand taken constant
        for (int k = 0; k + 1 < kMesh; ++k) sum += 0.5 * (f[k] + f[k + 1]) * std::log(mesh[k + 1] / mesh[k]);
        rep.continuum_sum += in.occupancy * sum;
      } catch (const NumericalError&) {
        rep.failed_channels.push_back(shell_label(in.n, in.l) + "->eps" + l_letter(lf));
        rep.complete = false;
      }
    }
  }
  rep.partial_sum = rep.discrete_sum + rep.continuum_sum;
  return rep;
}

}  // namespace nlhf
