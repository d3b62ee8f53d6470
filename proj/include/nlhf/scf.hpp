#pragma once
#include <optional>
#include <string>
#include <vector>

#include "nlhf/atom.hpp"
#include "nlhf/channel.hpp"
#include "nlhf/grid.hpp"

namespace nlhf {

enum class Scheme { kHartree, kHartreeNoSelf, kHF };
Scheme parse_scheme(const std::string& tag);
std::string to_string(Scheme s);

struct Orbital {
  int n = 1, l = 0, occupancy = 0;
  double energy = 0;
  std::vector<double> P;  // radial samples, sum(measure * P^2) = 1
  double residual = 0;
  std::string label() const;
};

struct SCFOptions {
  double mixing = 0.3;
  double energy_tol = 1e-8;
  double eigen_tol = 1e-7;
  int max_iterations = 300;
  Kinetic kinetic = Kinetic::kNumerov;
};

struct SCFResult {
  Scheme scheme = Scheme::kHF;
  AtomSpec atom;
  RadialGrid grid;
  Kinetic kinetic = Kinetic::kNumerov;
  std::vector<Orbital> orbitals;          // ordered by (l, energy)
  std::vector<double> hartree_potential;  // -Z/r + electron repulsion of the full density
  double total_energy = 0;
  double kinetic_energy = 0;
  double potential_energy = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_trace;

  const Orbital& orbital(int n, int l) const;
  std::size_t index_of(int n, int l) const;
  double virial_ratio() const;  // |2T + V| / |V|
};

// Electron-repulsion kernel integral: sum_j S^k(r_i, r_j) f_j measure_j, i.e. Y^k(r)/r.
std::vector<double> screening(const RadialGrid& grid, int k, const std::vector<double>& a,
                              const std::vector<double>& b);

// -Z/r plus the direct potential of all orbitals; `exclude` removes one electron of that
// orbital (the potential seen by that electron in the no-self-action scheme).
std::vector<double> hartree_potential(const std::vector<Orbital>& orbitals,
                                      const RadialGrid& grid, double Z,
                                      std::optional<std::size_t> exclude = std::nullopt);

// Closed-shell exchange weight of shell b seen in channel la through multipole k.
double exchange_weight(int la, int k, const Orbital& b, bool one_electron_system);

// Nonlocal exchange kernel K_l(r, r') = sum_t c_t P_b(r) S^k(r,r') P_b(r').
struct ExchangeKernel {
  RadialGrid grid;
  std::vector<int> channels;
  std::vector<std::vector<ExchangeTerm>> terms;  // per channel
  const std::vector<ExchangeTerm>& for_l(int l) const;
  Eigen::MatrixXd sample(int l) const;  // K_l(r_i, r_j)
};
ExchangeKernel build_exchange_kernel(const std::vector<Orbital>& occupied, const RadialGrid& grid,
                                     int max_l = 3);
// Returns (K P)(r_i) = int K_l(r_i, r') P(r') dr'.
std::vector<double> apply_exchange(const ExchangeKernel& kernel, const Orbital& target);

// Operator of channel l for the given scheme built from the occupied orbitals of `core`.
// For hartree-no-self-action `self` selects whose potential is used (one electron removed).
ChannelOperator channel_operator(const SCFResult& core, int l,
                                 std::optional<std::size_t> self = std::nullopt,
                                 Kinetic kinetic = Kinetic::kNumerov);
// Same on another grid (core orbitals are resampled).
ChannelOperator channel_operator(const SCFResult& core, int l, const RadialGrid& grid,
                                 std::optional<std::size_t> self = std::nullopt,
                                 Kinetic kinetic = Kinetic::kNumerov);

SCFResult solve(const AtomSpec& atom, const RadialGrid& grid, Scheme scheme,
                const SCFOptions& options = {});

// Energy functional of the scheme evaluated on the orbitals stored in `result`
// (fills total/kinetic/potential energies).
void evaluate_energy(SCFResult& result);
double total_energy(const SCFResult& result);

}  // namespace nlhf
