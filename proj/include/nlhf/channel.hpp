#pragma once
#include <Eigen/Dense>
#include <vector>

#include "nlhf/grid.hpp"

namespace nlhf {

// Kinetic discretization of -1/2 d2/dx2 on the x-uniform grid.
//   kNumerov:    matrix Numerov, 4th order, -(6/h^2)(I - M^{-1}), M = tri(1,10,1)/12
//   kThreePoint: plain three-point differences, 2nd order, tridiagonal
enum class Kinetic { kNumerov, kThreePoint };

// S^k_ij = r_<^k / r_>^{k+1}: returns sum_j S^k_ij f_j in O(N).
std::vector<double> multipole_apply(const std::vector<double>& r, int k,
                                    const std::vector<double>& f);

// Tridiagonal inverse of S^k: diag[i], off[i] = T(i,i+1).
void multipole_inverse(const std::vector<double>& r, int k, std::vector<double>& diag,
                       std::vector<double>& off);

struct ExchangeTerm {
  int k = 0;
  double coefficient = 0;       // closed-shell angular weight, >= 0
  std::vector<double> orbital;  // P_b on the grid
  // Filled by ChannelOperator: phi = g^{3/2} P_b, and the tridiagonal inverse of S^k.
  std::vector<double> phi, t_diag, t_off;
};

struct Eigenpair {
  double energy = 0;
  std::vector<double> y;  // pencil vector, P = sqrt(g) y, normalized h sum g^2 y^2 = 1
  double residual = 0;    // ||(H-E)P|| relative, see residual_norm
};

// One l-channel of a radial one-electron operator, written as the symmetric pencil
//   A y = E B y,   B = diag(g^2),   A = kinetic + diag(g^2 V + g^2 l(l+1)/2r^2 - q/2) - X
// where X is the (rank-structured) exchange operator.
class ChannelOperator {
 public:
  ChannelOperator(const RadialGrid& grid, int l, std::vector<double> potential,
                  double nuclear_charge, Kinetic kinetic = Kinetic::kNumerov);

  void add_exchange(int k, double coefficient, std::vector<double> orbital);
  void clear_exchange() { exchange_.clear(); }
  void set_exchange_scale(double s) { exchange_scale_ = s; }
  double exchange_scale() const { return exchange_scale_; }
  const std::vector<ExchangeTerm>& exchange() const { return exchange_; }

  const RadialGrid& grid() const { return grid_; }
  int l() const { return l_; }
  Kinetic kinetic() const { return kinetic_; }
  std::size_t size() const { return grid_.size(); }
  const std::vector<double>& potential() const { return potential_; }
  double nuclear_charge() const { return Z_; }
  double origin_ratio() const { return rho_; }

  // Pencil actions on y-vectors.
  std::vector<double> apply(const std::vector<double>& y) const;
  std::vector<double> apply_kinetic(const std::vector<double>& y) const;  // incl. -q/2 and centrifugal
  std::vector<double> apply_exchange(const std::vector<double>& y) const;
  std::vector<double> apply_B(const std::vector<double>& y) const;
  double B_dot(const std::vector<double>& a, const std::vector<double>& b) const;

  // Dense pencil (for small grids, Green's functions and checks).
  Eigen::MatrixXd dense_A() const;
  Eigen::VectorXd B_diagonal() const;

  // Number of pencil eigenvalues strictly below sigma (Sylvester inertia).
  int count_below(double sigma) const;
  // Solve (A - sigma B) x = rhs.
  std::vector<double> solve_shifted(double sigma, const std::vector<double>& rhs) const;

  // index-th eigenpair (0-based, ascending). The guess speeds up SCF iterations.
  // Throws SpectrumError when fewer than index+1 eigenvalues lie below `ceiling`.
  Eigenpair eigenpair(int index, const Eigenpair* guess = nullptr, double ceiling = 0.0) const;

  // Convert between pencil vector y and radial function P = sqrt(g) y.
  std::vector<double> to_P(const std::vector<double>& y) const;
  std::vector<double> to_y(const std::vector<double>& P) const;

  double residual_norm(const std::vector<double>& y, double E) const;

 private:
  struct Factor;
  Factor factorize(double sigma, bool need_inverse) const;

  RadialGrid grid_;
  int l_;
  std::vector<double> potential_;
  double Z_;
  Kinetic kinetic_;
  std::vector<double> Q_;   // diagonal local part of A
  std::vector<double> Qc_;  // centrifugal and Liouville part only
  double rho_ = 0;         // origin ghost ratio y_{-1}/y_0
  std::vector<ExchangeTerm> exchange_;
  double exchange_scale_ = 1.0;
};

}  // namespace nlhf
