#pragma once
#include <Eigen/Dense>

#include "nlhf/scf.hpp"

namespace nlhf {

// Resolvent kernel sampled on the grid, G(r_i, r_j), with (H - E) G = delta(r - r') and the
// delta function represented through the quadrature weights: sum_j (H-E)_ij G_jk w_k = I.
struct ResolventMatrix {
  int l = 0;
  double E = 0;
  bool local = true;
  Eigen::MatrixXd G;
};

// Grid used by the dense Green's-function work.
RadialGrid green_grid();

// Midpoint between the index-th and next pencil eigenvalues (off-spectrum probe).
double probe_energy(const ChannelOperator& op, int index);

// Dense direct inverse. Throws ConditioningError within 1e-6 a.u. of an eigenvalue.
ResolventMatrix green_direct(const ChannelOperator& op, double E);

// Regular x irregular product of the three-point recurrence, kept in log-scaled form.
// Requires a local operator on the three-point kinetic discretization.
ResolventMatrix green_product(const ChannelOperator& op, double E);

// || L^{1/2} ((H - E) G W - I) L^{-1/2} ||_2 in the weight-orthonormal representation.
double resolvent_residual(const ChannelOperator& op, const ResolventMatrix& R);

// Spectral sum over the lowest m eigenpairs of the dense pencil (m <= 0: all).
Eigen::MatrixXd spectral_sum(const ChannelOperator& op, double E, int m);
// sum_k P_k(r_i) P_k(r_j) w_j over all discrete eigenvectors.
Eigen::MatrixXd completeness(const ChannelOperator& op);

// Three-point operator of channel l of the core on `grid`, exchange scaled by lambda.
ChannelOperator green_operator(const SCFResult& core, int l, const RadialGrid& grid, double lambda = 1);

// Product form built from the local part of the core's channel operator, tested against
// the full operator with the exchange scaled by lambda.
double product_form_residual(const SCFResult& core, int l, double E, double lambda = 1,
                             const RadialGrid& grid = green_grid());
double product_form_residual(const ChannelOperator& full, double E);

}  // namespace nlhf
