#include "nlhf/green.hpp"

#include <cmath>
#include <limits>

#include "nlhf/errors.hpp"

namespace nlhf {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// S = diag(sqrt g): G_P = S (A - E B)^{-1} S / h
MatrixXd to_kernel(const RadialGrid& g, const MatrixXd& Ginv_y) {
  const Index n = Ginv_y.rows();
  MatrixXd G(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      G(i, j) = std::sqrt(g.g[i] * g.g[j]) * Ginv_y(i, j) / g.h;
  return G;
}

void check_off_spectrum(const ChannelOperator& op, double E) {
  const double tol = 1e-6;
  int lo = op.count_below(E - tol), hi = op.count_below(E + tol);
  if (lo != hi) {
    double nearest = op.eigenpair(lo).energy;
    throw ConditioningError("greens_function: probe energy " + std::to_string(E) +
                                " lies within 1e-6 of the eigenvalue " + std::to_string(nearest),
                            nearest);
  }
}

}  // namespace

RadialGrid green_grid() { return build_grid(1e-5, 40.0, 400, Mapping::kLog); }

double probe_energy(const ChannelOperator& op, int index) {
  double a = op.eigenpair(index, nullptr, std::numeric_limits<double>::max()).energy;
  double b = op.eigenpair(index + 1, nullptr, std::numeric_limits<double>::max()).energy;
  return 0.5 * (a + b);
}

ResolventMatrix green_direct(const ChannelOperator& op, double E) {
  check_off_spectrum(op, E);
  MatrixXd K = op.dense_A();
  K.diagonal() -= E * op.B_diagonal();
  ResolventMatrix R;
  R.l = op.l();
  R.E = E;
  R.local = op.exchange().empty() || op.exchange_scale() == 0;
  MatrixXd inv = K.ldlt().solve(MatrixXd::Identity(K.rows(), K.cols()));
  R.G = to_kernel(op.grid(), 0.5 * (inv + inv.transpose()));
  return R;
}

ResolventMatrix green_product(const ChannelOperator& op, double E) {
  if (op.kinetic() != Kinetic::kThreePoint)
    throw ConfigError("greens_function: product form needs the three-point recurrence");
  if (!op.exchange().empty() && op.exchange_scale() != 0)
    throw ConfigError("greens_function: product form needs a local operator");
  check_off_spectrum(op, E);
  MatrixXd K = op.dense_A();
  K.diagonal() -= E * op.B_diagonal();
  const Index n = K.rows();
  // ln|u|, sign(u) for the regular (from the origin) and irregular (from r_max) solutions,
  // propagated through ratios so that neither over- nor underflows.
  std::vector<double> Lp(n), Lc(n), rp(n - 1), rc(n - 1);
  std::vector<int> sp(n), sc(n);
  // rp[i] = phi_{i+1}/phi_i from rows 0..n-2
  rp[0] = -K(0, 0) / K(0, 1);
  for (Index i = 1; i + 1 < n; ++i) rp[i] = -(K(i, i) + K(i, i - 1) / rp[i - 1]) / K(i, i + 1);
  // rc[i] = chi_i/chi_{i+1} from rows n-1..1
  rc[n - 2] = -K(n - 1, n - 1) / K(n - 1, n - 2);
  for (Index i = n - 2; i >= 1; --i) rc[i - 1] = -(K(i, i) + K(i, i + 1) / rc[i]) / K(i, i - 1);
  Lp[0] = 0;
  sp[0] = 1;
  for (Index i = 0; i + 1 < n; ++i) {
    Lp[i + 1] = Lp[i] + std::log(std::abs(rp[i]));
    sp[i + 1] = sp[i] * (rp[i] < 0 ? -1 : 1);
  }
  Lc[n - 1] = 0;
  sc[n - 1] = 1;
  for (Index i = n - 1; i >= 1; --i) {
    Lc[i - 1] = Lc[i] + std::log(std::abs(rc[i - 1]));
    sc[i - 1] = sc[i] * (rc[i - 1] < 0 ? -1 : 1);
  }
  // W = b_m (phi_m chi_{m+1} - phi_{m+1} chi_m) = b_m phi_m chi_{m+1} (1 - rp_m rc_m)
  const Index m = n / 2;
  const double bracket = 1.0 - rp[m] * rc[m];
  if (std::abs(bracket) < 1e-12)
    throw NumericalError("greens_function: regular and irregular solutions are degenerate (Wronskian < 1e-12)");
  const double Wb = K(m, m + 1) * bracket;
  const double LW = Lp[m] + Lc[m + 1] + std::log(std::abs(Wb));
  const int sW = sp[m] * sc[m + 1] * (Wb < 0 ? -1 : 1);
  MatrixXd Gy(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      Index a = std::min(i, j), b = std::max(i, j);
      Gy(i, j) = sp[a] * sc[b] * sW * std::exp(Lp[a] + Lc[b] - LW);
    }
  ResolventMatrix R;
  R.l = op.l();
  R.E = E;
  R.local = true;
  R.G = to_kernel(op.grid(), Gy);
  return R;
}

double resolvent_residual(const ChannelOperator& op, const ResolventMatrix& R) {
  // In y-space: (A - E B) G_y - I with G_y = h S^{-1} G S^{-1}; symmetrized with B^{1/2}.
  const auto& g = op.grid();
  MatrixXd K = op.dense_A();
  K.diagonal() -= R.E * op.B_diagonal();
  const Index n = K.rows();
  MatrixXd Gy(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) Gy(i, j) = g.h * R.G(i, j) / std::sqrt(g.g[i] * g.g[j]);
  MatrixXd Res = K * Gy - MatrixXd::Identity(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) Res(i, j) *= g.g[j] / g.g[i];
  Eigen::BDCSVD<MatrixXd> svd(Res);
  return svd.singularValues()(0);
}

namespace {
struct Spectrum {
  VectorXd E;
  MatrixXd P;  // columns: P_k on the grid, sum w P^2 = 1
};
Spectrum dense_spectrum(const ChannelOperator& op) {
  MatrixXd A = op.dense_A();
  MatrixXd B = op.B_diagonal().asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(A, B);
  if (es.info() != Eigen::Success) throw NumericalError("greens_function: dense eigensolve failed");
  const auto& g = op.grid();
  Spectrum s;
  s.E = es.eigenvalues();
  s.P = es.eigenvectors();  // y with y^T B y = 1
  for (Index i = 0; i < s.P.rows(); ++i) s.P.row(i) *= std::sqrt(g.g[i] / g.h);
  return s;
}
}  // namespace

MatrixXd spectral_sum(const ChannelOperator& op, double E, int m) {
  auto s = dense_spectrum(op);
  const Index n = s.E.size();
  const Index upto = (m <= 0 || m > n) ? n : m;
  MatrixXd G = MatrixXd::Zero(n, n);
  for (Index k = 0; k < upto; ++k) G += s.P.col(k) * s.P.col(k).transpose() / (s.E(k) - E);
  return G;
}

MatrixXd completeness(const ChannelOperator& op) {
  auto s = dense_spectrum(op);
  MatrixXd C = s.P * s.P.transpose();
  const auto& g = op.grid();
  for (Index j = 0; j < C.cols(); ++j) C.col(j) *= g.h * g.g[j];
  return C;
}

ChannelOperator green_operator(const SCFResult& core, int l, const RadialGrid& grid, double lambda) {
  auto op = channel_operator(core, l, grid, std::nullopt, Kinetic::kThreePoint);
  op.set_exchange_scale(lambda);
  return op;
}

double product_form_residual(const ChannelOperator& full, double E) {
  ChannelOperator local = full;
  local.clear_exchange();
  auto Gp = green_product(local, E);
  Gp.E = E;
  return resolvent_residual(full, Gp);
}

double product_form_residual(const SCFResult& core, int l, double E, double lambda,
                             const RadialGrid& grid) {
  return product_form_residual(green_operator(core, l, grid, lambda), E);
}

}  // namespace nlhf
