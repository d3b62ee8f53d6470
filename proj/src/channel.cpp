#include "nlhf/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlhf/errors.hpp"

namespace nlhf {

std::vector<double> multipole_apply(const std::vector<double>& r, int k,
                                    const std::vector<double>& f) {
  const std::size_t n = r.size();
  std::vector<double> out(n);
  // inner_i = r_i^{-k-1} sum_{j<=i} r_j^k f_j ; outer_i = r_i^k sum_{j>i} r_j^{-k-1} f_j
  double a = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) a *= std::pow(r[i - 1] / r[i], k + 1);
    a += f[i] / r[i];
    out[i] = a;
  }
  double b = 0;
  for (std::size_t i = n - 1; i-- > 0;) {
    b = std::pow(r[i] / r[i + 1], k) * (b + f[i + 1] / r[i + 1]);
    out[i] += b;
  }
  return out;
}

void multipole_inverse(const std::vector<double>& r, int k, std::vector<double>& diag,
                       std::vector<double>& off) {
  const std::size_t n = r.size();
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    delta[i] = std::pow(r[i + 1] / r[i], k) / r[i] - std::pow(r[i] / r[i + 1], k) / r[i + 1];
  diag.assign(n, 0.0);
  off.assign(n - 1, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = -1.0 / delta[i];
  diag[0] = std::pow(r[1] / r[0], k) / delta[0];
  diag[n - 1] = std::pow(r[n - 1] / r[n - 2], k + 1) / delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double num = std::pow(r[i + 1] / r[i - 1], k) / r[i - 1] -
                 std::pow(r[i - 1] / r[i + 1], k) / r[i + 1];
    diag[i] = num / (delta[i - 1] * delta[i]);
  }
}

namespace {

constexpr int kMaxBlock = 24;
using Blk = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxBlock, kMaxBlock>;
using BVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxBlock, 1>;

// Thomas solve with constant off-diagonal e.
std::vector<double> tridiag_solve(const std::vector<double>& diag, double e,
                                  const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n), d(n);
  double m = diag[0];
  c[0] = e / m;
  d[0] = rhs[0] / m;
  for (std::size_t i = 1; i < n; ++i) {
    m = diag[i] - e * c[i - 1];
    c[i] = e / m;
    d[i] = (rhs[i] - e * d[i - 1]) / m;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

}  // namespace

ChannelOperator::ChannelOperator(const RadialGrid& grid, int l, std::vector<double> potential,
                                 double nuclear_charge, Kinetic kinetic)
    : grid_(grid), l_(l), potential_(std::move(potential)), Z_(nuclear_charge),
      kinetic_(kinetic) {
  const std::size_t n = grid_.size();
  if (potential_.size() != n) throw ConfigError("channel: potential size mismatch");
  Q_.resize(n);
  Qc_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double r = grid_.r[i], g2 = grid_.g[i] * grid_.g[i];
    Qc_[i] = g2 * 0.5 * l * (l + 1) / (r * r) - 0.5 * grid_.q[i];
    Q_[i] = Qc_[i] + g2 * potential_[i];
  }
  // Ghost point ratio from P ~ r^{l+1}(1 - Z r/(l+1)), y = P/sqrt(g).
  double rm1 = grid_.r_of_x(grid_.x[0] - grid_.h);
  if (!(rm1 > 0) || (grid_.mapping == Mapping::kLinear && grid_.r[0] - grid_.h <= 0)) {
    rho_ = 0;
  } else {
    double r0 = grid_.r[0];
    auto gfun = [&](double rr) {
      switch (grid_.mapping) {
        case Mapping::kLog: return rr;
        case Mapping::kHybrid: return rr * grid_.scale / (rr + grid_.scale);
        case Mapping::kLinear: return 1.0;
      }
      return 1.0;
    };
    auto P = [&](double rr) { return std::pow(rr, l + 1) * (1 - Z_ * rr / (l + 1)); };
    rho_ = (P(rm1) / std::sqrt(gfun(rm1))) / (P(r0) / std::sqrt(gfun(r0)));
  }
}

void ChannelOperator::add_exchange(int k, double coefficient, std::vector<double> orbital) {
  if (coefficient < 0) throw ConfigError("channel: exchange coefficient must be >= 0");
  if (orbital.size() != size()) throw ConfigError("channel: exchange orbital size mismatch");
  if (static_cast<int>(exchange_.size()) + 2 >= kMaxBlock)
    throw ConfigError("channel: too many exchange terms");
  ExchangeTerm t;
  t.k = k;
  t.coefficient = coefficient;
  t.orbital = std::move(orbital);
  t.phi.resize(size());
  for (std::size_t i = 0; i < size(); ++i) t.phi[i] = std::pow(grid_.g[i], 1.5) * t.orbital[i];
  multipole_inverse(grid_.r, k, t.t_diag, t.t_off);
  exchange_.push_back(std::move(t));
}

std::vector<double> ChannelOperator::apply_B(const std::vector<double>& y) const {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = grid_.g[i] * grid_.g[i] * y[i];
  return out;
}

double ChannelOperator::B_dot(const std::vector<double>& a, const std::vector<double>& b) const {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += grid_.g[i] * grid_.g[i] * a[i] * b[i];
  return s * grid_.h;
}

std::vector<double> ChannelOperator::apply_kinetic(const std::vector<double>& y) const {
  const std::size_t n = size();
  const double h2 = grid_.h * grid_.h;
  std::vector<double> out(n);
  if (kinetic_ == Kinetic::kNumerov) {
    std::vector<double> md(n, 10.0 / 12.0);
    md[0] = (10.0 + rho_) / 12.0;
    auto minv = tridiag_solve(md, 1.0 / 12.0, y);
    for (std::size_t i = 0; i < n; ++i) out[i] = -6.0 / h2 * (y[i] - minv[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double ym = (i > 0) ? y[i - 1] : rho_ * y[0];
      double yp = (i + 1 < n) ? y[i + 1] : 0.0;
      out[i] = -0.5 * (ym - 2 * y[i] + yp) / h2;
    }
  }
  for (std::size_t i = 0; i < n; ++i) out[i] += Qc_[i] * y[i];
  return out;
}

std::vector<double> ChannelOperator::apply_exchange(const std::vector<double>& y) const {
  const std::size_t n = size();
  std::vector<double> out(n, 0.0), f(n);
  for (const auto& t : exchange_) {
    for (std::size_t i = 0; i < n; ++i) f[i] = grid_.h * t.phi[i] * y[i];
    auto s = multipole_apply(grid_.r, t.k, f);
    double c = t.coefficient * exchange_scale_;
    for (std::size_t i = 0; i < n; ++i) out[i] += c * t.phi[i] * s[i];
  }
  return out;
}

std::vector<double> ChannelOperator::apply(const std::vector<double>& y) const {
  auto out = apply_kinetic(y);
  for (std::size_t i = 0; i < size(); ++i) out[i] += grid_.g[i] * grid_.g[i] * potential_[i] * y[i];
  if (!exchange_.empty() && exchange_scale_ != 0) {
    auto x = apply_exchange(y);
    for (std::size_t i = 0; i < size(); ++i) out[i] -= x[i];
  }
  return out;
}

Eigen::MatrixXd ChannelOperator::dense_A() const {
  const auto n = static_cast<Eigen::Index>(size());
  const double h2 = grid_.h * grid_.h;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  if (kinetic_ == Kinetic::kNumerov) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      M(i, i) = 10.0 / 12.0;
      if (i + 1 < n) M(i, i + 1) = M(i + 1, i) = 1.0 / 12.0;
    }
    M(0, 0) = (10.0 + rho_) / 12.0;
    Eigen::MatrixXd Minv = M.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
    Minv = 0.5 * (Minv + Minv.transpose()).eval();
    A = -6.0 / h2 * (Eigen::MatrixXd::Identity(n, n) - Minv);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      A(i, i) = 1.0 / h2;
      if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = -0.5 / h2;
    }
    A(0, 0) = (2.0 - rho_) / (2.0 * h2);
  }
  for (Eigen::Index i = 0; i < n; ++i) A(i, i) += Q_[static_cast<std::size_t>(i)];
  for (const auto& t : exchange_) {
    double c = t.coefficient * exchange_scale_ * grid_.h;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto ii = static_cast<std::size_t>(i);
      for (Eigen::Index j = 0; j <= i; ++j) {
        auto jj = static_cast<std::size_t>(j);
        double s = std::pow(grid_.r[jj] / grid_.r[ii], t.k) / grid_.r[ii];
        double v = c * t.phi[ii] * s * t.phi[jj];
        A(i, j) -= v;
        if (j != i) A(j, i) -= v;
      }
    }
  }
  return A;
}

Eigen::VectorXd ChannelOperator::B_diagonal() const {
  Eigen::VectorXd b(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) b(static_cast<Eigen::Index>(i)) = grid_.g[i] * grid_.g[i];
  return b;
}

// Block LDL^T of the augmented symmetric block-tridiagonal system. Site variables:
// y, [v for Numerov], z_t for each exchange term. Off-diagonal blocks are diagonal.
struct ChannelOperator::Factor {
  int d = 0;
  std::size_t n = 0;
  int negatives = 0;
  std::vector<double> dinv;  // n * d * d
  std::vector<double> off;   // (n-1) * d
};

ChannelOperator::Factor ChannelOperator::factorize(double sigma, bool need_inverse) const {
  const std::size_t n = size();
  const bool numerov = kinetic_ == Kinetic::kNumerov;
  const double lam = exchange_scale_;
  std::size_t nt = (lam != 0) ? exchange_.size() : 0;
  const int nv = numerov ? 1 : 0;
  const int d = 1 + nv + static_cast<int>(nt);
  const double h = grid_.h, h2 = h * h;
  Factor F;
  F.d = d;
  F.n = n;
  F.dinv.resize(n * static_cast<std::size_t>(d * d));
  F.off.resize((n - 1) * static_cast<std::size_t>(d));
  std::vector<double> sc(nt);
  for (std::size_t t = 0; t < nt; ++t) sc[t] = std::sqrt(exchange_[t].coefficient * lam * h);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double* c = &F.off[i * static_cast<std::size_t>(d)];
    c[0] = numerov ? 0.0 : -0.5 / h2;
    if (numerov) c[1] = -1.0 / 12.0;
    for (std::size_t t = 0; t < nt; ++t) c[1 + nv + t] = exchange_[t].t_off[i];
  }
  Blk D(d, d), Dinv(d, d), I = Blk::Identity(d, d);
  Eigen::LDLT<Blk> ldlt(d);
  int neg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    D.setZero();
    double g2 = grid_.g[i] * grid_.g[i];
    double kd = numerov ? -6.0 / h2 : ((i == 0) ? (2.0 - rho_) / (2.0 * h2) : 1.0 / h2);
    D(0, 0) = Q_[i] - sigma * g2 + kd;
    if (numerov) {
      D(0, 1) = D(1, 0) = std::sqrt(6.0) / h;
      D(1, 1) = -((i == 0) ? (10.0 + rho_) / 12.0 : 10.0 / 12.0);
    }
    for (std::size_t t = 0; t < nt; ++t) {
      int a = 1 + nv + static_cast<int>(t);
      D(0, a) = D(a, 0) = -sc[t] * exchange_[t].phi[i];
      D(a, a) = exchange_[t].t_diag[i];
    }
    if (i > 0) {
      const double* c = &F.off[(i - 1) * static_cast<std::size_t>(d)];
      Eigen::Map<const Blk> prev(&F.dinv[(i - 1) * static_cast<std::size_t>(d * d)], d, d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) D(a, b) -= c[a] * prev(a, b) * c[b];
    }
    ldlt.compute(D);
    bool ok = ldlt.info() == Eigen::Success;
    int site_neg = 0;
    if (ok) {
      auto dv = ldlt.vectorD();
      for (int a = 0; a < d; ++a) {
        if (!std::isfinite(dv(a)) || dv(a) == 0.0) ok = false;
        if (dv(a) < 0) ++site_neg;
      }
    }
    if (ok) {
      Dinv = ldlt.solve(I);
    } else {
      Eigen::SelfAdjointEigenSolver<Blk> es(D);
      site_neg = 0;
      BVec lam_inv(d);
      for (int a = 0; a < d; ++a) {
        double ev = es.eigenvalues()(a);
        if (ev < 0) ++site_neg;
        if (ev == 0) ev = std::numeric_limits<double>::min();
        lam_inv(a) = 1.0 / ev;
      }
      Dinv = es.eigenvectors() * lam_inv.asDiagonal() * es.eigenvectors().transpose();
    }
    neg += site_neg;
    Eigen::Map<Blk>(&F.dinv[i * static_cast<std::size_t>(d * d)], d, d) = Dinv;
  }
  (void)need_inverse;
  F.negatives = neg - (numerov ? static_cast<int>(n) : 0);
  return F;
}

int ChannelOperator::count_below(double sigma) const { return factorize(sigma, false).negatives; }

std::vector<double> ChannelOperator::solve_shifted(double sigma,
                                                   const std::vector<double>& rhs) const {
  Factor F = factorize(sigma, true);
  const int d = F.d;
  const std::size_t n = F.n;
  const auto dd = static_cast<std::size_t>(d);
  std::vector<double> w(n * dd, 0.0);
  for (std::size_t i = 0; i < n; ++i) w[i * dd] = rhs[i];
  // forward: w_i -= C_{i-1} D_{i-1}^{-1} w_{i-1}
  BVec tmp(d);
  for (std::size_t i = 1; i < n; ++i) {
    Eigen::Map<const Blk> Dp(&F.dinv[(i - 1) * dd * dd], d, d);
    Eigen::Map<const BVec> wp(&w[(i - 1) * dd], d);
    tmp.noalias() = Dp * wp;
    const double* c = &F.off[(i - 1) * dd];
    for (int a = 0; a < d; ++a) w[i * dd + static_cast<std::size_t>(a)] -= c[a] * tmp(a);
  }
  std::vector<double> x(n * dd, 0.0);
  {
    Eigen::Map<const Blk> Dl(&F.dinv[(n - 1) * dd * dd], d, d);
    Eigen::Map<const BVec> wl(&w[(n - 1) * dd], d);
    Eigen::Map<BVec>(&x[(n - 1) * dd], d) = Dl * wl;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    const double* c = &F.off[i * dd];
    for (int a = 0; a < d; ++a)
      tmp(a) = w[i * dd + static_cast<std::size_t>(a)] - c[a] * x[(i + 1) * dd + static_cast<std::size_t>(a)];
    Eigen::Map<const Blk> Di(&F.dinv[i * dd * dd], d, d);
    Eigen::Map<BVec>(&x[i * dd], d) = Di * tmp;
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i * dd];
  return y;
}

std::vector<double> ChannelOperator::to_P(const std::vector<double>& y) const {
  std::vector<double> P(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) P[i] = std::sqrt(grid_.g[i]) * y[i];
  return P;
}

std::vector<double> ChannelOperator::to_y(const std::vector<double>& P) const {
  std::vector<double> y(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) y[i] = P[i] / std::sqrt(grid_.g[i]);
  return y;
}

double ChannelOperator::residual_norm(const std::vector<double>& y, double E) const {
  // Relative residual ||(A - E B) y|| / (||A y|| + |E| ||B y||). The absolute radial norm
  // has a roundoff floor near r_min of the log grid, this one does not.
  auto Ay = apply(y);
  double num = 0, a = 0, b = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double By = grid_.g[i] * grid_.g[i] * y[i];
    double ri = Ay[i] - E * By;
    num += ri * ri;
    a += Ay[i] * Ay[i];
    b += By * By;
  }
  return std::sqrt(num) / (std::sqrt(a) + std::abs(E) * std::sqrt(b));
}

namespace {

void normalize_sign(std::vector<double>& y, const std::vector<double>& g, double h) {
  double nrm = 0, mx = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    nrm += g[i] * g[i] * y[i] * y[i];
    mx = std::max(mx, std::abs(std::sqrt(g[i]) * y[i]));
  }
  double s = 1.0 / std::sqrt(nrm * h);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (std::abs(std::sqrt(g[i]) * y[i]) > 1e-8 * mx) {
      if (y[i] < 0) s = -s;
      break;
    }
  }
  for (auto& v : y) v *= s;
}

}  // namespace

Eigenpair ChannelOperator::eigenpair(int index, const Eigenpair* guess, double ceiling) const {
  const std::size_t n = size();
  auto rq = [&](const std::vector<double>& y) {
    auto Ay = apply(y);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
      num += y[i] * Ay[i];
      den += grid_.g[i] * grid_.g[i] * y[i] * y[i];
    }
    return num / den;
  };
  // Bracket [lo, hi] with count(lo) == index, count(hi) == index + 1.
  double lo, hi;
  int clo, chi;
  if (guess) {
    double del = 1e-3 * (1.0 + std::abs(guess->energy));
    lo = guess->energy - del;
    hi = std::min(guess->energy + del, ceiling);
    clo = count_below(lo);
    chi = count_below(hi);
    for (int it = 0; clo > index && it < 200; ++it) {
      del *= 2;
      hi = lo;
      chi = clo;
      lo -= del;
      clo = count_below(lo);
    }
    for (int it = 0; chi <= index && hi < ceiling && it < 200; ++it) {
      del *= 2;
      lo = hi;
      clo = chi;
      hi = std::min(hi + del, ceiling);
      chi = count_below(hi);
    }
  } else {
    hi = ceiling;
    chi = count_below(hi);
    lo = -1.0;
    clo = count_below(lo);
    for (int it = 0; clo > index && it < 200; ++it) {
      hi = lo;
      chi = clo;
      lo *= 4;
      clo = count_below(lo);
    }
  }
  if (chi <= index)
    throw SpectrumError("channel l=" + std::to_string(l_) + ": only " + std::to_string(chi) +
                        " eigenvalues below " + std::to_string(ceiling) + ", need " +
                        std::to_string(index + 1));
  auto bisect = [&]() {
    double mid = 0.5 * (lo + hi);
    int c = count_below(mid);
    if (c <= index) {
      lo = mid;
      clo = c;
    } else {
      hi = mid;
      chi = c;
    }
  };
  while (clo != index || chi != index + 1) bisect();

  std::vector<double> y;
  double sigma;
  if (guess && guess->y.size() == n) {
    y = guess->y;
    sigma = std::clamp(rq(y), lo, hi);
  } else {
    while (hi - lo > 1e-7 * std::max(1.0, std::abs(lo))) bisect();
    sigma = 0.5 * (lo + hi);
    y.assign(n, 1.0);
    for (int it = 0; it < 3; ++it) {
      y = solve_shifted(sigma, apply_B(y));
      normalize_sign(y, grid_.g, grid_.h);
    }
    sigma = std::clamp(rq(y), lo, hi);
  }
  for (int it = 0; it < 40; ++it) {
    auto w = solve_shifted(sigma, apply_B(y));
    if (!std::all_of(w.begin(), w.end(), [](double v) { return std::isfinite(v); })) break;
    normalize_sign(w, grid_.g, grid_.h);
    y = std::move(w);
    double s = rq(y);
    if (!(s > lo && s < hi)) {
      // Rayleigh quotient left the isolating bracket: tighten and restart from the middle.
      for (int b = 0; b < 6; ++b) bisect();
      sigma = 0.5 * (lo + hi);
      continue;
    }
    double ds = std::abs(s - sigma);
    sigma = s;
    if (it > 0 && ds < 1e-12 * (1.0 + std::abs(s))) break;
  }
  Eigenpair ep;
  ep.energy = sigma;
  ep.y = std::move(y);
  ep.residual = residual_norm(ep.y, ep.energy);
  return ep;
}

}  // namespace nlhf
