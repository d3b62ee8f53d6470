#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nlhf/errors.hpp"
#include "nlhf/green.hpp"

using namespace nlhf;

namespace {

ChannelOperator coulomb_channel(int l, double Z, const RadialGrid& g) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = -Z / g.r[i];
  return ChannelOperator(g, l, v, Z, Kinetic::kThreePoint);
}

double rel_max_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("direct resolvent of a Coulomb channel") {
  RadialGrid g = green_grid();
  ChannelOperator op = coulomb_channel(0, 1, g);
  const double E = probe_energy(op, 0);
  ResolventMatrix R = green_direct(op, E);
  CHECK(resolvent_residual(op, R) < 1e-8);
  SUBCASE("product form agrees") {
    CHECK(rel_max_diff(green_product(op, E).G, R.G) < 1e-6);
    CHECK(product_form_residual(op, E) < 1e-6);
  }
  SUBCASE("completeness of the discrete eigenvectors") {
    Eigen::MatrixXd C = completeness(op);
    CHECK((C - Eigen::MatrixXd::Identity(C.rows(), C.cols())).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("truncated spectral sums converge monotonically") {
    double prev = 1e300;
    for (int m : {25, 50, 100, 200, 400}) {
      const double err = (spectral_sum(op, E, m) - R.G).cwiseAbs().maxCoeff();
      INFO("m = " << m);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-8);
  }
  SUBCASE("energies on the spectrum are rejected") {
    const double e0 = op.eigenpair(0).energy;
    CHECK_THROWS_AS(green_direct(op, e0), ConditioningError);
  }
}

TEST_CASE("free particle l = 0 against the discrete sinh kernel") {
  // r_i = i h, Dirichlet at 0 and (N+1) h: (H - E) = T / (2 h^2), T = tri(-1, 2 cosh th, -1),
  // T^{-1}_ij = sinh(i< th) sinh((N+1-i>) th) / (sinh th sinh((N+1) th)); G = 2 h T^{-1}.
  const double h = 0.05;
  const int N = 400;
  RadialGrid g = build_grid(h, N * h, N, Mapping::kLinear);
  ChannelOperator op(g, 0, std::vector<double>(N, 0.0), 0.0, Kinetic::kThreePoint);
  const double kappa = 0.7, E = -0.5 * kappa * kappa;
  const double th = std::acosh(1 + 0.5 * kappa * kappa * h * h);
  ResolventMatrix R = green_product(op, E);
  ResolventMatrix D = green_direct(op, E);
  double worst = 0, worst_continuum = 0;
  for (int i = 1; i <= N; i += 7)
    for (int j = 1; j <= N; j += 5) {
      const int lo = std::min(i, j), hi = std::max(i, j);
      // sinh((N+1-hi) th) / sinh((N+1) th) in overflow-safe form
      const double tail = std::exp(-hi * th) * (1 - std::exp(-2 * (N + 1 - hi) * th)) / (1 - std::exp(-2 * (N + 1) * th));
      const double exact = 2 * h * std::sinh(lo * th) * tail / std::sinh(th);
      worst = std::max(worst, std::abs(R.G(i - 1, j - 1) - exact));
      worst = std::max(worst, std::abs(D.G(i - 1, j - 1) - exact));
      const double cont = 2 * std::sinh(kappa * lo * h) * std::exp(-kappa * hi * h) / kappa;
      if (hi <= N / 2)  // away from the outer wall
        worst_continuum = std::max(worst_continuum, std::abs(R.G(i - 1, j - 1) - cont));
    }
  CHECK(worst < 1e-8);
  CHECK(worst_continuum < 1e-2);  // O(h^2) discretization of e^{-k r>} sinh(k r<) 2 / k
}

TEST_CASE("Hartree argon: product form matches the direct inverse") {
  const SCFResult& ar = fx::atom("Ar", Scheme::kHartree);
  RadialGrid g = green_grid();
  for (int l : {0, 1}) {
    ChannelOperator op = green_operator(ar, l, g, 0);
    const double E = probe_energy(op, 0);
    INFO("l = " << l);
    CHECK(rel_max_diff(green_product(op, E).G, green_direct(op, E).G) < 1e-6);
  }
}

TEST_CASE("HF argon: exchange breaks the product form") {
  const SCFResult& ar = fx::atom("Ar", Scheme::kHF);
  RadialGrid g = green_grid();
  std::vector<double> res;
  double E = 0;
  for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    ChannelOperator op = green_operator(ar, 0, g, lam);
    if (lam == 0) E = probe_energy(op, 0);
    res.push_back(product_form_residual(op, E));
    CHECK(resolvent_residual(op, green_direct(op, E)) < 1e-6);
  }
  CHECK(res.front() < 1e-6);
  CHECK(res.back() > 1e-2);
  CHECK(res.back() > 1e3 * res.front());
  for (std::size_t i = 1; i < res.size(); ++i) CHECK(res[i] > res[i - 1]);
  ChannelOperator full = green_operator(ar, 0, g, 1);
  CHECK_THROWS_AS(green_product(full, E), ConfigError);
}
