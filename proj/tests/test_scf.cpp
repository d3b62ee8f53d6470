#include <doctest.h>

#include <chrono>
#include <cmath>

#include "fixtures.hpp"
#include "nlhf/errors.hpp"
#include "nlhf/hydrogenic.hpp"
#include "nlhf/scf.hpp"

using namespace nlhf;

namespace {

// Independent He 1s^2 solver: y = P / sqrt(r) on x = ln r, three-point differences,
// inverse iteration for the lowest level, direct potential by cumulative trapezoids.
double he_reference_energy(int n) {
  const double x0 = std::log(1e-6), x1 = std::log(40.0);
  const double h = (x1 - x0) / (n - 1);
  std::vector<double> r(n), y(n), VH(n, 0.0), P2(n);
  for (int i = 0; i < n; ++i) {
    r[i] = std::exp(x0 + i * h);
    y[i] = std::sqrt(r[i]) * 2 * std::exp(-1.7 * r[i]);
  }
  double eps = -1, energy = 0, last = 0;
  for (int it = 0; it < 400; ++it) {
    // C = B^{-1/2} A B^{-1/2}, tridiagonal
    std::vector<double> d(n), e(n, -0.5 / (h * h));
    for (int i = 0; i < n; ++i) d[i] = (1 / (h * h) + 0.125) / (r[i] * r[i]) + (-2 / r[i] + VH[i]);
    for (int i = 0; i + 1 < n; ++i) e[i] = -0.5 / (h * h) / (r[i] * r[i + 1]);
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = r[i] * y[i];
    double sigma = eps - 0.05;
    for (int k = 0; k < 60; ++k) {
      // Thomas solve (C - sigma) w = v
      std::vector<double> c(n), z(n);
      double m = d[0] - sigma;
      c[0] = e[0] / m;
      z[0] = v[0] / m;
      for (int i = 1; i < n; ++i) {
        m = d[i] - sigma - e[i - 1] * c[i - 1];
        c[i] = e[i] / m;
        z[i] = (v[i] - e[i - 1] * z[i - 1]) / m;
      }
      for (int i = n - 2; i >= 0; --i) z[i] -= c[i] * z[i + 1];
      double norm = 0;
      for (double t : z) norm += t * t;
      norm = std::sqrt(norm);
      for (int i = 0; i < n; ++i) v[i] = z[i] / norm;
      double num = 0;
      for (int i = 0; i < n; ++i) {
        double Cv = d[i] * v[i] + (i > 0 ? e[i - 1] * v[i - 1] : 0) + (i + 1 < n ? e[i] * v[i + 1] : 0);
        num += v[i] * Cv;
      }
      if (std::abs(num - sigma) < 1e-14) break;
      sigma = num;
    }
    eps = sigma;
    // P = sqrt(r) y = sqrt(r) v / r, normalized with dr = r dx
    double norm = 0;
    for (int i = 0; i < n; ++i) {
      y[i] = v[i] / r[i];
      P2[i] = r[i] * y[i] * y[i];
      norm += (i == 0 || i == n - 1 ? 0.5 : 1.0) * P2[i] * r[i] * h;
    }
    for (int i = 0; i < n; ++i) P2[i] /= norm, y[i] /= std::sqrt(norm);
    std::vector<double> inner(n, 0.0), outer(n, 0.0), fresh(n);
    for (int i = 1; i < n; ++i) inner[i] = inner[i - 1] + 0.5 * h * (P2[i] * r[i] + P2[i - 1] * r[i - 1]);
    for (int i = n - 2; i >= 0; --i) outer[i] = outer[i + 1] + 0.5 * h * (P2[i] + P2[i + 1]);
    for (int i = 0; i < n; ++i) fresh[i] = inner[i] / r[i] + outer[i];
    double J = 0;
    for (int i = 0; i < n; ++i) J += (i == 0 || i == n - 1 ? 0.5 : 1.0) * P2[i] * VH[i] * r[i] * h;
    energy = 2 * eps - J;
    for (int i = 0; i < n; ++i) VH[i] = 0.5 * VH[i] + 0.5 * fresh[i];
    if (it > 5 && std::abs(energy - last) < 1e-11) break;
    last = energy;
  }
  return energy;
}

std::vector<double> density(const SCFResult& res) {
  std::vector<double> rho(res.grid.size(), 0.0);
  for (const auto& o : res.orbitals)
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] += o.occupancy * o.P[i] * o.P[i];
  return rho;
}

// Plain double sum of P_a^2(r) P_b^2(r') / r_> with trapezoid weights h g.
double slater_F0(const RadialGrid& g, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double inner = 0;
    for (std::size_t j = 0; j < g.size(); ++j) inner += g.measure[j] * b[j] * b[j] / std::max(g.r[i], g.r[j]);
    s += g.measure[i] * a[i] * a[i] * inner;
  }
  return s;
}

}  // namespace

TEST_CASE("hydrogen: E_1s = -0.5 and HF coincides with the no-self-action scheme") {
  auto t0 = std::chrono::steady_clock::now();
  const SCFResult& hf = fx::atom("H", Scheme::kHF);
  const SCFResult& ns = fx::atom("H", Scheme::kHartreeNoSelf);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(hf.orbitals[0].energy == doctest::Approx(-0.5).scale(0).epsilon(1e-4));
  CHECK(std::abs(hf.total_energy + 0.5) < 1e-4);
  CHECK(std::abs(total_energy(hf) + 0.5) < 1e-4);
  CHECK(std::abs(hf.total_energy - ns.total_energy) < 1e-10);
  CHECK(std::abs(hf.orbitals[0].energy - ns.orbitals[0].energy) < 1e-10);
  CHECK(seconds < 5.0);
}

TEST_CASE("hartree potential of hydrogen: full screening and bare nucleus") {
  RadialGrid g = default_grid();
  Orbital o;
  o.n = 1, o.l = 0, o.occupancy = 1;
  o.P = hydrogenic_P(1, 0, 1.0, g.r);
  auto U = hartree_potential({o}, g, 1.0);
  std::size_t i50 = g.locate(50.0);
  CHECK(std::abs(g.r[i50] * U[i50]) < 1e-10);
  auto bare = hartree_potential({o}, g, 1.0, 0);
  for (std::size_t i = 0; i < g.size(); i += 50) REQUIRE(bare[i] == -1.0 / g.r[i]);
}

TEST_CASE("neutral argon is screened at r = 50") {
  const SCFResult& ar = fx::atom("Ar", Scheme::kHF);
  const RadialGrid& g = ar.grid;
  auto U = hartree_potential(ar.orbitals, g, ar.atom.Z);
  auto rho = density(ar);
  std::size_t i = g.locate(50.0);
  // independent: -Z + Q(r) + r * int_r^inf rho / r'
  double Q = 0, outside = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    double w = (j == 0 || j + 1 == g.size() ? 0.5 : 1.0) * g.h * g.g[j];
    if (j <= i) Q += w * rho[j];
    else outside += w * rho[j] / g.r[j];
  }
  const double rU_ref = -ar.atom.Z + Q + g.r[i] * outside;
  CHECK(std::abs(g.r[i] * U[i]) < 1e-6);
  CHECK(std::abs(g.r[i] * U[i] - rU_ref) < 1e-6);
}

TEST_CASE("exchange operator") {
  SUBCASE("zero target gives zero") {
    const SCFResult& he = fx::atom("He", Scheme::kHF);
    ExchangeKernel K = build_exchange_kernel(he.orbitals, he.grid);
    Orbital z = he.orbitals[0];
    std::fill(z.P.begin(), z.P.end(), 0.0);
    CHECK(fx::max_abs(apply_exchange(K, z)) == 0.0);
  }
  SUBCASE("He 1s self term equals F0(1s,1s)") {
    const SCFResult& he = fx::atom("He", Scheme::kHF);
    ExchangeKernel K = build_exchange_kernel(he.orbitals, he.grid);
    const Orbital& s = he.orbitals[0];
    auto KP = apply_exchange(K, s);
    double expect = 0;
    for (std::size_t i = 0; i < he.grid.size(); ++i) expect += he.grid.measure[i] * s.P[i] * KP[i];
    CHECK(std::abs(expect - slater_F0(he.grid, s.P, s.P)) < 1e-8);
  }
}

TEST_CASE("He HF total energy against an independent fine-grid reference") {
  const double e1 = he_reference_energy(8000), e2 = he_reference_energy(16000);
  const double reference = (4 * e2 - e1) / 3;
  const SCFResult& he = fx::atom("He", Scheme::kHF);
  CHECK(std::abs(he.total_energy - reference) < 1e-3);
  MESSAGE("He HF: " << he.total_energy << " reference " << reference);
}

TEST_CASE("He HF total energy equals 2 eps - F0 by independent quadrature") {
  SCFOptions tight;
  tight.energy_tol = 1e-13;
  tight.eigen_tol = 1e-12;
  const SCFResult he = solve(atom_by_symbol("He"), default_grid(), Scheme::kHF, tight);
  const Orbital& s = he.orbitals[0];
  CHECK(std::abs(he.total_energy - (2 * s.energy - slater_F0(he.grid, s.P, s.P))) < 1e-8);
}

TEST_CASE("argon HF converges with five negative orbital energies") {
  const SCFResult& ar = fx::atom("Ar", Scheme::kHF);
  CHECK(ar.converged);
  REQUIRE(ar.orbitals.size() == 5);
  CHECK(ar.orbital(3, 1).energy < 0);
  for (const auto& o : ar.orbitals) CHECK(o.energy < 0);
}

TEST_CASE("virial ratio of closed-shell HF atoms") {
  for (const char* sym : {"He", "Be", "Ne", "Ar"}) {
    const SCFResult& res = fx::atom(sym, Scheme::kHF);
    INFO(sym);
    CHECK(res.converged);
    CHECK(res.virial_ratio() < 1e-4);
  }
}

TEST_CASE("non-convergence is reported") {
  SCFOptions opt;
  opt.max_iterations = 2;
  CHECK_THROWS_AS(solve(atom_by_symbol("Ne"), default_grid(), Scheme::kHF, opt), ConvergenceError);
  CHECK_THROWS_AS(parse_scheme("dft"), ConfigError);
}

TEST_CASE("orbitals are orthonormal within each channel") {
  const SCFResult& ar = fx::atom("Ar", Scheme::kHF);
  for (const auto& a : ar.orbitals)
    for (const auto& b : ar.orbitals) {
      if (a.l != b.l) continue;
      double s = 0;
      for (std::size_t i = 0; i < ar.grid.size(); ++i) s += ar.grid.measure[i] * a.P[i] * b.P[i];
      CHECK(std::abs(s - (a.n == b.n ? 1.0 : 0.0)) < 1e-8);
    }
}
