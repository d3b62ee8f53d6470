#include <doctest.h>

#include <chrono>
#include <cmath>

#include "nlhf/errors.hpp"
#include "nlhf/model.hpp"

using namespace nlhf;

namespace {

double closed_form(double Z, int n, int l, double alpha) {
  const int N = 4 * l + 2;
  return -Z * Z * N / (2.0 * n * n) / (1 + alpha / (n * n) * (N - 1));
}

// <r> of a hydrogenic nl orbital of charge Z
double mean_radius(int n, int l, double Z) { return (3.0 * n * n - l * (l + 1)) / (2 * Z); }

}  // namespace

TEST_CASE("coulomb model: limits of the normal solution") {
  for (int n = 1; n <= 3; ++n)
    for (int l = 0; l < n; ++l) {
      const int N = 4 * l + 2;
      auto bare = coulomb_normal(10, n, l, 0);
      CHECK(bare.Z1 == doctest::Approx(10).scale(0).epsilon(1e-15));
      CHECK(bare.E_total == doctest::Approx(-100.0 * N / (2 * n * n)).scale(0).epsilon(1e-14));
      auto crit = coulomb_normal(10, n, l, n * n);
      CHECK(crit.N == N);
      CHECK(crit.Z1 == doctest::Approx(10.0 / N).scale(0).epsilon(1e-14));
      CHECK(crit.Z2 == doctest::Approx(10.0 / N).scale(0).epsilon(1e-14));
      CHECK(crit.E_total == doctest::Approx(-100.0 / (2 * n * n)).scale(0).epsilon(1e-13));
      CHECK(crit.kind == Kind::kNormal);
    }
}

TEST_CASE("coulomb model: total energy matches the closed form") {
  for (double alpha : {0.1, 0.37, 1.0, 2.5, 7.0})
    for (int l = 0; l <= 2; ++l) {
      auto s = coulomb_normal(18, 3, l, alpha);
      CHECK(std::abs(coulomb_total_energy(s) / closed_form(18, 3, l, alpha) - 1) < 1e-12);
      CHECK(std::abs(s.E_total / closed_form(18, 3, l, alpha) - 1) < 1e-12);
      CHECK(std::abs(coulomb_closed_form_energy(18, 3, l, alpha) / closed_form(18, 3, l, alpha) - 1) < 1e-14);
      CHECK(std::abs(coulomb_equation_residual(s)) < 1e-12);
      CHECK(s.E1 == doctest::Approx(-s.Z1 * s.Z1 / 18).scale(0).epsilon(1e-14));
      CHECK(s.R1 == doctest::Approx(mean_radius(3, l, s.Z1)).scale(0).epsilon(1e-14));
    }
}

TEST_CASE("coulomb model: normal solution is continuous in alpha") {
  const int n = 2;
  double prev = coulomb_normal(10, n, 1, 0).Z1;
  const int steps = 2000;
  double max_jump = 0;
  for (int i = 1; i <= steps; ++i) {
    double a = 2.0 * n * n * i / steps;
    auto s = coulomb_normal(10, n, 1, a);
    CHECK(s.Z1 < prev);
    max_jump = std::max(max_jump, prev - s.Z1);
    prev = s.Z1;
  }
  // dZ/dalpha is bounded by Z (N-1) / n^2
  CHECK(max_jump <= 10.0 * 5 / (n * n) * (2.0 * n * n / steps));
}

TEST_CASE("coulomb model: singular family at alpha = n^2") {
  const double Z = 10;
  const int n = 2, l = 1;
  const double top = Z / (2 * l + 1);
  const double E0 = -Z * Z / (2.0 * n * n);
  double lo = 1e300, hi = -1e300;
  for (int k = 1; k <= 100; ++k) {
    auto s = coulomb_singular_family(Z, n, l, top * k / 101.0);
    CHECK(s.kind == Kind::kSingular);
    CHECK(s.alpha == n * n);
    CHECK(s.Z1 + s.Z2 == doctest::Approx(top).scale(0).epsilon(1e-14));
    CHECK(std::abs(coulomb_equation_residual(s)) < 1e-12);
    lo = std::min(lo, s.E_total);
    hi = std::max(hi, s.E_total);
  }
  CHECK((hi - lo) / std::abs(E0) < 1e-12);
  CHECK(lo == doctest::Approx(E0).scale(0).epsilon(1e-12));
  // member with equal charges is the normal solution
  auto mid = coulomb_singular_family(Z, n, l, top / 2);
  auto normal = coulomb_normal(Z, n, l, n * n);
  CHECK(mid.Z1 == doctest::Approx(normal.Z1).scale(0).epsilon(1e-14));
  CHECK(mid.E_total == doctest::Approx(normal.E_total).scale(0).epsilon(1e-14));
  // one group escapes as its charge goes to zero while the energy stays put
  auto edge = coulomb_singular_family(Z, n, l, top * 1e-6);
  CHECK(edge.R1 > 1e5 * normal.R1);
  CHECK(edge.R1 == doctest::Approx(mean_radius(n, l, edge.Z1)).scale(0).epsilon(1e-12));
  CHECK(edge.E_total == doctest::Approx(E0).scale(0).epsilon(1e-12));
  CHECK_THROWS_AS(coulomb_singular_family(Z, n, l, 0), DomainError);
  CHECK_THROWS_AS(coulomb_singular_family(Z, n, l, top), DomainError);
}

TEST_CASE("oscillator model") {
  const double w = 1.7;
  auto free = oscillator_normal(w, 0);
  CHECK(free.w1 == doctest::Approx(w).scale(0).epsilon(1e-15));
  for (double beta : {-0.5, 0.3, 2.0}) {
    auto s = oscillator_normal(w, beta);
    CHECK(s.w1 == doctest::Approx(w / std::sqrt(1 + beta)).scale(0).epsilon(1e-14));
    // stationarity: w_p^2 = omega^2 - beta w_q^2
    CHECK(s.w1 * s.w1 == doctest::Approx(w * w - beta * s.w2 * s.w2).scale(0).epsilon(1e-14));
    CHECK(s.extent1 == doctest::Approx(std::sqrt(1.5 / s.w1)).scale(0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(oscillator_normal(w, -1), NumericalError);
  CHECK_THROWS_AS(oscillator_normal(w, -2), NumericalError);

  auto sym = oscillator_family(w, w / std::sqrt(2.0));
  auto normal = oscillator_normal(w, 1);
  CHECK(sym.w2 == doctest::Approx(normal.w2).scale(0).epsilon(1e-14));
  double e_lo = 1e300, e_hi = -1e300;
  for (int k = 1; k < 50; ++k) {
    auto s = oscillator_family(w, w * k / 50.0);
    CHECK(s.kind == Kind::kSingular);
    CHECK(std::abs(s.w1 * s.w1 + s.w2 * s.w2 - w * w) < 1e-12);
    // on beta = 1 the functional is (u1 + u2)^2 / 2 - omega^2 (u1 + u2) = -omega^4 / 2
    CHECK(s.energy == doctest::Approx(-std::pow(w, 4) / 2).scale(0).epsilon(1e-13));
    e_lo = std::min(e_lo, s.E1);
    e_hi = std::max(e_hi, s.E1);
  }
  CHECK(e_hi - e_lo > 1.0);
  auto edge = oscillator_family(w, w * 1e-8);
  CHECK(edge.extent1 > 1e3 * normal.extent1);
  CHECK_THROWS_AS(oscillator_family(w, 0), DomainError);
  CHECK_THROWS_AS(oscillator_family(w, w), DomainError);
  CHECK(oscillator_energy(w, 0.4, 1.1, 0.9) ==
        doctest::Approx(0.5 * (std::pow(1.1, 4) + std::pow(0.9, 4)) + 0.4 * 1.21 * 0.81 - w * w * (1.21 + 0.81)).scale(0).epsilon(1e-13));
}

TEST_CASE("coulomb and oscillator models run fast") {
  auto t0 = std::chrono::steady_clock::now();
  double sink = 0;
  for (int k = 1; k <= 1000; ++k) {
    sink += coulomb_singular_family(10, 2, 1, 10.0 / 3 * k / 1001.0).E_total;
    sink += coulomb_normal(10, 2, 1, 4.0 * k / 1000).E_total;
    sink += oscillator_family(1, k / 1001.0).energy;
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(std::isfinite(sink));
  CHECK(dt < 1.0);
}

TEST_CASE("hydrogenic 1/r matrix elements") {
  for (double Z : {1.0, 3.0}) {
    CHECK(hydrogenic_inverse_r(1, 0, 1, 0, Z) == doctest::Approx(Z).scale(0).epsilon(1e-12));
    CHECK(hydrogenic_inverse_r(2, 1, 2, 1, Z) == doctest::Approx(Z / 4).scale(0).epsilon(1e-12));
    CHECK(std::abs(std::abs(hydrogenic_inverse_r(2, 1, 1, 0, Z)) - Z * 2 / (3.375 * std::sqrt(6.0))) < 1e-8 * Z);
    CHECK(std::abs(std::abs(hydrogenic_inverse_r(2, 0, 1, 0, Z)) - Z * std::sqrt(2.0) * (1 / 2.25 - 1 / 3.375)) < 1e-8 * Z);
    CHECK(hydrogenic_inverse_r(3, 2, 2, 1, Z) == doctest::Approx(hydrogenic_inverse_r(2, 1, 3, 2, Z)).scale(0).epsilon(1e-12));
  }
}

TEST_CASE("rpa susceptibility") {
  // 1/r scales as Z and level spacings as Z^2
  for (bool cont : {false, true})
    CHECK(rpa_chi(1, 2, 0, 20, cont, ChiForm::kInverseDenominator) ==
          doctest::Approx(rpa_chi(7, 2, 0, 20, cont, ChiForm::kInverseDenominator)).scale(0).epsilon(1e-9));
  CHECK(rpa_chi(1, 1, 0, 20, true, ChiForm::kInverseDenominator) < 0);
  CHECK(rpa_chi(1, 1, 0, 20, true, ChiForm::kAsPrinted) > 0);
  CHECK_FALSE(rpa_instability(10, 1, 0, 0).found);
  CHECK_FALSE(rpa_instability(10, 2, 1, 40, ChiForm::kAsPrinted).found);
  CHECK(parse_chi_form("printed") == ChiForm::kAsPrinted);
  CHECK_THROWS_AS(parse_chi_form("other"), ConfigError);
}

TEST_CASE("rpa instability threshold converges in the basis") {
  for (auto [n, l] : {std::pair{1, 0}, {2, 1}, {3, 0}}) {
    auto r = rpa_instability(10, n, l);
    INFO("n = " << n << " l = " << l);
    REQUIRE(r.found);
    MESSAGE("n=" << n << " l=" << l << ": alpha_c = " << r.alpha_critical << " (alpha_c / n^2 = "
                 << r.alpha_critical / (n * n) << "), drift " << r.drift);
    CHECK(r.drift < 0.02);
    CHECK(r.basis_size == 40);
    // fixed point: alpha chi(Z_eff(alpha)) = -1
    CHECK(r.alpha_critical * r.chi == doctest::Approx(-1).scale(0).epsilon(1e-6));
  }
}
