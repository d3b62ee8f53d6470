#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "nlhf/errors.hpp"
#include "nlhf/scattering.hpp"

using namespace nlhf;

namespace {

constexpr double kPi = std::numbers::pi;

// s-wave square well -V0 for r < a: tan(k a + delta) = (k / K) tan(K a), K = sqrt(k^2 + 2 V0).
double well_phase(double E, double V0, double a) {
  const double k = std::sqrt(2 * E), K = std::sqrt(k * k + 2 * V0);
  return std::atan2(k * std::sin(K * a), K * std::cos(K * a)) - k * a;
}

// distance of two phases modulo pi
double phase_gap(double a, double b) { return std::abs(std::sin(a - b)); }

const SCFResult& argon(Scheme s) { return fx::atom("Ar", s, scattering_grid()); }

}  // namespace

TEST_CASE("free particle has no phase shift") {
  for (int l = 0; l <= 2; ++l) {
    ChannelOperator op = well_operator(l, 0, 1);
    PhaseShiftCurve c = phase_curve(op, energy_mesh());
    double worst = 0;
    for (double d : c.deltas) worst = std::max(worst, std::abs(d));
    INFO("l = " << l);
    CHECK(worst < 1e-6);
    ContinuumState s = continuum_orbital(op, 0.5);
    CHECK(s.wronskian_spread < 1e-6);
  }
}

TEST_CASE("square well s-wave phase against the closed form") {
  const double V0 = 2, a = 2;  // K a = 4: one bound s state
  ChannelOperator op = well_operator(0, V0, a);
  for (double E : {0.001, 0.01, 0.1, 0.5, 1.0, 5.0, 20.0}) {
    ContinuumState s = continuum_orbital(op, E);
    INFO("E = " << E);
    CHECK(phase_gap(s.delta, well_phase(E, V0, a)) < 1e-4);
    CHECK(s.delta > -kPi / 2);
    CHECK(s.delta <= kPi / 2);
  }
}

TEST_CASE("square well Levinson counts") {
  for (int l = 0; l <= 2; ++l) {
    ChannelOperator op = well_operator(l, 2, 2);
    LevinsonReport r = levinson_check(phase_curve(op, energy_mesh()), op, 0);
    const int bound = op.count_below(0);
    INFO("l = " << l);
    CHECK(r.n_bound == bound);
    CHECK(r.nearest == bound);
    CHECK(std::abs(r.delta_zero - bound) < 0.05);
    CHECK(r.conclusive);
  }
  CHECK(well_operator(0, 2, 2).count_below(0) == 1);
}

TEST_CASE("energy normalization") {
  ChannelOperator op = well_operator(0, 0, 1);
  ContinuumState s = continuum_orbital(op, 0.8);
  auto n = energy_normalized(s);
  const double f = std::sqrt(2 / (kPi * s.k));
  for (std::size_t i = 0; i < n.size(); i += 500) CHECK(n[i] == doctest::Approx(f * s.P[i]).scale(0).epsilon(1e-14));
  // unit amplitude outside the potential: P -> sin(k r)
  const RadialGrid& g = op.grid();
  std::size_t i = g.locate(35.0);
  CHECK(s.P[i] == doctest::Approx(std::sin(s.k * g.r[i])).scale(0).epsilon(1e-5));
}

TEST_CASE("error paths") {
  ChannelOperator op = well_operator(0, 0, 1);
  CHECK_THROWS_AS(continuum_orbital(op, -0.1), DomainError);
  ScatteringOptions far;
  far.r_match = 100;
  CHECK_THROWS_AS(continuum_orbital(op, 0.5, far), NumericalError);
  RadialGrid g = scattering_grid();
  std::vector<double> coulomb(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) coulomb[i] = -1.0 / g.r[i];
  ChannelOperator ion(g, 0, coulomb, 1.0);
  CHECK_THROWS_AS(wkb_phase(ion, 1.0), DomainError);
  // bare Coulomb: the regular solution is the Coulomb wave itself
  for (double E : {0.1, 1.0}) CHECK(phase_gap(continuum_orbital(ion, E).delta, 0.0) < 1e-4);
}

TEST_CASE("e + Ar static exchange") {
  const SCFResult& ar = argon(Scheme::kHF);
  SUBCASE("l = 0 near E = 0.1 is finite and continuous") {
    ChannelOperator op = continuum_operator(ar, 0);
    PhaseShiftCurve c = phase_curve(op, energy_mesh(0.05, 0.2, 9));
    for (std::size_t i = 0; i < c.deltas.size(); ++i) {
      CHECK(std::isfinite(c.deltas[i]));
      if (i) CHECK(std::abs(c.deltas[i] - c.deltas[i - 1]) < 0.1);
    }
  }
  SUBCASE("continuum is orthogonal to the occupied orbitals") {
    for (int l : {0, 1}) {
      ContinuumState s = continuum_orbital(ar, l, 0.3);
      for (const auto& o : ar.orbitals) {
        if (o.l != l) continue;
        double ov = 0;
        for (std::size_t i = 0; i < ar.grid.size(); ++i) ov += ar.grid.measure[i] * s.P[i] * o.P[i];
        CHECK(std::abs(ov) < 1e-6);
      }
    }
  }
  SUBCASE("Levinson with occupied shells: 3, 2 and 0") {
    const int expect[] = {3, 2, 0};
    for (int l = 0; l <= 2; ++l) {
      ChannelOperator op = continuum_operator(ar, l);
      LevinsonReport r = levinson_check(phase_curve(op, energy_mesh()), ar);
      INFO("l = " << l << " delta(0)/pi = " << r.delta_zero);
      CHECK(r.n_bound == 0);
      CHECK(r.nearest == r.n_bound + expect[l]);
      CHECK(std::abs(r.delta_zero - expect[l]) < 0.05);
    }
  }
}

TEST_CASE("e + Ar in the local Hartree potential follows the classic count") {
  const SCFResult& ar = argon(Scheme::kHartree);
  for (int l = 0; l <= 1; ++l) {
    ChannelOperator op = continuum_operator(ar, l);
    LevinsonReport r = levinson_check(phase_curve(op, energy_mesh()), ar);
    const int bound = op.count_below(0);
    INFO("l = " << l << " delta(0)/pi = " << r.delta_zero);
    CHECK(std::abs(r.delta_zero - bound) < 0.05);
  }
}
