#include "nlhf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlhf/angular.hpp"
#include "nlhf/errors.hpp"

namespace nlhf {

namespace {

constexpr double kLn10 = 2.302585092994046;
// Below this fraction of the peak raw eigenvector samples are roundoff.
constexpr double kNoiseFloor = 1e-12;

// ln(e^a - e^b) for a >= b, or ln(e^a + e^b).
double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

NodeReport count_nodes(const RefinedOrbital& o, double floor) {
  NodeReport rep;
  rep.n = o.n;
  rep.l = o.l;
  rep.amplitude_floor = floor;
  const std::size_t N = o.r.size();
  std::size_t imax = 0;
  for (std::size_t i = 0; i < N; ++i)
    if (o.log_abs[i] > o.log_abs[imax]) imax = i;
  const double lmax = o.log_abs[imax];
  if (!o.refined) {
    for (std::size_t i = imax; i < N; ++i)
      if (o.log_abs[i] < lmax + std::log(kNoiseFloor))
        throw PrecisionError("wavefunction_analysis: tail of " + std::to_string(o.n) + l_letter(o.l) +
                             " is below roundoff on the grid; apply refine_tail first");
  }
  const double lfloor = lmax + std::log(floor);
  int last = 0;
  std::size_t ilast = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (o.sign[i] == 0 || o.log_abs[i] < lfloor) continue;
    if (last != 0 && o.sign[i] != last) {
      // linear zero of P between the two samples, in log form
      double t = 1.0 / (1.0 + std::exp(o.log_abs[i] - o.log_abs[ilast]));
      double rz = o.r[ilast] + t * (o.r[i] - o.r[ilast]);
      if (rz - o.r.front() > 1e-3 && o.r.back() - rz > 1e-3) rep.positions.push_back(rz);
    }
    last = o.sign[i];
    ilast = i;
  }
  rep.count = static_cast<int>(rep.positions.size());
  return rep;
}

MixingCoefficient mixing_coefficient(const Orbital& inner, const Orbital& outer,
                                     const RadialGrid& grid) {
  MixingCoefficient m;
  if (std::abs(inner.l - outer.l) != 1 || (inner.n == outer.n && inner.l == outer.l)) return m;
  m.allowed = true;
  double s = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    s += grid.weights[i] * outer.P[i] * grid.r[i] * inner.P[i];
  m.value = exchange_coefficient(inner.l, 1, outer.l) * s;
  return m;
}

double TailModel::log10_abs(double r) const {
  // signed log-sum: own term positive, exchange terms carry -sign(C)
  double lpos = 1.5 * std::log(alpha) - alpha * r;
  double lneg = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) {
    if (t.C == 0 || t.multiplicity == 0) continue;
    double lt = std::log(t.multiplicity) + 1.5 * std::log(t.beta) + std::log(std::abs(t.C)) -
                2 * std::log(alpha * r) + (t.n - 1) * std::log(t.beta * r) - t.beta * r;
    if (t.C > 0) lneg = log_add(lneg, lt);
    else lpos = log_add(lpos, lt);
  }
  if (lneg == -std::numeric_limits<double>::infinity()) return lpos / kLn10;
  double a = std::max(lpos, lneg), b = std::min(lpos, lneg);
  if (a == b) return -std::numeric_limits<double>::infinity();
  return (a + std::log(-std::expm1(b - a))) / kLn10;
}

int TailModel::sign(double r) const {
  double pos = 1.5 * std::log(alpha) - alpha * r, neg = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) {
    if (t.C == 0 || t.multiplicity == 0) continue;
    double lt = std::log(t.multiplicity) + 1.5 * std::log(t.beta) + std::log(std::abs(t.C)) -
                2 * std::log(alpha * r) + (t.n - 1) * std::log(t.beta * r) - t.beta * r;
    if (t.C > 0) neg = log_add(neg, lt);
    else pos = log_add(pos, lt);
  }
  return pos > neg ? 1 : (pos < neg ? -1 : 0);
}

double TailModel::slope(double r) const {
  const double d = 1e-4 * std::max(1.0, r);
  return kLn10 * (log10_abs(r + d) - log10_abs(r - d)) / (2 * d);
}

TailModel predict_tail(const Orbital& inner, const std::vector<Orbital>& outers,
                       const RadialGrid& grid) {
  TailModel m;
  m.alpha = std::sqrt(2 * std::abs(inner.energy));
  for (const auto& o : outers) {
    auto c = mixing_coefficient(inner, o, grid);
    if (!c.allowed) continue;
    m.terms.push_back({o.n, std::sqrt(2 * std::abs(o.energy)), c.value, 1.0});
  }
  return m;
}

Enhancement tail_enhancement(const RefinedOrbital& hartree, const RefinedOrbital& hf, double rho,
                             const PlotTransform& t) {
  Enhancement e;
  e.rho = rho;
  e.r_at_rho = r_of_rho(rho, t);
  e.log10_rho_reading = hf.log10_abs_at(e.r_at_rho) - hartree.log10_abs_at(e.r_at_rho);
  e.log10_r_reading = hf.log10_abs_at(rho) - hartree.log10_abs_at(rho);
  return e;
}

}  // namespace nlhf
