#include "nlhf/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nlhf/errors.hpp"

namespace nlhf {

Mapping parse_mapping(const std::string& tag) {
  if (tag == "log-uniform" || tag == "log") return Mapping::kLog;
  if (tag == "hybrid-log-linear" || tag == "hybrid") return Mapping::kHybrid;
  if (tag == "linear") return Mapping::kLinear;
  throw ConfigError("radial_grid: unknown mapping '" + tag + "'");
}

std::string to_string(Mapping m) {
  switch (m) {
    case Mapping::kLog: return "log-uniform";
    case Mapping::kHybrid: return "hybrid-log-linear";
    case Mapping::kLinear: return "linear";
  }
  return "?";
}

double RadialGrid::x_of_r(double rr) const {
  switch (mapping) {
    case Mapping::kLog: return std::log(rr);
    case Mapping::kHybrid: return std::log(rr) + rr / scale;
    case Mapping::kLinear: return rr;
  }
  return 0;
}

double RadialGrid::r_of_x(double xx) const {
  switch (mapping) {
    case Mapping::kLog: return std::exp(xx);
    case Mapping::kLinear: return xx;
    case Mapping::kHybrid: {
      // ln r + r/b = x; f(t) convex increasing in t = ln r, Newton from an upper bound.
      double t = xx;
      if (xx * scale > 1) t = std::min(xx, std::log(xx * scale));
      for (int it = 0; it < 100; ++it) {
        double e = std::exp(t);
        double f = t + e / scale - xx;
        double step = f / (1 + e / scale);
        t -= step;
        if (std::abs(step) < 1e-15 * (1 + std::abs(t))) break;
      }
      return std::exp(t);
    }
  }
  return 0;
}

std::size_t RadialGrid::locate(double rr) const {
  auto it = std::upper_bound(r.begin(), r.end(), rr);
  if (it == r.begin()) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(it - r.begin()) - 1, r.size() - 1);
}

double RadialGrid::integrate(const std::vector<double>& f) const {
  double s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) s += weights[i] * f[i];
  return s;
}

namespace {

double binom(int n, int k) {
  double b = 1;
  for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
  return b;
}

// Gregory end corrections on top of the trapezoid rule, exact for x-polynomials of degree 5.
std::vector<double> gregory_weights(std::size_t n, double h) {
  static constexpr std::array<double, 5> G = {1.0 / 12, 1.0 / 24, 19.0 / 720, 3.0 / 160,
                                              863.0 / 60480};
  std::vector<double> w(n, h);
  w.front() = w.back() = 0.5 * h;
  for (int k = 1; k <= 5; ++k) {
    double gk = G[k - 1];
    for (int j = 0; j <= k; ++j) {
      double c = binom(k, j);
      // nabla^k F_n = sum_j (-1)^j C(k,j) F_{n-j}
      w[n - 1 - j] -= h * gk * ((j % 2) ? -c : c);
      // (-1)^k Delta^k F_0 = (-1)^k sum_j (-1)^{k-j} C(k,j) F_j = sum_j (-1)^j C(k,j) F_j
      w[j] -= h * gk * ((j % 2) ? -c : c);
    }
  }
  return w;
}

}  // namespace

RadialGrid build_grid(double r_min, double r_max, int point_count, Mapping mapping,
                      double hybrid_scale) {
  if (!(r_min > 0) || !(r_max > r_min) || point_count < 100 || !(hybrid_scale > 0))
    throw ConfigError("radial_grid: need r_min>0, r_max>r_min, point_count>=100");
  RadialGrid gr;
  gr.mapping = mapping;
  gr.r_min = r_min;
  gr.r_max = r_max;
  gr.scale = hybrid_scale;
  const std::size_t n = static_cast<std::size_t>(point_count);
  double x0 = gr.x_of_r(r_min), x1 = gr.x_of_r(r_max);
  gr.h = (x1 - x0) / static_cast<double>(n - 1);
  gr.r.resize(n);
  gr.x.resize(n);
  gr.g.resize(n);
  gr.q.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    gr.x[i] = x0 + gr.h * static_cast<double>(i);
    double rr = (i == 0) ? r_min : (i == n - 1) ? r_max : gr.r_of_x(gr.x[i]);
    gr.r[i] = rr;
    switch (mapping) {
      case Mapping::kLog:
        gr.g[i] = rr;
        gr.q[i] = -0.25;
        break;
      case Mapping::kHybrid: {
        double b = hybrid_scale, a = b / (rr + b);
        gr.g[i] = rr * b / (rr + b);
        gr.q[i] = 0.5 * (-0.5 * a * a * a * a - 2 * a * a * a * rr / (rr + b));
        break;
      }
      case Mapping::kLinear:
        gr.g[i] = 1;
        gr.q[i] = 0;
        break;
    }
  }
  for (std::size_t i = 1; i < n; ++i)
    if (!(gr.r[i] > gr.r[i - 1])) throw ConfigError("radial_grid: points not increasing");
  gr.weights = gregory_weights(n, gr.h);
  gr.measure.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    gr.weights[i] *= gr.g[i];
    gr.measure[i] = gr.h * gr.g[i];
  }
  return gr;
}

RadialGrid default_grid() { return build_grid(1e-6, 60.0, 2000, Mapping::kLog); }

double interpolate(const RadialGrid& grid, const std::vector<double>& f, double rr,
                   int order) {
  const std::size_t n = grid.size();
  double xx = grid.x_of_r(rr);
  double t = (xx - grid.x[0]) / grid.h;
  long i0 = static_cast<long>(std::floor(t)) - order / 2 + 1;
  i0 = std::clamp<long>(i0, 0, static_cast<long>(n) - order);
  double s = 0;
  for (int j = 0; j < order; ++j) {
    double lj = 1;
    double tj = static_cast<double>(i0 + j);
    for (int m = 0; m < order; ++m) {
      if (m == j) continue;
      double tm = static_cast<double>(i0 + m);
      lj *= (t - tm) / (tj - tm);
    }
    s += lj * f[static_cast<std::size_t>(i0 + j)];
  }
  return s;
}

std::vector<double> resample(const RadialGrid& from, const std::vector<double>& f,
                             const RadialGrid& to, int order) {
  std::vector<double> out(to.size(), 0.0);
  for (std::size_t i = 0; i < to.size(); ++i) {
    double rr = to.r[i];
    if (rr < from.r.front() || rr > from.r.back()) continue;  // outside: zero
    out[i] = interpolate(from, f, rr, order);
  }
  return out;
}

std::vector<double> derivative(const RadialGrid& grid, const std::vector<double>& f) {
  const std::size_t n = grid.size();
  std::vector<double> d(n, 0.0);
  // Central 7-point stencil, one-sided 7-point near the ends.
  static const double c[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
  static const double fwd[7][7] = {
      {-49.0 / 20, 6, -15.0 / 2, 20.0 / 3, -15.0 / 4, 6.0 / 5, -1.0 / 6},
      {-1.0 / 6, -77.0 / 60, 5.0 / 2, -5.0 / 3, 5.0 / 6, -1.0 / 4, 1.0 / 30},
      {1.0 / 30, -2.0 / 5, -7.0 / 12, 4.0 / 3, -1.0 / 2, 2.0 / 15, -1.0 / 60},
  };
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    if (i >= 3 && i + 3 < n) {
      for (int j = 0; j < 7; ++j) s += c[j] * f[i + j - 3];
    } else if (i < 3) {
      for (int j = 0; j < 7; ++j) s += fwd[i][j] * f[static_cast<std::size_t>(j)];
    } else {
      std::size_t k = n - 1 - i;  // mirror of the forward stencils
      for (int j = 0; j < 7; ++j) s -= fwd[k][j] * f[n - 1 - static_cast<std::size_t>(j)];
    }
    d[i] = s / (grid.h * grid.g[i]);
  }
  return d;
}

double rho_of_r(double r, const PlotTransform& t) {
  if (!(r > 0)) throw DomainError("radial_grid: rho_of_r needs r > 0");
  return t.a * r + std::log(r);
}

double r_of_rho(double rho, const PlotTransform& t) {
  double lr = std::min(rho, 3.0);
  for (int it = 0; it < 200; ++it) {
    double e = std::exp(lr);
    double f = t.a * e + lr - rho;
    double step = f / (t.a * e + 1);
    lr -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return std::exp(lr);
}

std::vector<std::pair<double, double>> plot_scale(const std::vector<double>& P,
                                                  const RadialGrid& grid,
                                                  const PlotTransform& t) {
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double r = grid.r[i];
    out.emplace_back(rho_of_r(r, t), std::sqrt(r * (t.a * r + 1)) * P[i]);
  }
  return out;
}

}  // namespace nlhf
