#pragma once
#include <string>
#include <utility>
#include <vector>

namespace nlhf {

// log-uniform:        x = ln r
// hybrid-log-linear:  x = ln r + r/b   (log near the nucleus, linear far out)
// linear:             x = r            (uniform; used for closed-form discrete checks)
enum class Mapping { kLog, kHybrid, kLinear };

Mapping parse_mapping(const std::string& tag);
std::string to_string(Mapping m);

struct RadialGrid {
  Mapping mapping = Mapping::kLog;
  double r_min = 0, r_max = 0;
  double h = 0;      // uniform step in x
  double scale = 1;  // b of the hybrid map
  std::vector<double> r, x;
  std::vector<double> g;        // dr/dx
  std::vector<double> q;        // Liouville term of P = sqrt(g) y
  std::vector<double> weights;  // ∫f dr, trapezoid-in-x with Gregory end corrections
  std::vector<double> measure;  // h*g: plain trapezoid, used by all operators

  std::size_t size() const { return r.size(); }
  double x_of_r(double rr) const;
  double r_of_x(double xx) const;
  // Index of the last point with r[i] <= rr (clamped).
  std::size_t locate(double rr) const;
  double integrate(const std::vector<double>& f) const;
};

RadialGrid build_grid(double r_min, double r_max, int point_count,
                      Mapping mapping = Mapping::kLog, double hybrid_scale = 1.0);

// Default profile used throughout: 1e-6 .. 60 a.u., 2000 points, log-uniform.
RadialGrid default_grid();

// Local Lagrange interpolation in x of samples f (order points, centered).
double interpolate(const RadialGrid& grid, const std::vector<double>& f, double rr,
                   int order = 6);
std::vector<double> resample(const RadialGrid& from, const std::vector<double>& f,
                             const RadialGrid& to, int order = 6);

// First derivative dP/dr from samples, 6th-order central differences in x.
std::vector<double> derivative(const RadialGrid& grid, const std::vector<double>& f);

struct PlotTransform {
  double a = 2.79;
};

double rho_of_r(double r, const PlotTransform& t = {});
// Inverse of rho_of_r by Newton iteration (rho is strictly increasing).
double r_of_rho(double rho, const PlotTransform& t = {});

std::vector<std::pair<double, double>> plot_scale(const std::vector<double>& P,
                                                  const RadialGrid& grid,
                                                  const PlotTransform& t = {});

}  // namespace nlhf
