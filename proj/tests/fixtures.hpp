#pragma once
#include <map>
#include <string>
#include <utility>

#include "nlhf/scf.hpp"

namespace fx {

// Converged atoms, solved once per test binary.
inline const nlhf::SCFResult& atom(const std::string& symbol, nlhf::Scheme scheme,
                                   const nlhf::RadialGrid& grid = nlhf::default_grid()) {
  static std::map<std::tuple<std::string, int, double, std::size_t>, nlhf::SCFResult> cache;
  auto key = std::make_tuple(symbol, static_cast<int>(scheme), grid.r.back(), grid.size());
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, nlhf::solve(nlhf::atom_by_symbol(symbol), grid, scheme)).first;
  return it->second;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace fx
