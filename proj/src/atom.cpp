#include "nlhf/atom.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "nlhf/errors.hpp"

namespace nlhf {

namespace {
constexpr const char* kLetters = "spdfghik";
}

char l_letter(int l) { return (l >= 0 && l < 8) ? kLetters[l] : '?'; }

int l_from_letter(char c) {
  c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (int l = 0; l < 8; ++l)
    if (kLetters[l] == c) return l;
  return -1;
}

std::string Shell::label() const { return std::to_string(n) + l_letter(l); }

int AtomSpec::electron_count() const {
  int s = 0;
  for (const auto& sh : shells) s += sh.occupancy;
  return s;
}

std::vector<Shell> parse_shells(const std::string& text) {
  std::vector<Shell> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    std::size_t p = 0;
    while (p < tok.size() && std::isdigit(static_cast<unsigned char>(tok[p]))) ++p;
    if (p == 0 || p >= tok.size()) throw ConfigError("scf: bad shell token '" + tok + "'");
    Shell s;
    s.n = std::stoi(tok.substr(0, p));
    s.l = l_from_letter(tok[p]);
    if (s.l < 0) throw ConfigError("scf: bad orbital letter in '" + tok + "'");
    std::string occ = tok.substr(p + 1);
    if (occ.empty() || !std::all_of(occ.begin(), occ.end(),
                                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ConfigError("scf: bad occupancy in '" + tok + "'");
    s.occupancy = std::stoi(occ);
    out.push_back(s);
  }
  return out;
}

std::string format_shells(const std::vector<Shell>& shells) {
  std::string s;
  for (const auto& sh : shells) {
    if (!s.empty()) s += ' ';
    s += sh.label() + std::to_string(sh.occupancy);
  }
  return s;
}

void validate(const AtomSpec& atom) {
  if (atom.Z <= 0) throw ConfigError("scf: Z must be positive");
  if (atom.shells.empty()) throw ConfigError("scf: no shells");
  for (std::size_t i = 0; i < atom.shells.size(); ++i) {
    const auto& s = atom.shells[i];
    if (s.l < 0 || s.n <= s.l) throw ConfigError("scf: need n > l >= 0 for " + s.label());
    int cap = 2 * (2 * s.l + 1);
    if (s.occupancy <= 0 || s.occupancy > cap)
      throw ConfigError("scf: occupancy out of range for " + s.label());
    // One electron in an s shell is accepted only for one-electron systems, where the
    // spin-polarized treatment is exact.
    bool one_electron = atom.shells.size() == 1 && s.l == 0 && s.occupancy == 1;
    if (s.occupancy != cap && !one_electron)
      throw ConfigError("scf: open shell " + s.label() + " rejected (closed-shell code)");
    for (std::size_t j = 0; j < i; ++j)
      if (atom.shells[j] == s) throw ConfigError("scf: duplicate shell " + s.label());
  }
}

AtomSpec atom_by_symbol(const std::string& symbol) {
  static const std::map<std::string, std::pair<int, std::string>> table = {
      {"H", {1, "1s1"}},
      {"He", {2, "1s2"}},
      {"Be", {4, "1s2 2s2"}},
      {"Ne", {10, "1s2 2s2 2p6"}},
      {"Mg", {12, "1s2 2s2 2p6 3s2"}},
      {"Ar", {18, "1s2 2s2 2p6 3s2 3p6"}},
      {"Ca", {20, "1s2 2s2 2p6 3s2 3p6 4s2"}},
      {"Zn", {30, "1s2 2s2 2p6 3s2 3p6 3d10 4s2"}},
      {"Kr", {36, "1s2 2s2 2p6 3s2 3p6 3d10 4s2 4p6"}},
  };
  auto it = table.find(symbol);
  if (it == table.end()) throw ConfigError("scf: unknown atom symbol '" + symbol + "'");
  AtomSpec a;
  a.Z = it->second.first;
  a.shells = parse_shells(it->second.second);
  a.name = symbol;
  return a;
}

AtomSpec read_atom_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scf: cannot open atom config '" + path + "'");
  AtomSpec a;
  std::string line;
  bool haveZ = false, haveShells = false;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key == "Z") {
      a.Z = std::stoi(val);
      haveZ = true;
    } else if (key == "shells") {
      a.shells = parse_shells(val);
      haveShells = true;
    } else if (key == "name") {
      a.name = val;
    } else {
      throw ConfigError("scf: unknown key '" + key + "' in " + path);
    }
  }
  if (!haveZ || !haveShells) throw ConfigError("scf: config needs Z and shells");
  return a;
}

double slater_effective_charge(const AtomSpec& atom, const Shell& s) {
  // Slater grouping: (1s)(2s,2p)(3s,3p)(3d)(4s,4p)(4d)(4f)...
  auto group = [](const Shell& x) { return 2 * x.n + (x.l >= 2 ? 1 : 0) + (x.l >= 3 ? 1 : 0); };
  int gs = group(s);
  double S = 0;
  for (const auto& o : atom.shells) {
    int go = group(o);
    double occ = o.occupancy - ((o == s) ? 1 : 0);
    if (go == gs) {
      S += occ * ((s.n == 1) ? 0.30 : 0.35);
    } else if (go < gs) {
      if (s.l >= 2)
        S += occ;
      else if (o.n == s.n - 1)
        S += 0.85 * occ;
      else if (o.n < s.n - 1)
        S += occ;
      else
        S += occ;  // same n, lower group (e.g. 3s,3p seen from 4s handled above); d below s
    }
  }
  return std::max(atom.Z - S, 1.0);
}

}  // namespace nlhf
