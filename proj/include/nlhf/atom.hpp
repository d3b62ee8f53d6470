#pragma once
#include <string>
#include <vector>

namespace nlhf {

struct Shell {
  int n = 1, l = 0, occupancy = 0;
  std::string label() const;  // "2p"
  bool operator==(const Shell& o) const { return n == o.n && l == o.l; }
};

struct AtomSpec {
  int Z = 0;
  std::vector<Shell> shells;
  std::string name;  // optional symbol
  int electron_count() const;
};

// "1s2 2s2 2p6" -> shells. Throws ConfigError on syntax errors.
std::vector<Shell> parse_shells(const std::string& text);
std::string format_shells(const std::vector<Shell>& shells);

// Closed shells only; a lone 1-electron s shell (H-like ions) is the one exception.
void validate(const AtomSpec& atom);

// Ground-state closed-shell configurations by symbol (H, He, Be, Ne, Mg, Ar, Ca, Zn, Kr).
AtomSpec atom_by_symbol(const std::string& symbol);

// Plain-text key-value config: lines "Z = 18", "shells = 1s2 2s2 ...", '#' comments.
AtomSpec read_atom_config(const std::string& path);

// Slater-rule screened charge seen by shell s.
double slater_effective_charge(const AtomSpec& atom, const Shell& s);

char l_letter(int l);
int l_from_letter(char c);

}  // namespace nlhf
