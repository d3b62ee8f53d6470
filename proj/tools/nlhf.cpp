// nlhf: command-line front end. Every run writes run.json plus CSV and/or JSON artifacts.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nlhf/analysis.hpp"
#include "nlhf/atom.hpp"
#include "nlhf/errors.hpp"
#include "nlhf/gauge.hpp"
#include "nlhf/green.hpp"
#include "nlhf/grid.hpp"
#include "nlhf/model.hpp"
#include "nlhf/scattering.hpp"
#include "nlhf/scf.hpp"
#include "nlhf/tail.hpp"
#include "nlhf/tunneling.hpp"

#ifndef NLHF_VERSION
#define NLHF_VERSION "0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace nlhf;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  json to_json() const {
    json a = json::array();
    for (const auto& row : rows) {
      json o;
      for (std::size_t i = 0; i < header.size(); ++i) o[header[i]] = row[i];
      a.push_back(o);
    }
    return a;
  }
};

struct Common {
  std::string atom = "H";
  std::string shells;
  int Z = 0;
  std::string config;
  std::string scheme = "hf";
  int max_iterations = SCFOptions{}.max_iterations;
  std::optional<double> r_min, r_max, hybrid_scale;
  std::optional<int> points;
  std::string mapping = "log";
  std::string out = "out";
  std::string format = "both";
};

class Sink {
 public:
  Sink(const Common& c, std::string command) : dir_(c.out), command_(std::move(command)) {
    if (c.format != "csv" && c.format != "json" && c.format != "both")
      throw ConfigError("cli: --format must be csv, json or both");
    csv_ = c.format != "json";
    json_ = c.format != "csv";
    fs::create_directories(dir_);
  }
  // csv_only: the JSON side is written separately under the same stem.
  void table(const std::string& stem, const Table& t, bool csv_only = false) {
    if (csv_) {
      std::ofstream f(dir_ / (stem + ".csv"));
      for (std::size_t i = 0; i < t.header.size(); ++i) f << (i ? "," : "") << t.header[i];
      f << "\n";
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
        f << "\n";
      }
      artifacts_.push_back(stem + ".csv");
    }
    if (json_ && !csv_only) document(stem, t.to_json());
  }
  void document(const std::string& stem, const json& j) {
    if (!json_) return;
    std::ofstream(dir_ / (stem + ".json")) << j.dump(2) << "\n";
    artifacts_.push_back(stem + ".json");
  }
  void manifest(const json& parameters, const json& resolved) {
    json m;
    m["program"] = "nlhf";
    m["version"] = NLHF_VERSION;
    m["command"] = command_;
    m["parameters"] = parameters;
    if (!resolved.empty()) m["resolved"] = resolved;
    m["artifacts"] = artifacts_;
    std::ofstream(dir_ / "run.json") << m.dump(2) << "\n";
  }

 private:
  fs::path dir_;
  std::string command_;
  bool csv_ = true, json_ = true;
  std::vector<std::string> artifacts_;
};

// Every option of the subcommand chain with its resolved value.
json resolved_parameters(const CLI::App* app) {
  json p;
  for (const CLI::Option* o : app->get_options()) {
    if (o->get_name() == "--help" || o->get_name() == "-h" || o->get_lnames().empty()) continue;
    const std::string key = o->get_lnames().front();
    if (o->count() > 0) {
      const auto& r = o->results();
      if (o->get_expected_max() > 1) p[key] = r;
      else if (o->get_type_size() == 0) p[key] = true;
      else p[key] = r.empty() ? "" : r.back();
    } else {
      p[key] = o->get_default_str();
    }
  }
  for (const CLI::App* sub : app->get_subcommands()) p[sub->get_name()] = resolved_parameters(sub);
  return p;
}

void add_atom_options(CLI::App* app, Common& c) {
  app->add_option("--atom", c.atom, "Element symbol (H He Be Ne Mg Ar Ca Zn Kr)")->capture_default_str();
  app->add_option("--shells", c.shells, "Shell string, e.g. \"1s2 2s2 2p6\" (needs --Z)");
  app->add_option("--Z", c.Z, "Nuclear charge for --shells");
  app->add_option("--config", c.config, "Atom config file (Z = .., shells = ..)");
  app->add_option("--scheme", c.scheme, "hartree | hartree-no-self-action | hf")->capture_default_str();
  app->add_option("--max-iterations", c.max_iterations, "SCF iteration limit")->capture_default_str();
}

void add_grid_options(CLI::App* app, Common& c) {
  app->add_option("--r-min", c.r_min, "Innermost radius (a.u.)");
  app->add_option("--r-max", c.r_max, "Outermost radius (a.u.)");
  app->add_option("--points", c.points, "Grid points");
  app->add_option("--mapping", c.mapping, "log | hybrid | linear")->capture_default_str();
  app->add_option("--hybrid-scale", c.hybrid_scale, "b of x = ln r + r/b");
}

void add_output_options(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_option("--format", c.format, "csv | json | both")->capture_default_str();
}

AtomSpec resolve_atom(const Common& c) {
  AtomSpec a;
  if (!c.config.empty()) {
    a = read_atom_config(c.config);
  } else if (!c.shells.empty()) {
    if (c.Z <= 0) throw ConfigError("cli: --shells needs a positive --Z");
    a.Z = c.Z;
    a.shells = parse_shells(c.shells);
  } else {
    a = atom_by_symbol(c.atom);
  }
  if (a.electron_count() != a.Z)
    std::cerr << "warning: " << a.electron_count() << " electrons for Z = " << a.Z << " (ion)\n";
  validate(a);
  return a;
}

RadialGrid resolve_grid(const Common& c, const RadialGrid& fallback) {
  if (!c.r_min && !c.r_max && !c.points && !c.hybrid_scale && c.mapping == "log") return fallback;
  return build_grid(c.r_min.value_or(fallback.r.front()), c.r_max.value_or(fallback.r.back()),
                    c.points.value_or(static_cast<int>(fallback.size())), parse_mapping(c.mapping),
                    c.hybrid_scale.value_or(1.0));
}

// Resolved atom and grid, recorded in the manifest.
json g_resolved = json::object();

SCFResult run_scf(const Common& c, const RadialGrid& grid, std::optional<Scheme> scheme = {}) {
  const AtomSpec atom = resolve_atom(c);
  g_resolved["Z"] = atom.Z;
  g_resolved["shells"] = format_shells(atom.shells);
  g_resolved["grid"] = {{"r_min", grid.r.front()}, {"r_max", grid.r.back()}, {"points", grid.size()}};
  if (c.max_iterations < 1) throw ConfigError("cli: --max-iterations must be positive");
  SCFOptions opt;
  opt.max_iterations = c.max_iterations;
  return solve(atom, grid, scheme.value_or(parse_scheme(c.scheme)), opt);
}

json scf_json(const SCFResult& res) {
  json j;
  j["atom"] = res.atom.name.empty() ? format_shells(res.atom.shells) : res.atom.name;
  j["Z"] = res.atom.Z;
  j["shells"] = format_shells(res.atom.shells);
  j["scheme"] = to_string(res.scheme);
  j["converged"] = res.converged;
  j["iterations"] = res.iterations;
  j["total_energy"] = res.total_energy;
  j["kinetic_energy"] = res.kinetic_energy;
  j["potential_energy"] = res.potential_energy;
  j["virial_ratio"] = res.virial_ratio();
  j["grid"] = {{"r_min", res.grid.r.front()}, {"r_max", res.grid.r.back()}, {"points", res.grid.size()}};
  json orbs = json::array();
  for (const auto& o : res.orbitals)
    orbs.push_back({{"orbital", o.label()}, {"occupancy", o.occupancy}, {"energy", o.energy}, {"residual", o.residual}});
  j["orbitals"] = orbs;
  return j;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("cli: bad number '" + item + "' in list");
    }
  }
  if (v.empty()) throw ConfigError("cli: empty list");
  return v;
}

std::vector<double> sweep(double lo, double hi, int points) {
  if (points < 1) throw ConfigError("cli: sweep needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) v[i] = lo + (hi - lo) * i / (points - 1);
  return v;
}

// ---- subcommands ----

void cmd_solve(const Common& c, Sink& out) {
  SCFResult res = run_scf(c, resolve_grid(c, default_grid()));
  out.document("scf", scf_json(res));
  Table t;
  t.header = {"r"};
  for (const auto& o : res.orbitals) t.header.push_back("P_" + o.label());
  for (std::size_t i = 0; i < res.grid.size(); ++i) {
    std::vector<std::string> row{num(res.grid.r[i])};
    for (const auto& o : res.orbitals) row.push_back(num(o.P[i]));
    t.rows.push_back(std::move(row));
  }
  out.table("orbitals", t);
  std::cout << "E_total = " << num(res.total_energy) << "  virial = " << num(res.virial_ratio()) << "\n";
  for (const auto& o : res.orbitals) std::cout << o.label() << "  " << num(o.energy) << "\n";
}

void cmd_nodes(const Common& c, bool raw, Sink& out) {
  SCFResult res = run_scf(c, resolve_grid(c, default_grid()));
  std::vector<RefinedOrbital> orbs;
  if (raw) {
    for (const auto& o : res.orbitals) orbs.push_back(unrefined(res, o.n, o.l));
  } else {
    orbs = refine_all(res);
  }
  Table t;
  t.header = {"orbital", "energy", "nodes", "positions"};
  for (std::size_t k = 0; k < orbs.size(); ++k) {
    NodeReport rep = count_nodes(orbs[k]);
    std::string pos;
    for (std::size_t i = 0; i < rep.positions.size(); ++i) pos += (i ? ";" : "") + num(rep.positions[i]);
    t.rows.push_back({res.orbitals[k].label(), num(res.orbitals[k].energy), std::to_string(rep.count), pos});
    std::cout << res.orbitals[k].label() << "  nodes " << rep.count << (pos.empty() ? "" : "  at " + pos) << "\n";
  }
  out.table("nodes", t);
}

void cmd_tails(const Common& c, const std::string& radii, Sink& out) {
  SCFResult res = run_scf(c, resolve_grid(c, default_grid()));
  std::vector<RefinedOrbital> orbs = refine_all(res);
  const std::vector<double> rs = parse_list(radii);
  double outer = res.orbitals.front().energy;
  for (const auto& o : res.orbitals) outer = std::max(outer, o.energy);
  Table t;
  t.header = {"orbital", "r", "log10_abs", "sign", "slope", "own_slope", "outer_slope", "model_log10_abs", "model_slope"};
  for (std::size_t k = 0; k < orbs.size(); ++k) {
    const Orbital& o = res.orbitals[k];
    std::vector<Orbital> others;
    for (const auto& p : res.orbitals)
      if (!(p.n == o.n && p.l == o.l)) others.push_back(p);
    TailModel m = predict_tail(o, others, res.grid);
    for (double r : rs) {
      if (r >= orbs[k].r.back()) throw ConfigError("cli: tail radius " + num(r) + " beyond the refined range");
      t.rows.push_back({o.label(), num(r), num(orbs[k].log10_abs_at(r)), std::to_string(orbs[k].sign[orbs[k].locate(r)]),
                        num(orbs[k].slope_at(r)), num(-std::sqrt(2 * std::abs(o.energy))),
                        num(-std::sqrt(2 * std::abs(outer))), num(m.log10_abs(r)), num(m.slope(r))});
    }
  }
  out.table("tails", t);
  std::cout << "wrote " << t.rows.size() << " tail samples\n";
}

void cmd_tunneling(const TunnelingInput& base, const std::string& fields, const std::string& convention, Sink& out) {
  EtaConvention conv;
  if (convention == "closed-form") conv = EtaConvention::kClosedForm;
  else if (convention == "ratio") conv = EtaConvention::kRatio;
  else throw ConfigError("cli: --convention must be closed-form or ratio");
  Table t;
  t.header = {"I_i", "I_o", "E", "n", "n_i", "C_n", "N_o", "log10_eta", "log10_tau"};
  json detail = json::array();
  for (double E : parse_list(fields)) {
    TunnelingInput in = base;
    in.E_field = E;
    validate(in);
    TunnelingReport rep = tunneling_report(in);
    const double le = eta(in, conv);
    t.rows.push_back({num(in.I_i), num(in.I_o), num(E), std::to_string(in.n), std::to_string(in.n_i), num(in.C_n),
                      std::to_string(in.N_o), num(le), num(rep.tau)});
    detail.push_back({{"E", E},
                      {"log10_eta", jnum(le)},
                      {"log10_tau", jnum(rep.tau)},
                      {"log10_bare_inner", jnum(rep.bare_inner)},
                      {"log10_bare_outer", jnum(rep.bare_outer)},
                      {"log10_exchange_inner", jnum(rep.exchange_inner)},
                      {"deep_regime", rep.deep_regime},
                      {"intensity_w_cm2", rep.intensity_w_cm2}});
    std::cout << "E = " << num(E) << "  log10_eta = " << num(le) << "  log10_tau = " << num(rep.tau) << "\n";
  }
  out.table("tunneling", t);
  out.document("tunneling_detail", detail);
}

// Channel operator for phases / levinson: an atom core or a model well.
struct Target {
  std::optional<SCFResult> core;
  std::string potential = "atom";
  double depth = 1, radius = 1, step = 0.0025;
  ChannelOperator op(int l) const {
    if (core) return continuum_operator(*core, l);
    if (potential == "free") return well_operator(l, 0, 1, step);
    if (potential == "well") return well_operator(l, depth, radius, step);
    throw ConfigError("cli: --potential must be atom, free or well");
  }
};

Target make_target(const Common& c, const std::string& potential, double depth, double radius, double step) {
  Target t;
  t.potential = potential;
  t.depth = depth, t.radius = radius, t.step = step;
  if (potential == "atom") t.core = run_scf(c, resolve_grid(c, scattering_grid()));
  return t;
}

void cmd_phases(const Target& target, int l, double e_min, double e_max, int points, Sink& out) {
  ChannelOperator op = target.op(l);
  PhaseShiftCurve curve = phase_curve(op, energy_mesh(e_min, e_max, points));
  Table t;
  t.header = {"l", "E", "k", "delta", "delta_over_pi"};
  for (std::size_t i = 0; i < curve.energies.size(); ++i) {
    const double E = curve.energies[i];
    t.rows.push_back({std::to_string(l), num(E), num(std::sqrt(2 * E)), num(curve.deltas[i]), num(curve.deltas[i] / M_PI)});
  }
  out.table("phases", t);
  out.document("phases_summary", {{"l", l}, {"points", curve.energies.size()}, {"reference_gap", curve.reference_gap}});
  std::cout << "l = " << l << "  delta(E_min)/pi = " << num(curve.deltas.front() / M_PI)
            << "  branch gap = " << num(curve.reference_gap) << "\n";
}

void cmd_levinson(const Target& target, int l_max, Sink& out) {
  Table t;
  t.header = {"l", "delta0_over_pi", "n_bound", "n_occupied", "nearest", "deviation", "conclusive"};
  for (int l = 0; l <= l_max; ++l) {
    ChannelOperator op = target.op(l);
    PhaseShiftCurve curve = phase_curve(op, energy_mesh());
    LevinsonReport r = target.core ? levinson_check(curve, *target.core) : levinson_check(curve, op, 0);
    t.rows.push_back({std::to_string(l), num(r.delta_zero), std::to_string(r.n_bound), std::to_string(r.n_occupied),
                      std::to_string(r.nearest), num(r.deviation), r.conclusive ? "true" : "false"});
    std::cout << "l = " << l << "  delta(0)/pi = " << num(r.delta_zero) << "  bound = " << r.n_bound
              << "  occupied = " << r.n_occupied << "\n";
  }
  out.table("levinson", t);
}

void cmd_green(const Common& c, int l, const std::string& lambdas, int probe, Sink& out) {
  RadialGrid grid = resolve_grid(c, green_grid());
  if (probe < 0 || probe + 2 >= static_cast<int>(grid.size()))
    throw ConfigError("cli: --probe must lie in [0, points - 3]");
  if (l < 0) throw ConfigError("cli: --l must be non-negative");
  SCFResult core = run_scf(c, grid);
  Table t;
  t.header = {"l", "lambda", "E", "direct_residual", "product_residual"};
  // one probe energy for the whole sweep, taken from the local (lambda = 0) operator
  const double E = probe_energy(green_operator(core, l, grid, 0), probe);
  for (double lam : parse_list(lambdas)) {
    ChannelOperator op = green_operator(core, l, grid, lam);
    const double direct = resolvent_residual(op, green_direct(op, E));
    const double product = product_form_residual(op, E);
    t.rows.push_back({std::to_string(l), num(lam), num(E), num(direct), num(product)});
    std::cout << "lambda = " << num(lam) << "  E = " << num(E) << "  direct " << num(direct) << "  product "
              << num(product) << "\n";
  }
  out.table("green", t);
}

void cmd_gauge(const Common& c, const std::string& form, double omega_max, const std::string& eps, Sink& out) {
  SCFResult core = run_scf(c, resolve_grid(c, default_grid()));
  const Form f = parse_form(form);
  Table t;
  t.header = {"transition", "omega", "d_length", "d_velocity", "relative_discrepancy"};
  auto add = [&](const DipolePair& p) {
    t.rows.push_back({p.transition, num(p.omega), num(p.d_length), num(p.d_velocity), num(p.relative_discrepancy)});
  };
  const std::vector<double> energies = parse_list(eps);
  for (const auto& o : core.orbitals) {
    for (int lf : {o.l - 1, o.l + 1}) {
      if (lf < 0) continue;
      try {
        add(bound_pair(core, o.n, o.l, lf, 0));
      } catch (const SpectrumError&) {
        // no unoccupied bound state in this channel
      }
      for (double e : energies) add(continuum_pair(core, o.n, o.l, lf, e));
    }
  }
  out.table("gauge_pairs", t);
  SumRuleReport s = oscillator_sum(core, f, omega_max);
  json j{{"scheme", to_string(s.scheme)},
         {"form", to_string(s.form)},
         {"omega_max", s.omega_max},
         {"partial_sum", s.partial_sum},
         {"discrete_sum", s.discrete_sum},
         {"continuum_sum", s.continuum_sum},
         {"electrons", s.electrons},
         {"complete", s.complete},
         {"failed_channels", s.failed_channels}};
  out.document("gauge_sum", j);
  Table st;
  st.header = {"scheme", "form", "omega_max", "partial_sum", "discrete_sum", "continuum_sum", "electrons", "complete"};
  st.rows.push_back({to_string(s.scheme), to_string(s.form), num(s.omega_max), num(s.partial_sum), num(s.discrete_sum),
                     num(s.continuum_sum), std::to_string(s.electrons), s.complete ? "true" : "false"});
  out.table("gauge_sum", st, true);
  std::cout << to_string(s.form) << " sum up to " << num(omega_max) << " = " << num(s.partial_sum) << " ("
            << s.electrons << " electrons)\n";
}

}  // namespace

namespace {

void cmd_model_coulomb(double Z, int n, int l, double alpha, int family, Sink& out) {
  const double n2 = double(n) * n;
  if (family > 0) {
    if (std::abs(alpha - n2) > 1e-12 * n2)
      throw ConfigError("model_lab: --family needs alpha = n^2 = " + num(n2));
    Table t;
    t.header = {"param", "Z1", "Z2", "E_total"};
    const double total = Z / (2 * l + 1);
    for (int k = 1; k <= family; ++k) {
      const double z1 = total * k / (family + 1);
      CoulombModelSolution s = coulomb_singular_family(Z, n, l, z1);
      t.rows.push_back({std::to_string(k), num(s.Z1), num(s.Z2), num(s.E_total)});
    }
    out.table("model_coulomb_family", t);
    std::cout << family << " family members, E_total = " << num(-Z * Z / (2 * n2)) << "\n";
    return;
  }
  CoulombModelSolution s = coulomb_normal(Z, n, l, alpha);
  Table t;
  t.header = {"alpha", "kind", "Z1", "Z2", "E1", "E2", "R1", "R2", "E_total", "E_closed_form"};
  t.rows.push_back({num(alpha), to_string(s.kind), num(s.Z1), num(s.Z2), num(s.E1), num(s.E2), num(s.R1), num(s.R2),
                    num(s.E_total), num(coulomb_closed_form_energy(Z, n, l, alpha))});
  out.table("model_coulomb", t);
  std::cout << "Z_eff = " << num(s.Z1) << "  E_total = " << num(s.E_total) << "\n";
}

void cmd_model_oscillator(double omega, double beta, int family, int N1, int N2, Sink& out) {
  if (family > 0) {
    if (beta != 1) throw ConfigError("model_lab: --family needs beta = 1");
    Table t;
    t.header = {"param", "w1", "w2"};
    json energies = json::array();
    for (int k = 1; k <= family; ++k) {
      OscillatorModelSolution s = oscillator_family(omega, omega * k / (family + 1), N1, N2);
      t.rows.push_back({std::to_string(k), num(s.w1), num(s.w2)});
      energies.push_back({{"param", k}, {"E1", s.E1}, {"E2", s.E2}, {"energy", s.energy}});
    }
    out.table("model_oscillator_family", t);
    out.document("model_oscillator_energies", energies);
    std::cout << family << " family members on w1^2 + w2^2 = " << num(omega * omega) << "\n";
    return;
  }
  OscillatorModelSolution s = oscillator_normal(omega, beta, N1, N2);
  Table t;
  t.header = {"omega", "beta", "kind", "w1", "w2", "E1", "E2", "energy"};
  t.rows.push_back({num(omega), num(beta), to_string(s.kind), num(s.w1), num(s.w2), num(s.E1), num(s.E2), num(s.energy)});
  out.table("model_oscillator", t);
  std::cout << "w_eff = " << num(s.w1) << "\n";
}

void cmd_model_rpa(double Z, int n, int l, int basis, const std::string& form, bool no_continuum, Sink& out) {
  InstabilityResult r = rpa_instability(Z, n, l, basis, parse_chi_form(form), !no_continuum);
  Table t;
  t.header = {"n", "l", "basis", "continuum", "form", "found", "alpha_critical", "n2", "ratio_to_n2", "drift", "chi"};
  const double n2 = double(n) * n;
  t.rows.push_back({std::to_string(n), std::to_string(l), std::to_string(basis), r.continuum ? "true" : "false",
                    to_string(r.form), r.found ? "true" : "false", r.found ? num(r.alpha_critical) : "nan", num(n2),
                    r.found ? num(r.alpha_critical / n2) : "nan", num(r.drift), num(r.chi)});
  out.table("model_rpa", t);
  if (r.found)
    std::cout << "alpha_critical = " << num(r.alpha_critical) << " (n^2 = " << num(n2) << ", drift " << num(r.drift) << ")\n";
  else
    std::cout << "no instability\n";
}

void cmd_figdata(const Common& c, double rho_min, double rho_max, int points, Sink& out) {
  const RadialGrid grid = resolve_grid(c, default_grid());
  SCFResult hn = run_scf(c, grid, Scheme::kHartreeNoSelf);
  SCFResult hf = run_scf(c, grid, Scheme::kHF);
  std::vector<RefinedOrbital> th = refine_all(hn), tf = refine_all(hf);
  const PlotTransform pt;
  Table t;
  t.header = {"rho", "r"};
  for (const auto& o : hn.orbitals) {
    t.header.push_back(o.label() + "_hartree");
    t.header.push_back(o.label() + "_hf");
  }
  // rho-scaled amplitude sqrt(r (a r + 1)) P, from the refined log form
  auto scaled = [&](const RefinedOrbital& o, double r) {
    if (r >= o.r.back() || r <= o.r.front()) return 0.0;
    const int sg = o.sign[o.locate(r)];
    return sg * std::sqrt(r * (pt.a * r + 1)) * std::pow(10.0, o.log10_abs_at(r));
  };
  for (double rho : sweep(rho_min, rho_max, points)) {
    const double r = r_of_rho(rho, pt);
    std::vector<std::string> row{num(rho), num(r)};
    for (std::size_t k = 0; k < hn.orbitals.size(); ++k) {
      const Orbital& o = hn.orbitals[k];
      row.push_back(num(scaled(th[k], r)));
      row.push_back(num(scaled(tf[hf.index_of(o.n, o.l)], r)));
    }
    t.rows.push_back(std::move(row));
  }
  out.table("figdata", t);
  Table e;
  e.header = {"orbital", "rho", "r_at_rho", "log10_rho_reading", "log10_r_reading"};
  for (std::size_t k = 0; k < hn.orbitals.size(); ++k) {
    const Orbital& o = hn.orbitals[k];
    Enhancement en = tail_enhancement(th[k], tf[hf.index_of(o.n, o.l)], 4.0, pt);
    e.rows.push_back({o.label(), num(en.rho), num(en.r_at_rho), num(en.log10_rho_reading), num(en.log10_r_reading)});
  }
  out.table("figdata_enhancement", e);
  std::cout << "wrote " << t.rows.size() << " rows for " << hn.orbitals.size() << " orbitals\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hartree and Hartree-Fock radial atom toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(NLHF_VERSION));
  Common c;

  auto atom_cmd = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    add_atom_options(s, c);
    add_grid_options(s, c);
    add_output_options(s, c);
    return s;
  };

  CLI::App* solve_cmd = atom_cmd("solve", "Self-consistent field for one atom");

  bool raw = false;
  CLI::App* nodes_cmd = atom_cmd("nodes", "Node positions of every orbital");
  nodes_cmd->add_flag("--raw", raw, "Count on the raw grid samples (no tail refinement)");

  std::string radii = "5,10,15,20,25";
  CLI::App* tails_cmd = atom_cmd("tails", "Refined tails: log-amplitudes and slopes");
  tails_cmd->add_option("--r", radii, "Comma-separated radii (a.u.)")->capture_default_str();

  TunnelingInput tin;
  std::string fields = "1", convention = "closed-form";
  CLI::App* tun_cmd = app.add_subcommand("tunneling", "Static-field inner/outer ionization estimates");
  tun_cmd->add_option("--Ii", tin.I_i, "Inner binding energy (a.u.)")->capture_default_str();
  tun_cmd->add_option("--Io", tin.I_o, "Outer binding energy (a.u.)")->capture_default_str();
  tun_cmd->add_option("--E", fields, "Field strength(s), comma-separated (a.u.)")->capture_default_str();
  tun_cmd->add_option("--n", tin.n, "Outer principal quantum number")->capture_default_str();
  tun_cmd->add_option("--ni", tin.n_i, "Inner principal quantum number")->capture_default_str();
  tun_cmd->add_option("--Cn", tin.C_n, "Mixing coefficient")->capture_default_str();
  tun_cmd->add_option("--No", tin.N_o, "Outer electrons contributing")->capture_default_str();
  tun_cmd->add_option("--convention", convention, "closed-form | ratio")->capture_default_str();
  add_output_options(tun_cmd, c);

  std::string potential = "atom";
  double depth = 1, radius = 1, step = 0.0025;
  int l = 0, l_max = 2, points = 160;
  double e_min = 1e-4, e_max = 50;
  auto scattering_cmd = [&](const std::string& name, const std::string& help) {
    CLI::App* s = atom_cmd(name, help);
    s->add_option("--potential", potential, "atom | free | well")->capture_default_str();
    s->add_option("--depth", depth, "Well depth (a.u.)")->capture_default_str();
    s->add_option("--radius", radius, "Well radius (a.u.)")->capture_default_str();
    s->add_option("--step", step, "Uniform grid step for model wells")->capture_default_str();
    return s;
  };
  CLI::App* phases_cmd = scattering_cmd("phases", "Phase shift curve of one partial wave");
  phases_cmd->add_option("--l", l, "Partial wave")->capture_default_str();
  phases_cmd->add_option("--e-min", e_min, "Lowest energy (a.u.)")->capture_default_str();
  phases_cmd->add_option("--e-max", e_max, "Highest energy (a.u.)")->capture_default_str();
  phases_cmd->add_option("--energies", points, "Geometric mesh points")->capture_default_str();
  CLI::App* lev_cmd = scattering_cmd("levinson", "Zero-energy phases against bound-state counts");
  lev_cmd->add_option("--l-max", l_max, "Highest partial wave")->capture_default_str();

  std::string lambdas = "0,0.25,0.5,0.75,1";
  int probe = 0;
  CLI::App* green_cmd = atom_cmd("green", "Resolvent: product form against direct inverse");
  green_cmd->add_option("--l", l, "Channel")->capture_default_str();
  green_cmd->add_option("--lambda", lambdas, "Exchange scalings, comma-separated")->capture_default_str();
  green_cmd->add_option("--probe", probe, "Probe between eigenvalues probe and probe+1")->capture_default_str();

  std::string form = "length", eps = "0.1,1";
  double omega_max = 20;
  CLI::App* gauge_cmd = atom_cmd("gauge", "Dipole length/velocity elements and oscillator sums");
  gauge_cmd->add_option("--form", form, "length | velocity")->capture_default_str();
  gauge_cmd->add_option("--omega-max", omega_max, "Sum cutoff (a.u.)")->capture_default_str();
  gauge_cmd->add_option("--eps", eps, "Continuum energies of the listed transitions")->capture_default_str();

  CLI::App* model_cmd = app.add_subcommand("model", "Exactly solvable two-group models");
  model_cmd->require_subcommand(1);
  double mZ = 1, alpha = 0, omega = 1, beta = 0;
  int mn = 1, ml = 0, family = 0, N1 = 1, N2 = 1, basis = 40;
  std::string chi_form = "inverse";
  bool no_continuum = false;
  CLI::App* coul_cmd = model_cmd->add_subcommand("coulomb", "alpha / (r1 r2) repulsion");
  coul_cmd->add_option("--Z", mZ, "Nuclear charge")->capture_default_str();
  coul_cmd->add_option("--n", mn, "Principal quantum number")->capture_default_str();
  coul_cmd->add_option("--l", ml, "Orbital quantum number")->capture_default_str();
  coul_cmd->add_option("--alpha", alpha, "Coupling")->capture_default_str();
  coul_cmd->add_option("--family", family, "Members of the alpha = n^2 family to list")->capture_default_str();
  add_output_options(coul_cmd, c);
  CLI::App* osc_cmd = model_cmd->add_subcommand("oscillator", "Oscillator analogue");
  osc_cmd->add_option("--omega", omega, "Bare frequency")->capture_default_str();
  osc_cmd->add_option("--beta", beta, "Scaled coupling")->capture_default_str();
  osc_cmd->add_option("--family", family, "Members of the beta = 1 family to list")->capture_default_str();
  osc_cmd->add_option("--N1", N1, "Group 1 size")->capture_default_str();
  osc_cmd->add_option("--N2", N2, "Group 2 size")->capture_default_str();
  add_output_options(osc_cmd, c);
  CLI::App* rpa_cmd = model_cmd->add_subcommand("rpa", "Instability of the normal solution");
  rpa_cmd->add_option("--Z", mZ, "Nuclear charge")->capture_default_str();
  rpa_cmd->add_option("--n", mn, "Principal quantum number")->capture_default_str();
  rpa_cmd->add_option("--l", ml, "Orbital quantum number")->capture_default_str();
  rpa_cmd->add_option("--basis", basis, "Discrete vacant states")->capture_default_str();
  rpa_cmd->add_option("--chi", chi_form, "inverse | printed")->capture_default_str();
  rpa_cmd->add_flag("--no-continuum", no_continuum, "Discrete states only");
  add_output_options(rpa_cmd, c);

  double rho_min = -4, rho_max = 8;
  int rho_points = 241;
  CLI::App* fig_cmd = atom_cmd("figdata", "rho-scaled Hartree vs HF orbital tables");
  fig_cmd->add_option("--rho-min", rho_min, "First rho")->capture_default_str();
  fig_cmd->add_option("--rho-max", rho_max, "Last rho")->capture_default_str();
  fig_cmd->add_option("--rho-points", rho_points, "Rows")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* active = app.get_subcommands().front();
  std::string name = active->get_name();
  if (active == model_cmd) name += " " + model_cmd->get_subcommands().front()->get_name();
  try {
    Sink out(c, name);
    if (active == solve_cmd) cmd_solve(c, out);
    else if (active == nodes_cmd) cmd_nodes(c, raw, out);
    else if (active == tails_cmd) cmd_tails(c, radii, out);
    else if (active == tun_cmd) cmd_tunneling(tin, fields, convention, out);
    else if (active == phases_cmd) cmd_phases(make_target(c, potential, depth, radius, step), l, e_min, e_max, points, out);
    else if (active == lev_cmd) cmd_levinson(make_target(c, potential, depth, radius, step), l_max, out);
    else if (active == green_cmd) cmd_green(c, l, lambdas, probe, out);
    else if (active == gauge_cmd) cmd_gauge(c, form, omega_max, eps, out);
    else if (active == fig_cmd) cmd_figdata(c, rho_min, rho_max, rho_points, out);
    else if (active == model_cmd) {
      CLI::App* m = model_cmd->get_subcommands().front();
      if (m == coul_cmd) cmd_model_coulomb(mZ, mn, ml, alpha, family, out);
      else if (m == osc_cmd) cmd_model_oscillator(omega, beta, family, N1, N2, out);
      else cmd_model_rpa(mZ, mn, ml, basis, chi_form, no_continuum, out);
    }
    out.manifest(resolved_parameters(active), g_resolved);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
