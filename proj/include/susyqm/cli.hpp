#pragma once

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "susyqm/errors.hpp"
#include "susyqm/grid.hpp"
#include "susyqm/io.hpp"
#include "susyqm/models.hpp"
#include "susyqm/operators.hpp"
#include "susyqm/partner.hpp"
#include "susyqm/spectrum.hpp"
#include "susyqm/susy_engine.hpp"

namespace susyqm::cli {

enum class Command { spectrum, check, partner, scan, eq5 };
enum class OutputFormat { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

struct RunConfig {
  Command command = Command::spectrum;
  ModelSpec model = ParticleInBox{};
  std::optional<std::size_t> n_points;
  std::optional<Boundary> boundary;
  Tolerances tolerances;
  bool zero_point_reset = false;
  OutputFormat format = OutputFormat::csv;
  std::string out_path;  // empty: stdout
  bool nilpotent_charge = false;
  std::size_t levels = 0;  // 0: model default
  std::vector<double> l_values;
  double points_per_length = 2001.0 / std::numbers::pi;
  std::vector<double> k_list;
};

/// Text produced by a command; `secondary` goes next to `primary` (partner spectra table).
struct CommandOutput {
  int exit_code = kExitOk;
  std::string primary;
  std::string secondary;
  std::string log;  // diagnostic stream
};

// ---------------------------------------------------------------------------
// Discretized models.

struct DiscreteModel {
  std::optional<Grid1D> grid;
  LinearOperator hamiltonian;
  LinearOperator grading;
  Units units;
  std::string description;
};

inline std::size_t default_points(const ModelSpec& m) {
  if (std::holds_alternative<FreeParticle>(m)) return 512;
  if (std::holds_alternative<DeltaWell>(m)) return 40001;
  return 2001;
}

inline DiscreteModel discretize(const RunConfig& cfg) {
  validate(cfg.model);
  const std::size_t n = cfg.n_points.value_or(default_points(cfg.model));
  std::ostringstream d;
  DiscreteModel out;
  if (const auto* r = std::get_if<PlanarRotor>(&cfg.model)) {
    const RotorOperators ops = rotor_basis_operators(r->m_max, r->inertia);
    out.hamiltonian = ops.hamiltonian;
    out.grading = ops.reflection;
    out.units.inertia = r->inertia;
    d << "rotor I=" << io::fmt(r->inertia) << " m_max=" << r->m_max;
    out.description = d.str();
    return out;
  }
  double length = 0.0;
  Boundary boundary = Boundary::dirichlet;
  if (const auto* f = std::get_if<FreeParticle>(&cfg.model)) {
    length = f->length;
    boundary = Boundary::periodic;
  } else if (const auto* b = std::get_if<ParticleInBox>(&cfg.model)) {
    length = b->length;
  } else if (const auto* s = std::get_if<SecSquaredPartner>(&cfg.model)) {
    length = s->length;
  } else if (const auto* w = std::get_if<DeltaWell>(&cfg.model)) {
    length = w->box_length;
  }
  boundary = cfg.boundary.value_or(boundary);
  Grid1D grid(0.5 * length, n, boundary);
  if (const auto* s = std::get_if<SecSquaredPartner>(&cfg.model)) {
    if (boundary != Boundary::dirichlet) throw ParameterError("the sec^2 partner needs dirichlet walls");
    const double len = s->length;
    out.hamiltonian = hamiltonian(grid, [len](double x) { return sec_squared_potential(len, x); });
  } else if (const auto* w = std::get_if<DeltaWell>(&cfg.model)) {
    out.hamiltonian = delta_well_hamiltonian(grid, w->lambda);
  } else {
    out.hamiltonian = free_hamiltonian(grid);
  }
  out.grading = parity_operator(grid);
  d << model_name(cfg.model) << " L=" << io::fmt(length) << " points=" << n << " boundary=" << to_string(boundary)
    << " h=" << io::fmt(grid.spacing());
  if (const auto* w = std::get_if<DeltaWell>(&cfg.model)) d << " lambda=" << io::fmt(w->lambda);
  out.description = d.str();
  out.grid = grid;
  return out;
}

inline std::size_t default_levels(const RunConfig& cfg, const DiscreteModel& dm) {
  if (cfg.levels > 0) return std::min<std::size_t>(cfg.levels, static_cast<std::size_t>(dm.hamiltonian.dimension()));
  if (std::holds_alternative<FreeParticle>(cfg.model) || std::holds_alternative<PlanarRotor>(cfg.model))
    return static_cast<std::size_t>(dm.hamiltonian.dimension());
  return 8;
}

// ---------------------------------------------------------------------------
// Commands.

/// Eigenvalue table with parity, degeneracy and pair columns. absent_at_base[sector] is true when
/// the sector has no zero-energy level among its non-negative levels.
inline CommandOutput cmd_spectrum(const RunConfig& cfg) {
  const DiscreteModel dm = discretize(cfg);
  Spectrum spec = numeric_spectrum(dm.hamiltonian, dm.grading, default_levels(cfg, dm));
  const std::vector<double> raw = spec.eigenvalues;
  double shift = 0.0;
  CommandOutput out;
  if (cfg.zero_point_reset) {
    shift = reset_zero_point(spec);
    out.log = "zero-point reset: E -> E - (" + io::fmt(shift) + ")\n";
  }
  const Pairing pairing = detect_pairing(spec, cfg.tolerances.pair);
  std::vector<std::string> pair_id(spec.size());
  for (std::size_t p = 0; p < pairing.pairs.size(); ++p) {
    pair_id[pairing.pairs[p].index_even] = std::to_string(p);
    pair_id[pairing.pairs[p].index_odd] = std::to_string(p);
  }
  std::vector<std::size_t> degeneracy(spec.size(), 1);
  for (const auto& [b, e] : degenerate_clusters(spec.eigenvalues))
    for (std::size_t i = b; i < e; ++i) degeneracy[i] = e - b;
  std::vector<std::size_t> artifacts;
  if (dm.grid) artifacts = nyquist_artifacts(spec, *dm.grid);

  const bool continuum = std::holds_alternative<FreeParticle>(cfg.model) || std::holds_alternative<DeltaWell>(cfg.model);
  std::vector<std::string> status(spec.size());
  bool even_at_base = false, odd_at_base = false;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (std::find(artifacts.begin(), artifacts.end(), i) != artifacts.end()) status[i] = "artifact";
    else if (raw[i] < -cfg.tolerances.zero) status[i] = "bound";
    else status[i] = continuum ? "continuum" : "discrete";
    if (std::abs(spec.eigenvalues[i]) <= cfg.tolerances.zero) {
      if (spec.parity_labels[i] == ParityLabel::even) even_at_base = true;
      if (spec.parity_labels[i] == ParityLabel::odd) odd_at_base = true;
    }
  }

  if (cfg.format == OutputFormat::json) {
    nlohmann::ordered_json j;
    j["units"] = io::units_json(dm.units);
    j["model"] = dm.description;
    j["zero_point_reset"] = cfg.zero_point_reset;
    j["zero_point_shift"] = shift;
    j["absent_at_base"] = {{"even", !even_at_base}, {"odd", !odd_at_base}};
    nlohmann::ordered_json levels = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < spec.size(); ++i)
      levels.push_back({{"n", i},
                        {"E", spec.eigenvalues[i]},
                        {"parity", to_string(spec.parity_labels[i])},
                        {"degeneracy", degeneracy[i]},
                        {"pair", pair_id[i]},
                        {"status", status[i]}});
    j["levels"] = levels;
    out.primary = j.dump(2) + "\n";
    return out;
  }
  io::CsvWriter csv;
  csv.comment("susyqm spectrum");
  csv.units(dm.units);
  csv.comment("model: " + dm.description);
  csv.comment(std::string("zero_point_reset: ") + (cfg.zero_point_reset ? "true" : "false") + " shift=" + io::fmt(shift));
  csv.comment(std::string("absent_at_base: even=") + (even_at_base ? "false" : "true") +
              " odd=" + (odd_at_base ? "false" : "true"));
  csv.comment("columns: n level index; E energy; parity even|odd|mixed; degeneracy cluster size; "
              "pair id shared by paired levels; status bound|continuum|discrete|artifact");
  csv.header({"n", "E", "parity", "degeneracy", "pair", "status"});
  for (std::size_t i = 0; i < spec.size(); ++i)
    csv.row({std::to_string(i), io::fmt(spec.eigenvalues[i]), to_string(spec.parity_labels[i]),
             std::to_string(degeneracy[i]), pair_id[i], status[i]});
  out.primary = csv.str();
  return out;
}

/// SusyReport as JSON; exit 0 iff every applicable criterion passes.
inline CommandOutput cmd_check(const RunConfig& cfg) {
  validate(cfg.model);
  SusyReport report;
  Units units;
  if (const auto* f = std::get_if<FreeParticle>(&cfg.model)) {
    const Boundary b = cfg.boundary.value_or(Boundary::periodic);
    if (b != Boundary::periodic)
      throw ParameterError("algebra check refused on a dirichlet grid (boundary stencils break [H, p] = 0)");
    const Grid1D grid(0.5 * f->length, cfg.n_points.value_or(512), Boundary::periodic);
    report = check_free_particle(grid, cfg.nilpotent_charge, cfg.tolerances);
  } else if (const auto* r = std::get_if<PlanarRotor>(&cfg.model)) {
    report = check_rotor(r->m_max, r->inertia, cfg.nilpotent_charge, cfg.tolerances);
    units.inertia = r->inertia;
  } else {
    throw ParameterError("algebra check refused for model '" + model_name(cfg.model) +
                         "': it lives on a dirichlet grid; supported models are free and rotor");
  }
  CommandOutput out;
  out.primary = io::to_json(report, units).dump(2) + "\n";
  out.exit_code = report.passes() ? kExitOk : kExitNumeric;
  return out;
}

/// W(x), V-(x) samples and the aligned box / partner spectra for the particle in a box.
inline CommandOutput cmd_partner(const RunConfig& cfg) {
  const auto* box = std::get_if<ParticleInBox>(&cfg.model);
  if (!box)
    throw ParameterError("partner command supports model 'box' only (got '" + model_name(cfg.model) + "')");
  validate(cfg.model);
  const double length = box->length;
  const Grid1D grid(0.5 * length, cfg.n_points.value_or(2001), cfg.boundary.value_or(Boundary::dirichlet));
  if (grid.boundary() != Boundary::dirichlet) throw ParameterError("partner construction needs dirichlet walls");
  const std::size_t n_levels = cfg.levels > 0 ? cfg.levels : 6;
  const double e0 = 0.5 * std::numbers::pi * std::numbers::pi / (length * length);
  auto zero = [](double) { return 0.0; };
  const PartnerResult analytic = partner_potential(box_ground_profile(length), e0, grid, zero, n_levels, cfg.tolerances);

  // Same construction from the grid ground state.
  const Vector g = analytic.spectrum_plus.vector(0);
  std::vector<double> sampled(grid.size());
  const double sign = g.real().sum() >= 0.0 ? 1.0 : -1.0;
  for (std::size_t j = 0; j < grid.size(); ++j) sampled[j] = sign * g(static_cast<Eigen::Index>(j)).real();
  const Superpotential ws = superpotential(sampled, grid);
  const std::vector<double> vm_sampled = partner_minus(ws, analytic.spectrum_plus.eigenvalues[0]);
  const auto mask = interior_mask(grid);
  double dev = 0.0, dev_exact = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!mask[j]) continue;
    const double exact = sec_squared_potential(length, analytic.x[j]);
    dev = std::max(dev, std::abs(vm_sampled[j] - exact) / exact);
    dev_exact = std::max(dev_exact, std::abs(analytic.v_minus[j] - exact) / exact);
  }

  CommandOutput out;
  const std::string model = "box L=" + io::fmt(length) + " points=" + std::to_string(grid.size()) + " boundary=dirichlet";
  if (cfg.format == OutputFormat::json) {
    nlohmann::ordered_json j;
    j["units"] = io::units_json({});
    j["model"] = model;
    j["E0"] = e0;
    j["v_minus_max_rel_deviation_analytic"] = dev_exact;
    j["v_minus_max_rel_deviation_sampled"] = dev;
    j["isospectral_deviation"] = analytic.isospectral_deviation;
    j["missing_level_index"] = analytic.missing_level_index;
    j["samples"] = {{"x", analytic.x}, {"W", analytic.w}, {"V_minus", analytic.v_minus}, {"V_minus_sampled", vm_sampled}};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n_levels; ++i) {
      nlohmann::ordered_json r{{"n", i + 1}, {"E_box", analytic.spectrum_plus.eigenvalues[i]}};
      r["E_partner"] = i == 0 ? nlohmann::ordered_json(nullptr)
                              : nlohmann::ordered_json(analytic.spectrum_minus.eigenvalues[i - 1]);
      rows.push_back(r);
    }
    j["spectra"] = rows;
    out.primary = j.dump(2) + "\n";
    return out;
  }
  io::CsvWriter samples;
  samples.comment("susyqm partner samples");
  samples.units({});
  samples.comment("model: " + model + " E0=" + io::fmt(e0));
  samples.comment("V_minus from the analytic ground state; V_minus_sampled from the grid ground state");
  samples.comment("max relative deviation from (pi/L)^2 sec^2(pi x/L) at interior points (>= 3h from walls): analytic=" +
                  io::fmt(dev_exact) + " sampled=" + io::fmt(dev));
  samples.header({"x", "W", "V_minus", "V_minus_sampled"});
  for (std::size_t j = 0; j < grid.size(); ++j)
    samples.row({io::fmt(analytic.x[j]), io::fmt(analytic.w[j]), io::fmt(analytic.v_minus[j]), io::fmt(vm_sampled[j])});
  out.primary = samples.str();

  io::CsvWriter spectra;
  spectra.comment("susyqm partner spectra");
  spectra.units({});
  spectra.comment("model: " + model);
  spectra.comment("missing_level_index=" + std::to_string(analytic.missing_level_index) +
                  " isospectral_deviation=" + io::fmt(analytic.isospectral_deviation));
  spectra.comment("columns: n box level number; E_box; E_partner (blank where the partner has no level)");
  spectra.header({"n", "E_box", "E_partner"});
  for (std::size_t i = 0; i < n_levels; ++i)
    spectra.row({std::to_string(i + 1), io::fmt(analytic.spectrum_plus.eigenvalues[i]),
                 i == 0 ? std::string() : io::fmt(analytic.spectrum_minus.eigenvalues[i - 1])});
  out.secondary = spectra.str();
  return out;
}

/// Per-L table of E1, E2 - E1, matched partner pairs and E1 L^2; exit 3 unless E1 L^2 is
/// constant and pairing holds at every L.
inline CommandOutput cmd_scan(const RunConfig& cfg) {
  if (cfg.l_values.size() < 2) throw ParameterError("scan needs at least two --L-values");
  const ScanTable t = box_to_free_scan(cfg.l_values, cfg.points_per_length, cfg.levels > 0 ? cfg.levels : 4,
                                       cfg.tolerances, 1e-3);
  CommandOutput out;
  out.exit_code = t.e1_l2_constant && t.pairs_preserved ? kExitOk : kExitNumeric;
  if (cfg.format == OutputFormat::json) {
    nlohmann::ordered_json j;
    j["units"] = io::units_json({});
    j["points_per_length"] = cfg.points_per_length;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows)
      rows.push_back({{"L", r.length}, {"points", r.n_points}, {"E1", r.e1}, {"gap", r.gap},
                      {"pairs_matched", r.pairs_matched}, {"pairs_expected", r.pairs_expected}, {"E1_L2", r.e1_l2}});
    j["rows"] = rows;
    j["summary"] = {{"target_E1_L2", 0.5 * std::numbers::pi * std::numbers::pi},
                    {"max_rel_deviation", t.max_e1_l2_deviation},
                    {"E1_L2_constant", t.e1_l2_constant},
                    {"pairs_preserved", t.pairs_preserved},
                    {"E1_monotone", t.e1_monotone}};
    out.primary = j.dump(2) + "\n";
    return out;
  }
  io::CsvWriter csv;
  csv.comment("susyqm scan");
  csv.units({});
  csv.comment("points_per_length=" + io::fmt(cfg.points_per_length));
  csv.comment("columns: L box length; points grid size; E1; gap E2-E1; pairs_matched/pairs_expected partner "
              "pairs among the lowest levels; E1_L2 = E1*L^2");
  csv.header({"L", "points", "E1", "gap", "pairs_matched", "pairs_expected", "E1_L2"});
  for (const auto& r : t.rows)
    csv.row({io::fmt(r.length), std::to_string(r.n_points), io::fmt(r.e1), io::fmt(r.gap),
             std::to_string(r.pairs_matched), std::to_string(r.pairs_expected), io::fmt(r.e1_l2)});
  csv.comment("summary: target_E1_L2=" + io::fmt(0.5 * std::numbers::pi * std::numbers::pi) +
              " max_rel_deviation=" + io::fmt(t.max_e1_l2_deviation) +
              " E1_L2_constant=" + (t.e1_l2_constant ? "true" : "false") +
              " pairs_preserved=" + (t.pairs_preserved ? "true" : "false"));
  out.primary = csv.str();
  return out;
}

/// Action of (q, q^dagger) on cos kx / sin kx; exit 3 if a substituted residual exceeds the
/// machine tolerance.
inline CommandOutput cmd_eq5(const RunConfig& cfg) {
  const auto* f = std::get_if<FreeParticle>(&cfg.model);
  if (!f) throw ParameterError("eq5 command supports model 'free' only");
  validate(cfg.model);
  const Grid1D grid(0.5 * f->length, cfg.n_points.value_or(512), Boundary::periodic);
  const std::vector<double> ks = cfg.k_list.empty() ? commensurate_wavenumbers(grid) : cfg.k_list;
  const auto rows = eq5_action_table(grid, ks);
  double worst = 0.0;
  for (const auto& r : rows)
    for (double v : r.substituted) worst = std::max(worst, v);
  CommandOutput out;
  out.exit_code = worst <= cfg.tolerances.machine ? kExitOk : kExitNumeric;
  const std::vector<std::string> names{"qc_minus_iks", "qs", "qdag_s_plus_ikc", "qdag_c"};
  if (cfg.format == OutputFormat::json) {
    nlohmann::ordered_json j;
    j["units"] = io::units_json({});
    j["grid"] = {{"L", grid.length()}, {"points", grid.size()}, {"h", grid.spacing()}};
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json e{{"k", r.k}, {"k_discrete", r.k_discrete}};
      for (std::size_t i = 0; i < 4; ++i) {
        e[names[i]] = r.substituted[i];
        e[names[i] + "_continuum"] = r.continuum[i];
      }
      arr.push_back(e);
    }
    j["rows"] = arr;
    j["max_substituted"] = worst;
    out.primary = j.dump(2) + "\n";
    return out;
  }
  io::CsvWriter csv;
  csv.comment("susyqm eq5 action table");
  csv.units({});
  csv.comment("grid: L=" + io::fmt(grid.length()) + " points=" + std::to_string(grid.size()) + " periodic");
  csv.comment("residuals in max norm; plain columns use k_discrete = sin(kh)/h, *_continuum columns use k");
  std::vector<std::string> header{"k", "k_discrete"};
  for (const auto& n : names) header.push_back(n);
  for (const auto& n : names) header.push_back(n + "_continuum");
  csv.header(header);
  for (const auto& r : rows) {
    std::vector<std::string> row{io::fmt(r.k), io::fmt(r.k_discrete)};
    for (double v : r.substituted) row.push_back(io::fmt(v));
    for (double v : r.continuum) row.push_back(io::fmt(v));
    csv.row(row);
  }
  csv.comment("summary: max_substituted=" + io::fmt(worst));
  out.primary = csv.str();
  return out;
}

inline CommandOutput dispatch(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::spectrum: return cmd_spectrum(cfg);
    case Command::check: return cmd_check(cfg);
    case Command::partner: return cmd_partner(cfg);
    case Command::scan: return cmd_scan(cfg);
    case Command::eq5: return cmd_eq5(cfg);
  }
  throw ParameterError("unknown command");
}

/// "<stem>_spectra<ext>" next to the primary output.
inline std::string secondary_path(const std::string& primary) {
  const std::filesystem::path p(primary);
  return (p.parent_path() / (p.stem().string() + "_spectra" + p.extension().string())).string();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ParameterError("cannot open output path '" + path + "'");
  f << content;
  if (!f) throw ParameterError("failed writing output path '" + path + "'");
}

// ---------------------------------------------------------------------------
// Argument parsing.

struct RawOptions {
  std::string model;
  std::optional<double> length, lambda, inertia;
  std::optional<int> m_max;
  std::optional<std::size_t> points;
  std::string boundary;
  std::string rep = "standing";
  std::string charge = "Q";
  std::vector<double> l_values;
  std::optional<double> points_per_length;
  std::vector<double> k_list;
  std::string out;
  std::string format = "csv";
  bool zero_point_reset = false;
  std::size_t levels = 0;
  Tolerances tol;
};

inline void add_common_options(CLI::App& sub, RawOptions& o) {
  sub.add_option("--model", o.model, "free | box | partner | delta | rotor")->required();
  sub.add_option("--L", o.length, "box or domain length");
  sub.add_option("--lambda", o.lambda, "delta-well coupling");
  sub.add_option("--I", o.inertia, "rotor moment of inertia");
  sub.add_option("--m-max", o.m_max, "rotor basis cutoff");
  sub.add_option("--points", o.points, "grid points");
  sub.add_option("--boundary", o.boundary, "dirichlet | periodic override");
  sub.add_option("--rep", o.rep, "free-particle representation: standing | traveling");
  sub.add_option("--charge", o.charge, "Q | q");
  sub.add_option("--L-values", o.l_values, "box lengths for scan")->delimiter(',');
  sub.add_option("--points-per-length", o.points_per_length, "grid density for scan");
  sub.add_option("--k-list", o.k_list, "wavenumbers for eq5")->delimiter(',');
  sub.add_option("--out", o.out, "output path (default stdout)");
  sub.add_option("--format", o.format, "csv | json");
  sub.add_flag("--zero-point-reset", o.zero_point_reset, "shift energies so the ground state sits at zero");
  sub.add_option("--levels", o.levels, "number of levels");
  sub.add_option("--tol-machine", o.tol.machine, "machine-precision tolerance");
  sub.add_option("--tol-convergence", o.tol.convergence, "grid convergence tolerance (relative)");
  sub.add_option("--tol-pair", o.tol.pair, "pair degeneracy tolerance (relative)");
  sub.add_option("--tol-zero", o.tol.zero, "zero-energy and annihilation tolerance");
}

inline RunConfig to_config(Command command, const RawOptions& o) {
  RunConfig cfg;
  cfg.command = command;
  const std::string& m = o.model;
  if (m == "free") {
    FreeParticle f;
    if (o.length) f.length = *o.length;
    if (o.rep == "traveling") f.rep = WaveRepresentation::traveling;
    else if (o.rep != "standing") throw ParameterError("--rep must be standing or traveling");
    cfg.model = f;
  } else if (m == "box") {
    cfg.model = ParticleInBox{o.length.value_or(std::numbers::pi)};
  } else if (m == "partner" || m == "sec2") {
    cfg.model = SecSquaredPartner{o.length.value_or(std::numbers::pi)};
  } else if (m == "delta") {
    cfg.model = DeltaWell{o.lambda.value_or(1.0), o.length.value_or(40.0)};
  } else if (m == "rotor") {
    cfg.model = PlanarRotor{o.inertia.value_or(1.0), o.m_max.value_or(8)};
  } else {
    throw ParameterError("unknown model '" + m + "'; supported: free, box, partner, delta, rotor");
  }
  cfg.n_points = o.points;
  if (o.boundary == "dirichlet") cfg.boundary = Boundary::dirichlet;
  else if (o.boundary == "periodic") cfg.boundary = Boundary::periodic;
  else if (!o.boundary.empty()) throw ParameterError("--boundary must be dirichlet or periodic");
  if (o.charge == "q") cfg.nilpotent_charge = true;
  else if (o.charge != "Q") throw ParameterError("--charge must be Q or q");
  if (o.format == "json") cfg.format = OutputFormat::json;
  else if (o.format != "csv") throw ParameterError("--format must be csv or json");
  for (double t : {o.tol.machine, o.tol.convergence, o.tol.pair, o.tol.zero})
    if (!(t > 0.0)) throw ParameterError("tolerance overrides must be positive");
  cfg.tolerances = o.tol;
  cfg.zero_point_reset = o.zero_point_reset;
  cfg.out_path = o.out;
  cfg.levels = o.levels;
  cfg.l_values = o.l_values;
  if (o.points_per_length) cfg.points_per_length = *o.points_per_length;
  cfg.k_list = o.k_list;
  return cfg;
}

/// Entry point shared by the executable and the tests. Exit codes: 0 success, 2 configuration
/// or usage error, 3 numerical assertion failure.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"susyqm: supersymmetric spectra of simple quantum systems"};
  app.require_subcommand(1);
  RawOptions opts;
  struct Entry {
    std::string name;
    Command command;
    std::string description;
  };
  const std::vector<Entry> commands{
      {"spectrum", Command::spectrum, "eigenvalue table with parity, degeneracy and pairing"},
      {"check", Command::check, "supersymmetry algebra and pairing verdicts"},
      {"partner", Command::partner, "superpotential and partner potential of the box"},
      {"scan", Command::scan, "box spectra over a list of lengths"},
      {"eq5", Command::eq5, "supercharge action on sampled standing waves"}};
  std::vector<CLI::App*> subs;
  for (const Entry& entry : commands) {
    CLI::App* sub = app.add_subcommand(entry.name, entry.description);
    add_common_options(*sub, opts);
    subs.push_back(sub);
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }
  try {
    Command command = Command::spectrum;
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) command = commands[i].command;
    const RunConfig cfg = to_config(command, opts);
    const CommandOutput result = dispatch(cfg);
    err << result.log;
    if (cfg.out_path.empty()) {
      out << result.primary;
      if (!result.secondary.empty()) out << '\n' << result.secondary;
    } else {
      write_file(cfg.out_path, result.primary);
      if (!result.secondary.empty()) write_file(secondary_path(cfg.out_path), result.secondary);
    }
    return result.exit_code;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ContractViolation& e) {
    err << "numerical contract violation: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const EvaluationError& e) {
    err << "evaluation error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace susyqm::cli
