#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "susyqm/grid.hpp"
#include "susyqm/susy_engine.hpp"

namespace susyqm::io {

/// 17 significant digits, "%.17g": identical doubles always print identically.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV document with '#'-prefixed header comments.
class CsvWriter {
 public:
  void comment(const std::string& line) { body_ << "# " << line << '\n'; }
  void units(const Units& u) {
    comment("units: hbar=" + fmt(u.hbar) + " m=" + fmt(u.mass) + " I=" + fmt(u.inertia));
  }
  void header(const std::vector<std::string>& columns) { row(columns); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) body_ << (i ? "," : "") << cells[i];
    body_ << '\n';
  }
  std::string str() const { return body_.str(); }

 private:
  std::ostringstream body_;
};

inline nlohmann::ordered_json units_json(const Units& u) {
  return {{"hbar", u.hbar}, {"m", u.mass}, {"I", u.inertia}};
}

inline nlohmann::ordered_json to_json(const SusyReport& r, const Units& units) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["units"] = units_json(units);
  j["model"] = r.model;
  j["charge"] = r.charge;
  j["zero_point_reset"] = r.zero_point_reset;
  j["zero_point_shift"] = r.zero_point_shift;
  j["tolerances"] = {{"machine", r.tolerances.machine},
                     {"convergence", r.tolerances.convergence},
                     {"pair", r.tolerances.pair},
                     {"zero", r.tolerances.zero}};

  ordered_json ground;
  ground["energy"] = r.ground.energy;
  ground["degeneracy_count"] = r.ground.degeneracy_count;
  ground["indices"] = r.ground.indices;
  ordered_json ann = ordered_json::object();
  for (const auto& a : r.ground.annihilation) ann[a.charge] = a.residual;
  ground["annihilation_residuals"] = ann;
  j["ground"] = ground;

  ordered_json pairs = ordered_json::array();
  for (const auto& p : r.pairing.pairs)
    pairs.push_back({{"index_even", p.index_even}, {"index_odd", p.index_odd}, {"delta_E", p.delta_energy}});
  j["pairs"] = pairs;
  j["unpaired"] = r.pairing.unpaired;
  j["artifacts"] = r.artifacts;
  j["flagged"] = r.pairing.flagged;
  j["pair_transport"] = {{"leakage", r.transport.leakage}, {"all_connected", r.transport.all_connected}};

  if (r.algebra) {
    ordered_json a;
    a["comm_HQ"] = r.algebra->comm_HQ;
    a["anticomm_minus_H"] = r.algebra->anticomm_minus_H;
    if (r.algebra->nilpotency_q) a["nilpotency_q"] = *r.algebra->nilpotency_q;
    if (r.algebra->nilpotency_qdag) a["nilpotency_qdag"] = *r.algebra->nilpotency_qdag;
    if (r.algebra->square_plus_H) a["square_plus_H"] = *r.algebra->square_plus_H;
    a["closure"] = r.algebra->closure;
    j["algebra"] = a;
  }
  ordered_json diag = ordered_json::object();
  for (const auto& [k, v] : r.diagnostics) diag[k] = v;
  j["diagnostics"] = diag;

  ordered_json verdicts = ordered_json::object();
  for (int c = 1; c <= 6; ++c) {
    const bool applicable = r.applicable.count(c) > 0;
    const bool ok = r.verdict[static_cast<std::size_t>(c - 1)];
    verdicts[std::to_string(c)] = {{"satisfied", ok}, {"applicable", applicable}};
  }
  j["verdicts"] = verdicts;
  j["passes"] = r.passes();
  j["notes"] = r.notes;

  ordered_json levels = ordered_json::array();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
    levels.push_back({{"n", i}, {"E", r.eigenvalues[i]}, {"parity", to_string(r.parity_labels[i])}});
  j["levels"] = levels;
  return j;
}

}  // namespace susyqm::io
