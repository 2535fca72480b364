#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "susyqm/errors.hpp"
#include "susyqm/grid.hpp"
#include "susyqm/operators.hpp"
#include "susyqm/spectrum.hpp"
#include "susyqm/susy_engine.hpp"

namespace susyqm {

/// Closed-form ground state with its first two derivatives. `scale` is carried separately, so
/// the superpotential of c * psi0 is computed from the same unscaled profile.
struct GroundStateProfile {
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;
  double scale = 1.0;

  GroundStateProfile scaled(double c) const {
    GroundStateProfile p = *this;
    p.scale *= c;
    return p;
  }
  double operator()(double x) const { return scale * value(x); }
};

inline GroundStateProfile box_ground_profile(double length) {
  const double a = std::numbers::pi / length;
  return {[a](double x) { return std::cos(a * x); }, [a](double x) { return -a * std::sin(a * x); },
          [a](double x) { return -a * a * std::cos(a * x); }, 1.0};
}

/// e^{-lambda |x|}; the derivative-of-sign delta term in psi'' is not representable and dropped.
inline GroundStateProfile delta_ground_profile(double lambda) {
  auto sign = [](double x) { return x > 0.0 ? 1.0 : x < 0.0 ? -1.0 : 0.0; };
  return {[lambda](double x) { return std::exp(-lambda * std::abs(x)); },
          [lambda, sign](double x) { return -lambda * sign(x) * std::exp(-lambda * std::abs(x)); },
          [lambda](double x) { return lambda * lambda * std::exp(-lambda * std::abs(x)); }, 1.0};
}

/// W = -psi0'/psi0 and its derivative W' on the grid.
struct Superpotential {
  std::vector<double> w;
  std::vector<double> dw;
};

namespace detail {
inline void require_nodeless(const Grid1D& grid, std::span<const double> psi) {
  for (std::size_t j = 0; j < psi.size(); ++j) {
    if (psi[j] == 0.0) throw NodeError("ground state has a node", grid.point(j), grid.point(j));
    if (j > 0 && (psi[j] > 0.0) != (psi[j - 1] > 0.0))
      throw NodeError("ground state changes sign", grid.point(j - 1), grid.point(j));
  }
}
}  // namespace detail

/// Exact log-derivative of an analytic profile: W = -psi'/psi, W' = W^2 - psi''/psi.
inline Superpotential superpotential(const GroundStateProfile& psi0, const Grid1D& grid) {
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) values[j] = psi0.value(grid.point(j));
  detail::require_nodeless(grid, values);
  Superpotential s;
  s.w.resize(grid.size());
  s.dw.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.point(j);
    const double w = -psi0.first(x) / values[j];
    s.w[j] = w;
    s.dw[j] = w * w - psi0.second(x) / values[j];
  }
  return s;
}

/// Superpotential from samples. psi' by central differences (second-order one-sided stencils at
/// the first and last points); W' from the identity W' = W^2 - psi''/psi with the grid's own
/// 3-point second difference, which keeps W' accurate where psi0 -> 0 at a wall.
inline Superpotential superpotential(std::span<const double> psi0, const Grid1D& grid) {
  if (psi0.size() != grid.size()) throw ParameterError("sample count does not match the grid");
  detail::require_nodeless(grid, psi0);
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  const bool periodic = grid.boundary() == Boundary::periodic;
  std::vector<double> d1(n), d2(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (periodic || (j > 0 && j + 1 < n)) {
      const double right = psi0[(j + 1) % n];
      const double left = psi0[(j + n - 1) % n];
      d1[j] = (right - left) / (2.0 * h);
    } else if (j == 0) {
      d1[j] = (-3.0 * psi0[0] + 4.0 * psi0[1] - psi0[2]) / (2.0 * h);
    } else {
      d1[j] = (3.0 * psi0[n - 1] - 4.0 * psi0[n - 2] + psi0[n - 3]) / (2.0 * h);
    }
  }
  Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) v(static_cast<Eigen::Index>(j)) = psi0[j];
  const Vector lap = second_derivative(grid).apply(v);
  for (std::size_t j = 0; j < n; ++j) d2[j] = lap(static_cast<Eigen::Index>(j)).real();

  Superpotential s;
  s.w.resize(n);
  s.dw.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.w[j] = -d1[j] / psi0[j];
    s.dw[j] = s.w[j] * s.w[j] - d2[j] / psi0[j];
  }
  return s;
}

/// V+- = (W^2 -+ W')/2 + E0.
inline std::vector<double> partner_minus(const Superpotential& s, double e0) {
  std::vector<double> v(s.w.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = 0.5 * (s.w[j] * s.w[j] + s.dw[j]) + e0;
  return v;
}
inline std::vector<double> partner_plus(const Superpotential& s, double e0) {
  std::vector<double> v(s.w.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = 0.5 * (s.w[j] * s.w[j] - s.dw[j]) + e0;
  return v;
}

/// Interior mask: points at least `walls` spacings away from a Dirichlet wall.
inline std::vector<bool> interior_mask(const Grid1D& grid, double walls = 3.0) {
  std::vector<bool> m(grid.size(), true);
  if (grid.boundary() == Boundary::periodic) return m;
  for (std::size_t j = 0; j < grid.size(); ++j)
    m[j] = grid.half_width() - std::abs(grid.point(j)) >= walls * grid.spacing() * (1.0 - 1e-12);
  return m;
}

struct PartnerResult {
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> v_minus;
  std::vector<double> v_plus;
  double e0 = 0.0;
  double v_plus_roundtrip = 0.0;   // max interior |V+ - V_original|
  Spectrum spectrum_plus;
  Spectrum spectrum_minus;
  std::size_t missing_level_index = 0;
  Pairing pairing;                 // on merge(spectrum_plus, spectrum_minus)
  double isospectral_deviation = 0.0;  // max_i |E-_i - E+_{i+1}| / |E+_{i+1}|
};

namespace detail {

inline PartnerResult finish_partner(const Grid1D& grid, const Superpotential& s, double e0,
                                    const std::function<double(double)>& original, std::size_t n_levels,
                                    double roundtrip_tol, const Tolerances& tol) {
  if (n_levels < 2) throw ParameterError("partner comparison needs at least two levels");
  PartnerResult r;
  r.x = grid.points();
  r.w = s.w;
  r.e0 = e0;
  r.v_minus = partner_minus(s, e0);
  r.v_plus = partner_plus(s, e0);
  const auto mask = interior_mask(grid);
  std::vector<double> v_orig(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    v_orig[j] = original(r.x[j]);
    if (mask[j]) r.v_plus_roundtrip = std::max(r.v_plus_roundtrip, std::abs(r.v_plus[j] - v_orig[j]));
  }
  if (r.v_plus_roundtrip > roundtrip_tol)
    throw ContractViolation("V+ reconstructed from W does not match the original potential");

  const LinearOperator parity = parity_operator(grid);
  r.spectrum_plus = numeric_spectrum(hamiltonian_from_samples(grid, v_orig), parity, n_levels);
  r.spectrum_minus = numeric_spectrum(hamiltonian_from_samples(grid, r.v_minus), parity, n_levels - 1);
  for (std::size_t i = 0; i + 1 < n_levels; ++i) {
    const double ep = r.spectrum_plus.eigenvalues[i + 1];
    r.isospectral_deviation =
        std::max(r.isospectral_deviation, std::abs(r.spectrum_minus.eigenvalues[i] - ep) / std::abs(ep));
  }
  const Spectrum merged = merge(r.spectrum_plus, r.spectrum_minus);
  r.pairing = detect_pairing(merged, tol.convergence);
  // The level of the original ladder left without a partner; n_levels means none.
  r.missing_level_index = n_levels;
  for (std::size_t u : r.pairing.unpaired) {
    for (std::size_t i = 0; i < n_levels; ++i)
      if (merged.eigenvalues[u] == r.spectrum_plus.eigenvalues[i]) {
        r.missing_level_index = std::min(r.missing_level_index, i);
      }
  }
  return r;
}

}  // namespace detail

/// Partner of the potential whose ground state is the analytic profile psi0 with energy e0.
inline PartnerResult partner_potential(const GroundStateProfile& psi0, double e0, const Grid1D& grid,
                                       const std::function<double(double)>& original, std::size_t n_levels,
                                       const Tolerances& tol = {}) {
  return detail::finish_partner(grid, superpotential(psi0, grid), e0, original, n_levels, 1e-6, tol);
}

/// Same from sampled psi0 (e.g. a grid eigenvector); round trip tolerance 1e-3.
inline PartnerResult partner_potential(std::span<const double> psi0, double e0, const Grid1D& grid,
                                       const std::function<double(double)>& original, std::size_t n_levels,
                                       const Tolerances& tol = {}) {
  return detail::finish_partner(grid, superpotential(psi0, grid), e0, original, n_levels, 1e-3, tol);
}

// ---------------------------------------------------------------------------

struct ScanRow {
  double length = 0.0;
  std::size_t n_points = 0;
  double e1 = 0.0;
  double gap = 0.0;               // E2 - E1
  std::size_t pairs_matched = 0;  // partner pairs found among the lowest levels
  std::size_t pairs_expected = 0;
  double e1_l2 = 0.0;
};

struct ScanTable {
  std::vector<ScanRow> rows;
  double max_e1_l2_deviation = 0.0;  // relative to pi^2 / 2
  bool e1_l2_constant = false;
  bool pairs_preserved = false;
  bool e1_monotone = false;
};

/// Box + sec^2 partner on Dirichlet grids of fixed density for each L. States E1 L^2 = pi^2/2 and
/// partner matching at every L.
inline ScanTable box_to_free_scan(std::span<const double> lengths, double points_per_length, std::size_t n_levels = 4,
                                  const Tolerances& tol = {}, double constancy_tol = 1e-3) {
  if (lengths.size() < 2) throw ParameterError("scan needs at least two L values");
  if (!(points_per_length > 0.0)) throw ParameterError("points per length must be positive");
  for (std::size_t i = 1; i < lengths.size(); ++i)
    if (!(lengths[i] > lengths[i - 1])) throw ParameterError("L values must be increasing");
  const double target = 0.5 * std::numbers::pi * std::numbers::pi;
  ScanTable t;
  t.pairs_preserved = true;
  t.e1_monotone = true;
  for (double length : lengths) {
    if (!(length > 0.0)) throw ParameterError("L values must be positive");
    const auto n = static_cast<std::size_t>(std::llround(points_per_length * length));
    const Grid1D grid(0.5 * length, n, Boundary::dirichlet);
    const PartnerResult pr = partner_potential(box_ground_profile(length), target / (length * length), grid,
                                               [](double) { return 0.0; }, n_levels, tol);
    ScanRow row;
    row.length = length;
    row.n_points = n;
    row.e1 = pr.spectrum_plus.eigenvalues[0];
    row.gap = pr.spectrum_plus.eigenvalues[1] - row.e1;
    row.pairs_matched = pr.pairing.pairs.size();
    row.pairs_expected = n_levels - 1;
    row.e1_l2 = row.e1 * length * length;
    t.max_e1_l2_deviation = std::max(t.max_e1_l2_deviation, std::abs(row.e1_l2 - target) / target);
    if (row.pairs_matched != row.pairs_expected || pr.missing_level_index != 0) t.pairs_preserved = false;
    if (!t.rows.empty() && !(row.e1 < t.rows.back().e1)) t.e1_monotone = false;
    t.rows.push_back(row);
  }
  t.e1_l2_constant = t.max_e1_l2_deviation <= constancy_tol;
  return t;
}

}  // namespace susyqm
