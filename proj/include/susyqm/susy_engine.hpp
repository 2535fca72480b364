#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "susyqm/errors.hpp"
#include "susyqm/grid.hpp"
#include "susyqm/operators.hpp"
#include "susyqm/spectrum.hpp"
#include "susyqm/supercharge.hpp"

namespace susyqm {

struct Tolerances {
  double machine = 1e-12;      // identities that hold exactly in exact arithmetic
  double convergence = 1e-4;   // grid eigenvalues against closed forms (relative)
  double pair = 1e-8;          // degeneracy of paired levels (relative)
  double zero = 1e-10;         // zero energy and annihilation (absolute)
};

/// Where an operator set lives. Algebra residuals are refused on Dirichlet grids: the
/// truncated stencils break [H, p] = 0 at the walls.
enum class OperatorDomain { periodic_grid, dirichlet_grid, rotor_basis };

/// A supercharge and its adjoint. Built from a single Q (adjoint taken) or a q, q^dagger pair.
struct ChargeSet {
  Supercharge charge;
  Supercharge adjoint;

  static ChargeSet from_single(const Supercharge& q) { return {q, q.adjoint()}; }
  static ChargeSet from_pair(const Supercharge& q, const Supercharge& qd) { return {q, qd}; }

  bool nilpotent() const { return is_nilpotent_label(charge.label()); }
  std::vector<const Supercharge*> members() const { return {&charge, &adjoint}; }
};

struct AlgebraResiduals {
  double comm_HQ = 0.0;            // max(|[H,Q]|, |[H,Q^dagger]|) / |H|
  double anticomm_minus_H = 0.0;   // |{Q,Q^dagger}/2 - H| / |H|
  std::optional<double> nilpotency_q;     // |q^2| / |H|, nilpotent charges only
  std::optional<double> nilpotency_qdag;  // |(q^dagger)^2| / |H|
  std::optional<double> square_plus_H;    // |Q^2 + H| / |H|, product charges only
  double closure = 0.0;            // graded brackets of {H, Q, Q^dagger} outside their span
};

namespace detail {

inline double real_inner(const RealLinearOperator& a, const RealLinearOperator& b) {
  return a.linear_part().conjugate().cwiseProduct(b.linear_part()).sum().real() +
         a.antilinear_part().conjugate().cwiseProduct(b.antilinear_part()).sum().real();
}

/// Distance from x to the complex span of the generators (real span of g and i g).
inline double span_residual(const std::vector<RealLinearOperator>& generators, const RealLinearOperator& x) {
  std::vector<RealLinearOperator> basis;
  for (const auto& g : generators) {
    for (Complex s : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
      RealLinearOperator v = s * g;
      const double n0 = v.frobenius_norm();
      if (n0 == 0.0) continue;
      for (const auto& e : basis) v = v - real_inner(e, v) * e;
      const double n1 = v.frobenius_norm();
      if (n1 <= 1e-10 * n0) continue;
      basis.push_back((1.0 / n1) * v);
    }
  }
  RealLinearOperator r = x;
  for (const auto& e : basis) r = r - real_inner(e, r) * e;
  return r.frobenius_norm();
}

}  // namespace detail

/// Normalized Frobenius residuals of [H,Q] = [H,Q^dagger] = 0, H = {Q,Q^dagger}/2, the
/// nilpotency q^2 = (q^dagger)^2 = 0, and closure of the graded brackets on {H, Q, Q^dagger}.
inline AlgebraResiduals algebra_residuals(const LinearOperator& h, const ChargeSet& charges, OperatorDomain domain) {
  if (domain == OperatorDomain::dirichlet_grid)
    throw ContractViolation(
        "algebra residuals refused on a dirichlet grid: truncated boundary stencils break "
        "[H, p] = 0 at the walls; use a periodic grid or the rotor basis");
  detail::require_same_dimension(h.dimension(), charges.charge.dimension());
  const RealLinearOperator H(h);
  const double h_norm = H.frobenius_norm();
  if (h_norm == 0.0) throw ContractViolation("Hamiltonian is the zero operator");

  const RealLinearOperator q = charges.charge.action();
  const RealLinearOperator qd = charges.adjoint.action();

  AlgebraResiduals r;
  r.comm_HQ = std::max(commutator(H, q).frobenius_norm(), commutator(H, qd).frobenius_norm()) / h_norm;

  const RealLinearOperator anti = charge_product(charges.charge, charges.adjoint) +
                                  charge_product(charges.adjoint, charges.charge);
  r.anticomm_minus_H = (0.5 * anti - H).frobenius_norm() / h_norm;

  const RealLinearOperator q2 = charge_product(charges.charge, charges.charge);
  const RealLinearOperator qd2 = charge_product(charges.adjoint, charges.adjoint);
  if (charges.nilpotent()) {
    r.nilpotency_q = q2.frobenius_norm() / h_norm;
    r.nilpotency_qdag = qd2.frobenius_norm() / h_norm;
  } else {
    r.square_plus_H = (q2 + H).frobenius_norm() / h_norm;
  }

  // Z2 grading: H even, charges odd. Even-anything uses [,], odd-odd uses {,}.
  const std::vector<RealLinearOperator> gens{H, q, qd};
  const std::array<bool, 3> odd{false, true, true};
  double worst = 0.0;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i; j < gens.size(); ++j) {
      const RealLinearOperator bracket =
          odd[i] && odd[j] ? anticommutator(gens[i], gens[j]) : commutator(gens[i], gens[j]);
      worst = std::max(worst, detail::span_residual(gens, bracket) / h_norm);
    }
  r.closure = worst;
  return r;
}

// ---------------------------------------------------------------------------

struct Annihilation {
  std::string charge;
  double residual = 0.0;  // |Q psi0| / |psi0|
};

struct GroundRecord {
  double energy = 0.0;
  std::size_t degeneracy_count = 0;
  std::vector<std::size_t> indices;
  std::vector<Annihilation> annihilation;
};

/// Lowest level, its degeneracy (levels within max(zero_tol, 1e-8 |E0|)) and how strongly each
/// charge annihilates it.
inline GroundRecord ground_state_check(const Spectrum& spec, const std::vector<const Supercharge*>& charges,
                                       double zero_tol) {
  if (spec.size() == 0) throw ParameterError("ground state check on an empty spectrum");
  GroundRecord g;
  g.energy = spec.eigenvalues.front();
  const double window = std::max(zero_tol, kClusterGap * std::abs(g.energy));
  for (std::size_t i = 0; i < spec.size(); ++i)
    if (spec.eigenvalues[i] - g.energy <= window) g.indices.push_back(i);
  g.degeneracy_count = g.indices.size();
  if (spec.has_vectors()) {
    const Vector psi0 = spec.vector(0);
    for (const Supercharge* q : charges)
      g.annihilation.push_back({q->name(), q->apply(psi0).norm() / psi0.norm()});
  }
  return g;
}

struct PairTransport {
  /// Largest fraction of Q psi leaving the pair subspace, over paired states and charges.
  double leakage = 0.0;
  /// Every pair is connected even -> odd and odd -> even by at least one charge.
  bool all_connected = true;
};

/// Checks that the charges map each degenerate pair onto itself and connect its two members.
inline PairTransport pair_transport(const Spectrum& spec, const Pairing& pairing,
                                    const std::vector<const Supercharge*>& charges, double zero_tol) {
  PairTransport t;
  if (!spec.has_vectors()) return t;
  for (const LevelPair& lp : pairing.pairs) {
    const Vector e = spec.vector(lp.index_even);
    const Vector o = spec.vector(lp.index_odd);
    bool even_to_odd = false, odd_to_even = false;
    for (const Supercharge* q : charges) {
      for (int which = 0; which < 2; ++which) {
        const Vector& src = which == 0 ? e : o;
        const Vector& dst = which == 0 ? o : e;
        const Vector img = q->apply(src);
        const double n = img.norm();
        if (n <= zero_tol) continue;
        const Complex to_dst = dst.dot(img);
        const Complex to_src = src.dot(img);
        const Vector outside = img - to_dst * dst - to_src * src;
        t.leakage = std::max(t.leakage, outside.norm() / n);
        if (std::abs(to_dst) > zero_tol) (which == 0 ? even_to_odd : odd_to_even) = true;
      }
    }
    if (!even_to_odd || !odd_to_even) t.all_connected = false;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Action of (q, q^dagger) on standing waves.

struct ActionRow {
  double k = 0.0;
  double k_discrete = 0.0;  // sin(kh)/h
  /// |q c - i k s|, |q s|, |q^dagger s + i k c|, |q^dagger c| with k -> sin(kh)/h (max norm).
  std::array<double, 4> substituted{};
  /// Same with the continuum k.
  std::array<double, 4> continuum{};
};

/// Commensurate wavenumbers 2 pi j / L, j = 0..n/2, of a periodic grid.
inline std::vector<double> commensurate_wavenumbers(const Grid1D& grid) {
  std::vector<double> ks;
  for (std::size_t j = 0; j <= grid.size() / 2; ++j)
    ks.push_back(2.0 * std::numbers::pi * static_cast<double>(j) / grid.length());
  return ks;
}

inline std::vector<ActionRow> eq5_action_table(const Grid1D& grid, std::span<const double> k_list, double mass = 1.0) {
  if (grid.boundary() != Boundary::periodic) throw ParameterError("action table needs a periodic grid");
  const double h = grid.spacing();
  for (double k : k_list) {
    const double j = k * grid.length() / (2.0 * std::numbers::pi);
    if (!(k >= 0.0) || std::abs(j - std::round(j)) > 1e-9 || std::round(j) > static_cast<double>(grid.size() / 2)) {
      std::ostringstream msg;
      msg << "wavenumber " << k << " is not commensurate with the grid; allowed k = 2*pi*j/L, j = 0.."
          << grid.size() / 2 << " (L = " << grid.length() << "):";
      const auto allowed = commensurate_wavenumbers(grid);
      for (std::size_t i = 0; i < std::min<std::size_t>(allowed.size(), 6); ++i) msg << ' ' << allowed[i];
      msg << " ...";
      throw ParameterError(msg.str());
    }
  }
  const auto [q, qd] = supercharge_q_pair(momentum(grid), parity_operator(grid), mass);
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double root_m = std::sqrt(mass);
  std::vector<ActionRow> rows;
  for (double k : k_list) {
    // k x_j = -pi m + 2 pi (m j mod n) / n for k = 2 pi m / L: reduce the phase in integers so
    // large k does not lose digits to the argument of sin/cos.
    const auto m = static_cast<long long>(std::llround(k * grid.length() / (2.0 * std::numbers::pi)));
    const double sign = m % 2 == 0 ? 1.0 : -1.0;
    Vector c(n), s(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const long long r = (m * static_cast<long long>(j)) % static_cast<long long>(n);
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
      c(j) = sign * std::cos(phase);
      s(j) = sign * std::sin(phase);
    }
    const Vector qc = q.apply(c), qs = q.apply(s), qdc = qd.apply(c), qds = qd.apply(s);
    ActionRow row;
    row.k = k;
    row.k_discrete = std::sin(k * h) / h;
    const Complex I(0.0, 1.0);
    auto fill = [&](std::array<double, 4>& out, double kk) {
      out[0] = (qc - I * (kk / root_m) * s).lpNorm<Eigen::Infinity>();
      out[1] = qs.lpNorm<Eigen::Infinity>();
      out[2] = (qds + I * (kk / root_m) * c).lpNorm<Eigen::Infinity>();
      out[3] = qdc.lpNorm<Eigen::Infinity>();
    };
    fill(row.substituted, row.k_discrete);
    fill(row.continuum, k);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// The six-criteria report.

struct SusyReport {
  std::string model;
  std::string charge;  // "Q" or "q"
  Tolerances tolerances;
  bool zero_point_reset = false;
  double zero_point_shift = 0.0;
  std::vector<double> eigenvalues;
  std::vector<ParityLabel> parity_labels;
  GroundRecord ground;
  Pairing pairing;
  std::vector<std::size_t> artifacts;  // subset of pairing.unpaired excluded from verdicts
  PairTransport transport;
  std::optional<AlgebraResiduals> algebra;
  std::map<std::string, double> diagnostics;
  std::array<bool, 6> verdict{};
  std::set<int> applicable;
  std::vector<std::string> notes;

  bool passes() const {
    for (int c : applicable)
      if (!verdict[static_cast<std::size_t>(c - 1)]) return false;
    return true;
  }
};

/// Fills verdicts 1..6 from the stored records and tolerances.
inline void derive_verdicts(SusyReport& r) {
  const Tolerances& t = r.tolerances;
  r.verdict[0] = r.ground.degeneracy_count == 1 && std::abs(r.ground.energy) <= t.zero;

  std::set<std::size_t> excused(r.artifacts.begin(), r.artifacts.end());
  excused.insert(r.ground.indices.begin(), r.ground.indices.end());
  bool all_paired = true;
  for (std::size_t i : r.pairing.unpaired)
    if (!excused.count(i)) all_paired = false;
  r.verdict[1] = all_paired && !r.pairing.pairs.empty();

  bool annihilated = !r.ground.annihilation.empty();
  for (const auto& a : r.ground.annihilation) annihilated = annihilated && a.residual <= t.zero;
  r.verdict[2] = annihilated && r.transport.all_connected && r.transport.leakage <= t.pair;

  if (r.algebra) {
    const auto& a = *r.algebra;
    r.verdict[3] = a.comm_HQ <= t.machine && a.anticomm_minus_H <= t.machine;
    r.verdict[4] = a.nilpotency_q && a.nilpotency_qdag && *a.nilpotency_q <= t.machine && *a.nilpotency_qdag <= t.machine;
    r.verdict[5] = a.closure <= t.machine;
  }
}

/// Assembles the report for a spectral Hamiltonian, its spectrum, and an algebra Hamiltonian.
inline SusyReport run_susy_checks(std::string model, const ChargeSet& charges, const Spectrum& spectrum,
                                  const LinearOperator& algebra_h, OperatorDomain domain,
                                  const std::vector<std::size_t>& artifacts, const Tolerances& tol) {
  SusyReport r;
  r.model = std::move(model);
  r.charge = charges.nilpotent() ? "q" : "Q";
  r.tolerances = tol;
  r.eigenvalues = spectrum.eigenvalues;
  r.parity_labels = spectrum.parity_labels;
  const auto members = charges.members();
  r.ground = ground_state_check(spectrum, members, tol.zero);
  r.pairing = detect_pairing(spectrum, tol.pair);
  // Each level is reported in exactly one of ground, pairs, unpaired.
  auto in_ground = [&](std::size_t i) {
    return std::find(r.ground.indices.begin(), r.ground.indices.end(), i) != r.ground.indices.end();
  };
  std::erase_if(r.pairing.pairs, [&](const LevelPair& p) {
    const bool drop = in_ground(p.index_even) || in_ground(p.index_odd);
    if (drop && !in_ground(p.index_even)) r.pairing.unpaired.push_back(p.index_even);
    if (drop && !in_ground(p.index_odd)) r.pairing.unpaired.push_back(p.index_odd);
    return drop;
  });
  std::erase_if(r.pairing.unpaired, in_ground);
  std::sort(r.pairing.unpaired.begin(), r.pairing.unpaired.end());
  r.artifacts = artifacts;
  r.transport = pair_transport(spectrum, r.pairing, members, tol.zero);
  r.algebra = algebra_residuals(algebra_h, charges, domain);
  r.applicable = charges.nilpotent() ? std::set<int>{1, 2, 3, 4, 5, 6} : std::set<int>{1, 2, 3, 4, 6};
  if (!charges.nilpotent()) r.notes.push_back("criterion 5 not satisfied by construction: Q^2 = -H, not 0");
  derive_verdicts(r);
  return r;
}

/// Free particle on a periodic grid. The spectrum comes from the 3-point Laplacian Hamiltonian
/// -D2/2; the algebra uses p^2/2, the Hamiltonian the central-difference charges generate.
inline SusyReport check_free_particle(const Grid1D& grid, bool nilpotent_charge, const Tolerances& tol = {}) {
  if (grid.boundary() != Boundary::periodic)
    throw ContractViolation("free-particle algebra check needs a periodic grid; dirichlet stencils break [H, p] = 0");
  const LinearOperator p = momentum(grid);
  const LinearOperator parity = parity_operator(grid);
  const LinearOperator h_spec = free_hamiltonian(grid);
  const LinearOperator h_alg = kinetic_hamiltonian(p);
  const ChargeSet charges = nilpotent_charge
                                ? [&] { auto pr = supercharge_q_pair(p, parity); return ChargeSet::from_pair(pr.first, pr.second); }()
                                : ChargeSet::from_single(supercharge_Q(p, parity));
  const Spectrum spec = numeric_spectrum(h_spec, parity, grid.size());
  SusyReport r = run_susy_checks("free", charges, spec, h_alg, OperatorDomain::periodic_grid,
                                 nyquist_artifacts(spec, grid), tol);
  const RealLinearOperator H(h_spec);
  r.diagnostics["comm_laplacian_H_Q"] =
      std::max(commutator(H, charges.charge.action()).frobenius_norm(),
               commutator(H, charges.adjoint.action()).frobenius_norm()) / H.frobenius_norm();
  r.notes.push_back("spectrum: -D2/2 (3-point); algebra: p^2/2 with central-difference p");
  if (!r.artifacts.empty()) r.notes.push_back("Nyquist mode excluded from verdicts");
  return r;
}

inline SusyReport check_rotor(int m_max, double inertia, bool nilpotent_charge, const Tolerances& tol = {}) {
  const RotorOperators ops = rotor_basis_operators(m_max, inertia);
  const ChargeSet charges =
      nilpotent_charge
          ? [&] { auto pr = rotor_q_pair(ops.angular_momentum, ops.time_reversal, inertia); return ChargeSet::from_pair(pr.first, pr.second); }()
          : ChargeSet::from_single(rotor_supercharge(ops.angular_momentum, ops.time_reversal, inertia));
  const Spectrum spec = numeric_spectrum(ops.hamiltonian, ops.reflection, ops.hamiltonian.dimension());
  return run_susy_checks("rotor", charges, spec, ops.hamiltonian, OperatorDomain::rotor_basis, {}, tol);
}

/// Spectral criteria for a Dirichlet-grid continuum model (delta well): unique ground state
/// (after an optional zero-point reset) and balanced parity content above it. In a finite box
/// the two continua interlace rather than coincide, so "paired" means every energy window
/// holds even and odd counts differing by at most one.
struct SpectralVerdict {
  double ground_energy = 0.0;
  double zero_point_shift = 0.0;
  std::size_t degeneracy_count = 0;
  std::size_t bound_count = 0;
  bool parity_balanced = false;
  std::array<bool, 2> verdict{};
};

inline SpectralVerdict spectral_criteria(Spectrum spec, bool zero_point_reset, const Tolerances& tol = {}) {
  SpectralVerdict v;
  for (double e : spec.eigenvalues) v.bound_count += e < 0.0 ? 1 : 0;
  if (zero_point_reset) v.zero_point_shift = reset_zero_point(spec);
  const GroundRecord g = ground_state_check(spec, {}, tol.zero);
  v.ground_energy = g.energy;
  v.degeneracy_count = g.degeneracy_count;
  long balance = 0;
  bool ok = spec.size() > 1;
  for (std::size_t i = 1; i < spec.size(); ++i) {
    const ParityLabel p = spec.parity_labels[i];
    if (p == ParityLabel::mixed) ok = false;
    balance += p == ParityLabel::even ? 1 : -1;
    if (std::abs(balance) > 1) ok = false;
  }
  v.parity_balanced = ok;
  v.verdict[0] = g.degeneracy_count == 1 && std::abs(g.energy) <= tol.zero;
  v.verdict[1] = ok;
  return v;
}

}  // namespace susyqm
