#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "susyqm/errors.hpp"
#include "susyqm/models.hpp"
#include "susyqm/operators.hpp"

namespace susyqm {

enum class ParityLabel { even, odd, mixed };
enum class SpectrumSource { grid_eigensolve, analytic };

inline const char* to_string(ParityLabel p) {
  switch (p) {
    case ParityLabel::even: return "even";
    case ParityLabel::odd: return "odd";
    case ParityLabel::mixed: return "mixed";
  }
  return "?";
}

/// Ascending eigenvalues with unit eigenvector columns and parity labels.
/// Analytic spectra carry no eigenvectors.
struct Spectrum {
  std::vector<double> eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  std::vector<ParityLabel> parity_labels;
  std::vector<double> parity_expectations;
  SpectrumSource source = SpectrumSource::grid_eigensolve;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  bool has_vectors() const noexcept { return eigenvectors.cols() == static_cast<Eigen::Index>(size()); }
  Vector vector(std::size_t i) const { return eigenvectors.col(static_cast<Eigen::Index>(i)); }
};

/// Dense solves are capped; larger Hamiltonians must be real tridiagonal.
inline constexpr Eigen::Index kMaxDenseDimension = 6000;
/// Relative gap below which eigenvalues count as one degenerate cluster.
inline constexpr double kClusterGap = 1e-8;
/// |<psi|P|psi>| below 1 - this is labeled mixed.
inline constexpr double kMixedParityThreshold = 1e-6;

inline ParityLabel classify_parity(double expectation) {
  if (expectation >= 1.0 - kMixedParityThreshold) return ParityLabel::even;
  if (expectation <= -(1.0 - kMixedParityThreshold)) return ParityLabel::odd;
  return ParityLabel::mixed;
}

inline ParityLabel to_label(StateParity p) {
  switch (p) {
    case StateParity::even: return ParityLabel::even;
    case StateParity::odd: return ParityLabel::odd;
    case StateParity::none: return ParityLabel::mixed;
  }
  return ParityLabel::mixed;
}

/// Median of the consecutive gaps of an ascending list; zero for fewer than two levels.
inline double median_gap(const std::vector<double>& sorted) {
  if (sorted.size() < 2) return 0.0;
  std::vector<double> gaps(sorted.size() - 1);
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) gaps[i] = sorted[i + 1] - sorted[i];
  std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2), gaps.end());
  return gaps[gaps.size() / 2];
}

namespace detail {

struct RawEigen {
  std::vector<double> values;
  Eigen::MatrixXcd vectors;
};

inline bool is_diagonal(const LinearOperator& h) { return h.bandwidth() == 0; }

inline RawEigen solve_diagonal(const LinearOperator& h, std::size_t n_levels) {
  const Eigen::Index n = h.dimension();
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < h.matrix().outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(h.matrix(), k); it; ++it)
      diag[static_cast<std::size_t>(it.row())] = it.value().real();
  std::vector<std::size_t> order(diag.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return diag[a] < diag[b]; });
  RawEigen out;
  out.vectors = Eigen::MatrixXcd::Zero(n, static_cast<Eigen::Index>(n_levels));
  for (std::size_t i = 0; i < n_levels; ++i) {
    out.values.push_back(diag[order[i]]);
    out.vectors(static_cast<Eigen::Index>(order[i]), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return out;
}

/// Lowest n_levels eigenpairs of a real symmetric tridiagonal matrix (LAPACK dstevx:
/// bisection plus inverse iteration, O(n) per level).
inline RawEigen solve_tridiagonal(const LinearOperator& h, std::size_t n_levels) {
  const auto n = static_cast<lapack_int>(h.dimension());
  std::vector<double> d(static_cast<std::size_t>(n), 0.0), e(static_cast<std::size_t>(std::max(n - 1, 1)), 0.0);
  for (int k = 0; k < h.matrix().outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(h.matrix(), k); it; ++it) {
      if (it.row() == it.col()) d[static_cast<std::size_t>(it.row())] = it.value().real();
      else if (it.row() == it.col() + 1) e[static_cast<std::size_t>(it.col())] = it.value().real();
    }
  const auto k = static_cast<lapack_int>(n_levels);
  std::vector<double> w(static_cast<std::size_t>(n));
  Eigen::MatrixXd z(n, std::max<lapack_int>(k, 1));
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  lapack_int found = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, k,
                                         abstol, &found, w.data(), z.data(), n, ifail.data());
  if (info != 0 || found != k)
    throw ContractViolation("tridiagonal eigensolver failed (info " + std::to_string(info) + ")");
  RawEigen out;
  out.values.assign(w.begin(), w.begin() + k);
  out.vectors = z.leftCols(k).cast<Complex>();
  return out;
}

inline RawEigen solve_dense(const LinearOperator& h, std::size_t n_levels) {
  if (h.dimension() > kMaxDenseDimension)
    throw ContractViolation("dense eigensolve refused above dimension " + std::to_string(kMaxDenseDimension) +
                            "; use a real tridiagonal Hamiltonian");
  const auto k = static_cast<Eigen::Index>(n_levels);
  RawEigen out;
  if (h.is_real()) {
    const Eigen::MatrixXd dense = Eigen::MatrixXcd(h.matrix()).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success) throw ContractViolation("dense eigensolver did not converge");
    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + k);
    out.vectors = solver.eigenvectors().leftCols(k).cast<Complex>();
  } else {
    const Eigen::MatrixXcd dense(h.matrix());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
    if (solver.info() != Eigen::Success) throw ContractViolation("dense eigensolver did not converge");
    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + k);
    out.vectors = solver.eigenvectors().leftCols(k);
  }
  return out;
}

}  // namespace detail

/// Degenerate clusters of an ascending list: consecutive levels closer than
/// kClusterGap * max(|E|, median gap).
inline std::vector<std::pair<std::size_t, std::size_t>> degenerate_clusters(const std::vector<double>& values,
                                                                            double relative_gap = kClusterGap) {
  std::vector<std::pair<std::size_t, std::size_t>> clusters;
  const double mg = median_gap(values);
  std::size_t start = 0;
  for (std::size_t i = 1; i <= values.size(); ++i) {
    bool split = i == values.size();
    if (!split) {
      const double scale = std::max({std::abs(values[i]), std::abs(values[i - 1]), mg});
      split = values[i] - values[i - 1] >= relative_gap * scale;
    }
    if (split) {
      clusters.emplace_back(start, i);
      start = i;
    }
  }
  return clusters;
}

/// Lowest n_levels eigenpairs of Hermitian H, labeled by the grading operator (parity on grids,
/// phi -> -phi reflection on the rotor basis). Inside degenerate clusters the eigenvectors are
/// rotated to diagonalize the grading operator first.
inline Spectrum numeric_spectrum(const LinearOperator& h, const LinearOperator& grading, std::size_t n_levels) {
  detail::require_same_dimension(h.dimension(), grading.dimension());
  if (n_levels == 0 || n_levels > static_cast<std::size_t>(h.dimension()))
    throw ParameterError("n_levels must be between 1 and the operator dimension");
  if (h.adjoint_residual() > 1e-8) throw ContractViolation("Hamiltonian is not Hermitian");

  detail::RawEigen raw;
  if (detail::is_diagonal(h) && h.is_real()) raw = detail::solve_diagonal(h, n_levels);
  else if (h.is_real() && h.bandwidth() <= 1) raw = detail::solve_tridiagonal(h, n_levels);
  else raw = detail::solve_dense(h, n_levels);

  Spectrum s;
  s.source = SpectrumSource::grid_eigensolve;
  s.eigenvalues = raw.values;
  s.eigenvectors = std::move(raw.vectors);
  for (Eigen::Index c = 0; c < s.eigenvectors.cols(); ++c) s.eigenvectors.col(c).normalize();

  for (const auto& [begin, end] : degenerate_clusters(s.eigenvalues)) {
    if (end - begin < 2) continue;
    const auto b = static_cast<Eigen::Index>(begin);
    const auto w = static_cast<Eigen::Index>(end - begin);
    const Eigen::MatrixXcd block = s.eigenvectors.middleCols(b, w);
    const Eigen::MatrixXcd restricted = block.adjoint() * (grading.matrix() * block);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (restricted + restricted.adjoint()));
    // Descending grading eigenvalue: even before odd inside a cluster.
    s.eigenvectors.middleCols(b, w) = (block * solver.eigenvectors()).rowwise().reverse();
    for (Eigen::Index c = b; c < b + w; ++c) s.eigenvectors.col(c).normalize();
  }

  for (Eigen::Index c = 0; c < s.eigenvectors.cols(); ++c) {
    const Vector v = s.eigenvectors.col(c);
    const double expectation = v.dot(grading.matrix() * v).real();
    s.parity_expectations.push_back(expectation);
    s.parity_labels.push_back(classify_parity(expectation));
  }
  return s;
}

inline Spectrum analytic_spectrum(const std::vector<AnalyticState>& states) {
  std::vector<std::size_t> order(states.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return states[a].energy < states[b].energy; });
  Spectrum s;
  s.source = SpectrumSource::analytic;
  for (auto i : order) {
    s.eigenvalues.push_back(states[i].energy);
    s.parity_labels.push_back(to_label(states[i].parity));
    s.parity_expectations.push_back(states[i].parity == StateParity::even ? 1.0
                                    : states[i].parity == StateParity::odd ? -1.0
                                                                           : 0.0);
  }
  return s;
}

/// Union of two spectra, re-sorted; eigenvectors are kept only when both sides carry them.
inline Spectrum merge(const Spectrum& a, const Spectrum& b) {
  const std::size_t n = a.size() + b.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto energy = [&](std::size_t i) { return i < a.size() ? a.eigenvalues[i] : b.eigenvalues[i - a.size()]; };
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return energy(x) < energy(y); });
  const bool vectors = a.has_vectors() && b.has_vectors() && a.eigenvectors.rows() == b.eigenvectors.rows();
  Spectrum s;
  s.source = a.source == b.source ? a.source : SpectrumSource::grid_eigensolve;
  if (vectors) s.eigenvectors.resize(a.eigenvectors.rows(), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    const Spectrum& src = i < a.size() ? a : b;
    const std::size_t j = i < a.size() ? i : i - a.size();
    s.eigenvalues.push_back(src.eigenvalues[j]);
    s.parity_labels.push_back(src.parity_labels[j]);
    s.parity_expectations.push_back(src.parity_expectations[j]);
    if (vectors) s.eigenvectors.col(static_cast<Eigen::Index>(k)) = src.eigenvectors.col(static_cast<Eigen::Index>(j));
  }
  return s;
}

/// Explicit E -> E - E0. Returns the shift that was applied.
inline double reset_zero_point(Spectrum& s) {
  if (s.size() == 0) return 0.0;
  const double shift = s.eigenvalues.front();
  for (double& e : s.eigenvalues) e -= shift;
  return shift;
}

// ---------------------------------------------------------------------------
// Pairing.

struct LevelPair {
  std::size_t index_even = 0;
  std::size_t index_odd = 0;
  double delta_energy = 0.0;
};

struct Pairing {
  std::vector<LevelPair> pairs;
  std::vector<std::size_t> unpaired;
  /// Levels in clusters of three or more near-degenerate states; also listed in unpaired.
  std::vector<std::size_t> flagged;
};

/// Greedy adjacent matching: within each near-degenerate cluster (|dE| <= pair_tol * scale,
/// scale = max(|E|, median gap)) even levels pair with odd ones. Clusters of three or more
/// are reported unpaired and flagged. Input order does not matter.
inline Pairing detect_pairing(const Spectrum& spec, double pair_tol) {
  if (!(pair_tol > 0.0)) throw ParameterError("pair tolerance must be positive");
  std::vector<std::size_t> order(spec.size());
  std::iota(order.begin(), order.end(), 0);
  auto rank = [](ParityLabel p) { return p == ParityLabel::even ? 0 : p == ParityLabel::odd ? 1 : 2; };
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (spec.eigenvalues[a] != spec.eigenvalues[b]) return spec.eigenvalues[a] < spec.eigenvalues[b];
    return rank(spec.parity_labels[a]) < rank(spec.parity_labels[b]);
  });
  std::vector<double> sorted(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = spec.eigenvalues[order[i]];

  Pairing out;
  for (const auto& [begin, end] : degenerate_clusters(sorted, pair_tol)) {
    const std::size_t width = end - begin;
    if (width == 2) {
      const std::size_t a = order[begin], b = order[begin + 1];
      const ParityLabel pa = spec.parity_labels[a], pb = spec.parity_labels[b];
      if (pa == ParityLabel::even && pb == ParityLabel::odd) {
        out.pairs.push_back({a, b, std::abs(spec.eigenvalues[b] - spec.eigenvalues[a])});
        continue;
      }
      if (pa == ParityLabel::odd && pb == ParityLabel::even) {
        out.pairs.push_back({b, a, std::abs(spec.eigenvalues[b] - spec.eigenvalues[a])});
        continue;
      }
    }
    for (std::size_t i = begin; i < end; ++i) {
      out.unpaired.push_back(order[i]);
      if (width >= 3) out.flagged.push_back(order[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

/// Levels whose eigenvector is the alternating (-1)^j mode of a periodic grid.
inline std::vector<std::size_t> nyquist_artifacts(const Spectrum& spec, const Grid1D& grid) {
  std::vector<std::size_t> out;
  if (grid.boundary() != Boundary::periodic || !spec.has_vectors()) return out;
  const auto n = static_cast<Eigen::Index>(grid.size());
  Vector alt(n);
  for (Eigen::Index j = 0; j < n; ++j) alt(j) = (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < spec.size(); ++i)
    if (std::abs(alt.dot(spec.vector(i))) > 1.0 - kMixedParityThreshold) out.push_back(i);
  return out;
}

}  // namespace susyqm
