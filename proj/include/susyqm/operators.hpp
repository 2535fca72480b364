#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "susyqm/errors.hpp"
#include "susyqm/grid.hpp"

namespace susyqm {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Vector = Eigen::VectorXcd;

namespace detail {

inline double max_abs(const SparseMatrix& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  return best;
}

inline SparseMatrix from_triplets(Eigen::Index n, const std::vector<Eigen::Triplet<Complex>>& t) {
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

inline void require_same_dimension(Eigen::Index a, Eigen::Index b) {
  if (a != b)
    throw ParameterError("operator dimension mismatch: " + std::to_string(a) + " vs " +
                         std::to_string(b));
}

inline SparseMatrix pruned(SparseMatrix m) {
  m.prune(Complex(0.0, 0.0));
  m.makeCompressed();
  return m;
}

}  // namespace detail

/// Complex-linear operator v -> A v, stored as a sparse matrix.
class LinearOperator {
 public:
  LinearOperator() = default;

  /// A set hermitian_hint is checked: max |A - A^dagger| <= 1e-12 max |A|.
  explicit LinearOperator(SparseMatrix matrix, bool hermitian_hint = false)
      : matrix_(detail::pruned(std::move(matrix))), hermitian_hint_(hermitian_hint) {
    if (matrix_.rows() != matrix_.cols()) throw ParameterError("operator matrix must be square");
    if (hermitian_hint_ && adjoint_residual() > 1e-12)
      throw ContractViolation("operator flagged Hermitian but A != A^dagger");
  }

  static LinearOperator identity(Eigen::Index n) {
    SparseMatrix m(n, n);
    m.setIdentity();
    return LinearOperator(std::move(m), true);
  }
  static LinearOperator zero(Eigen::Index n) { return LinearOperator(SparseMatrix(n, n)); }

  Eigen::Index dimension() const noexcept { return matrix_.rows(); }
  const SparseMatrix& matrix() const noexcept { return matrix_; }
  bool hermitian_hint() const noexcept { return hermitian_hint_; }

  Vector apply(const Vector& v) const {
    detail::require_same_dimension(dimension(), v.size());
    return matrix_ * v;
  }

  LinearOperator adjoint() const {
    return LinearOperator(SparseMatrix(matrix_.adjoint()), hermitian_hint_);
  }

  double frobenius_norm() const { return matrix_.norm(); }
  double max_abs_entry() const { return detail::max_abs(matrix_); }

  /// max |A - A^dagger| / max |A|, zero for the zero operator.
  double adjoint_residual() const {
    const double scale = max_abs_entry();
    if (scale == 0.0) return 0.0;
    const SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
    return detail::max_abs(diff) / scale;
  }

  bool is_real() const {
    for (int k = 0; k < matrix_.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it)
        if (it.value().imag() != 0.0) return false;
    return true;
  }

  /// Largest |row - col| over the stored entries.
  Eigen::Index bandwidth() const {
    Eigen::Index w = 0;
    for (int k = 0; k < matrix_.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it)
        w = std::max<Eigen::Index>(w, std::abs(it.row() - it.col()));
    return w;
  }

 private:
  SparseMatrix matrix_;
  bool hermitian_hint_ = false;
};

/// Antilinear operator v -> M conj(v). The conjugation is kept as an action, never a matrix.
class AntilinearOperator {
 public:
  AntilinearOperator() = default;
  explicit AntilinearOperator(LinearOperator linear_part) : linear_part_(std::move(linear_part)) {}

  Eigen::Index dimension() const noexcept { return linear_part_.dimension(); }
  const LinearOperator& linear_part() const noexcept { return linear_part_; }

  Vector apply(const Vector& v) const { return linear_part_.apply(v.conjugate()); }

  /// Adjoint with respect to <u, A v> = conj(<A^dagger u, v>): M conj -> M^T conj.
  AntilinearOperator adjoint() const {
    return AntilinearOperator(LinearOperator(SparseMatrix(linear_part_.matrix().transpose())));
  }

  double frobenius_norm() const { return linear_part_.frobenius_norm(); }

 private:
  LinearOperator linear_part_;
};

enum class Linearity { linear, antilinear, real_linear };

inline const char* to_string(Linearity k) {
  switch (k) {
    case Linearity::linear: return "linear";
    case Linearity::antilinear: return "antilinear";
    case Linearity::real_linear: return "real_linear";
  }
  return "?";
}

/// Every real-linear map on C^n: v -> A v + B conj(v). Closure type for mixed sums such as
/// L_z + L_z T.
class RealLinearOperator {
 public:
  RealLinearOperator() = default;
  RealLinearOperator(SparseMatrix linear, SparseMatrix antilinear)
      : linear_(detail::pruned(std::move(linear))), antilinear_(detail::pruned(std::move(antilinear))) {
    detail::require_same_dimension(linear_.rows(), antilinear_.rows());
  }
  RealLinearOperator(const LinearOperator& op)  // NOLINT(google-explicit-constructor)
      : RealLinearOperator(op.matrix(), SparseMatrix(op.dimension(), op.dimension())) {}
  RealLinearOperator(const AntilinearOperator& op)  // NOLINT(google-explicit-constructor)
      : RealLinearOperator(SparseMatrix(op.dimension(), op.dimension()), op.linear_part().matrix()) {}

  Eigen::Index dimension() const noexcept { return linear_.rows(); }
  const SparseMatrix& linear_part() const noexcept { return linear_; }
  const SparseMatrix& antilinear_part() const noexcept { return antilinear_; }

  Linearity kind() const noexcept {
    if (antilinear_.nonZeros() == 0) return Linearity::linear;
    if (linear_.nonZeros() == 0) return Linearity::antilinear;
    return Linearity::real_linear;
  }

  Vector apply(const Vector& v) const {
    detail::require_same_dimension(dimension(), v.size());
    return linear_ * v + antilinear_ * v.conjugate();
  }

  /// Adjoint for the real inner product Re<u, v>.
  RealLinearOperator adjoint() const {
    return {SparseMatrix(linear_.adjoint()), SparseMatrix(antilinear_.transpose())};
  }

  /// sqrt(|A|_F^2 + |B|_F^2).
  double frobenius_norm() const {
    return std::sqrt(linear_.squaredNorm() + antilinear_.squaredNorm());
  }

  LinearOperator as_linear() const {
    if (antilinear_.nonZeros() != 0)
      throw ContractViolation("operator has an antilinear part");
    return LinearOperator(linear_);
  }
  AntilinearOperator as_antilinear() const {
    if (linear_.nonZeros() != 0) throw ContractViolation("operator has a linear part");
    return AntilinearOperator(LinearOperator(antilinear_));
  }

 private:
  SparseMatrix linear_;
  SparseMatrix antilinear_;
};

// ---------------------------------------------------------------------------
// Arithmetic. Left scalar multiplication is complex multiplication of the output.

inline LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
  detail::require_same_dimension(a.dimension(), b.dimension());
  return LinearOperator(SparseMatrix(a.matrix() + b.matrix()));
}
inline LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) {
  detail::require_same_dimension(a.dimension(), b.dimension());
  return LinearOperator(SparseMatrix(a.matrix() - b.matrix()));
}
inline LinearOperator operator*(Complex s, const LinearOperator& a) {
  return LinearOperator(SparseMatrix(s * a.matrix()));
}
inline LinearOperator operator*(double s, const LinearOperator& a) {
  return LinearOperator(SparseMatrix(s * a.matrix()), a.hermitian_hint());
}

inline AntilinearOperator operator+(const AntilinearOperator& a, const AntilinearOperator& b) {
  return AntilinearOperator(a.linear_part() + b.linear_part());
}
inline AntilinearOperator operator-(const AntilinearOperator& a, const AntilinearOperator& b) {
  return AntilinearOperator(a.linear_part() - b.linear_part());
}
inline AntilinearOperator operator*(Complex s, const AntilinearOperator& a) {
  return AntilinearOperator(s * a.linear_part());
}
inline AntilinearOperator operator*(double s, const AntilinearOperator& a) {
  return AntilinearOperator(LinearOperator(SparseMatrix(s * a.linear_part().matrix())));
}

inline RealLinearOperator operator+(const RealLinearOperator& a, const RealLinearOperator& b) {
  detail::require_same_dimension(a.dimension(), b.dimension());
  return {SparseMatrix(a.linear_part() + b.linear_part()),
          SparseMatrix(a.antilinear_part() + b.antilinear_part())};
}
inline RealLinearOperator operator-(const RealLinearOperator& a, const RealLinearOperator& b) {
  detail::require_same_dimension(a.dimension(), b.dimension());
  return {SparseMatrix(a.linear_part() - b.linear_part()),
          SparseMatrix(a.antilinear_part() - b.antilinear_part())};
}
inline RealLinearOperator operator*(Complex s, const RealLinearOperator& a) {
  return {SparseMatrix(s * a.linear_part()), SparseMatrix(s * a.antilinear_part())};
}
inline RealLinearOperator operator*(double s, const RealLinearOperator& a) {
  return {SparseMatrix(s * a.linear_part()), SparseMatrix(s * a.antilinear_part())};
}

// ---------------------------------------------------------------------------
// Composition (a after b). A conjugation passing through a factor conjugates that factor.

inline LinearOperator compose(const LinearOperator& a, const LinearOperator& b) {
  detail::require_same_dimension(a.dimension(), b.dimension());
  return LinearOperator(SparseMatrix(a.matrix() * b.matrix()));
}
inline AntilinearOperator compose(const LinearOperator& a, const AntilinearOperator& b) {
  return AntilinearOperator(compose(a, b.linear_part()));
}
inline AntilinearOperator compose(const AntilinearOperator& a, const LinearOperator& b) {
  detail::require_same_dimension(a.dimension(), b.dimension());
  return AntilinearOperator(
      LinearOperator(SparseMatrix(a.linear_part().matrix() * SparseMatrix(b.matrix().conjugate()))));
}
inline LinearOperator compose(const AntilinearOperator& a, const AntilinearOperator& b) {
  detail::require_same_dimension(a.dimension(), b.dimension());
  return LinearOperator(SparseMatrix(a.linear_part().matrix() *
                                     SparseMatrix(b.linear_part().matrix().conjugate())));
}
inline RealLinearOperator compose(const RealLinearOperator& a, const RealLinearOperator& b) {
  detail::require_same_dimension(a.dimension(), b.dimension());
  const SparseMatrix b_lin_conj = b.linear_part().conjugate();
  const SparseMatrix b_anti_conj = b.antilinear_part().conjugate();
  SparseMatrix lin = a.linear_part() * b.linear_part();
  lin += a.antilinear_part() * b_anti_conj;
  SparseMatrix anti = a.linear_part() * b.antilinear_part();
  anti += a.antilinear_part() * b_lin_conj;
  return {std::move(lin), std::move(anti)};
}

template <class A, class B>
auto commutator(const A& a, const B& b) {
  return compose(a, b) - compose(b, a);
}

template <class A, class B>
auto anticommutator(const A& a, const B& b) {
  return compose(a, b) + compose(b, a);
}

// ---------------------------------------------------------------------------
// Grid operators.

/// 3-point second difference (f_{j-1} - 2 f_j + f_{j+1}) / h^2; circulant on periodic grids.
inline LinearOperator second_derivative(const Grid1D& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(3 * grid.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    t.emplace_back(j, j, -2.0 * inv_h2);
    if (j + 1 < n) t.emplace_back(j, j + 1, inv_h2);
    else if (grid.boundary() == Boundary::periodic) t.emplace_back(j, 0, inv_h2);
    if (j > 0) t.emplace_back(j, j - 1, inv_h2);
    else if (grid.boundary() == Boundary::periodic) t.emplace_back(j, n - 1, inv_h2);
  }
  return LinearOperator(detail::from_triplets(n, t), true);
}

/// p = -i D1 with the central difference (f_{j+1} - f_{j-1}) / 2h.
inline LinearOperator momentum(const Grid1D& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const Complex c(0.0, -1.0 / (2.0 * grid.spacing()));
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(2 * grid.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j + 1 < n) t.emplace_back(j, j + 1, c);
    else if (grid.boundary() == Boundary::periodic) t.emplace_back(j, 0, c);
    if (j > 0) t.emplace_back(j, j - 1, -c);
    else if (grid.boundary() == Boundary::periodic) t.emplace_back(j, n - 1, -c);
  }
  return LinearOperator(detail::from_triplets(n, t), true);
}

inline LinearOperator permutation_operator(std::span<const std::size_t> perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(perm.size());
  for (Eigen::Index j = 0; j < n; ++j)
    t.emplace_back(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)]), j, 1.0);
  return LinearOperator(detail::from_triplets(n, t));
}

inline LinearOperator parity_operator(const Grid1D& grid) {
  const auto perm = parity_permutation(grid);
  return LinearOperator(permutation_operator(perm).matrix(), true);
}

inline LinearOperator diagonal_operator(std::span<const double> values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(values.size());
  for (Eigen::Index j = 0; j < n; ++j) t.emplace_back(j, j, values[static_cast<std::size_t>(j)]);
  return LinearOperator(detail::from_triplets(n, t), true);
}

/// H = -1/2 D2 + diag(V) from potential samples on the grid.
inline LinearOperator hamiltonian_from_samples(const Grid1D& grid, std::span<const double> potential) {
  if (potential.size() != grid.size())
    throw ParameterError("potential sample count does not match the grid");
  for (std::size_t j = 0; j < potential.size(); ++j)
    if (!std::isfinite(potential[j]))
      throw EvaluationError("non-finite potential value", grid.point(j));
  SparseMatrix m = -0.5 * second_derivative(grid).matrix();
  m += diagonal_operator(potential).matrix();
  return LinearOperator(std::move(m), true);
}

/// H = -1/2 D2 + diag(V(x_j)).
inline LinearOperator hamiltonian(const Grid1D& grid, const std::function<double(double)>& potential) {
  std::vector<double> samples(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.point(j);
    samples[j] = potential(x);
    if (!std::isfinite(samples[j])) throw EvaluationError("non-finite potential value", x);
  }
  return hamiltonian_from_samples(grid, samples);
}

inline LinearOperator free_hamiltonian(const Grid1D& grid) {
  return hamiltonian(grid, [](double) { return 0.0; });
}

/// Free H minus lambda/h at the grid point x = 0.
inline LinearOperator delta_well_hamiltonian(const Grid1D& grid, double lambda) {
  if (grid.boundary() != Boundary::dirichlet)
    throw ParameterError("delta well requires a dirichlet grid");
  const auto origin = grid.origin_index();
  if (!origin)
    throw ParameterError("delta well grid has no x = 0 point; use an odd number of points");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ParameterError("delta well coupling lambda must be non-negative");
  std::vector<double> v(grid.size(), 0.0);
  v[*origin] = -lambda / grid.spacing();
  return hamiltonian_from_samples(grid, v);
}

/// p^2 / 2m, the Hamiltonian generated by the momentum-built supercharges.
inline LinearOperator kinetic_hamiltonian(const LinearOperator& p, double mass = 1.0) {
  if (!(mass > 0.0)) throw ParameterError("mass must be positive");
  return LinearOperator(SparseMatrix((0.5 / mass) * (p.matrix() * p.matrix())), true);
}

// ---------------------------------------------------------------------------
// Planar rotor in the basis e^{i m phi}, m = -m_max .. m_max.

struct RotorOperators {
  int m_max = 0;
  double inertia = 1.0;
  LinearOperator angular_momentum;  // L_z = diag(m)
  AntilinearOperator time_reversal;  // T = reversal . conj
  LinearOperator hamiltonian;       // L_z^2 / 2I
  LinearOperator reflection;        // phi -> -phi, the linear part of T

  std::size_t index_of(int m) const { return static_cast<std::size_t>(m + m_max); }
  int m_of(std::size_t index) const { return static_cast<int>(index) - m_max; }
};

inline RotorOperators rotor_basis_operators(int m_max, double inertia) {
  if (m_max < 1) throw ParameterError("rotor m_max must be at least 1");
  if (!(inertia > 0.0) || !std::isfinite(inertia))
    throw ParameterError("rotor inertia must be positive");
  const auto dim = static_cast<std::size_t>(2 * m_max + 1);
  std::vector<double> lz(dim), energy(dim);
  std::vector<std::size_t> reversal(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const int m = static_cast<int>(i) - m_max;
    lz[i] = m;
    energy[i] = static_cast<double>(m * m) / (2.0 * inertia);
    reversal[i] = dim - 1 - i;
  }
  LinearOperator reflection(permutation_operator(reversal).matrix(), true);
  return RotorOperators{m_max, inertia, diagonal_operator(lz), AntilinearOperator(reflection),
                        diagonal_operator(energy), reflection};
}

}  // namespace susyqm
