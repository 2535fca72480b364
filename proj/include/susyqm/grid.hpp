#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "susyqm/errors.hpp"

namespace susyqm {

/// Unit record echoed into every report. Computations always run with hbar = m = 1;
/// the moment of inertia is a genuine model parameter for the rotor.
struct Units {
  double hbar = 1.0;
  double mass = 1.0;
  double inertia = 1.0;
};

enum class Boundary { dirichlet, periodic };

inline const char* to_string(Boundary b) {
  return b == Boundary::dirichlet ? "dirichlet" : "periodic";
}

/// Symmetric 1D grid on [-L/2, L/2].
///
/// Dirichlet grids hold the n interior points x_j = -L/2 + (j+1) h with h = L/(n+1).
/// Periodic grids hold x_j = -L/2 + j h with h = L/n, and require even n so that
/// x -> -x is an exact index permutation modulo the period.
class Grid1D {
 public:
  Grid1D(double half_width, std::size_t n_points, Boundary boundary)
      : half_width_(half_width), n_points_(n_points), boundary_(boundary) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
      throw ParameterError("grid half_width must be positive and finite");
    if (n_points < 3) throw ParameterError("grid n_points must be at least 3");
    if (boundary == Boundary::periodic && n_points % 2 != 0)
      throw ParameterError("periodic grid n_points must be even");
    const double length = 2.0 * half_width;
    spacing_ = boundary == Boundary::dirichlet ? length / static_cast<double>(n_points + 1)
                                               : length / static_cast<double>(n_points);
  }

  double half_width() const noexcept { return half_width_; }
  double length() const noexcept { return 2.0 * half_width_; }
  std::size_t size() const noexcept { return n_points_; }
  Boundary boundary() const noexcept { return boundary_; }
  double spacing() const noexcept { return spacing_; }

  /// Exact function of the fields, so two grids with equal fields give equal points.
  double point(std::size_t j) const noexcept {
    // The upper half is the mirror image of the lower half, bit for bit.
    if (boundary_ == Boundary::dirichlet) {
      if (2 * (j + 1) == n_points_ + 1) return 0.0;
      if (2 * (j + 1) > n_points_ + 1) return -lower_point(n_points_ - 1 - j);
      return lower_point(j);
    }
    if (2 * j == n_points_) return 0.0;
    if (2 * j > n_points_) return -lower_point(n_points_ - j);
    return lower_point(j);
  }

  std::vector<double> points() const {
    std::vector<double> xs(n_points_);
    for (std::size_t j = 0; j < n_points_; ++j) xs[j] = point(j);
    return xs;
  }

  /// Index of the grid point at x = 0, if there is one.
  std::optional<std::size_t> origin_index() const noexcept {
    if (boundary_ == Boundary::dirichlet) {
      if (n_points_ % 2 == 1) return (n_points_ - 1) / 2;
      return std::nullopt;
    }
    return n_points_ / 2;
  }

 private:
  double lower_point(std::size_t j) const noexcept {
    const double offset = boundary_ == Boundary::dirichlet ? static_cast<double>(j + 1)
                                                          : static_cast<double>(j);
    return -half_width_ + offset * spacing_;
  }

  double half_width_;
  std::size_t n_points_;
  Boundary boundary_;
  double spacing_;
};

inline Grid1D build_grid(double half_width, std::size_t n_points, Boundary boundary) {
  return Grid1D(half_width, n_points, boundary);
}

/// pi with point(pi[j]) == -point(j) (mod the period for periodic grids). An involution.
inline std::vector<std::size_t> parity_permutation(const Grid1D& grid) {
  const std::size_t n = grid.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < n; ++j) {
    perm[j] = grid.boundary() == Boundary::dirichlet ? n - 1 - j : (n - j) % n;
  }
  return perm;
}

}  // namespace susyqm
