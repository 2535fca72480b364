#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "susyqm/errors.hpp"
#include "susyqm/grid.hpp"

namespace susyqm {

enum class StateParity { even, odd, none };
enum class Normalization { unit, per_unit_momentum, none };
enum class WaveRepresentation { standing, traveling };

inline const char* to_string(StateParity p) {
  switch (p) {
    case StateParity::even: return "even";
    case StateParity::odd: return "odd";
    case StateParity::none: return "none";
  }
  return "?";
}

/// A closed-form eigenstate. `evaluate` may be empty for energy-only entries.
struct AnalyticState {
  double energy = 0.0;
  StateParity parity = StateParity::none;
  std::function<std::complex<double>(double)> evaluate;
  Normalization normalization = Normalization::none;
  std::string label;
};

// ---------------------------------------------------------------------------
// Model catalog.

struct FreeParticle {
  double length = 2.0 * std::numbers::pi;
  WaveRepresentation rep = WaveRepresentation::standing;
};
struct ParticleInBox {
  double length = std::numbers::pi;
};
/// (pi/L)^2 sec^2(pi x / L), sharing L with its box partner.
struct SecSquaredPartner {
  double length = std::numbers::pi;
};
struct DeltaWell {
  double lambda = 1.0;
  double box_length = 40.0;
};
struct PlanarRotor {
  double inertia = 1.0;
  int m_max = 8;
};

using ModelSpec = std::variant<FreeParticle, ParticleInBox, SecSquaredPartner, DeltaWell, PlanarRotor>;

inline std::string model_name(const ModelSpec& m) {
  struct {
    std::string operator()(const FreeParticle&) const { return "free"; }
    std::string operator()(const ParticleInBox&) const { return "box"; }
    std::string operator()(const SecSquaredPartner&) const { return "partner"; }
    std::string operator()(const DeltaWell&) const { return "delta"; }
    std::string operator()(const PlanarRotor&) const { return "rotor"; }
  } v;
  return std::visit(v, m);
}

inline void validate(const ModelSpec& model) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(what) + " must be positive");
  };
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DeltaWell>) {
          positive(m.lambda, "lambda");
          positive(m.box_length, "L");
        } else if constexpr (std::is_same_v<T, PlanarRotor>) {
          positive(m.inertia, "I");
          if (m.m_max < 1) throw ParameterError("m_max must be at least 1");
        } else {
          positive(m.length, "L");
        }
      },
      model);
}

/// Model potential (finite models only; the delta well is discretized separately).
inline double sec_squared_potential(double length, double x) {
  const double a = std::numbers::pi / length;
  const double c = std::cos(a * x);
  return a * a / (c * c);
}

// ---------------------------------------------------------------------------
// Analytic spectra.

/// E_n = n^2 pi^2 / 2L^2 with cos(n pi x/L) for odd n and sin(n pi x/L) for even n.
inline std::vector<AnalyticState> box_levels(double length, int n_max) {
  if (!(length > 0.0)) throw ParameterError("box length must be positive");
  if (n_max < 1) throw ParameterError("n_max must be at least 1");
  const double pi = std::numbers::pi;
  std::vector<AnalyticState> out;
  for (int n = 1; n <= n_max; ++n) {
    const double kn = n * pi / length;
    AnalyticState s;
    s.energy = 0.5 * kn * kn;
    s.normalization = Normalization::none;
    s.label = "n=" + std::to_string(n);
    if (n % 2 == 1) {
      s.parity = StateParity::even;
      s.evaluate = [kn](double x) { return std::complex<double>(std::cos(kn * x), 0.0); };
    } else {
      s.parity = StateParity::odd;
      s.evaluate = [kn](double x) { return std::complex<double>(std::sin(kn * x), 0.0); };
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// E_n for n = 2..n_max; closed forms for the two lowest (cos^2, cos^2 sin), energies only above.
inline std::vector<AnalyticState> sec_squared_partner_levels(double length, int n_max) {
  if (!(length > 0.0)) throw ParameterError("partner length must be positive");
  if (n_max < 2) throw ParameterError("n_max must be at least 2 for the partner ladder");
  const double a = std::numbers::pi / length;
  std::vector<AnalyticState> out;
  for (int n = 2; n <= n_max; ++n) {
    AnalyticState s;
    s.energy = 0.5 * n * n * a * a;
    s.parity = n % 2 == 0 ? StateParity::even : StateParity::odd;
    s.label = "n=" + std::to_string(n);
    if (n == 2) {
      s.evaluate = [a](double x) {
        const double c = std::cos(a * x);
        return std::complex<double>(c * c, 0.0);
      };
    } else if (n == 3) {
      s.evaluate = [a](double x) {
        const double c = std::cos(a * x);
        return std::complex<double>(c * c * std::sin(a * x), 0.0);
      };
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct DeltaWellStates {
  AnalyticState bound;
  std::vector<AnalyticState> even_continuum;
  std::vector<AnalyticState> odd_continuum;
};

/// (k cos kx - lambda sin k|x|) / sqrt(k^2 + lambda^2).
inline double delta_even_continuum(double lambda, double k, double x) {
  return (k * std::cos(k * x) - lambda * std::sin(k * std::abs(x))) / std::sqrt(k * k + lambda * lambda);
}

/// Bound state sqrt(lambda) e^{-lambda|x|} at -lambda^2/2 plus the two continua. Both continuum
/// sectors are empty at k = 0: the even closed form vanishes identically there, as does sin.
inline DeltaWellStates delta_well_states(double lambda, std::span<const double> k_list) {
  if (!(lambda > 0.0)) throw ParameterError("delta well lambda must be positive");
  DeltaWellStates out;
  out.bound.energy = -0.5 * lambda * lambda;
  out.bound.parity = StateParity::even;
  out.bound.normalization = Normalization::unit;
  out.bound.label = "bound";
  out.bound.evaluate = [lambda](double x) {
    return std::complex<double>(std::sqrt(lambda) * std::exp(-lambda * std::abs(x)), 0.0);
  };
  for (double k : k_list) {
    if (!(k >= 0.0)) throw ParameterError("wavenumbers must be non-negative");
    if (k == 0.0) continue;
    AnalyticState even;
    even.energy = 0.5 * k * k;
    even.parity = StateParity::even;
    even.normalization = Normalization::per_unit_momentum;
    even.label = "k=" + std::to_string(k);
    even.evaluate = [lambda, k](double x) {
      return std::complex<double>(delta_even_continuum(lambda, k, x), 0.0);
    };
    AnalyticState odd = even;
    odd.parity = StateParity::odd;
    odd.evaluate = [k](double x) { return std::complex<double>(std::sin(k * x), 0.0); };
    out.even_continuum.push_back(std::move(even));
    out.odd_continuum.push_back(std::move(odd));
  }
  return out;
}

/// |psi'(0+) - psi'(0-) + 2 lambda psi(0)| for the even continuum state, from its closed-form
/// one-sided derivatives. The jump rule follows from integrating -psi''/2 - lambda delta psi = E psi
/// across the origin.
inline double jump_condition_residual(double lambda, double k) {
  if (!(k > 0.0)) throw ParameterError("jump condition needs k > 0");
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be non-negative");
  const double norm = std::sqrt(k * k + lambda * lambda);
  // d/dx [k cos kx - lambda sin(k|x|)] = -k^2 sin kx - lambda k cos(k|x|) sign(x)
  auto derivative = [&](double x, double sign) {
    return (-k * k * std::sin(k * x) - lambda * k * std::cos(k * std::abs(x)) * sign) / norm;
  };
  const double psi0 = k / norm;
  const double d_plus = derivative(0.0, 1.0);
  const double d_minus = derivative(-0.0, -1.0);
  return std::abs(d_plus - d_minus + 2.0 * lambda * psi0);
}

/// Standing waves: cos kx (even) for every k, sin kx (odd) only for k > 0.
/// Traveling waves: e^{+ikx}, e^{-ikx} for k > 0 and a single state at k = 0.
inline std::vector<AnalyticState> free_particle_states(WaveRepresentation rep, std::span<const double> k_list) {
  std::vector<AnalyticState> out;
  for (double k : k_list) {
    if (!(k >= 0.0)) throw ParameterError("wavenumbers must be non-negative");
    AnalyticState base;
    base.energy = 0.5 * k * k;
    base.normalization = Normalization::per_unit_momentum;
    if (rep == WaveRepresentation::standing) {
      AnalyticState c = base;
      c.parity = StateParity::even;
      c.label = "cos k=" + std::to_string(k);
      c.evaluate = [k](double x) { return std::complex<double>(std::cos(k * x), 0.0); };
      out.push_back(std::move(c));
      if (k > 0.0) {
        AnalyticState s = base;
        s.parity = StateParity::odd;
        s.label = "sin k=" + std::to_string(k);
        s.evaluate = [k](double x) { return std::complex<double>(std::sin(k * x), 0.0); };
        out.push_back(std::move(s));
      }
    } else if (k == 0.0) {
      AnalyticState c = base;
      c.parity = StateParity::even;
      c.label = "k=0";
      c.evaluate = [](double) { return std::complex<double>(1.0, 0.0); };
      out.push_back(std::move(c));
    } else {
      for (double sign : {1.0, -1.0}) {
        AnalyticState w = base;
        w.parity = StateParity::none;
        w.label = (sign > 0 ? "exp(+ikx) k=" : "exp(-ikx) k=") + std::to_string(k);
        w.evaluate = [k, sign](double x) { return std::polar(1.0, sign * k * x); };
        out.push_back(std::move(w));
      }
    }
  }
  return out;
}

inline std::vector<AnalyticState> free_particle_states(const FreeParticle& model, std::span<const double> k_list) {
  return free_particle_states(model.rep, k_list);
}

/// e^{i m phi} at m^2 / 2I for m = -m_max..m_max.
inline std::vector<AnalyticState> rotor_states(double inertia, int m_max) {
  if (!(inertia > 0.0)) throw ParameterError("rotor inertia must be positive");
  if (m_max < 0) throw ParameterError("m_max must be non-negative");
  std::vector<AnalyticState> out;
  for (int m = -m_max; m <= m_max; ++m) {
    AnalyticState s;
    s.energy = static_cast<double>(m * m) / (2.0 * inertia);
    s.parity = m == 0 ? StateParity::even : StateParity::none;
    s.normalization = Normalization::none;
    s.label = "m=" + std::to_string(m);
    s.evaluate = [m](double phi) { return std::polar(1.0, m * phi); };
    out.push_back(std::move(s));
  }
  return out;
}

/// Number of standing-wave states at k = 0 per model: 1 for the free particle, 0 for the delta well.
inline std::size_t zero_momentum_state_count(const ModelSpec& model) {
  if (const auto* f = std::get_if<FreeParticle>(&model)) {
    const double k0[] = {0.0};
    return free_particle_states(f->rep, k0).size();
  }
  if (const auto* d = std::get_if<DeltaWell>(&model)) {
    const double k0[] = {0.0};
    const auto s = delta_well_states(d->lambda, k0);
    return s.even_continuum.size() + s.odd_continuum.size();
  }
  throw ParameterError("zero-momentum count is defined for continuum models only");
}

}  // namespace susyqm
