#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "susyqm/operators.hpp"

namespace susyqm {

/// Which construction produced a supercharge.
enum class ChargeLabel {
  momentum_parity,          // Q  = p P / sqrt(2m)
  nilpotent,                // q  = (p + p P) / sqrt(4m)
  nilpotent_adjoint,        // q^dagger = (p - p P) / sqrt(4m)
  angular_time_reversal,    // Q  = L_z T / sqrt(2I)
  rotor_nilpotent,          // q  = (L_z + L_z T) / sqrt(4I)
  rotor_nilpotent_adjoint,  // q^dagger = (L_z - L_z T) / sqrt(4I)
};

inline bool is_nilpotent_label(ChargeLabel l) {
  return l == ChargeLabel::nilpotent || l == ChargeLabel::nilpotent_adjoint ||
         l == ChargeLabel::rotor_nilpotent || l == ChargeLabel::rotor_nilpotent_adjoint;
}

/// 1/(2m) for the product charges, 1/(4m) for the nilpotent superpositions.
inline double prefactor_squared_for(ChargeLabel label, double mass_or_inertia) {
  return is_nilpotent_label(label) ? 1.0 / (4.0 * mass_or_inertia) : 1.0 / (2.0 * mass_or_inertia);
}

/// A supercharge stored as (unscaled core operator, prefactor). Keeping the prefactor apart
/// lets products of two charges use the exact squared prefactor 1/(2m) instead of the
/// rounded (1/sqrt(2m))^2.
class Supercharge {
 public:
  Supercharge(RealLinearOperator core, double mass_or_inertia, ChargeLabel label, bool dagger = false)
      : core_(std::move(core)), mass_or_inertia_(mass_or_inertia), label_(label), dagger_(dagger) {
    if (!(mass_or_inertia > 0.0) || !std::isfinite(mass_or_inertia))
      throw ParameterError("supercharge mass or inertia must be positive");
  }

  Linearity kind() const noexcept { return core_.kind(); }
  ChargeLabel label() const noexcept { return label_; }
  bool is_dagger() const noexcept { return dagger_; }
  double mass_or_inertia() const noexcept { return mass_or_inertia_; }
  Eigen::Index dimension() const noexcept { return core_.dimension(); }

  double prefactor_squared() const noexcept { return prefactor_squared_for(label_, mass_or_inertia_); }
  double prefactor() const noexcept { return std::sqrt(prefactor_squared()); }

  const RealLinearOperator& core() const noexcept { return core_; }
  RealLinearOperator action() const { return prefactor() * core_; }

  Vector apply(const Vector& v) const { return prefactor() * core_.apply(v); }

  std::string name() const {
    const bool lower = is_nilpotent_label(label_);
    const bool dag = dagger_ || label_ == ChargeLabel::nilpotent_adjoint ||
                     label_ == ChargeLabel::rotor_nilpotent_adjoint;
    return std::string(lower ? "q" : "Q") + (dag ? "^dagger" : "");
  }

  Supercharge adjoint() const {
    ChargeLabel l = label_;
    bool dag = !dagger_;
    switch (label_) {
      case ChargeLabel::nilpotent: l = ChargeLabel::nilpotent_adjoint; dag = false; break;
      case ChargeLabel::nilpotent_adjoint: l = ChargeLabel::nilpotent; dag = false; break;
      case ChargeLabel::rotor_nilpotent: l = ChargeLabel::rotor_nilpotent_adjoint; dag = false; break;
      case ChargeLabel::rotor_nilpotent_adjoint: l = ChargeLabel::rotor_nilpotent; dag = false; break;
      default: break;
    }
    return Supercharge(core_.adjoint(), mass_or_inertia_, l, dag);
  }

 private:
  RealLinearOperator core_;
  double mass_or_inertia_;
  ChargeLabel label_;
  bool dagger_;
};

/// Product of two charges with the exact squared prefactor.
inline RealLinearOperator charge_product(const Supercharge& a, const Supercharge& b) {
  if (a.prefactor_squared() == b.prefactor_squared())
    return a.prefactor_squared() * compose(a.core(), b.core());
  return (a.prefactor() * b.prefactor()) * compose(a.core(), b.core());
}

namespace detail {
inline double relative_difference(const RealLinearOperator& a, const RealLinearOperator& b) {
  const double scale = std::max(a.frobenius_norm(), b.frobenius_norm());
  return scale == 0.0 ? 0.0 : (a - b).frobenius_norm() / scale;
}
}  // namespace detail

/// Q = p P / sqrt(2m). Its adjoint P p / sqrt(2m) is checked to equal -Q.
inline Supercharge supercharge_Q(const LinearOperator& p, const LinearOperator& parity, double mass = 1.0) {
  detail::require_same_dimension(p.dimension(), parity.dimension());
  Supercharge q(RealLinearOperator(compose(p, parity)), mass, ChargeLabel::momentum_parity);
  const RealLinearOperator dagger_core(compose(parity, p));
  if (detail::relative_difference(q.adjoint().core(), dagger_core) > 1e-12)
    throw ContractViolation("Q^dagger is not P p; momentum or parity is not Hermitian");
  if (detail::relative_difference(dagger_core, -1.0 * q.core()) > 1e-12)
    throw ContractViolation("Q^dagger != -Q; momentum does not anticommute with parity");
  return q;
}

/// (q, q^dagger) = ((p + p P), (p - p P)) / sqrt(4m); q^dagger is the adjoint of q.
inline std::pair<Supercharge, Supercharge> supercharge_q_pair(const LinearOperator& p,
                                                              const LinearOperator& parity,
                                                              double mass = 1.0) {
  detail::require_same_dimension(p.dimension(), parity.dimension());
  const LinearOperator pP = compose(p, parity);
  Supercharge q(RealLinearOperator(p + pP), mass, ChargeLabel::nilpotent);
  Supercharge qd(RealLinearOperator(p - pP), mass, ChargeLabel::nilpotent_adjoint);
  if (detail::relative_difference(q.adjoint().core(), qd.core()) > 1e-12)
    throw ContractViolation("(p - pP) is not the adjoint of (p + pP)");
  return {std::move(q), std::move(qd)};
}

/// Q = L_z T / sqrt(2I), antilinear. Its adjoint T L_z / sqrt(2I) is checked to equal -Q.
inline Supercharge rotor_supercharge(const LinearOperator& lz, const AntilinearOperator& t, double inertia) {
  detail::require_same_dimension(lz.dimension(), t.dimension());
  Supercharge q(RealLinearOperator(compose(lz, t)), inertia, ChargeLabel::angular_time_reversal);
  const RealLinearOperator dagger_core(compose(t, lz));
  if (detail::relative_difference(q.adjoint().core(), dagger_core) > 1e-12)
    throw ContractViolation("Q^dagger is not T L_z");
  if (detail::relative_difference(dagger_core, -1.0 * q.core()) > 1e-12)
    throw ContractViolation("T L_z != -L_z T");
  return q;
}

/// (q, q^dagger) = (L_z + L_z T, L_z - L_z T) / sqrt(4I). Real-linear, not complex-linear.
inline std::pair<Supercharge, Supercharge> rotor_q_pair(const LinearOperator& lz,
                                                        const AntilinearOperator& t, double inertia) {
  detail::require_same_dimension(lz.dimension(), t.dimension());
  const RealLinearOperator lzt(compose(lz, t));
  Supercharge q(RealLinearOperator(lz) + lzt, inertia, ChargeLabel::rotor_nilpotent);
  Supercharge qd(RealLinearOperator(lz) - lzt, inertia, ChargeLabel::rotor_nilpotent_adjoint);
  if (detail::relative_difference(q.adjoint().core(), qd.core()) > 1e-12)
    throw ContractViolation("(L_z - L_z T) is not the adjoint of (L_z + L_z T)");
  return {std::move(q), std::move(qd)};
}

}  // namespace susyqm
