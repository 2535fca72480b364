#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "susyqm/models.hpp"

using namespace susyqm;

namespace {

constexpr double kPi = std::numbers::pi;

double re(const AnalyticState& s, double x) { return s.evaluate(x).real(); }

/// -psi''/2 + V psi - E psi with a 5-point second difference, relative to |E psi|.
double schrodinger_residual(const AnalyticState& s, const std::function<double(double)>& v, double x,
                            double step = 1e-3) {
  auto f = [&](double y) { return s.evaluate(y).real(); };
  const double d2 = (-f(x + 2 * step) + 16 * f(x + step) - 30 * f(x) + 16 * f(x - step) - f(x - 2 * step)) /
                    (12 * step * step);
  const double lhs = -0.5 * d2 + v(x) * f(x);
  return std::abs(lhs - s.energy * f(x)) / std::max(1e-300, std::abs(s.energy) * std::max(1.0, std::abs(f(x))));
}

/// Composite Simpson on [a, b] with an even number of panels.
double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

void expect_parity_consistent(const AnalyticState& s, double span) {
  if (s.parity == StateParity::none) return;
  const double sign = s.parity == StateParity::even ? 1.0 : -1.0;
  for (int i = 1; i <= 25; ++i) {
    const double x = span * i / 26.0;
    EXPECT_NEAR(re(s, -x), sign * re(s, x), 1e-12) << s.label << " x=" << x;
  }
}

}  // namespace

TEST(Box, EnergiesParitiesAndAmplitude) {
  const auto levels = box_levels(kPi, 4);
  ASSERT_EQ(levels.size(), 4u);
  const double expected[] = {0.5, 2.0, 4.5, 8.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(levels[i].energy, expected[i], 1e-15);
  EXPECT_EQ(levels[0].parity, StateParity::even);
  EXPECT_EQ(levels[1].parity, StateParity::odd);
  EXPECT_EQ(re(levels[0], 0.0), 1.0);
  for (const auto& s : box_levels(2.3, 6)) {
    expect_parity_consistent(s, 1.15);
    // Vanishes at the walls and solves the free equation.
    EXPECT_NEAR(re(s, 1.15), 0.0, 1e-14);
    EXPECT_LT(schrodinger_residual(s, [](double) { return 0.0; }, 0.3), 1e-6);
  }
  EXPECT_THROW(box_levels(kPi, 0), ParameterError);
}

TEST(SecSquared, EnergiesAndParities) {
  const auto levels = sec_squared_partner_levels(kPi, 5);
  ASSERT_EQ(levels.size(), 4u);
  EXPECT_NEAR(levels[0].energy, 2.0, 1e-15);
  EXPECT_NEAR(levels[1].energy, 4.5, 1e-15);
  EXPECT_EQ(levels[0].parity, StateParity::even);
  EXPECT_EQ(levels[1].parity, StateParity::odd);
  EXPECT_TRUE(levels[0].evaluate);
  EXPECT_TRUE(levels[1].evaluate);
  EXPECT_FALSE(levels[2].evaluate);
  expect_parity_consistent(levels[0], 1.5);
  expect_parity_consistent(levels[1], 1.5);
}

TEST(SecSquared, LowestStateSolvesEquationFromHandDerivative) {
  // psi = cos^2(ax): psi'' = -2 a^2 cos(2ax).
  for (double length : {kPi, 2.0, 7.5}) {
    const double a = kPi / length;
    const auto levels = sec_squared_partner_levels(length, 3);
    for (int i = -40; i <= 40; ++i) {
      const double x = 0.49 * length * i / 40.0;
      const double psi = re(levels[0], x);
      const double d2 = -2.0 * a * a * std::cos(2.0 * a * x);
      const double residual = -0.5 * d2 + sec_squared_potential(length, x) * psi - levels[0].energy * psi;
      EXPECT_LE(std::abs(residual), 1e-8 * levels[0].energy) << "L=" << length << " x=" << x;
    }
  }
}

TEST(SecSquared, StatesSolveEquationNumerically) {
  const auto levels = sec_squared_partner_levels(kPi, 3);
  auto v = [](double x) { return sec_squared_potential(kPi, x); };
  for (double x : {-1.2, -0.4, 0.1, 0.9, 1.3}) {
    EXPECT_LT(schrodinger_residual(levels[0], v, x), 1e-6) << x;
    EXPECT_LT(schrodinger_residual(levels[1], v, x), 1e-6) << x;
  }
}

TEST(DeltaWell, BoundState) {
  const double none[] = {1.0};
  const auto s = delta_well_states(1.0, none);
  EXPECT_EQ(s.bound.energy, -0.5);
  EXPECT_EQ(re(s.bound, 0.0), 1.0);
  EXPECT_EQ(s.bound.parity, StateParity::even);
  // Unit normalized: 2 * int_0^inf lambda e^{-2 lambda x} = 1.
  for (double lambda : {0.5, 1.0, 2.0}) {
    const auto t = delta_well_states(lambda, none);
    const double norm = 2.0 * simpson([&](double x) { return std::norm(t.bound.evaluate(x)); }, 0.0, 40.0 / lambda, 4000);
    EXPECT_NEAR(norm, 1.0, 1e-8);
    EXPECT_NEAR(t.bound.energy, -0.5 * lambda * lambda, 1e-15);
    EXPECT_LT(schrodinger_residual(t.bound, [](double) { return 0.0; }, 0.7 / lambda, 1e-4), 1e-6);
  }
}

TEST(DeltaWell, EvenContinuumLimits) {
  for (double x : {-3.0, -0.2, 0.0, 0.5, 2.5, 11.0})
    EXPECT_NEAR(delta_even_continuum(1e-14, 1.7, x), std::cos(1.7 * x), 1e-12);
  // k -> 0 vanishes linearly: amplitude over a fixed window scales with k.
  auto peak = [](double k) {
    double m = 0.0;
    for (int i = -200; i <= 200; ++i) m = std::max(m, std::abs(delta_even_continuum(1.0, k, 2.0 * i / 200.0)));
    return m;
  };
  EXPECT_LE(peak(1e-3), 2e-3);
  EXPECT_NEAR(peak(1e-3) / peak(1e-4), 10.0, 0.01);
}

TEST(DeltaWell, ContinuumStatesSolveFreeEquationAwayFromOrigin) {
  const double ks[] = {0.3, 1.0, 2.5};
  const auto s = delta_well_states(1.3, ks);
  ASSERT_EQ(s.even_continuum.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(s.even_continuum[i].normalization, Normalization::per_unit_momentum);
    expect_parity_consistent(s.even_continuum[i], 5.0);
    expect_parity_consistent(s.odd_continuum[i], 5.0);
    for (double x : {-2.1, 0.4, 3.3})
      EXPECT_LT(schrodinger_residual(s.even_continuum[i], [](double) { return 0.0; }, x, 1e-3), 1e-6);
  }
}

TEST(DeltaWell, ZeroMomentumAndNegativeK) {
  const double k0[] = {0.0};
  const auto s = delta_well_states(1.0, k0);
  EXPECT_TRUE(s.even_continuum.empty());
  EXPECT_TRUE(s.odd_continuum.empty());
  const double bad[] = {-1.0};
  EXPECT_THROW(delta_well_states(1.0, bad), ParameterError);
  EXPECT_THROW(delta_well_states(0.0, k0), ParameterError);
}

TEST(DeltaWell, JumpConditionClosedForm) {
  for (double lambda : {0.0, 0.1, 1.0, 3.0})
    for (double k : {0.01, 1.0, 4.0}) EXPECT_LE(jump_condition_residual(lambda, k), 1e-15);
  EXPECT_THROW(jump_condition_residual(1.0, 0.0), ParameterError);
}

TEST(DeltaWell, JumpConditionFromOneSidedDifferences) {
  // Independent oracle: second-order one-sided differences of the closed form at 0+ and 0-.
  for (double lambda : {0.5, 1.0, 2.0}) {
    for (double k : {0.2, 1.0, 3.0}) {
      const double h = 1e-5;
      auto f = [&](double x) { return delta_even_continuum(lambda, k, x); };
      const double d_plus = (-3 * f(0.0) + 4 * f(h) - f(2 * h)) / (2 * h);
      const double d_minus = (3 * f(0.0) - 4 * f(-h) + f(-2 * h)) / (2 * h);
      EXPECT_NEAR(d_plus - d_minus, -2.0 * lambda * f(0.0), 1e-8) << lambda << "," << k;
    }
  }
}

TEST(DeltaWell, EvenContinuumOrthogonalToBoundState) {
  const double lambda = 1.0, k = 1.3;
  const double ks[] = {k};
  const auto s = delta_well_states(lambda, ks);
  auto overlap = [&](double X) {
    auto integrand = [&](double x) { return re(s.bound, x) * re(s.even_continuum[0], x); };
    return 2.0 * simpson(integrand, 0.0, X, 200000);
  };
  const double small = std::abs(overlap(2.0)), large = std::abs(overlap(40.0));
  EXPECT_GT(small, 1e-3);
  EXPECT_LT(large, 1e-12);
}

TEST(FreeParticle, StateCounts) {
  const double k0[] = {0.0}, k1[] = {1.0};
  const auto s0 = free_particle_states(WaveRepresentation::standing, k0);
  ASSERT_EQ(s0.size(), 1u);
  EXPECT_EQ(s0[0].parity, StateParity::even);
  EXPECT_EQ(free_particle_states(WaveRepresentation::traveling, k0).size(), 1u);
  const auto s1 = free_particle_states(WaveRepresentation::standing, k1);
  ASSERT_EQ(s1.size(), 2u);
  EXPECT_NE(s1[0].parity, s1[1].parity);
  EXPECT_EQ(s1[0].energy, 0.5);
  EXPECT_EQ(s1[1].energy, 0.5);
  EXPECT_EQ(free_particle_states(WaveRepresentation::traveling, k1).size(), 2u);
  const double ks[] = {0.0, 0.5, 1.0, 2.0};
  const auto all = free_particle_states(FreeParticle{}, ks);
  EXPECT_EQ(all.size(), 7u);
  for (const auto& s : all) expect_parity_consistent(s, 3.0);
  EXPECT_EQ(zero_momentum_state_count(FreeParticle{}), 1u);
  EXPECT_EQ(zero_momentum_state_count(DeltaWell{}), 0u);
  const double bad[] = {-0.1};
  EXPECT_THROW(free_particle_states(WaveRepresentation::standing, bad), ParameterError);
}

TEST(Rotor, States) {
  const auto s = rotor_states(1.0, 1);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].energy, 0.5);
  EXPECT_EQ(s[1].energy, 0.0);
  EXPECT_EQ(s[2].energy, 0.5);
  const auto big = rotor_states(2.0, 6);
  int zeros = 0;
  for (std::size_t i = 0; i < big.size(); ++i) {
    EXPECT_EQ(big[i].energy, big[big.size() - 1 - i].energy);
    if (big[i].energy == 0.0) ++zeros;
    // e^{i m phi} is 2 pi periodic.
    EXPECT_NEAR(std::abs(big[i].evaluate(0.3) - big[i].evaluate(0.3 + 2 * kPi)), 0.0, 1e-12);
  }
  EXPECT_EQ(zeros, 1);
}

TEST(Catalog, ValidateAndNames) {
  EXPECT_NO_THROW(validate(ParticleInBox{}));
  EXPECT_THROW(validate(ParticleInBox{0.0}), ParameterError);
  EXPECT_THROW(validate(DeltaWell{-1.0, 40.0}), ParameterError);
  EXPECT_THROW(validate(PlanarRotor{1.0, 0}), ParameterError);
  EXPECT_THROW(validate(FreeParticle{std::nan(""), WaveRepresentation::standing}), ParameterError);
  EXPECT_EQ(model_name(SecSquaredPartner{}), "partner");
  EXPECT_EQ(model_name(PlanarRotor{}), "rotor");
}
