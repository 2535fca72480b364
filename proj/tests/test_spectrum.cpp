#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "susyqm/spectrum.hpp"
#include "test_support.hpp"

using namespace susyqm;

namespace {

constexpr double kPi = std::numbers::pi;

Spectrum labeled(std::vector<double> values, std::vector<ParityLabel> labels) {
  Spectrum s;
  s.eigenvalues = std::move(values);
  s.parity_labels = std::move(labels);
  s.parity_expectations.assign(s.eigenvalues.size(), 0.0);
  return s;
}

/// Pairs as sorted (E_even, E_odd) value pairs, independent of index order.
std::vector<std::pair<double, double>> pair_values(const Spectrum& s, const Pairing& p) {
  std::vector<std::pair<double, double>> out;
  for (const auto& lp : p.pairs) out.emplace_back(s.eigenvalues[lp.index_even], s.eigenvalues[lp.index_odd]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(NumericSpectrum, BoxLevels) {
  const Grid1D g(kPi / 2, 2001, Boundary::dirichlet);
  const Spectrum s = numeric_spectrum(free_hamiltonian(g), parity_operator(g), 4);
  const double expected[] = {0.5, 2.0, 4.5, 8.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.eigenvalues[i] / expected[i], 1.0, 1e-4);
  EXPECT_EQ(s.parity_labels[0], ParityLabel::even);
  EXPECT_EQ(s.parity_labels[1], ParityLabel::odd);
  EXPECT_EQ(s.parity_labels[2], ParityLabel::even);
  ASSERT_TRUE(s.has_vectors());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s.vector(i).norm(), 1.0, 1e-12);
}

TEST(NumericSpectrum, DiscreteBoxMatchesClosedFormOfStencil) {
  // Oracle: -D2/2 with Dirichlet walls has eigenvalues (2/h^2) sin^2(j pi / (2(n+1))).
  const std::size_t n = 301;
  const Grid1D g(1.7, n, Boundary::dirichlet);
  const Spectrum s = numeric_spectrum(free_hamiltonian(g), parity_operator(g), 10);
  const double h = g.spacing();
  for (std::size_t j = 1; j <= 10; ++j) {
    const double t = std::sin(j * kPi / (2.0 * (n + 1)));
    EXPECT_NEAR(s.eigenvalues[j - 1], (2.0 / (h * h)) * t * t, 1e-9 * s.eigenvalues[j - 1]);
  }
}

TEST(NumericSpectrum, TridiagonalAgreesWithDense) {
  const Grid1D g(2.0, 201, Boundary::dirichlet);
  const LinearOperator h = hamiltonian(g, [](double x) { return 0.5 * x * x; });
  const auto tri = detail::solve_tridiagonal(h, 12);
  const auto dense = detail::solve_dense(h, 12);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(tri.values[i], dense.values[i], 1e-10);
}

TEST(NumericSpectrum, FreePeriodicDegeneracyAndDefiniteParity) {
  const Grid1D g(kPi, 64, Boundary::periodic);
  const Spectrum s = numeric_spectrum(free_hamiltonian(g), parity_operator(g), 64);
  EXPECT_NEAR(s.eigenvalues[0], 0.0, 1e-12);
  EXPECT_GT(s.eigenvalues[1], 0.1);
  for (std::size_t i = 1; i + 1 < 64; i += 2) {
    EXPECT_NEAR(s.eigenvalues[i], s.eigenvalues[i + 1], 1e-10 * s.eigenvalues[i]);
    EXPECT_EQ(s.parity_labels[i], ParityLabel::even);
    EXPECT_EQ(s.parity_labels[i + 1], ParityLabel::odd);
  }
  for (double e : s.parity_expectations) EXPECT_GE(std::abs(e), 1.0 - 1e-8);
  // The top level is the lone Nyquist mode.
  EXPECT_EQ(nyquist_artifacts(s, g), std::vector<std::size_t>{63});
}

TEST(NumericSpectrum, RotorExact) {
  const RotorOperators r = rotor_basis_operators(3, 1.0);
  const Spectrum s = numeric_spectrum(r.hamiltonian, r.reflection, 7);
  const std::vector<double> expected{0, 0.5, 0.5, 2, 2, 4.5, 4.5};
  EXPECT_EQ(s.eigenvalues, expected);
}

TEST(NumericSpectrum, Contracts) {
  SparseMatrix m(3, 3);
  m.insert(0, 1) = 1.0;
  EXPECT_THROW(numeric_spectrum(LinearOperator(m), LinearOperator::identity(3), 2), ContractViolation);
  const RotorOperators r = rotor_basis_operators(2, 1.0);
  EXPECT_THROW(numeric_spectrum(r.hamiltonian, r.reflection, 0), ParameterError);
  EXPECT_THROW(numeric_spectrum(r.hamiltonian, r.reflection, 6), ParameterError);
  const Grid1D big(1.0, 7000, Boundary::periodic);
  EXPECT_THROW(numeric_spectrum(free_hamiltonian(big), parity_operator(big), 3), ContractViolation);
}

TEST(Pairing, Rotor) {
  const RotorOperators r = rotor_basis_operators(4, 1.0);
  const Spectrum s = numeric_spectrum(r.hamiltonian, r.reflection, 9);
  const Pairing p = detect_pairing(s, 1e-8);
  EXPECT_EQ(p.pairs.size(), 4u);
  EXPECT_EQ(p.unpaired, std::vector<std::size_t>{0});
  EXPECT_TRUE(p.flagged.empty());
  for (const auto& lp : p.pairs) EXPECT_EQ(lp.delta_energy, 0.0);
}

TEST(Pairing, BoxPlusPartnerMerged) {
  const Spectrum box = analytic_spectrum(box_levels(kPi, 5));
  const Spectrum partner = analytic_spectrum(sec_squared_partner_levels(kPi, 5));
  const Spectrum merged = merge(box, partner);
  const Pairing p = detect_pairing(merged, 1e-8);
  EXPECT_EQ(p.pairs.size(), 4u);
  ASSERT_EQ(p.unpaired.size(), 1u);
  EXPECT_EQ(merged.eigenvalues[p.unpaired[0]], 0.5);
}

TEST(Pairing, SingleLevelAndTriples) {
  const Pairing one = detect_pairing(labeled({1.0}, {ParityLabel::even}), 1e-8);
  EXPECT_TRUE(one.pairs.empty());
  EXPECT_EQ(one.unpaired, std::vector<std::size_t>{0});
  const Spectrum triple = labeled({0.0, 1.0, 1.0, 1.0}, {ParityLabel::even, ParityLabel::even, ParityLabel::odd,
                                                          ParityLabel::even});
  const Pairing t = detect_pairing(triple, 1e-8);
  EXPECT_TRUE(t.pairs.empty());
  EXPECT_EQ(t.flagged.size(), 3u);
  EXPECT_EQ(t.unpaired.size(), 4u);
  EXPECT_THROW(detect_pairing(triple, 0.0), ParameterError);
  // Same parity never pairs.
  const Pairing same = detect_pairing(labeled({1.0, 1.0}, {ParityLabel::odd, ParityLabel::odd}), 1e-8);
  EXPECT_TRUE(same.pairs.empty());
}

TEST(Pairing, PropertyPermutationStable) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> level(1, 30);
  std::uniform_int_distribution<int> kind(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values{0.0};
    std::vector<ParityLabel> labels{ParityLabel::even};
    for (int i = 0; i < 12; ++i) {
      const double e = 0.5 * level(rng);
      const int k = kind(rng);
      values.push_back(e);
      labels.push_back(k == 1 ? ParityLabel::odd : ParityLabel::even);
      if (k == 2) {
        values.push_back(e * (1.0 + 1e-12));
        labels.push_back(ParityLabel::odd);
      }
    }
    const Spectrum a = labeled(values, labels);
    std::vector<std::size_t> perm(values.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pv;
    std::vector<ParityLabel> pl;
    for (auto i : perm) {
      pv.push_back(values[i]);
      pl.push_back(labels[i]);
    }
    const Spectrum b = labeled(pv, pl);
    const Pairing pa = detect_pairing(a, 1e-8), pb = detect_pairing(b, 1e-8);
    ASSERT_EQ(pair_values(a, pa), pair_values(b, pb));
    ASSERT_EQ(pa.unpaired.size(), pb.unpaired.size());
    // Each index appears exactly once.
    std::vector<int> seen(values.size(), 0);
    for (const auto& lp : pa.pairs) ++seen[lp.index_even], ++seen[lp.index_odd];
    for (auto i : pa.unpaired) ++seen[i];
    for (int c : seen) ASSERT_EQ(c, 1);
  }
}

TEST(Spectrum, ResetZeroPointAndAnalyticSort) {
  Spectrum s = analytic_spectrum(rotor_states(1.0, 2));
  EXPECT_TRUE(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
  EXPECT_EQ(s.source, SpectrumSource::analytic);
  EXPECT_FALSE(s.has_vectors());
  Spectrum d = labeled({-0.5, 0.1, 0.3}, {ParityLabel::even, ParityLabel::odd, ParityLabel::even});
  EXPECT_EQ(reset_zero_point(d), -0.5);
  EXPECT_EQ(d.eigenvalues, (std::vector<double>{0.0, 0.6, 0.8}));
}

TEST(Spectrum, ClustersAndMedianGap) {
  EXPECT_EQ(median_gap({0.0, 1.0, 3.0, 4.0}), 1.0);
  const auto c = degenerate_clusters({0.0, 1.0, 1.0 + 1e-12, 2.0});
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[1], (std::pair<std::size_t, std::size_t>{1, 3}));
  EXPECT_EQ(classify_parity(0.5), ParityLabel::mixed);
  EXPECT_EQ(classify_parity(-1.0), ParityLabel::odd);
}
