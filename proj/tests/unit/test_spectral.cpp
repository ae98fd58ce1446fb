#include <gtest/gtest.h>

#include <cmath>

#include "../oracles.hpp"
#include "cubeinf/inequalities.hpp"
#include "cubeinf/spectral.hpp"
#include "cubeinf/zoo.hpp"

using namespace cubeinf;

namespace {

TruthTable to_table(int n, const std::vector<double>& v) {
  return TruthTable(n, std::vector<std::int8_t>(v.begin(), v.end()));
}

}  // namespace

TEST(Transform, Parity) {
  const auto s = transform(*parity({1, 2}).table);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s.coefficient(0b11), 1.0, 1e-15);
}

TEST(Transform, Majority3) {
  const auto s = transform(*majority(3).table);
  EXPECT_EQ(s.size(), 4u);
  for (FrequencySet S : {0b001u, 0b010u, 0b100u}) EXPECT_NEAR(s.coefficient(S), 0.5, 1e-15);
  EXPECT_NEAR(s.coefficient(0b111), -0.5, 1e-15);
}

TEST(Transform, Constant) {
  const auto s = transform(*constant(1).table);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.coefficient(0), 1.0);
}

TEST(Transform, MatchesDefinitionOracle) {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 9; ++n) {
    const auto f = oracle::random_boolean(n, rng);
    const auto s = transform(to_table(n, f));
    const auto ref = oracle::spectrum(f, n);
    for (std::uint32_t S = 0; S < ref.size(); ++S) EXPECT_NEAR(s.coefficient(S), ref[S], 1e-12);
  }
}

TEST(Transform, RoundTripAndCap) {
  std::mt19937_64 rng(2);
  const auto f = oracle::random_real(8, rng);
  const auto back = evaluate(transform(8, f));
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(back[i], f[i], 1e-10);
  std::vector<double> big(std::size_t{1} << 21, 1.0);
  EXPECT_THROW(transform(21, big), std::invalid_argument);
  EXPECT_THROW(transform(3, std::vector<double>(7)), std::invalid_argument);
}

TEST(Parseval, RandomTables) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + i % 12;
    EXPECT_NEAR(transform(to_table(n, oracle::random_boolean(n, rng))).squared_norm(), 1.0, 1e-10);
  }
}

TEST(Plancherel, RandomPairs) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + i % 10;
    const auto f = oracle::random_real(n, rng);
    const auto g = oracle::random_real(n, rng);
    double direct = 0;
    for (std::size_t x = 0; x < f.size(); ++x) direct += f[x] * g[x];
    direct /= f.size();
    const auto sf = transform(n, f);
    const auto sg = transform(n, g);
    double spectral = 0;
    for (const auto& t : sf.terms()) spectral += t.coeff * sg.coefficient(t.set);
    EXPECT_NEAR(direct, spectral, 1e-10);
  }
}

TEST(Energy, Examples) {
  const auto e = energy_profile(transform(*majority(3).table));
  EXPECT_NEAR(e.levels[1], 0.75, 1e-15);
  EXPECT_NEAR(e.levels[3], 0.25, 1e-15);
  EXPECT_EQ(e.levels[0], 0.0);
  EXPECT_EQ(e.levels[2], 0.0);
  EXPECT_NEAR(energy_profile(transform(*parity({1, 2, 3}).table)).levels[3], 1.0, 1e-15);
  EXPECT_NEAR(energy_profile(transform(*constant(-1).table)).levels[0], 1.0, 1e-15);
}

TEST(ProjectAn, Examples) {
  EXPECT_TRUE(project_An(transform(*parity({1, 2, 3}).table), 2).empty());
  const auto m = transform(*majority(3).table);
  EXPECT_EQ(project_An(m, 3).size(), 4u);
  const auto a1 = project_An(m, 1);
  ASSERT_EQ(a1.size(), 1u);
  EXPECT_NEAR(a1.coefficient(1), 0.5, 1e-15);
}

TEST(NoiseOperator, Examples) {
  const auto t = noise_operator(transform(*parity({1, 2}).table), 0.5);
  EXPECT_NEAR(t.coefficient(0b11), 0.25, 1e-15);
  const auto m = transform(*majority(3).table);
  const auto id = noise_operator(m, 1.0);
  for (const auto& term : m.terms()) EXPECT_EQ(id.coefficient(term.set), term.coeff);
  EXPECT_TRUE(noise_operator(m, 0.0).empty());
  EXPECT_THROW(noise_operator(m, 1.1), std::invalid_argument);
  EXPECT_THROW(noise_operator(m, -0.1), std::invalid_argument);
}

TEST(NoiseOperator, MatchesPointwiseDefinition) {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 7; ++n) {
    const auto f = oracle::random_real(n, rng);
    const double rho = 0.1 * n;
    const auto spectral = evaluate(noise_operator(transform(n, f), rho));
    const auto direct = oracle::noise_pointwise(f, n, rho);
    for (std::size_t x = 0; x < f.size(); ++x) EXPECT_NEAR(spectral[x], direct[x], 1e-10);
  }
}

TEST(NoiseCorrelation, Examples) {
  EXPECT_NEAR(noise_correlation(transform(*parity({1, 2, 3}).table), 0.1), 0.729, 1e-12);
  const auto m = transform(*majority(3).table);
  EXPECT_NEAR(noise_correlation(m, 0.2), 0.728, 1e-12);
  EXPECT_NEAR(noise_correlation(m, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(xi(transform(*constant(1).table), 0.4), 0.0, 1e-15);
  EXPECT_NEAR(xi(transform(*parity({1}).table), 0.3), 0.7, 1e-12);
  EXPECT_NEAR(xi(m, 1.0), 0.0, 1e-15);
}

TEST(NoiseCorrelation, AgreesWithCoupling) {
  const auto f = majority(3);
  const auto est = noise_correlation_mc(f.query, 0.2, 100000, 17);
  EXPECT_NEAR(est.mean, 0.728, 3 * est.se);
}

TEST(TailEnergy, Examples) {
  const auto m = transform(*majority(3).table);
  EXPECT_NEAR(tail_energy(m, 2), 0.25, 1e-15);
  EXPECT_NEAR(tail_energy(m, 0), 1.0, 1e-12);
  EXPECT_EQ(tail_energy(transform(*parity({1, 2, 3}).table), 4), 0.0);
}

TEST(Operators, CommuteOnSpectra) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 9;
    const auto s = transform(n, oracle::random_real(n, rng));
    const int m = i % (n + 1);
    const double rho = 0.05 + 0.9 * (i % 10) / 10.0;
    const auto a = project_An(noise_operator(s, rho), m);
    const auto b = noise_operator(project_An(s, m), rho);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_EQ(a.terms()[k].set, b.terms()[k].set);
      EXPECT_EQ(a.terms()[k].coeff, b.terms()[k].coeff);
    }
  }
}

TEST(Operators, ContractionAndHypercontractivity) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 8;
    const auto f = oracle::random_real(n, rng);
    const auto s = transform(n, f);
    for (double rho = 0.1; rho < 0.95; rho += 0.2) {
      const auto tf = evaluate(noise_operator(s, rho));
      for (double p : {1.0, 1.5, 2.0, 3.0}) EXPECT_LE(lp_norm(tf, p), lp_norm(f, p) + 1e-9);
      EXPECT_LE(lp_norm(tf, 2.0), lp_norm(f, 1.0 + rho * rho) + 1e-9);
    }
  }
}

TEST(SpectrumJson, RoundTrip) {
  const auto s = transform(*majority(3).table);
  const auto j = to_json(s);
  EXPECT_EQ(j["coefficients"].size(), 4u);
  EXPECT_EQ(j["coefficients"][3]["set"], (std::vector<int>{1, 2, 3}));
  const auto back = spectrum_from_json(j);
  ASSERT_EQ(back.size(), s.size());
  for (const auto& t : s.terms()) EXPECT_EQ(back.coefficient(t.set), t.coeff);
}
