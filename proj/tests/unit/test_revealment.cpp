#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "cubeinf/revealment.hpp"
#include "cubeinf/zoo.hpp"

using namespace cubeinf;

namespace {

// Revealment of bit 1 under a uniformly random reading order, averaged over
// every order and every input; determination checked by enumeration.
double random_order_oracle(const TruthTable& f, Position bit) {
  const int n = f.n();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  double hits = 0, total = 0;
  do {
    for (Assignment x = 0; x < (Assignment{1} << n); ++x) {
      Assignment mask = 0;
      bool read = false;
      for (int j : order) {
        bool settled = true;
        for (Assignment y = 0; y < (Assignment{1} << n) && settled; ++y)
          if (((x ^ y) & mask) == 0 && f[y] != f[x]) settled = false;
        if (settled) break;
        mask |= Assignment{1} << j;
        read = read || j == static_cast<int>(bit - 1);
      }
      hits += read;
      total += 1;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return hits / total;
}

}  // namespace

TEST(Revealment, NaturalDictator) {
  const auto r = estimate_revealment(natural_algorithm(dictator(1).query), 2000, 4, 1);
  EXPECT_DOUBLE_EQ(r.per_bit[0].mean, 1.0);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_DOUBLE_EQ(r.per_bit[i].mean, 0.0);
  EXPECT_DOUBLE_EQ(r.bound(), 1.0);
}

TEST(Revealment, ParityReadsEverything) {
  const auto f = *parity({1, 2, 3}).table;
  for (const auto& alg : {natural_algorithm(parity({1, 2, 3}).query), random_order_algorithm(f)}) {
    const auto r = estimate_revealment(alg, 2000, 3, 2);
    for (const auto& e : r.per_bit) EXPECT_DOUBLE_EQ(e.mean, 1.0);
  }
}

TEST(Revealment, RandomOrderMajority3) {
  const auto f = *majority(3).table;
  const double oracle = random_order_oracle(f, 1);
  EXPECT_NEAR(oracle, 5.0 / 6.0, 1e-15);
  const auto r = estimate_revealment(random_order_algorithm(f), 100000, 3, 3);
  for (const auto& e : r.per_bit) EXPECT_NEAR(e.mean, oracle, 3 * e.se);
  EXPECT_EQ(r.samples, 100000u);
}

TEST(Revealment, TailBeyondTracked) {
  const auto r = estimate_revealment(natural_algorithm(sequential_selector().query), 20000, 4, 4);
  // max W > 4 iff the first two pairs both start with -1.
  const auto t = r.tail_beyond(4);
  EXPECT_NEAR(t.mean, 0.25, 3 * t.se);
  EXPECT_GE(r.bound(), r.sup_estimate);
  const auto j = to_json(r);
  EXPECT_EQ(j["per_bit"].size(), 4u);
}

TEST(Truncate, Dictator) {
  const auto f = dictator(1);
  const auto t = truncate_algorithm(natural_algorithm(f.query), f.query, 5);
  const auto r = estimate_revealment(t, 2000, 6, 5);
  EXPECT_DOUBLE_EQ(r.per_bit[0].mean, 1.0);
  for (std::size_t i = 1; i < 6; ++i) EXPECT_DOUBLE_EQ(r.per_bit[i].mean, 0.0);
}

TEST(Truncate, SelectorMatchesB2Exhaustively) {
  const auto f = sequential_selector();
  const auto t = truncate_algorithm(natural_algorithm(f.query), f.query, 2);
  const auto b2 = boolean_approx(f.query, 2);
  for (Assignment x = 0; x < 4; ++x) {
    for (int s = 0; s < 10; ++s) {
      LazyInput in(derive_seed(6, s));
      in.force(1, omega_at(x, 1));
      in.force(2, omega_at(x, 2));
      const auto out = eval_algorithm(t, in);
      EXPECT_EQ(*out.value, b2[x]);
      EXPECT_EQ(out.witness.bits, (std::vector<Position>{1, 2}));
    }
  }
}

TEST(Truncate, ParityOutsidePrefix) {
  const auto f = parity({1, 2, 3});
  const auto t = truncate_algorithm(natural_algorithm(f.query), f.query, 2);
  for (int s = 0; s < 50; ++s) {
    LazyInput in(derive_seed(7, s));
    EXPECT_EQ(*eval_algorithm(t, in).value, -1);
  }
}

TEST(Lift, DictatorUnchanged) {
  const auto f = dictator(1);
  for (int m = 1; m <= 4; ++m) {
    const auto lifted = lift_algorithm(truncate_algorithm(natural_algorithm(f.query), f.query, m), f.query);
    for (int s = 0; s < 20; ++s) {
      LazyInput in(derive_seed(8, s));
      const auto out = eval_algorithm(lifted, in);
      EXPECT_EQ(*out.value, in.bit(1));
      EXPECT_EQ(out.witness.bits, (std::vector<Position>{1}));
    }
  }
}

TEST(Lift, SelectorAgreesWithDirectEvaluation) {
  const auto f = sequential_selector();
  const auto alg2 = truncate_algorithm(natural_algorithm(f.query), f.query, 2);
  const auto lifted = lift_algorithm(alg2, f.query);
  for (int s = 0; s < 10000; ++s) {
    LazyInput a(derive_seed(9, s)), b(derive_seed(9, s));
    const auto got = eval_algorithm(lifted, a);
    const auto want = eval_query(f.query, b);
    ASSERT_TRUE(got.determined());
    EXPECT_EQ(*got.value, *want.value);
    if (want.witness.max_w <= 2) {
      LazyInput c(derive_seed(9, s));
      EXPECT_EQ(got.witness.bits, eval_algorithm(alg2, c).witness.bits);
    }
  }
}

TEST(Transfer, TruncatedRevealmentBoundedByBase) {
  const auto f = sequential_selector();
  const auto base_alg = natural_algorithm(f.query);
  const auto base = estimate_revealment(base_alg, 20000, 6, 10);
  const auto trunc = estimate_revealment(truncate_algorithm(base_alg, f.query, 4), 20000, 6, 11);
  EXPECT_TRUE(all_passed(revealment_transfer_check("truncate", trunc, base, base.tail_beyond(4))));
}

TEST(RevealmentInequality, Majority3AndDictator) {
  const auto m = *majority(3).table;
  const auto rev = estimate_revealment(random_order_algorithm(m), 50000, 3, 12);
  const auto reports = revealment_inequality_audit(transform(m), rev);
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_TRUE(all_passed(reports));
  EXPECT_NEAR(reports[0].lhs, 0.75, 1e-12);
  EXPECT_NEAR(reports[2].lhs, 0.25, 1e-12);
  const auto d = *dictator(1).table;
  const auto rd = revealment_inequality_audit(transform(d), estimate_revealment(natural_algorithm(dictator(1).query), 1000, 1, 1));
  ASSERT_EQ(rd.size(), 1u);
  EXPECT_TRUE(rd[0].passed);
  EXPECT_NEAR(rd[0].lhs, 1.0, 1e-12);
  EXPECT_NEAR(rd[0].rhs, 1.0, 1e-12);
}
