#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "../graphs.hpp"
#include "../oracles.hpp"
#include "cubeinf/voter.hpp"

using namespace cubeinf;
using namespace cubeinf::voter;

namespace {

OrderedDigraph two_cycle() { return OrderedDigraph(2, {{0, 1}, {1, 0}}); }

oracle::EdgeList edge_list(const OrderedDigraph& g) {
  oracle::EdgeList out;
  for (const auto& e : g.edges()) out.emplace_back(e.origin, e.target);
  return out;
}

// Every edge sequence of length 1..max_len over the ordered pairs of [V].
void for_each_sequence(int V, int max_len, const std::function<void(const std::vector<Edge>&)>& visit) {
  const auto pool = testgraphs::all_edges(V);
  std::vector<Edge> seq;
  std::function<void()> rec = [&] {
    if (!seq.empty()) visit(seq);
    if (static_cast<int>(seq.size()) == max_len) return;
    for (const auto& e : pool) {
      seq.push_back(e);
      rec();
      seq.pop_back();
    }
  };
  rec();
}

}  // namespace

TEST(Graph, Validation) {
  EXPECT_THROW(OrderedDigraph(2, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(OrderedDigraph(2, {{0, 2}}), std::invalid_argument);
  EXPECT_THROW(OrderedDigraph(0, {}), std::invalid_argument);
  std::istringstream one("V 1\n");
  EXPECT_THROW(OrderedDigraph::parse(one), std::invalid_argument);
  std::istringstream not_sc("V 2\n0 1\n");
  EXPECT_THROW(OrderedDigraph::parse(not_sc), std::invalid_argument);
  std::istringstream bad("V 2\n0 x\n");
  EXPECT_THROW(OrderedDigraph::parse(bad), std::invalid_argument);
  std::istringstream good("# two-cycle\nV 2\n\n0 1\n1 0\n");
  const auto g = OrderedDigraph::parse(good);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edge(2).origin, 1);
  EXPECT_THROW(OrderedDigraph::load("/nonexistent/graph.txt"), std::invalid_argument);
}

TEST(CycleMatrix, TwoCycle) {
  const auto m = backward_cycle_matrix(two_cycle());
  EXPECT_NEAR(m[0][0], 0.75, 1e-12);
  EXPECT_NEAR(m[0][1], 0.25, 1e-12);
  EXPECT_NEAR(m[1][0], 0.5, 1e-12);
  EXPECT_NEAR(m[1][1], 0.5, 1e-12);
}

TEST(CycleMatrix, NoIncomingEdgeGivesIdentityRow) {
  const OrderedDigraph g(3, {{0, 1}, {1, 0}});
  const auto m = backward_cycle_matrix(g);
  EXPECT_EQ(m[2], (std::vector<double>{0, 0, 1}));
}

TEST(CycleMatrix, MatchesProductOracleAndIsStochastic) {
  for (const auto& g : testgraphs::strongly_connected_graphs(4, 5)) {
    const auto m = backward_cycle_matrix(g);
    const auto ref = oracle::cycle_matrix(g.vertex_count(), edge_list(g));
    for (int i = 0; i < g.vertex_count(); ++i) {
      double row = 0;
      for (int j = 0; j < g.vertex_count(); ++j) {
        EXPECT_NEAR(m[i][j], ref[i][j], 1e-12);
        row += m[i][j];
      }
      EXPECT_NEAR(row, 1.0, 1e-12);
    }
  }
}

TEST(Stationary, TwoCycleAndResidual) {
  const auto pi = stationary(two_cycle());
  EXPECT_NEAR(pi[0], 2.0 / 3, 1e-12);
  EXPECT_NEAR(pi[1], 1.0 / 3, 1e-12);
  for (const auto& g : testgraphs::strongly_connected_graphs(4, 5)) {
    const auto p = stationary(g);
    const auto m = backward_cycle_matrix(g);
    double sum = 0;
    for (int j = 0; j < g.vertex_count(); ++j) {
      EXPECT_GE(p[j], 0.0);
      sum += p[j];
      double pm = 0;
      for (int i = 0; i < g.vertex_count(); ++i) pm += p[i] * m[i][j];
      EXPECT_NEAR(pm, p[j], 1e-12);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Stationary, MatchesLinearSolveOracle) {
  for (const auto& g : testgraphs::strongly_connected_graphs(4, 5)) {
    const int V = g.vertex_count();
    const auto P = oracle::cycle_matrix(V, edge_list(g));
    // pi (P - I) = 0 with the last equation replaced by sum pi = 1.
    std::vector<std::vector<double>> A(V, std::vector<double>(V + 1, 0.0));
    for (int j = 0; j < V; ++j)
      for (int i = 0; i < V; ++i) A[j][i] = P[i][j] - (i == j ? 1.0 : 0.0);
    for (int i = 0; i < V; ++i) A[V - 1][i] = 1.0;
    A[V - 1][V] = 1.0;
    for (int c = 0; c < V; ++c) {
      int piv = c;
      for (int r = c + 1; r < V; ++r)
        if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
      std::swap(A[c], A[piv]);
      for (int r = 0; r < V; ++r)
        if (r != c) {
          const double f = A[r][c] / A[c][c];
          for (int k = c; k <= V; ++k) A[r][k] -= f * A[c][k];
        }
    }
    const auto pi = stationary(g);
    for (int i = 0; i < V; ++i) EXPECT_NEAR(pi[i], A[i][V] / A[i][i], 1e-12);
  }
}

TEST(Zeta, Examples) {
  EXPECT_NEAR(zeta(two_cycle()), 0.75, 1e-12);
  EXPECT_NEAR(oracle::zeta(2, {{0, 1}, {1, 0}}), 0.75, 1e-15);
  EXPECT_NEAR(zeta(OrderedDigraph(2, {{0, 1}})), 0.5, 1e-15);
}

TEST(Zeta, DpMatchesPathEnumerationExhaustively) {
  std::size_t graphs = 0;
  for (int V = 2; V <= 3; ++V)
    for_each_sequence(V, 5, [&](const std::vector<Edge>& seq) {
      const OrderedDigraph g(V, seq);
      const double z = zeta(g);
      ASSERT_NEAR(z, oracle::zeta(V, edge_list(g)), 1e-12);
      ASSERT_GE(z, 0.5);
      ++graphs;
    });
  for (const auto& g : testgraphs::strongly_connected_graphs(4, 5)) {
    EXPECT_NEAR(zeta(g), oracle::zeta(4, edge_list(g)), 1e-12);
    const auto r = testgraphs::reversed_order(g);
    EXPECT_NEAR(zeta(r), oracle::zeta(r.vertex_count(), edge_list(r)), 1e-12);
    ++graphs;
  }
  EXPECT_GT(graphs, 9000u);
}

TEST(RevealmentBound, TwoCycle) { EXPECT_NEAR(revealment_bound(two_cycle()), 5.0 / 3, 1e-12); }

TEST(RevealmentBound, ShrinksOnCycles) {
  double prev = 1e9;
  for (int L : {4, 8, 16, 32}) {
    const double b = revealment_bound(directed_cycle(L));
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(Forward, StepFiresEdgesInOrder) {
  const auto g = two_cycle();
  auto s = initial_state(g, {0});
  forward_step(s, g, -1);  // edge 1, coin tails: no copy
  EXPECT_EQ(s.black_count(), 1u);
  forward_step(s, g, 1);  // edge 2: 1 -> 0 copies white onto 0
  EXPECT_EQ(s.black_count(), 0u);
  EXPECT_EQ(s.step, 2u);
}

TEST(Duality, SmallGraphsAndCycles) {
  for (const auto& g : testgraphs::strongly_connected_graphs(3, 4)) EXPECT_EQ(duality_mismatches(g, 200, 1, 40), 0u);
  for (int L : {2, 5, 9}) EXPECT_EQ(duality_mismatches(directed_cycle(L), 200, 2, 200), 0u);
}

TEST(Rho, FixationConsistency) {
  for (const auto& g : {two_cycle(), directed_cycle(4), OrderedDigraph(3, {{0, 1}, {1, 2}, {2, 0}, {1, 0}})}) {
    const auto N = default_window(g);
    const auto alg = rho_algorithm(g, N, N);
    std::vector<Vertex> all;
    for (Vertex v = 0; v < g.vertex_count(); ++v) all.push_back(v);
    for (int s = 0; s < 200; ++s) {
      LazyInput bits(derive_seed(30, s));
      const auto out = eval_algorithm(alg, bits, derive_seed(31, s));
      ASSERT_TRUE(out.determined());
      const Vertex rho = *out.value;
      std::vector<Vertex> rest;
      for (Vertex v : all)
        if (v != rho) rest.push_back(v);
      LazyInput again(derive_seed(30, s));
      EXPECT_EQ(forward_fixation(initial_state(g, {rho}), g, again, 1'000'000), std::optional<bool>(true));
      EXPECT_EQ(forward_fixation(initial_state(g, rest), g, again, 1'000'000), std::optional<bool>(false));
    }
  }
}

TEST(Rho, AlgorithmAgreesWithReference) {
  const auto g = directed_cycle(5);
  const auto N = default_window(g);
  const auto alg = rho_algorithm(g, N, N);
  const QueryAlgorithm ref{"ref", rho_reference(g)};
  for (int s = 0; s < 200; ++s) {
    LazyInput a(derive_seed(40, s)), b(derive_seed(40, s));
    EXPECT_EQ(*eval_algorithm(alg, a, derive_seed(41, s)).value, *eval_algorithm(ref, b).value);
  }
}

TEST(Rho, TraceCoalescesWithinWindow) {
  const auto g = directed_cycle(4);
  const auto N = default_window(g);
  for (int s = 0; s < 100; ++s) {
    LazyInput bits(derive_seed(50, s));
    QueryContext ctx(bits, derive_seed(51, s));
    const auto t = run_rho(g, N, N, ctx);
    EXPECT_FALSE(t.fallback);
    EXPECT_GE(t.coalescence_cycle, 0);
    EXPECT_LE(static_cast<std::uint64_t>(t.coalescence_cycle), t.start_cycle);
    EXPECT_LE(t.u, N);
  }
  EXPECT_THROW(rho_algorithm(g, 0, 1), std::invalid_argument);
}

TEST(Stability, Examples) {
  const auto g = two_cycle();
  const auto full = initial_state_stability_check(g, {0, 1}, 1000, 1);
  EXPECT_DOUBLE_EQ(full.black.mean, 1.0);
  EXPECT_TRUE(full.report.passed);
  const auto none = initial_state_stability_check(g, {}, 1000, 1);
  EXPECT_DOUBLE_EQ(none.black.mean, 0.0);
  const auto a = initial_state_stability_check(g, {0}, 100000, 2);
  EXPECT_NEAR(a.predicted, 2.0 / 3, 1e-12);
  EXPECT_TRUE(a.report.passed) << a.black.mean;
  EXPECT_EQ(a.not_fixated, 0u);
}

TEST(Stability, FixationAlwaysReached) {
  for (const auto& g : testgraphs::strongly_connected_graphs(3, 4)) {
    const auto r = initial_state_stability_check(g, {0}, 2000, 3);
    EXPECT_LE(r.not_fixated, 2u);
    // Dozens of graphs share one seed: 4 sigma keeps the family-wise false
    // alarm rate near the single-check 3 sigma level.
    EXPECT_LE(std::abs(r.black.mean - r.predicted), 4 * r.black.se + 1e-9);
  }
}

TEST(Audit, CycleFourPasses) {
  const auto g = directed_cycle(4);
  const auto N = default_window(g);
  const auto a = revealment_bound_audit(g, N, N, 2000, 64, 7);
  EXPECT_TRUE(a.report.passed);
  EXPECT_NEAR(a.bound, a.max_pi * (1 + 2 * a.zeta), 1e-12);
  for (const auto& e : a.per_bit) EXPECT_LE(e.mean, 1.0);
  EXPECT_LT(a.failure_rate, 1e-3);
}

TEST(Sweep, DegenerateIndicator) {
  const auto g = directed_cycle(4);
  const auto rows = voter_sensitivity_sweep({{"all", g, {0, 1, 2, 3}}, {"half", g, {0, 1}}}, {0.0, 0.3}, 2000, 3);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_DOUBLE_EQ(rows[0].xi.mean, 0.0);
  EXPECT_DOUBLE_EQ(rows[1].xi.mean, 0.0);
  // At eps = 0 Xi is the variance of the indicator: 1 - (2 pi(B) - 1)^2.
  const auto pi = stationary(g);
  const double m = 2 * (pi[0] + pi[1]) - 1;
  EXPECT_NEAR(rows[2].xi.mean, 1 - m * m, 3 * rows[2].xi.se + 0.02);
}
