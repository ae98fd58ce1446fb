#pragma once

// Enumeration of small edge-ordered digraphs for exhaustive voter checks.

#include <algorithm>
#include <vector>

#include "cubeinf/voter.hpp"

namespace testgraphs {

using cubeinf::voter::Edge;
using cubeinf::voter::OrderedDigraph;

/// All ordered pairs (a, b), a != b, in lexicographic order.
inline std::vector<Edge> all_edges(int V) {
  std::vector<Edge> out;
  for (int a = 0; a < V; ++a)
    for (int b = 0; b < V; ++b)
      if (a != b) out.push_back({a, b});
  return out;
}

/// Strongly connected simple digraphs on 2..max_v vertices with at most
/// max_e edges, each edge set in lexicographic firing order.
inline std::vector<OrderedDigraph> strongly_connected_graphs(int max_v, int max_e) {
  std::vector<OrderedDigraph> out;
  for (int V = 2; V <= max_v; ++V) {
    const auto pool = all_edges(V);
    const auto m = static_cast<unsigned>(pool.size());
    for (unsigned mask = 1; mask < (1U << m); ++mask) {
      if (__builtin_popcount(mask) > max_e) continue;
      std::vector<Edge> edges;
      for (unsigned j = 0; j < m; ++j)
        if (mask >> j & 1U) edges.push_back(pool[j]);
      OrderedDigraph g(V, edges);
      if (g.strongly_connected()) out.push_back(std::move(g));
    }
  }
  return out;
}

inline OrderedDigraph reversed_order(const OrderedDigraph& g) {
  auto edges = g.edges();
  std::reverse(edges.begin(), edges.end());
  return OrderedDigraph(g.vertex_count(), edges);
}

}  // namespace testgraphs
