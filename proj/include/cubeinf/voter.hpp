#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "cubeinf/audit.hpp"
#include "cubeinf/bitstream.hpp"
#include "cubeinf/montecarlo.hpp"
#include "cubeinf/query.hpp"

namespace cubeinf::voter {

using Vertex = int;

struct Edge {
  Vertex origin = 0;
  Vertex target = 0;
};

/// Directed graph whose edges e_1..e_n are numbered in firing order.
class OrderedDigraph {
 public:
  /// Checks vertex ranges and self-loops. Strong connectivity is checked by
  /// strongly_connected(); parse() and load() require it.
  OrderedDigraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  /// Edge e_j for j = 1..n.
  const Edge& edge(std::size_t j) const { return edges_.at(j - 1); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Indices j (ascending) of the edges whose target is v.
  const std::vector<std::size_t>& edges_into(Vertex v) const { return into_.at(static_cast<std::size_t>(v)); }

  bool strongly_connected() const;

  /// Text format: "V <count>" then one "<origin> <target>" line per edge,
  /// 0-based. Blank lines and lines starting with '#' are skipped.
  static OrderedDigraph parse(std::istream& in);
  static OrderedDigraph load(const std::string& path);

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> into_;
};

/// 0 -> 1 -> ... -> L-1 -> 0 with edges numbered along the cycle.
OrderedDigraph directed_cycle(int length);

using Matrix = std::vector<std::vector<double>>;

/// Black vertex set after `step` forward steps.
struct VoterState {
  std::vector<char> black;
  std::uint64_t step = 0;

  std::size_t black_count() const;
};

VoterState initial_state(const OrderedDigraph& g, const std::vector<Vertex>& black);

/// Step k = state.step + 1 fires edge j = ((k-1) mod n) + 1; coin +1 copies
/// the origin's colour onto the target.
void forward_step(VoterState& state, const OrderedDigraph& g, int coin);

/// Runs `steps` forward steps reading coin k from bits.bit(k).
void forward_simulate(VoterState& state, const OrderedDigraph& g, BitSource& bits, std::uint64_t steps);

/// Steps until every vertex has one colour. true = all black, false = all
/// white, nullopt = not fixated within max_steps.
std::optional<bool> forward_fixation(VoterState state, const OrderedDigraph& g, BitSource& bits,
                                     std::uint64_t max_steps);

/// Vertex at time 0 whose initial colour v carries at forward time T.
Vertex backward_trace(const OrderedDigraph& g, Vertex v, std::uint64_t T, BitSource& bits);

/// One full backward cycle: product of the per-edge kernels in reverse edge order.
Matrix backward_cycle_matrix(const OrderedDigraph& g);

/// Left fixed vector of the cycle matrix by power iteration.
std::vector<double> stationary(const OrderedDigraph& g, double tolerance = 1e-13,
                               std::size_t max_iterations = 10'000'000);

/// sup_v sum_w sum_k |increasing paths v->w of length k| / 2^k.
double zeta(const OrderedDigraph& g);

/// Smallest k with every row of P^k within total variation eps of pi.
std::size_t mixing_time(const OrderedDigraph& g, double eps = 0.01, std::size_t max_k = 1'000'000);
/// Largest row total-variation distance of P^k from pi.
double mixing_distance(const OrderedDigraph& g, std::size_t k);

/// (max pi)(1 + 2 zeta).
double revealment_bound(const OrderedDigraph& g);

/// Scans cycles 0, 1, ... in order until the composed per-cycle source maps
/// are constant; returns rho.
Querier rho_reference(const OrderedDigraph& g);

struct RhoTrace {
  std::uint64_t u = 0;
  std::uint64_t start_cycle = 0;
  /// Cycle index at which all walkers share one vertex; -1 if never.
  std::int64_t coalescence_cycle = -1;
  bool fallback = false;
  std::size_t queries_before_fallback = 0;
  Vertex rho = 0;
};

/// Default window sizes (in cycles): N = M = 50 |E|.
std::uint64_t default_window(const OrderedDigraph& g);

/// One run of A_{N,M} inside `ctx`.
RhoTrace run_rho(const OrderedDigraph& g, std::uint64_t N, std::uint64_t M, QueryContext& ctx);

QueryAlgorithm rho_algorithm(const OrderedDigraph& g, std::uint64_t N, std::uint64_t M);

/// Forward colour at (v, T) versus the initial colour at the backward-walk
/// endpoint, over random (A0, v, T); returns the number of mismatches.
std::size_t duality_mismatches(const OrderedDigraph& g, std::size_t trajectories, std::uint64_t seed,
                               std::uint64_t max_time);

struct VoterRevealmentAudit {
  AuditReport report;
  double max_pi = 0.0;
  double zeta = 0.0;
  double bound = 0.0;
  std::vector<Estimate> per_bit;
  double sup = 0.0;
  double sup_se = 0.0;
  Position sup_bit = 0;
  double main_phase_sup = 0.0;
  double failure_rate = 0.0;    // no coalescence before time 0
  double late_coalescence = 0.0;  // coalesced only after passing below N
  double window_slack = 0.0;    // TV distance of P^N from pi
  std::size_t mixing_time = 0;  // K_eps at eps = 0.01
  std::uint64_t N = 0, M = 0;
  std::size_t samples = 0;
  std::size_t undetermined = 0;
};

/// Estimates the revealment of A_{N,M} on bits 1..track and checks
/// sup <= (max pi)(1 + 2 zeta) + 3 sigma + failure rate + window slack.
VoterRevealmentAudit revealment_bound_audit(const OrderedDigraph& g, std::uint64_t N, std::uint64_t M,
                                            std::size_t samples, Position track, std::uint64_t seed);

struct StabilityResult {
  AuditReport report;
  Estimate black;
  double predicted = 0.0;
  std::size_t not_fixated = 0;
};

/// P(fixate black) from A0 versus pi(A0), by forward simulation.
StabilityResult initial_state_stability_check(const OrderedDigraph& g, const std::vector<Vertex>& black,
                                              std::size_t samples, std::uint64_t seed,
                                              std::uint64_t max_steps = 0);

/// 2 1{rho in B} - 1 as a query function.
QueryFunction rho_indicator(const OrderedDigraph& g, const std::vector<Vertex>& B, std::string name = "rho-in-B");

struct SweepMember {
  std::string name;
  OrderedDigraph graph;
  std::vector<Vertex> B;
};

struct SweepRow {
  std::string name;
  int vertices = 0;
  double epsilon = 0.0;
  Estimate xi;
  double bound = 0.0;
};

std::vector<SweepRow> voter_sensitivity_sweep(const std::vector<SweepMember>& family,
                                              const std::vector<double>& epsilons, std::size_t samples,
                                              std::uint64_t seed);

}  // namespace cubeinf::voter
