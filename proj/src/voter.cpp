#include "cubeinf/voter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cubeinf/inequalities.hpp"
#include "cubeinf/kernels.hpp"

namespace cubeinf::voter {

OrderedDigraph::OrderedDigraph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count < 1) throw std::invalid_argument("graph: vertex count must be positive");
  into_.resize(static_cast<std::size_t>(vertex_count));
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    const auto& e = edges_[j];
    if (e.origin < 0 || e.origin >= vertex_count || e.target < 0 || e.target >= vertex_count)
      throw std::invalid_argument("graph: edge " + std::to_string(j + 1) + " has a vertex out of range");
    if (e.origin == e.target) throw std::invalid_argument("graph: edge " + std::to_string(j + 1) + " is a self-loop");
    into_[static_cast<std::size_t>(e.target)].push_back(j + 1);
  }
}

bool OrderedDigraph::strongly_connected() const {
  const auto V = static_cast<std::size_t>(vertex_count_);
  auto reaches_all = [&](bool forward) {
    std::vector<char> seen(V, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const auto& e : edges_) {
        const Vertex from = forward ? e.origin : e.target;
        const Vertex to = forward ? e.target : e.origin;
        if (from == v && !seen[static_cast<std::size_t>(to)]) {
          seen[static_cast<std::size_t>(to)] = 1;
          stack.push_back(to);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reaches_all(true) && reaches_all(false);
}

OrderedDigraph OrderedDigraph::parse(std::istream& in) {
  std::string line;
  int V = -1;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    if (V < 0) {
      if (first != "V" || !(ls >> V))
        throw std::invalid_argument("graph: line " + std::to_string(line_no) + ": expected 'V <count>'");
      continue;
    }
    Edge e;
    try {
      std::size_t used = 0;
      e.origin = std::stoi(first, &used);
      if (used != first.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("graph: line " + std::to_string(line_no) + ": expected '<origin> <target>'");
    }
    if (!(ls >> e.target))
      throw std::invalid_argument("graph: line " + std::to_string(line_no) + ": expected '<origin> <target>'");
    edges.push_back(e);
  }
  if (V < 0) throw std::invalid_argument("graph: missing 'V <count>' header");
  if (V < 2) throw std::invalid_argument("graph: need at least 2 vertices");
  OrderedDigraph g(V, std::move(edges));
  if (!g.strongly_connected()) throw std::invalid_argument("graph: not strongly connected");
  return g;
}

OrderedDigraph OrderedDigraph::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("graph: cannot read file '" + path + "'");
  return parse(in);
}

OrderedDigraph directed_cycle(int length) {
  if (length < 2) throw std::invalid_argument("directed_cycle: length must be >= 2");
  std::vector<Edge> edges;
  for (int v = 0; v < length; ++v) edges.push_back({v, (v + 1) % length});
  return OrderedDigraph(length, std::move(edges));
}

std::size_t VoterState::black_count() const {
  return static_cast<std::size_t>(std::count(black.begin(), black.end(), 1));
}

VoterState initial_state(const OrderedDigraph& g, const std::vector<Vertex>& black) {
  VoterState s;
  s.black.assign(static_cast<std::size_t>(g.vertex_count()), 0);
  for (Vertex v : black) {
    if (v < 0 || v >= g.vertex_count()) throw std::invalid_argument("initial state: vertex out of range");
    s.black[static_cast<std::size_t>(v)] = 1;
  }
  return s;
}

namespace {

std::size_t edge_at_time(const OrderedDigraph& g, std::uint64_t k) { return ((k - 1) % g.edge_count()) + 1; }

}  // namespace

void forward_step(VoterState& state, const OrderedDigraph& g, int coin) {
  if (g.edge_count() == 0) throw std::invalid_argument("forward_step: graph has no edges");
  const auto& e = g.edge(edge_at_time(g, ++state.step));
  if (coin == 1) state.black[static_cast<std::size_t>(e.target)] = state.black[static_cast<std::size_t>(e.origin)];
}

void forward_simulate(VoterState& state, const OrderedDigraph& g, BitSource& bits, std::uint64_t steps) {
  for (std::uint64_t i = 0; i < steps; ++i) forward_step(state, g, bits.bit(state.step + 1));
}

std::optional<bool> forward_fixation(VoterState state, const OrderedDigraph& g, BitSource& bits,
                                     std::uint64_t max_steps) {
  const std::size_t V = state.black.size();
  std::size_t count = state.black_count();
  for (std::uint64_t i = 0;; ++i) {
    if (count == 0) return false;
    if (count == V) return true;
    if (i == max_steps) return std::nullopt;
    const std::uint64_t k = state.step + 1;
    const auto& e = g.edge(edge_at_time(g, k));
    auto& t = state.black[static_cast<std::size_t>(e.target)];
    const char before = t;
    forward_step(state, g, bits.bit(k));
    count = count + static_cast<std::size_t>(t) - static_cast<std::size_t>(before);
  }
}

Vertex backward_trace(const OrderedDigraph& g, Vertex v, std::uint64_t T, BitSource& bits) {
  for (std::uint64_t k = T; k >= 1; --k) {
    const auto& e = g.edge(edge_at_time(g, k));
    if (e.target == v && bits.bit(k) == 1) v = e.origin;
  }
  return v;
}

namespace {

Matrix identity(std::size_t n) {
  Matrix m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i][k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += aik * b[k][j];
    }
  return c;
}

double max_row_tv(const Matrix& p, const std::vector<double>& pi) {
  double worst = 0.0;
  for (const auto& row : p) {
    double tv = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) tv += std::abs(row[j] - pi[j]);
    worst = std::max(worst, 0.5 * tv);
  }
  return worst;
}

}  // namespace

Matrix backward_cycle_matrix(const OrderedDigraph& g) {
  const auto V = static_cast<std::size_t>(g.vertex_count());
  // Row-vector convention: the walker undoes e_n first, so the cycle kernel
  // is M_{e_n} M_{e_{n-1}} ... M_{e_1}. Apply each edge to the columns.
  Matrix m = identity(V);
  for (std::size_t j = g.edge_count(); j >= 1; --j) {
    const auto& e = g.edge(j);
    const auto t = static_cast<std::size_t>(e.target);
    const auto o = static_cast<std::size_t>(e.origin);
    for (auto& row : m) {
      const double half = 0.5 * row[t];
      row[t] -= half;
      row[o] += half;
    }
  }
  return m;
}

std::vector<double> stationary(const OrderedDigraph& g, double tolerance, std::size_t max_iterations) {
  const auto P = backward_cycle_matrix(g);
  const std::size_t V = P.size();
  std::vector<double> pi(V, 1.0 / static_cast<double>(V));
  std::vector<double> next(V);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < V; ++i)
      for (std::size_t j = 0; j < V; ++j) next[j] += pi[i] * P[i][j];
    double sum = 0.0;
    for (double x : next) sum += x;
    double diff = 0.0;
    for (std::size_t j = 0; j < V; ++j) {
      next[j] /= sum;
      diff += std::abs(next[j] - pi[j]);
    }
    pi.swap(next);
    if (diff < tolerance) return pi;
  }
  throw std::runtime_error("stationary: power iteration did not converge");
}

double zeta(const OrderedDigraph& g) {
  const auto V = static_cast<std::size_t>(g.vertex_count());
  double best = 0.0;
  std::vector<double> weight(V);
  for (std::size_t v = 0; v < V; ++v) {
    std::fill(weight.begin(), weight.end(), 0.0);
    weight[v] = 1.0;
    for (const auto& e : g.edges()) weight[static_cast<std::size_t>(e.target)] += 0.5 * weight[static_cast<std::size_t>(e.origin)];
    double sum = -1.0;
    for (double w : weight) sum += w;
    best = std::max(best, sum);
  }
  return best;
}

std::size_t mixing_time(const OrderedDigraph& g, double eps, std::size_t max_k) {
  const auto P = backward_cycle_matrix(g);
  const auto pi = stationary(g);
  Matrix power = P;
  for (std::size_t k = 1; k <= max_k; ++k) {
    if (max_row_tv(power, pi) < eps) return k;
    power = multiply(power, P);
  }
  throw std::runtime_error("mixing_time: not mixed within the iteration cap");
}

double mixing_distance(const OrderedDigraph& g, std::size_t k) {
  const auto pi = stationary(g);
  Matrix base = backward_cycle_matrix(g);
  Matrix result = identity(base.size());
  for (std::size_t e = k; e > 0; e >>= 1) {
    if (e & 1U) result = multiply(result, base);
    base = multiply(base, base);
  }
  return max_row_tv(result, pi);
}

double revealment_bound(const OrderedDigraph& g) {
  const auto pi = stationary(g);
  return *std::max_element(pi.begin(), pi.end()) * (1.0 + 2.0 * zeta(g));
}

Querier rho_reference(const OrderedDigraph& g) {
  return [g](QueryContext& ctx) {
    const auto V = static_cast<std::size_t>(g.vertex_count());
    const std::size_t n = g.edge_count();
    std::vector<Vertex> endpoint(V), src(V), next(V);
    for (std::size_t u = 0; u < V; ++u) endpoint[u] = static_cast<Vertex>(u);
    for (std::uint64_t c = 0;; ++c) {
      if (std::all_of(endpoint.begin(), endpoint.end(), [&](Vertex w) { return w == endpoint[0]; }))
        return endpoint[0];
      for (std::size_t u = 0; u < V; ++u) src[u] = static_cast<Vertex>(u);
      for (std::size_t j = 1; j <= n; ++j) {
        const auto& e = g.edge(j);
        if (ctx.query(c * n + j) == 1) src[static_cast<std::size_t>(e.target)] = src[static_cast<std::size_t>(e.origin)];
      }
      for (std::size_t u = 0; u < V; ++u) next[u] = endpoint[static_cast<std::size_t>(src[u])];
      endpoint.swap(next);
    }
  };
}

std::uint64_t default_window(const OrderedDigraph& g) { return 50 * static_cast<std::uint64_t>(g.edge_count()); }

RhoTrace run_rho(const OrderedDigraph& g, std::uint64_t N, std::uint64_t M, QueryContext& ctx) {
  if (N < 1 || M < 1) throw std::invalid_argument("rho_algorithm: N and M must be >= 1");
  const auto V = static_cast<std::size_t>(g.vertex_count());
  const std::uint64_t n = g.edge_count();
  RhoTrace trace;
  trace.u = ctx.aux_below(M + 1);
  trace.start_cycle = N + trace.u;

  std::vector<Vertex> walkers(V);
  for (std::size_t v = 0; v < V; ++v) walkers[v] = static_cast<Vertex>(v);
  std::vector<std::size_t> processed(V);
  std::vector<std::pair<Vertex, std::size_t>> stack;

  for (std::uint64_t c = trace.start_cycle; c-- > 0;) {
    const std::uint64_t base = c * n;
    // Step 2 cascade: every edge into a walker, then for each "yes" edge e
    // every edge into its origin preceding e, and so on.
    std::fill(processed.begin(), processed.end(), 0);
    for (Vertex w : walkers) stack.emplace_back(w, n + 1);
    while (!stack.empty()) {
      const auto [v, bound] = stack.back();
      stack.pop_back();
      auto& done = processed[static_cast<std::size_t>(v)];
      if (bound <= done) continue;
      for (std::size_t idx : g.edges_into(v)) {
        if (idx < done) continue;
        if (idx >= bound) break;
        if (ctx.query(base + idx) == 1) stack.emplace_back(g.edge(idx).origin, idx);
      }
      done = bound;
    }
    // Undo the cycle's edges in reverse order using the revealed coins.
    for (auto& w : walkers) {
      std::size_t bound = n + 1;
      while (true) {
        const auto& into = g.edges_into(w);
        std::size_t used = 0;
        for (auto it = into.rbegin(); it != into.rend(); ++it)
          if (*it < bound && ctx.known(base + *it) == 1) {
            used = *it;
            break;
          }
        if (used == 0) break;
        w = g.edge(used).origin;
        bound = used;
      }
    }
    std::sort(walkers.begin(), walkers.end());
    walkers.erase(std::unique(walkers.begin(), walkers.end()), walkers.end());
    if (walkers.size() == 1 && trace.coalescence_cycle < 0) trace.coalescence_cycle = static_cast<std::int64_t>(c);
  }

  if (walkers.size() == 1) {
    trace.rho = walkers.front();
    trace.queries_before_fallback = ctx.spent();
    return trace;
  }
  trace.fallback = true;
  trace.queries_before_fallback = ctx.spent();
  trace.rho = rho_reference(g)(ctx);
  return trace;
}

QueryAlgorithm rho_algorithm(const OrderedDigraph& g, std::uint64_t N, std::uint64_t M) {
  if (N < 1 || M < 1) throw std::invalid_argument("rho_algorithm: N and M must be >= 1");
  return QueryAlgorithm{"rho/A(" + std::to_string(N) + "," + std::to_string(M) + ")",
                        [g, N, M](QueryContext& ctx) { return run_rho(g, N, M, ctx).rho; }};
}

std::size_t duality_mismatches(const OrderedDigraph& g, std::size_t trajectories, std::uint64_t seed,
                               std::uint64_t max_time) {
  if (max_time == 0) throw std::invalid_argument("duality: max_time must be >= 1");
  const auto V = g.vertex_count();
  const auto counts = kernels::map_samples<std::size_t>(trajectories, [&](std::size_t s) {
    LazyInput bits(derive_seed(seed, s, 0));
    const std::uint64_t aux = derive_seed(seed, s, 3);
    std::vector<Vertex> black;
    for (Vertex v = 0; v < V; ++v)
      if (fair_bit_at(aux, static_cast<Position>(v) + 1) == 1) black.push_back(v);
    const auto A0 = initial_state(g, black);
    auto state = A0;
    const std::uint64_t T = 1 + word_at(aux, 0) % max_time;
    forward_simulate(state, g, bits, T);
    std::size_t bad = 0;
    for (Vertex v = 0; v < V; ++v) {
      const Vertex root = backward_trace(g, v, T, bits);
      if (state.black[static_cast<std::size_t>(v)] != A0.black[static_cast<std::size_t>(root)]) ++bad;
    }
    return bad;
  });
  std::size_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

namespace {

struct RhoRecord {
  bool determined = false;
  bool fallback = false;
  bool late = false;
  std::vector<Position> hits;       // tracked bits queried
  std::vector<Position> main_hits;  // tracked bits queried before any fallback
};

}  // namespace

VoterRevealmentAudit revealment_bound_audit(const OrderedDigraph& g, std::uint64_t N, std::uint64_t M,
                                            std::size_t samples, Position track, std::uint64_t seed) {
  if (track == 0) throw std::invalid_argument("revealment audit: track must be >= 1");
  VoterRevealmentAudit a;
  a.N = N;
  a.M = M;
  const auto pi = stationary(g);
  a.max_pi = *std::max_element(pi.begin(), pi.end());
  a.zeta = zeta(g);
  a.bound = a.max_pi * (1.0 + 2.0 * a.zeta);
  a.mixing_time = mixing_time(g, 0.01);
  a.window_slack = mixing_distance(g, N);

  const auto records = kernels::map_samples<RhoRecord>(samples, [&](std::size_t s) {
    LazyInput omega(derive_seed(seed, s, 0));
    QueryContext ctx(omega, derive_seed(seed, s, 3));
    RhoRecord r;
    try {
      const auto trace = run_rho(g, N, M, ctx);
      r.determined = true;
      r.fallback = trace.fallback;
      r.late = trace.coalescence_cycle < static_cast<std::int64_t>(N);
      const auto& q = ctx.queried();
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] > track) continue;
        r.hits.push_back(q[i]);
        if (i < trace.queries_before_fallback) r.main_hits.push_back(q[i]);
      }
    } catch (const BudgetExhausted&) {
    }
    return r;
  });

  std::vector<std::size_t> hits(track, 0), main_hits(track, 0);
  std::size_t failures = 0, late = 0;
  for (const auto& r : records) {
    if (!r.determined) {
      ++a.undetermined;
      continue;
    }
    ++a.samples;
    failures += r.fallback;
    late += r.late;
    for (Position i : r.hits) ++hits[i - 1];
    for (Position i : r.main_hits) ++main_hits[i - 1];
  }
  const double n = static_cast<double>(a.samples);
  for (Position i = 0; i < track; ++i) {
    Estimate e;
    e.samples = a.samples;
    e.undetermined = a.undetermined;
    if (a.samples > 0) {
      e.mean = static_cast<double>(hits[i]) / n;
      e.se = a.samples > 1 ? std::sqrt(e.mean * (1 - e.mean) / (n - 1)) : 0.0;
      a.main_phase_sup = std::max(a.main_phase_sup, static_cast<double>(main_hits[i]) / n);
    }
    if (e.mean > a.sup || a.sup_bit == 0) {
      a.sup = e.mean;
      a.sup_se = e.se;
      a.sup_bit = i + 1;
    }
    a.per_bit.push_back(e);
  }
  if (a.samples > 0) {
    a.failure_rate = static_cast<double>(failures) / n;
    a.late_coalescence = static_cast<double>(late) / n;
  }
  std::ostringstream prov;
  prov << "monte carlo: " << a.samples << " samples, " << a.undetermined << " undetermined, bits 1.." << track
       << ", N=" << N << ", M=" << M;
  std::ostringstream notes;
  notes << "failure rate " << a.failure_rate << ", late coalescence " << a.late_coalescence << ", window slack "
        << a.window_slack << ", K_eps " << a.mixing_time << ", main-phase sup " << a.main_phase_sup;
  a.report = make_report("voter_revealment_bound", Relation::LessEqual, a.sup, a.bound,
                         3.0 * a.sup_se + a.failure_rate + a.window_slack + 1e-12, prov.str(), notes.str());
  return a;
}

StabilityResult initial_state_stability_check(const OrderedDigraph& g, const std::vector<Vertex>& black,
                                              std::size_t samples, std::uint64_t seed, std::uint64_t max_steps) {
  const auto A0 = initial_state(g, black);
  if (max_steps == 0)
    max_steps = 10'000 * static_cast<std::uint64_t>(g.edge_count()) * static_cast<std::uint64_t>(g.vertex_count());
  const auto pi = stationary(g);
  StabilityResult r;
  for (std::size_t v = 0; v < pi.size(); ++v)
    if (A0.black[v]) r.predicted += pi[v];

  const auto outcomes = kernels::map_samples<int>(samples, [&](std::size_t s) {
    LazyInput bits(derive_seed(seed, s, 0));
    const auto fix = forward_fixation(A0, g, bits, max_steps);
    return fix ? (*fix ? 1 : 0) : -1;
  });
  std::vector<double> values;
  for (int o : outcomes) {
    if (o < 0)
      ++r.not_fixated;
    else
      values.push_back(o);
  }
  r.black = summarize(values);
  r.black.undetermined = r.not_fixated;
  std::ostringstream prov, notes;
  prov << "monte carlo: " << r.black.samples << " samples, " << r.not_fixated << " not fixated within " << max_steps
       << " steps";
  notes << "fixation frequency " << r.black.mean << " (stderr " << r.black.se << "), pi(A0) " << r.predicted;
  r.report = make_report("initial_state_stability", Relation::LessEqual, std::abs(r.black.mean - r.predicted),
                         3.0 * r.black.se + 1e-9, 0.0, prov.str(), notes.str());
  return r;
}

QueryFunction rho_indicator(const OrderedDigraph& g, const std::vector<Vertex>& B, std::string name) {
  std::vector<char> in(static_cast<std::size_t>(g.vertex_count()), 0);
  for (Vertex v : B) {
    if (v < 0 || v >= g.vertex_count()) throw std::invalid_argument("rho_indicator: vertex out of range");
    in[static_cast<std::size_t>(v)] = 1;
  }
  auto rho = rho_reference(g);
  return QueryFunction{std::move(name), [rho, in](QueryContext& ctx) {
                         return in[static_cast<std::size_t>(rho(ctx))] ? 1 : -1;
                       }};
}

std::vector<SweepRow> voter_sensitivity_sweep(const std::vector<SweepMember>& family,
                                              const std::vector<double>& epsilons, std::size_t samples,
                                              std::uint64_t seed) {
  std::vector<SweepRow> rows;
  for (std::size_t m = 0; m < family.size(); ++m) {
    const auto& member = family[m];
    const auto f = rho_indicator(member.graph, member.B, member.name);
    const double bound = revealment_bound(member.graph);
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      SweepRow row;
      row.name = member.name;
      row.vertices = member.graph.vertex_count();
      row.epsilon = epsilons[e];
      row.xi = xi_mc(f, epsilons[e], samples, derive_seed(seed, m, e));
      row.bound = bound;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace cubeinf::voter
