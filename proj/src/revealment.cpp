#include "cubeinf/revealment.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "cubeinf/kernels.hpp"

namespace cubeinf {

namespace {

Estimate proportion(std::size_t hits, std::size_t n) {
  Estimate e;
  e.samples = n;
  if (n == 0) return e;
  e.mean = static_cast<double>(hits) / static_cast<double>(n);
  e.se = n > 1 ? std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(n - 1)) : 0.0;
  return e;
}

struct RunRecord {
  bool determined = false;
  Position max_w = 0;
  std::vector<Position> tracked_hits;
};

// Forwards every read to an enclosing context, so nested algorithms share
// its cache, budget and queried set.
class ContextSource final : public BitSource {
 public:
  explicit ContextSource(QueryContext& ctx) : ctx_(ctx) {}
  int bit(Position i) override { return ctx_.query(i); }

 private:
  QueryContext& ctx_;
};

std::uint64_t child_seed(QueryContext& ctx) { return ctx.aux_below(~std::uint64_t{0}); }

std::size_t remaining(const QueryContext& ctx) { return ctx.budget() - ctx.spent(); }

}  // namespace

Estimate RevealmentEstimate::tail_beyond(Position m) const {
  std::size_t hits = 0;
  for (auto it = max_w_counts.upper_bound(m); it != max_w_counts.end(); ++it) hits += it->second;
  return proportion(hits, samples);
}

double RevealmentEstimate::bound() const { return std::max(sup_estimate, tail_beyond(tracked).mean); }

RevealmentEstimate estimate_revealment(const QueryAlgorithm& alg, std::size_t samples, Position track,
                                       std::uint64_t seed) {
  if (track == 0) throw std::invalid_argument("estimate_revealment: track must be >= 1");
  const auto runs = kernels::map_samples<RunRecord>(samples, [&](std::size_t s) {
    LazyInput omega(derive_seed(seed, s, 0));
    const auto out = eval_algorithm(alg, omega, derive_seed(seed, s, 3));
    RunRecord r;
    if (!out.determined()) return r;
    r.determined = true;
    r.max_w = out.witness.max_w;
    for (Position i : out.witness.bits) {
      if (i > track) break;
      r.tracked_hits.push_back(i);
    }
    return r;
  });

  RevealmentEstimate est;
  est.tracked = track;
  std::vector<std::size_t> hits(track, 0);
  for (const auto& r : runs) {
    if (!r.determined) {
      ++est.undetermined;
      continue;
    }
    ++est.samples;
    ++est.max_w_counts[r.max_w];
    for (Position i : r.tracked_hits) ++hits[i - 1];
  }
  for (Position i = 0; i < track; ++i) {
    est.per_bit.push_back(proportion(hits[i], est.samples));
    est.per_bit.back().undetermined = est.undetermined;
    if (est.per_bit.back().mean > est.sup_estimate || est.sup_position == 0) {
      est.sup_estimate = est.per_bit.back().mean;
      est.sup_se = est.per_bit.back().se;
      est.sup_position = i + 1;
    }
  }
  return est;
}

nlohmann::json to_json(const RevealmentEstimate& r) {
  nlohmann::json bits = nlohmann::json::array();
  for (std::size_t i = 0; i < r.per_bit.size(); ++i)
    bits.push_back({{"bit", i + 1}, {"frequency", r.per_bit[i].mean}, {"stderr", r.per_bit[i].se}});
  const auto tail = r.tail_beyond(r.tracked);
  return {{"tracked_range", {1, r.tracked}},
          {"per_bit", bits},
          {"sup_estimate", r.sup_estimate},
          {"sup_stderr", r.sup_se},
          {"sup_position", r.sup_position},
          {"tail_beyond_tracked", tail.mean},
          {"tail_stderr", tail.se},
          {"samples", r.samples},
          {"undetermined", r.undetermined}};
}

QueryAlgorithm random_order_algorithm(const TruthTable& f, std::string name) {
  auto table = std::make_shared<const TruthTable>(f);
  Querier run = [table](QueryContext& ctx) {
    const int n = table->n();
    Assignment x = 0;
    Assignment mask = 0;
    if (determines(*table, x, mask)) return (*table)[x];
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 1);
    for (int i = 0; i < n; ++i) {
      const auto j = i + static_cast<int>(ctx.aux_below(static_cast<std::uint64_t>(n - i)));
      std::swap(order[i], order[j]);
      const auto pos = static_cast<Position>(order[i]);
      const Assignment bit = Assignment{1} << (pos - 1);
      mask |= bit;
      if (ctx.query(pos) == -1) x |= bit;
      if (determines(*table, x, mask)) return (*table)[x];
    }
    return (*table)[x];
  };
  return QueryAlgorithm{std::move(name), std::move(run)};
}

QueryAlgorithm truncate_algorithm(const QueryAlgorithm& alg, const QueryFunction& f, int m) {
  if (m < 0 || m > kMaxWitnessBits) throw std::invalid_argument("truncate_algorithm: m must be in [0, 20]");
  Querier run = [alg, f, m](QueryContext& ctx) {
    ContextSource forward(ctx);
    QueryContext inner(forward, child_seed(ctx), remaining(ctx), static_cast<Position>(m));
    std::optional<int> answer;
    try {
      alg.run(inner);
      // The run stayed inside [m]; B_m f agrees with f where f's own querier
      // is satisfied by these bits.
      answer = value_if_witnessed(f, inner);
    } catch (const QueryRefused&) {
    }
    if (answer) return *answer;
    for (int j = 1; j <= m; ++j) ctx.query(static_cast<Position>(j));
    std::vector<Position> prefix(static_cast<std::size_t>(m));
    std::iota(prefix.begin(), prefix.end(), Position{1});
    return value_if_witnessed(f, prefix, [&ctx](Position i) { return ctx.known(i); }).value_or(-1);
  };
  return QueryAlgorithm{alg.name + "/trunc" + std::to_string(m), std::move(run), alg.budget};
}

QueryAlgorithm lift_algorithm(const QueryAlgorithm& alg_m, const QueryFunction& f) {
  Querier run = [alg_m, f](QueryContext& ctx) {
    {
      ContextSource forward(ctx);
      QueryContext inner(forward, child_seed(ctx), remaining(ctx));
      alg_m.run(inner);
    }
    if (auto v = value_if_witnessed(f, ctx)) return *v;
    for (Position k = 1;; ++k) {
      const bool fresh = !ctx.has(k);
      ctx.query(k);
      if (fresh)
        if (auto v = value_if_witnessed(f, ctx)) return *v;
    }
  };
  return QueryAlgorithm{alg_m.name + "/lift", std::move(run), f.budget};
}

std::vector<AuditReport> revealment_inequality_audit(const Spectrum& s, const RevealmentEstimate& rev) {
  const auto energy = energy_profile(s);
  const double norm2 = s.squared_norm();
  const double delta = rev.bound();
  const auto tail = rev.tail_beyond(rev.tracked);
  const double delta_se = delta == rev.sup_estimate ? rev.sup_se : tail.se;
  std::ostringstream prov;
  prov << "exact spectrum; revealment monte carlo: " << rev.samples << " samples, " << rev.undetermined
       << " undetermined, tracked 1.." << rev.tracked;
  std::vector<AuditReport> out;
  for (int k = 1; k <= s.n(); ++k) {
    const double scale = k * norm2;
    out.push_back(make_report("revealment_inequality[k=" + std::to_string(k) + "]", Relation::LessEqual,
                              energy.levels[k], delta * scale, 3.0 * delta_se * scale + 1e-12, prov.str()));
  }
  return out;
}

std::vector<AuditReport> revealment_transfer_check(const std::string& name, const RevealmentEstimate& derived,
                                                   const RevealmentEstimate& base, const Estimate& tail) {
  std::vector<AuditReport> out;
  const std::size_t n = std::min(derived.per_bit.size(), base.per_bit.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = derived.per_bit[i];
    const auto& b = base.per_bit[i];
    const double se = std::sqrt(d.se * d.se + b.se * b.se + tail.se * tail.se);
    out.push_back(make_report(name + "[bit=" + std::to_string(i + 1) + "]", Relation::LessEqual, d.mean,
                              b.mean + tail.mean, 3.0 * se + 1e-12, "monte carlo"));
  }
  return out;
}

}  // namespace cubeinf
