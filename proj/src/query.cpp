#include "cubeinf/query.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "cubeinf/kernels.hpp"

namespace cubeinf {

QueryContext::QueryContext(BitSource& source, std::uint64_t aux_seed, std::size_t budget, Position limit)
    : source_(source), aux_seed_(aux_seed), budget_(budget), limit_(limit) {
  if (budget == 0) throw std::invalid_argument("query budget must be at least 1");
}

int QueryContext::query(Position i) {
  if (i == 0) throw std::invalid_argument("bit positions are 1-based");
  if (has(i)) return known(i);
  if (limit_ != 0 && i > limit_) throw QueryRefused(i);
  if (order_.size() >= budget_) throw BudgetExhausted();
  const int v = source_.bit(i);
  if (i < kDenseLimit) {
    if (i >= dense_.size()) {
      std::size_t grown = dense_.empty() ? 64 : dense_.size();
      while (grown <= i) grown *= 2;
      dense_.resize(grown, 0);
    }
    dense_[i] = static_cast<std::int8_t>(v);
  } else {
    sparse_[i] = static_cast<std::int8_t>(v);
  }
  order_.push_back(i);
  return v;
}

bool QueryContext::has(Position i) const {
  if (i < kDenseLimit) return i < dense_.size() && dense_[i] != 0;
  return sparse_.contains(i);
}

int QueryContext::known(Position i) const {
  if (i < kDenseLimit) {
    if (i < dense_.size() && dense_[i] != 0) return dense_[i];
  } else if (auto it = sparse_.find(i); it != sparse_.end()) {
    return it->second;
  }
  throw std::logic_error("bit has not been queried");
}

double QueryContext::aux_uniform() { return uniform_at(aux_seed_, ++aux_counter_); }

std::uint64_t QueryContext::aux_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("aux_below: bound must be positive");
  // Rejection sampling keeps this unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  while (true) {
    const std::uint64_t w = word_at(aux_seed_, ++aux_counter_);
    if (w < limit) return w % bound;
  }
}

EvaluationOutcome run_querier(const Querier& querier, std::size_t budget, BitSource& input,
                              std::uint64_t aux_seed) {
  QueryContext ctx(input, aux_seed, budget);
  EvaluationOutcome out;
  try {
    const int v = querier(ctx);
    out.value = v;
    out.witness.value = v;
  } catch (const BudgetExhausted&) {
    out.value.reset();
  }
  out.queries_spent = ctx.spent();
  out.witness.bits = ctx.queried();
  std::sort(out.witness.bits.begin(), out.witness.bits.end());
  out.witness.max_w = out.witness.bits.empty() ? 0 : out.witness.bits.back();
  return out;
}

EvaluationOutcome eval_query(const QueryFunction& f, BitSource& input, std::uint64_t aux_seed) {
  return run_querier(f.querier, f.budget, input, aux_seed);
}

EvaluationOutcome eval_algorithm(const QueryAlgorithm& a, BitSource& input, std::uint64_t aux_seed) {
  return run_querier(a.run, a.budget, input, aux_seed);
}

QueryAlgorithm natural_algorithm(const QueryFunction& f) {
  return QueryAlgorithm{f.name + "/natural", f.querier, f.budget};
}

int PinnedSource::bit(Position i) {
  if (auto it = pinned_.find(i); it != pinned_.end()) return it->second;
  throw QueryRefused(i);
}

std::optional<int> value_if_witnessed(const QueryFunction& f, const std::vector<Position>& bits,
                                      const std::function<int(Position)>& value_of) {
  PinnedSource pinned;
  for (Position i : bits) pinned.pin(i, value_of(i));
  QueryContext ctx(pinned, 0, f.budget);
  try {
    return f.querier(ctx);
  } catch (const QueryRefused&) {
    return std::nullopt;
  } catch (const BudgetExhausted&) {
    return std::nullopt;
  }
}

std::optional<int> value_if_witnessed(const QueryFunction& f, const QueryContext& ctx) {
  return value_if_witnessed(f, ctx.queried(), [&ctx](Position i) { return ctx.known(i); });
}

WitnessRecord minimal_witness(const TruthTable& f, Assignment x) {
  const int n = f.n();
  if (n > kMaxWitnessBits) throw std::invalid_argument("minimal_witness: n exceeds the enumeration bound");
  WitnessRecord rec;
  rec.value = f[x & ((Assignment{1} << n) - 1)];
  if (determines(f, x, 0)) return rec;
  for (int m = 1; m <= n; ++m) {
    const Assignment top = Assignment{1} << (m - 1);
    // Subsets of [m] containing m, by size, then lexicographically: the
    // lower part is a (size-1)-combination of [m-1] in lex order.
    for (int size = 1; size <= m; ++size) {
      const int r = size - 1;
      std::vector<int> comb(static_cast<std::size_t>(r));
      for (int i = 0; i < r; ++i) comb[i] = i + 1;
      while (true) {
        Assignment mask = top;
        for (int e : comb) mask |= Assignment{1} << (e - 1);
        if (determines(f, x, mask)) {
          for (int e : comb) rec.bits.push_back(static_cast<Position>(e));
          rec.bits.push_back(static_cast<Position>(m));
          rec.max_w = static_cast<Position>(m);
          return rec;
        }
        // Next combination of r elements from 1..m-1 in lex order.
        int i = r - 1;
        while (i >= 0 && comb[i] == m - 1 - (r - 1 - i)) --i;
        if (i < 0) break;
        ++comb[i];
        for (int k = i + 1; k < r; ++k) comb[k] = comb[k - 1] + 1;
      }
    }
  }
  throw std::logic_error("minimal_witness: [n] must be a witness");
}

TruthTable boolean_approx(const QueryFunction& f, int m) {
  if (m < 0 || m > kMaxWitnessBits) throw std::invalid_argument("boolean_approx: m must be in [0, 20]");
  return TruthTable::tabulate(m, [&](Assignment x) {
    // The pinned source refuses every position beyond m.
    PinnedSource pinned;
    for (int j = 1; j <= m; ++j) pinned.pin(static_cast<Position>(j), omega_at(x, static_cast<Position>(j)));
    QueryContext ctx(pinned, 0, f.budget);
    try {
      return f.querier(ctx);
    } catch (const QueryRefused&) {
      return -1;
    } catch (const BudgetExhausted&) {
      return -1;
    }
  });
}

Querier prefix_querier(const TruthTable& f) {
  auto det = std::make_shared<const PrefixDeterminacy>(f);
  return [det](QueryContext& ctx) {
    Assignment prefix = 0;
    for (int k = 0;; ++k) {
      if (const int v = det->determined(k, prefix); v != 0) return v;
      if (ctx.query(static_cast<Position>(k + 1)) == -1) prefix |= Assignment{1} << k;
    }
  };
}

MomentEstimate knowability_moment(const QueryFunction& f, double p, std::size_t samples, std::uint64_t seed) {
  if (!(p > 0)) throw std::invalid_argument("knowability_moment: p must be positive");
  if (samples == 0) throw std::invalid_argument("knowability_moment: need at least one sample");
  auto values = kernels::map_samples<double>(samples, [&](std::size_t s) {
    LazyInput omega(derive_seed(seed, s, 0));
    const auto out = eval_query(f, omega, derive_seed(seed, s, 3));
    return out.determined() ? std::pow(static_cast<double>(out.witness.max_w), p) : std::nan("");
  });
  std::vector<double> kept;
  kept.reserve(values.size());
  for (double v : values)
    if (!std::isnan(v)) kept.push_back(v);
  MomentEstimate m;
  m.p = p;
  m.moment = summarize(kept);
  m.moment.undetermined = values.size() - kept.size();
  return m;
}

double knowability_moment_exact(const TruthTable& f, double p) {
  const PrefixDeterminacy det(f);
  double sum = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    int k = 0;
    while (det.determined(k, static_cast<Assignment>(x) & ((Assignment{1} << k) - 1)) == 0) ++k;
    sum += std::pow(static_cast<double>(k), p);
  }
  return sum / static_cast<double>(f.size());
}

}  // namespace cubeinf
