#include "cubeinf/influence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cubeinf/kernels.hpp"

namespace cubeinf {

InfluenceProfile make_profile(std::vector<double> per_bit) {
  InfluenceProfile p;
  p.per_bit = std::move(per_bit);
  for (std::size_t k = 0; k < p.per_bit.size(); ++k) {
    const double v = p.per_bit[k];
    p.total += v;
    p.h += v * v;
    if (v > p.max_influence) {
      p.max_influence = v;
      p.max_position = k + 1;
    }
  }
  return p;
}

PivotalSet pivotal_set(const TruthTable& f, Assignment x) {
  PivotalSet out;
  for (int j = 0; j < f.n(); ++j)
    if (f[x] != f[x ^ (Assignment{1} << j)]) out.bits.push_back(static_cast<Position>(j + 1));
  return out;
}

std::optional<PivotalSet> pivotal_set(const QueryFunction& f, BitSource& input) {
  const auto base = eval_query(f, input);
  if (!base.determined()) return std::nullopt;
  PivotalSet out;
  for (Position k : base.witness.bits) {
    FlipView flipped(input, k);
    const auto other = eval_query(f, flipped);
    if (!other.determined()) return std::nullopt;
    if (*other.value != *base.value) out.bits.push_back(k);
  }
  return out;
}

InfluenceProfile influences_exact(const TruthTable& f) {
  if (f.n() > kMaxSpectralBits) throw std::invalid_argument("influences_exact: n exceeds the cap of 20");
  const auto counts = kernels::pivotal_counts(f.values(), f.n());
  std::vector<double> per_bit(counts.size());
  const double size = static_cast<double>(f.size());
  for (std::size_t k = 0; k < counts.size(); ++k) per_bit[k] = static_cast<double>(counts[k]) / size;
  return make_profile(std::move(per_bit));
}

InfluenceProfile influences_fourier(const Spectrum& s) {
  std::vector<double> per_bit(static_cast<std::size_t>(s.n()), 0.0);
  for (const auto& t : s.terms())
    for (Position k : set_positions(t.set)) per_bit[k - 1] += t.coeff * t.coeff;
  auto p = make_profile(std::move(per_bit));
  // Total via sum |S| f-hat(S)^2 directly.
  double total = 0.0;
  for (const auto& t : s.terms()) total += set_size(t.set) * t.coeff * t.coeff;
  p.total = total;
  return p;
}

Spectrum gradient(const Spectrum& s, Position k) {
  if (k == 0) throw std::invalid_argument("gradient: positions are 1-based");
  if (k > static_cast<Position>(s.n())) return Spectrum(s.n(), {});
  const FrequencySet bit = FrequencySet{1} << (k - 1);
  return s.filter([bit](const SpectralTerm& t) { return (t.set & bit) != 0; });
}

double h_fourier(const Spectrum& s) { return influences_fourier(s).h; }

namespace {

std::size_t intersection_size(const std::vector<Position>& a, const std::vector<Position>& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

Estimate summarize_optional(const std::vector<double>& values) {
  std::vector<double> kept;
  kept.reserve(values.size());
  for (double v : values)
    if (!std::isnan(v)) kept.push_back(v);
  auto e = summarize(kept);
  e.undetermined = values.size() - kept.size();
  return e;
}

}  // namespace

Estimate h_combinatorial(const TruthTable& f, std::size_t samples, std::uint64_t seed) {
  const Assignment mask = f.n() == 0 ? 0 : static_cast<Assignment>((std::uint64_t{1} << f.n()) - 1);
  auto values = kernels::map_samples<double>(samples, [&](std::size_t s) {
    const auto x = static_cast<Assignment>(word_at(derive_seed(seed, s, 0), 1)) & mask;
    const auto y = static_cast<Assignment>(word_at(derive_seed(seed, s, 1), 1)) & mask;
    return static_cast<double>(intersection_size(pivotal_set(f, x).bits, pivotal_set(f, y).bits));
  });
  return summarize(values);
}

Estimate h_combinatorial(const QueryFunction& f, std::size_t samples, std::uint64_t seed) {
  auto values = kernels::map_samples<double>(samples, [&](std::size_t s) {
    LazyInput omega(derive_seed(seed, s, 0));
    LazyInput other(derive_seed(seed, s, 1));
    const auto a = pivotal_set(f, omega);
    const auto b = pivotal_set(f, other);
    if (!a || !b) return std::nan("");
    return static_cast<double>(intersection_size(a->bits, b->bits));
  });
  return summarize_optional(values);
}

Estimate influence_mc(const QueryFunction& f, Position k, std::size_t samples, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("influence_mc: positions are 1-based");
  auto values = kernels::map_samples<double>(samples, [&](std::size_t s) {
    LazyInput omega(derive_seed(seed, s, 0));
    const auto a = eval_query(f, omega);
    FlipView flipped(omega, k);
    const auto b = eval_query(f, flipped);
    if (!a.determined() || !b.determined()) return std::nan("");
    return *a.value != *b.value ? 1.0 : 0.0;
  });
  return summarize_optional(values);
}

std::vector<PivotalSample> sample_pivotals(const QueryFunction& f, std::size_t samples, std::uint64_t seed) {
  return kernels::map_samples<PivotalSample>(samples, [&](std::size_t s) {
    PivotalSample out;
    LazyInput omega(derive_seed(seed, s, 0));
    const auto base = eval_query(f, omega);
    if (!base.determined()) return out;
    out.value = *base.value;
    out.max_w = base.witness.max_w;
    for (Position k : base.witness.bits) {
      FlipView flipped(omega, k);
      const auto other = eval_query(f, flipped);
      if (!other.determined()) return PivotalSample{};
      if (*other.value != out.value) out.pivotal.push_back(k);
    }
    out.determined = true;
    return out;
  });
}

InfluenceProfile influences_mc(const std::vector<PivotalSample>& draws, Position track) {
  std::vector<double> counts(track, 0.0);
  std::vector<double> sizes;
  std::size_t undetermined = 0;
  for (const auto& d : draws) {
    if (!d.determined) {
      ++undetermined;
      continue;
    }
    sizes.push_back(static_cast<double>(d.pivotal.size()));
    for (Position k : d.pivotal)
      if (k <= track) counts[k - 1] += 1.0;
  }
  const double n = static_cast<double>(sizes.size());
  std::vector<double> per_bit(track, 0.0);
  std::vector<double> se(track, 0.0);
  for (Position k = 0; k < track; ++k) {
    if (n == 0) break;
    const double m = counts[k] / n;
    per_bit[k] = m;
    se[k] = n > 1 ? std::sqrt(m * (1 - m) / (n - 1)) : 0.0;
  }
  auto p = make_profile(std::move(per_bit));
  const auto total = summarize(sizes);
  p.per_bit_se = std::move(se);
  p.total = total.mean;
  p.total_se = total.se;
  p.exact = false;
  p.samples = sizes.size();
  p.undetermined = undetermined;
  return p;
}

InfluenceProfile influences_mc(const QueryFunction& f, Position track, std::size_t samples, std::uint64_t seed) {
  return influences_mc(sample_pivotals(f, samples, seed), track);
}

std::vector<AuditReport> knowability_influence_bound_check(const QueryFunction& f, double p,
                                                           const std::vector<Position>& ks,
                                                           std::size_t samples, std::uint64_t seed, double q,
                                                           Position cutoff) {
  if (!(p > 0)) throw std::invalid_argument("knowability bound: p must be positive");
  const auto draws = sample_pivotals(f, samples, seed);
  std::vector<double> wp;
  std::vector<const PivotalSample*> ok;
  for (const auto& d : draws) {
    if (!d.determined) continue;
    ok.push_back(&d);
    wp.push_back(std::pow(static_cast<double>(d.max_w), p));
  }
  const std::size_t undetermined = draws.size() - ok.size();
  std::ostringstream prov;
  prov << "monte carlo: " << ok.size() << " samples, " << undetermined << " undetermined";
  const double moment = column_mean(wp);

  auto indicator_column = [&](Position k) {
    std::vector<double> col(ok.size());
    for (std::size_t s = 0; s < ok.size(); ++s)
      col[s] = std::binary_search(ok[s]->pivotal.begin(), ok[s]->pivotal.end(), k) ? 1.0 : 0.0;
    return col;
  };

  std::vector<AuditReport> out;
  for (Position k : ks) {
    if (k == 0) throw std::invalid_argument("knowability bound: positions are 1-based");
    // Paired difference per sample: 1{k pivotal} - (max W)^p / k^p.
    const auto ind = indicator_column(k);
    const double kp = std::pow(static_cast<double>(k), p);
    std::vector<double> diff(ok.size());
    for (std::size_t s = 0; s < ok.size(); ++s) diff[s] = ind[s] - wp[s] / kp;
    const auto d = summarize(diff);
    out.push_back(make_report("knowability_influence_bound[k=" + std::to_string(k) + "]", Relation::LessEqual,
                              column_mean(ind), moment / kp, 3.0 * d.se + 1e-12, prov.str()));
  }
  if (q > 0 && p * q > 1 && cutoff > 0) {
    std::vector<std::vector<double>> columns;
    std::vector<double> grad;
    double lhs = 0.0;
    for (Position k : ks) {
      if (k <= cutoff) continue;
      auto ind = indicator_column(k);
      const double ik = column_mean(ind);
      lhs += std::pow(ik, q);
      grad.push_back(ik > 0 ? q * std::pow(ik, q - 1) : 0.0);
      columns.push_back(std::move(ind));
    }
    const double factor = std::pow(static_cast<double>(cutoff), 1 - p * q) / (p * q - 1);
    const double rhs = std::pow(moment, q) * factor;
    // slack = rhs - lhs; linearise both sides jointly.
    for (auto& g : grad) g = -g;
    columns.push_back(wp);
    grad.push_back(moment > 0 ? q * std::pow(moment, q - 1) * factor : 0.0);
    const double se = columns.front().size() > 1 ? linearized_stderr(columns, grad) : 0.0;
    out.push_back(make_report("influence_tail_bound[n=" + std::to_string(cutoff) + "]", Relation::LessEqual, lhs, rhs,
                              3.0 * se + 1e-12, prov.str(), "left side summed over tracked k beyond the cutoff only"));
  }
  return out;
}

}  // namespace cubeinf
