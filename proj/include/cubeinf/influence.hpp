#pragma once

#include <optional>
#include <vector>

#include "cubeinf/audit.hpp"
#include "cubeinf/montecarlo.hpp"
#include "cubeinf/query.hpp"
#include "cubeinf/spectral.hpp"
#include "cubeinf/truth_table.hpp"

namespace cubeinf {

/// Influences I_k for k = 1..per_bit.size(), with totals. For Monte Carlo
/// profiles per_bit_se is filled and the bits are the tracked range.
struct InfluenceProfile {
  std::vector<double> per_bit;
  std::vector<double> per_bit_se;
  double total = 0.0;
  double total_se = 0.0;
  double h = 0.0;
  double max_influence = 0.0;
  Position max_position = 0;
  bool exact = true;
  std::size_t samples = 0;
  std::size_t undetermined = 0;

  double influence(Position k) const { return k >= 1 && k <= per_bit.size() ? per_bit[k - 1] : 0.0; }
};

/// Fills total, h and the maximum from per_bit.
InfluenceProfile make_profile(std::vector<double> per_bit);

struct PivotalSet {
  std::vector<Position> bits;  // sorted
};

PivotalSet pivotal_set(const TruthTable& f, Assignment x);

/// Pivotal set of a query function at `input`: every queried bit is flipped
/// and f is re-run in full on the flipped stream. nullopt if any run is
/// undetermined.
std::optional<PivotalSet> pivotal_set(const QueryFunction& f, BitSource& input);

InfluenceProfile influences_exact(const TruthTable& f);
InfluenceProfile influences_fourier(const Spectrum& s);

/// Spectrum of nabla_k f: the terms with k in S.
Spectrum gradient(const Spectrum& s, Position k);

/// H(f) = sum_k I_k(f)^2 from the Fourier formula; defined for any spectrum.
double h_fourier(const Spectrum& s);

/// H(f) = E|P(omega) cap P(omega~)| over independent pairs.
Estimate h_combinatorial(const TruthTable& f, std::size_t samples, std::uint64_t seed);
Estimate h_combinatorial(const QueryFunction& f, std::size_t samples, std::uint64_t seed);

/// Frequency of f(omega) != f(omega^k).
Estimate influence_mc(const QueryFunction& f, Position k, std::size_t samples, std::uint64_t seed);

/// One Monte Carlo draw: value, algorithmic witness maximum, pivotal set.
struct PivotalSample {
  bool determined = false;
  int value = 0;
  Position max_w = 0;
  std::vector<Position> pivotal;
};

std::vector<PivotalSample> sample_pivotals(const QueryFunction& f, std::size_t samples, std::uint64_t seed);

/// Influence profile over bits 1..track from pivotal samples; total is the
/// mean pivotal-set size over all positions.
InfluenceProfile influences_mc(const std::vector<PivotalSample>& draws, Position track);
InfluenceProfile influences_mc(const QueryFunction& f, Position track, std::size_t samples, std::uint64_t seed);

/// Checks I_k <= E[(max W)^p] / k^p at every k in `ks`, and the tail bound
/// sum_{k > cutoff} I_k^q <= E[(max W)^p]^q cutoff^(1-pq) / (pq - 1) over the
/// tracked k beyond the cutoff (when q > 0 and pq > 1). Violations are
/// findings (passed = false) beyond 3 sigma.
std::vector<AuditReport> knowability_influence_bound_check(const QueryFunction& f, double p,
                                                           const std::vector<Position>& ks,
                                                           std::size_t samples, std::uint64_t seed,
                                                           double q = 0.0, Position cutoff = 0);

}  // namespace cubeinf
