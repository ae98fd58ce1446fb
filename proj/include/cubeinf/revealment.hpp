#pragma once

#include <map>
#include <vector>

#include "cubeinf/audit.hpp"
#include "cubeinf/montecarlo.hpp"
#include "cubeinf/query.hpp"
#include "cubeinf/spectral.hpp"
#include "cubeinf/truth_table.hpp"

#include <nlohmann/json.hpp>

namespace cubeinf {

/// Query frequencies delta_i for i = 1..tracked, plus the distribution of the
/// largest queried position so bits beyond the tracked range can be bounded.
struct RevealmentEstimate {
  std::vector<Estimate> per_bit;
  double sup_estimate = 0.0;
  double sup_se = 0.0;
  Position sup_position = 0;
  Position tracked = 0;
  std::size_t samples = 0;
  std::size_t undetermined = 0;
  std::map<Position, std::size_t> max_w_counts;

  /// P(max W > m) over the determined runs.
  Estimate tail_beyond(Position m) const;
  /// max(sup over tracked bits, P(max W > tracked)): an upper estimate of the
  /// revealment over all bits.
  double bound() const;
};

RevealmentEstimate estimate_revealment(const QueryAlgorithm& alg, std::size_t samples, Position track,
                                       std::uint64_t seed);

nlohmann::json to_json(const RevealmentEstimate& r);

/// Reads the bits of [n] in a uniformly random order (auxiliary randomness)
/// until the revealed ones determine f.
QueryAlgorithm random_order_algorithm(const TruthTable& f, std::string name = "random-order");

/// Algorithm for B_m f built from an algorithm for f: run alg; if it asks for
/// a bit beyond m, read all of [m] and answer B_m f there.
QueryAlgorithm truncate_algorithm(const QueryAlgorithm& alg, const QueryFunction& f, int m);

/// Algorithm for f built from an algorithm for B_m f: run alg_m; if its
/// queried set does not witness f, read bits 1, 2, ... until it does.
QueryAlgorithm lift_algorithm(const QueryAlgorithm& alg_m, const QueryFunction& f);

/// E_f(k) <= delta k ||f||_2^2 for k = 1..n, using delta = bound() of the
/// estimate and a 3 sigma allowance.
std::vector<AuditReport> revealment_inequality_audit(const Spectrum& s, const RevealmentEstimate& rev);

/// Per-bit delta_i(derived) <= delta_i(base) + tail, within 3 pooled sigma.
std::vector<AuditReport> revealment_transfer_check(const std::string& name, const RevealmentEstimate& derived,
                                                   const RevealmentEstimate& base, const Estimate& tail);

}  // namespace cubeinf
