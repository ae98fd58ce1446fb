#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubeinf/bitstream.hpp"
#include "cubeinf/montecarlo.hpp"
#include "cubeinf/truth_table.hpp"

namespace cubeinf {

inline constexpr std::size_t kDefaultQueryBudget = 1'000'000;

/// Thrown inside a querier when the query budget is spent.
struct BudgetExhausted : std::runtime_error {
  BudgetExhausted() : std::runtime_error("query budget exhausted") {}
};

/// Thrown when a querier asks for a bit the context does not allow
/// (beyond a truncation limit, or outside a pinned set).
struct QueryRefused : std::runtime_error {
  explicit QueryRefused(Position i) : std::runtime_error("query refused"), position(i) {}
  Position position;
};

/// Mediates every bit request of one evaluation: caches answers, records the
/// distinct positions in query order, enforces the budget and an optional
/// upper position limit, and supplies auxiliary randomness that is separate
/// from the input stream.
class QueryContext {
 public:
  QueryContext(BitSource& source, std::uint64_t aux_seed = 0,
               std::size_t budget = kDefaultQueryBudget, Position limit = 0);

  int query(Position i);

  bool has(Position i) const;
  /// Value of an already-queried bit.
  int known(Position i) const;

  /// Auxiliary randomness.
  double aux_uniform();
  std::uint64_t aux_below(std::uint64_t bound);

  const std::vector<Position>& queried() const noexcept { return order_; }
  std::size_t spent() const noexcept { return order_.size(); }
  std::size_t budget() const noexcept { return budget_; }
  BitSource& source() noexcept { return source_; }

 private:
  static constexpr Position kDenseLimit = Position{1} << 21;

  BitSource& source_;
  std::uint64_t aux_seed_;
  std::uint64_t aux_counter_ = 0;
  std::size_t budget_;
  Position limit_;
  std::vector<std::int8_t> dense_;
  std::unordered_map<Position, std::int8_t> sparse_;
  std::vector<Position> order_;
};

/// Decision procedure: reads bits through the context and returns the value.
using Querier = std::function<int(QueryContext&)>;

/// A Boolean function given by its canonical (deterministic) querier.
struct QueryFunction {
  std::string name;
  Querier querier;
  std::size_t budget = kDefaultQueryBudget;
};

/// A possibly randomised algorithm deciding some function. Its value need not
/// be ±1 (the voter algorithm returns a vertex).
struct QueryAlgorithm {
  std::string name;
  Querier run;
  std::size_t budget = kDefaultQueryBudget;
};

struct WitnessRecord {
  std::vector<Position> bits;  // sorted
  Position max_w = 0;
  int value = 0;
};

struct EvaluationOutcome {
  std::optional<int> value;  // nullopt = Undetermined
  WitnessRecord witness;
  std::size_t queries_spent = 0;

  bool determined() const noexcept { return value.has_value(); }
};

/// Runs a querier on `input`. Budget exhaustion yields Undetermined.
EvaluationOutcome run_querier(const Querier& querier, std::size_t budget, BitSource& input,
                              std::uint64_t aux_seed = 0);

EvaluationOutcome eval_query(const QueryFunction& f, BitSource& input, std::uint64_t aux_seed = 0);
EvaluationOutcome eval_algorithm(const QueryAlgorithm& a, BitSource& input, std::uint64_t aux_seed = 0);

/// The canonical querier of f used as an algorithm.
QueryAlgorithm natural_algorithm(const QueryFunction& f);

/// Bit source answering only pinned positions; anything else is refused.
class PinnedSource final : public BitSource {
 public:
  void pin(Position i, int value) { pinned_[i] = static_cast<std::int8_t>(value); }
  int bit(Position i) override;

 private:
  std::unordered_map<Position, std::int8_t> pinned_;
};

/// Value of f if its canonical querier terminates using only the pinned bits
/// of `ctx` (forced-override re-evaluation, no new queries); nullopt otherwise.
std::optional<int> value_if_witnessed(const QueryFunction& f, const QueryContext& ctx);
std::optional<int> value_if_witnessed(const QueryFunction& f, const std::vector<Position>& bits,
                                      const std::function<int(Position)>& value_of);

/// Least witness of f at x under the order (max W, |W|, lexicographic).
WitnessRecord minimal_witness(const TruthTable& f, Assignment x);

/// B_m f: f where the first m bits already determine it (per the canonical
/// querier with every query beyond m refused), -1 elsewhere.
TruthTable boolean_approx(const QueryFunction& f, int m);

/// Canonical querier for a finite table: reads bits 1, 2, ... and stops as
/// soon as the prefix determines the value.
Querier prefix_querier(const TruthTable& f);

/// E[(max W)^p] for the algorithmic witness of f.
struct MomentEstimate {
  Estimate moment;
  double p = 1.0;
};
MomentEstimate knowability_moment(const QueryFunction& f, double p, std::size_t samples, std::uint64_t seed);

/// Exact E[(max W)^p] for a finite table, where max W is the length of the
/// shortest determining prefix (equal to the max of the minimal witness).
double knowability_moment_exact(const TruthTable& f, double p);

}  // namespace cubeinf
