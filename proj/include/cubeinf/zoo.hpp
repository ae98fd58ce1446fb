#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubeinf/query.hpp"
#include "cubeinf/truth_table.hpp"

namespace cubeinf {

/// A zoo member: always available as a query function; finitely supported
/// members also carry their truth table.
struct BooleanFunction {
  std::string spec;
  QueryFunction query;
  std::optional<TruthTable> table;

  bool finitely_supported() const noexcept { return table.has_value(); }
};

/// Wraps a table; the canonical querier reads the shortest determining prefix.
BooleanFunction from_table(std::string name, TruthTable table);

BooleanFunction dictator(int n);
BooleanFunction parity(const std::vector<Position>& set);
BooleanFunction majority(int n);
/// +1 iff some block of `width` consecutive bits is all +1.
BooleanFunction tribes(int width, int blocks);
BooleanFunction constant(int value);

/// omega_2 if omega_1 = +1, else omega_4 if omega_3 = +1, and so on.
BooleanFunction sequential_selector();

/// Block-size rule for the spliced selector.
enum class SpliceGrowth { Constant, Linear, Exponential };

/// The selector with the n-th condition bit replaced by a block of a_n bits
/// whose product must be +1.
BooleanFunction spliced_selector(SpliceGrowth growth, int constant = 2);
/// a_n under the given rule.
Position splice_block_size(SpliceGrowth growth, int constant, int n);

/// +1 iff some block (sizes 1, 2, 3, ...) is all +1; -1 has no finite witness.
BooleanFunction block_function();

/// +1 iff the simple random walk with steps omega_i hits +k before -k.
BooleanFunction random_walk_hitting(int k);

/// Parses "dict:3", "parity:1,2,3", "maj:5", "tribes:3x4", "const:-1",
/// "selector", "spliced:exp", "spliced:lin", "spliced:4", "block",
/// "rwhit:10". Throws std::invalid_argument with a specific message.
BooleanFunction make_function(const std::string& spec);

struct ZooEntry {
  std::string syntax;
  std::string description;
};
std::vector<ZooEntry> zoo_listing();

}  // namespace cubeinf
