#include "cubeinf/zoo.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <stdexcept>

namespace cubeinf {

namespace {

int parse_int(std::string_view text, const std::string& spec) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end)
    throw std::invalid_argument("invalid function spec '" + spec + "': '" + std::string(text) + "' is not an integer");
  return value;
}

void require_table_size(int n, const std::string& spec) {
  if (n < 0 || n > kMaxTableBits)
    throw std::invalid_argument("function '" + spec + "' needs n = " + std::to_string(n) +
                                " bits, over the truth-table cap of " + std::to_string(kMaxTableBits));
}

}  // namespace

BooleanFunction from_table(std::string name, TruthTable table) {
  BooleanFunction f;
  f.spec = name;
  f.query = QueryFunction{std::move(name), prefix_querier(table)};
  f.table = std::move(table);
  return f;
}

BooleanFunction dictator(int n) {
  if (n < 1) throw std::invalid_argument("dictator needs n >= 1");
  require_table_size(n, "dict:" + std::to_string(n));
  return from_table("dict:" + std::to_string(n), TruthTable::tabulate(n, [](Assignment x) { return omega_at(x, 1); }));
}

BooleanFunction parity(const std::vector<Position>& set) {
  if (set.empty()) throw std::invalid_argument("parity needs a non-empty set");
  std::vector<Position> s = set;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw std::invalid_argument("parity set has duplicates");
  if (s.front() == 0) throw std::invalid_argument("parity positions are 1-based");
  const int n = static_cast<int>(s.back());
  std::string name = "parity:";
  Assignment mask = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    name += (i ? "," : "") + std::to_string(s[i]);
    if (s[i] <= static_cast<Position>(kMaxTableBits)) mask |= Assignment{1} << (s[i] - 1);
  }
  require_table_size(n, name);
  return from_table(name, TruthTable::tabulate(n, [mask](Assignment x) {
                      return (std::popcount(x & mask) & 1) ? -1 : 1;
                    }));
}

BooleanFunction majority(int n) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("majority needs an odd n >= 1");
  require_table_size(n, "maj:" + std::to_string(n));
  return from_table("maj:" + std::to_string(n), TruthTable::tabulate(n, [n](Assignment x) {
                      return 2 * std::popcount(x) < n ? 1 : -1;
                    }));
}

BooleanFunction tribes(int width, int blocks) {
  if (width < 1 || blocks < 1) throw std::invalid_argument("tribes needs width, blocks >= 1");
  const std::string name = "tribes:" + std::to_string(width) + "x" + std::to_string(blocks);
  require_table_size(width * blocks, name);
  const Assignment block_mask = (Assignment{1} << width) - 1;
  return from_table(name, TruthTable::tabulate(width * blocks, [=](Assignment x) {
                      for (int b = 0; b < blocks; ++b)
                        if (((x >> (b * width)) & block_mask) == 0) return 1;
                      return -1;
                    }));
}

BooleanFunction constant(int value) {
  if (value != 1 && value != -1) throw std::invalid_argument("constant must be +1 or -1");
  return from_table(value == 1 ? "const:+1" : "const:-1", TruthTable(0, {static_cast<std::int8_t>(value)}));
}

BooleanFunction sequential_selector() {
  BooleanFunction f;
  f.spec = "selector";
  f.query = QueryFunction{"selector", [](QueryContext& ctx) {
                            for (Position n = 1;; ++n)
                              if (ctx.query(2 * n - 1) == 1) return ctx.query(2 * n);
                          }};
  return f;
}

Position splice_block_size(SpliceGrowth growth, int constant, int n) {
  switch (growth) {
    case SpliceGrowth::Constant:
      return static_cast<Position>(constant);
    case SpliceGrowth::Linear:
      return static_cast<Position>(n);
    case SpliceGrowth::Exponential:
      return n >= 62 ? (Position{1} << 62) : (Position{1} << n);
  }
  return 1;
}

BooleanFunction spliced_selector(SpliceGrowth growth, int constant) {
  if (growth == SpliceGrowth::Constant && constant < 1)
    throw std::invalid_argument("spliced block size must be >= 1");
  std::string name = "spliced:";
  switch (growth) {
    case SpliceGrowth::Constant: name += std::to_string(constant); break;
    case SpliceGrowth::Linear: name += "lin"; break;
    case SpliceGrowth::Exponential: name += "exp"; break;
  }
  BooleanFunction f;
  f.spec = name;
  f.query = QueryFunction{name, [growth, constant](QueryContext& ctx) {
                            Position start = 1;
                            for (int n = 1;; ++n) {
                              const Position size = splice_block_size(growth, constant, n);
                              int product = 1;
                              for (Position i = 0; i < size; ++i) product *= ctx.query(start + i);
                              const Position value_bit = start + size;
                              if (product == 1) return ctx.query(value_bit);
                              start = value_bit + 1;
                            }
                          }};
  return f;
}

BooleanFunction block_function() {
  BooleanFunction f;
  f.spec = "block";
  f.query = QueryFunction{"block", [](QueryContext& ctx) {
                            Position start = 1;
                            for (Position size = 1;; ++size) {
                              bool all_plus = true;
                              for (Position i = 0; i < size && all_plus; ++i) all_plus = ctx.query(start + i) == 1;
                              if (all_plus) return 1;
                              start += size;
                            }
                          }};
  return f;
}

BooleanFunction random_walk_hitting(int k) {
  if (k < 1) throw std::invalid_argument("rwhit threshold must be >= 1");
  const std::string name = "rwhit:" + std::to_string(k);
  BooleanFunction f;
  f.spec = name;
  f.query = QueryFunction{name, [k](QueryContext& ctx) {
                            long walk = 0;
                            for (Position i = 1;; ++i) {
                              walk += ctx.query(i);
                              if (walk == k) return 1;
                              if (walk == -k) return -1;
                            }
                          }};
  return f;
}

BooleanFunction make_function(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto need_arg = [&] {
    if (arg.empty()) throw std::invalid_argument("invalid function spec '" + spec + "': missing argument after '" + head + ":'");
  };
  if (head == "dict") {
    need_arg();
    return dictator(parse_int(arg, spec));
  }
  if (head == "maj") {
    need_arg();
    return majority(parse_int(arg, spec));
  }
  if (head == "parity") {
    need_arg();
    std::vector<Position> set;
    std::size_t pos = 0;
    while (pos <= arg.size()) {
      const auto comma = arg.find(',', pos);
      const auto piece = arg.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      const int v = parse_int(piece, spec);
      if (v < 1) throw std::invalid_argument("invalid function spec '" + spec + "': positions are 1-based");
      set.push_back(static_cast<Position>(v));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return parity(set);
  }
  if (head == "tribes") {
    need_arg();
    const auto x = arg.find('x');
    if (x == std::string::npos) throw std::invalid_argument("invalid function spec '" + spec + "': expected tribes:<width>x<blocks>");
    return tribes(parse_int(arg.substr(0, x), spec), parse_int(arg.substr(x + 1), spec));
  }
  if (head == "const") {
    if (arg.empty() || arg == "+1" || arg == "1") return constant(1);
    if (arg == "-1") return constant(-1);
    throw std::invalid_argument("invalid function spec '" + spec + "': constant must be +1 or -1");
  }
  if (head == "selector" && arg.empty()) return sequential_selector();
  if (head == "spliced") {
    if (arg == "exp") return spliced_selector(SpliceGrowth::Exponential);
    if (arg == "lin") return spliced_selector(SpliceGrowth::Linear);
    need_arg();
    return spliced_selector(SpliceGrowth::Constant, parse_int(arg, spec));
  }
  if (head == "block" && arg.empty()) return block_function();
  if (head == "rwhit") {
    need_arg();
    return random_walk_hitting(parse_int(arg, spec));
  }
  throw std::invalid_argument("invalid function spec '" + spec + "': unknown function '" + head + "'");
}

std::vector<ZooEntry> zoo_listing() {
  return {
      {"dict:<n>", "dictator omega_1 on n bits"},
      {"parity:<i,j,...>", "character chi_S for the listed positions"},
      {"maj:<n>", "majority of n bits (n odd)"},
      {"tribes:<w>x<b>", "+1 iff one of b blocks of w bits is all +1"},
      {"const:<+1|-1>", "constant function"},
      {"selector", "omega_2 if omega_1=+1, else omega_4 if omega_3=+1, ..."},
      {"spliced:<exp|lin|k>", "selector with condition bits replaced by blocks of a_n bits"},
      {"block", "+1 iff a block (sizes 1,2,3,...) is all +1; not finitary"},
      {"rwhit:<k>", "+1 iff the walk of the bits hits +k before -k"},
  };
}

}  // namespace cubeinf
