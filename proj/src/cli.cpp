#include "cubeinf/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cubeinf/influence.hpp"
#include "cubeinf/inequalities.hpp"
#include "cubeinf/revealment.hpp"
#include "cubeinf/spectral.hpp"
#include "cubeinf/voter.hpp"
#include "cubeinf/zoo.hpp"

namespace cubeinf::cli {

namespace {

using nlohmann::json;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

std::uint64_t to_position(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || v == 0 || s[0] == '-')
    throw std::invalid_argument("invalid bit position '" + s + "' (positions are integers >= 1)");
  return v;
}

/// Holds the payload and writes it to --out or the output stream.
struct Sink {
  const RunConfig& config;
  std::ostream& out;

  void write(const std::string& payload) const {
    if (config.out.empty()) {
      out << payload;
      return;
    }
    std::ofstream file(config.out);
    if (!file) throw std::invalid_argument("cannot write output file '" + config.out + "'");
    file << payload;
  }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

BooleanFunction require_function(const RunConfig& c) {
  if (c.fn.empty()) throw std::invalid_argument("--fn is required for '" + c.command + "'");
  return make_function(c.fn);
}

const TruthTable& require_table(const BooleanFunction& f, const std::string& why) {
  if (!f.table) throw std::invalid_argument("function '" + f.spec + "' is not finitely supported; " + why);
  return *f.table;
}

int cmd_spectrum(const RunConfig& c, const Sink& sink) {
  const auto f = require_function(c);
  Spectrum s;
  json j;
  if (f.table) {
    s = transform(*f.table);
  } else {
    if (c.bits.empty())
      throw std::invalid_argument("function '" + f.spec + "' is not finitely supported; pass --bits m to use B_m f");
    const auto m = to_position(c.bits);
    if (m > static_cast<std::uint64_t>(kMaxSpectralBits))
      throw std::invalid_argument("--bits " + c.bits + " exceeds the spectral cap of 20");
    s = transform(boolean_approx(f.query, static_cast<int>(m)));
    j["approximation"] = "B_" + c.bits;
  }
  const auto spec_json = to_json(s);
  j["function"] = f.spec;
  j["n"] = spec_json["n"];
  j["coefficients"] = spec_json["coefficients"];
  j["energy"] = energy_profile(s).levels;
  sink.write(dump(j));
  return kExitOk;
}

int cmd_influence(const RunConfig& c, const Sink& sink) {
  const auto f = require_function(c);
  std::vector<std::uint64_t> bits;
  if (!c.bits.empty()) {
    bits = parse_positions(c.bits);
  } else {
    const int n = f.table ? std::max(1, f.table->n()) : 8;
    for (int k = 1; k <= n; ++k) bits.push_back(static_cast<std::uint64_t>(k));
  }
  const Position track = *std::max_element(bits.begin(), bits.end());
  std::ostringstream csv;
  csv << "bit,estimate,stderr\n";
  if (f.table) {
    if (f.table->n() > kMaxSpectralBits) throw std::invalid_argument("table exceeds the influence cap of 20 bits");
    const auto prof = influences_exact(*f.table);
    for (auto k : bits) csv << k << ',' << fmt(prof.influence(k)) << ",0\n";
  } else {
    const auto prof = influences_mc(f.query, track, c.samples, c.seed);
    for (auto k : bits) csv << k << ',' << fmt(prof.per_bit[k - 1]) << ',' << fmt(prof.per_bit_se[k - 1]) << '\n';
  }
  sink.write(csv.str());
  return kExitOk;
}

QueryAlgorithm make_algorithm(const RunConfig& c, const BooleanFunction& f) {
  if (c.alg == "natural") return natural_algorithm(f.query);
  if (c.alg == "random-order") return random_order_algorithm(require_table(f, "random-order needs a truth table"));
  throw std::invalid_argument("unknown --alg '" + c.alg + "' (natural, random-order)");
}

int cmd_audit(const RunConfig& c, const Sink& sink) {
  const auto f = require_function(c);
  const bool exact = c.suite == "exact" || c.suite == "all";
  const bool mc = c.suite == "mc" || c.suite == "all";
  if (!exact && !mc) throw std::invalid_argument("unknown --suite '" + c.suite + "' (exact, mc, all)");
  std::vector<AuditReport> reports;
  if (exact) {
    const auto& t = require_table(f, "the exact suite needs a truth table");
    if (t.n() > 16) throw std::invalid_argument("the exact audit suite is limited to n <= 16");
    const auto profile = influences_exact(t);
    const double var = variance(t);
    reports.push_back(poincare_check(profile, var));
    reports.push_back(kkl_check(profile, var));
    reports.push_back(maxinf_lemma_check(t, c.p));
    reports.push_back(finitary_kkl_check(t, c.p));
  }
  if (mc) {
    std::vector<Position> ks;
    if (c.bits.empty())
      for (Position k = 1; k <= 8; ++k) ks.push_back(k);
    else
      ks = parse_positions(c.bits);
    for (auto& r : knowability_influence_bound_check(f.query, 1.0, ks, c.samples, c.seed)) reports.push_back(r);
    reports.push_back(maxinf_lemma_check(f.query, c.p, c.samples, derive_seed(c.seed, 1, 7)));
    reports.push_back(finitary_kkl_check(f.query, c.p, c.samples, derive_seed(c.seed, 2, 7)));
    if (f.table && f.table->n() <= kMaxSpectralBits) {
      const Position track = static_cast<Position>(std::max(1, f.table->n()));
      const auto rev = estimate_revealment(natural_algorithm(f.query), c.samples, track, derive_seed(c.seed, 3, 7));
      for (auto& r : revealment_inequality_audit(transform(*f.table), rev)) reports.push_back(r);
    }
  }
  json j = {{"function", f.spec}, {"suite", c.suite}, {"reports", to_json(reports)}, {"passed", all_passed(reports)}};
  sink.write(dump(j));
  return all_passed(reports) ? kExitOk : kExitAuditFailed;
}

int cmd_revealment(const RunConfig& c, const Sink& sink) {
  const auto f = require_function(c);
  const auto alg = make_algorithm(c, f);
  const Position track = c.track ? c.track : (f.table ? std::max<Position>(1, f.table->n()) : 16);
  const auto rev = estimate_revealment(alg, c.samples, track, c.seed);
  json j = to_json(rev);
  j["function"] = f.spec;
  j["algorithm"] = alg.name;
  bool ok = true;
  if (f.table && f.table->n() <= kMaxSpectralBits) {
    const auto reports = revealment_inequality_audit(transform(*f.table), rev);
    j["audit"] = to_json(reports);
    ok = all_passed(reports);
  }
  sink.write(dump(j));
  return ok ? kExitOk : kExitAuditFailed;
}

json matrix_json(const voter::Matrix& m) {
  json rows = json::array();
  for (const auto& r : m) rows.push_back(r);
  return rows;
}

std::vector<voter::Vertex> parse_vertices(const std::string& text, int V) {
  std::vector<voter::Vertex> out;
  if (trim(text).empty()) return out;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || v < 0 || v >= V)
      throw std::invalid_argument("invalid vertex '" + part + "' (expected 0.." + std::to_string(V - 1) + ")");
    out.push_back(v);
  }
  return out;
}

int cmd_voter(const RunConfig& c, const Sink& sink) {
  if (c.graph.empty()) throw std::invalid_argument("--graph is required for 'voter'");
  const auto g = voter::OrderedDigraph::load(c.graph);
  const auto N = voter::default_window(g);
  if (c.mode == "simulate") {
    const auto pi = voter::stationary(g);
    const std::uint64_t n = std::min<std::uint64_t>(c.samples, 100'000);
    std::vector<std::size_t> counts(static_cast<std::size_t>(g.vertex_count()), 0);
    std::size_t fallbacks = 0;
    for (std::uint64_t s = 0; s < n; ++s) {
      LazyInput omega(derive_seed(c.seed, s, 0));
      QueryContext ctx(omega, derive_seed(c.seed, s, 3));
      const auto trace = voter::run_rho(g, N, N, ctx);
      ++counts[static_cast<std::size_t>(trace.rho)];
      fallbacks += trace.fallback;
    }
    json freq = json::array();
    for (auto k : counts) freq.push_back(static_cast<double>(k) / static_cast<double>(n));
    json j = {{"vertices", g.vertex_count()},
              {"edges", g.edge_count()},
              {"cycle_matrix", matrix_json(voter::backward_cycle_matrix(g))},
              {"pi", pi},
              {"zeta", voter::zeta(g)},
              {"bound", voter::revealment_bound(g)},
              {"mixing_time", voter::mixing_time(g)},
              {"rho_frequency", freq},
              {"samples", n},
              {"fallbacks", fallbacks}};
    sink.write(dump(j));
    return kExitOk;
  }
  if (c.mode == "bound") {
    const Position track = c.track ? c.track : 2 * g.edge_count();
    const auto a = voter::revealment_bound_audit(g, N, N, c.samples, track, c.seed);
    json bits = json::array();
    for (std::size_t i = 0; i < a.per_bit.size(); ++i)
      bits.push_back({{"bit", i + 1}, {"frequency", a.per_bit[i].mean}, {"stderr", a.per_bit[i].se}});
    json j = {{"report", to_json(a.report)},
              {"max_pi", a.max_pi},
              {"zeta", a.zeta},
              {"bound", a.bound},
              {"sup", a.sup},
              {"sup_stderr", a.sup_se},
              {"sup_bit", a.sup_bit},
              {"main_phase_sup", a.main_phase_sup},
              {"failure_rate", a.failure_rate},
              {"late_coalescence", a.late_coalescence},
              {"window_slack", a.window_slack},
              {"mixing_time", a.mixing_time},
              {"N", a.N},
              {"M", a.M},
              {"per_bit", bits}};
    sink.write(dump(j));
    return a.report.passed ? kExitOk : kExitAuditFailed;
  }
  if (c.mode == "stability") {
    const auto black = c.black.empty() ? std::vector<voter::Vertex>{0} : parse_vertices(c.black, g.vertex_count());
    const auto r = voter::initial_state_stability_check(g, black, c.samples, c.seed);
    json j = {{"report", to_json(r.report)},
              {"fixation_black", r.black.mean},
              {"stderr", r.black.se},
              {"predicted", r.predicted},
              {"not_fixated", r.not_fixated}};
    sink.write(dump(j));
    return r.report.passed ? kExitOk : kExitAuditFailed;
  }
  if (c.mode == "sweep") {
    std::vector<voter::Vertex> B;
    if (c.black.empty())
      for (int v = 0; v < g.vertex_count() / 2; ++v) B.push_back(v);
    else
      B = parse_vertices(c.black, g.vertex_count());
    const auto rows = voter::voter_sensitivity_sweep({{c.graph, g, B}}, parse_reals(c.eps), c.samples, c.seed);
    std::ostringstream csv;
    csv << "graph,vertices,epsilon,xi,stderr,bound\n";
    for (const auto& r : rows)
      csv << r.name << ',' << r.vertices << ',' << fmt(r.epsilon) << ',' << fmt(r.xi.mean) << ',' << fmt(r.xi.se)
          << ',' << fmt(r.bound) << '\n';
    sink.write(csv.str());
    return kExitOk;
  }
  throw std::invalid_argument("unknown --mode '" + c.mode + "' (simulate, bound, stability, sweep)");
}

std::vector<FamilyMember> function_family(const std::string& suite) {
  std::vector<std::string> specs;
  if (suite == "tribes")
    specs = {"tribes:2x4", "tribes:2x6", "tribes:2x8"};
  else if (suite == "tribes-log")
    specs = {"tribes:2x4", "tribes:3x4", "tribes:4x4"};
  else if (suite == "dictator")
    specs = {"dict:1", "dict:2", "dict:4", "dict:8"};
  else if (suite == "parity")
    for (int n = 1; n <= 8; ++n) {
      std::string s = "parity:";
      for (int i = 1; i <= n; ++i) s += (i > 1 ? "," : "") + std::to_string(i);
      specs.push_back(s);
    }
  else
    throw std::invalid_argument("unknown sweep --suite '" + suite +
                                "' (tribes, tribes-log, dictator, parity, voter-cycles)");
  std::vector<FamilyMember> family;
  for (const auto& s : specs) family.push_back({s, *make_function(s).table});
  return family;
}

int cmd_sweep(const RunConfig& c, const Sink& sink) {
  const auto epsilons = parse_reals(c.eps);
  std::ostringstream csv;
  if (c.suite == "voter-cycles") {
    std::vector<voter::SweepMember> family;
    for (int L : {4, 8, 16, 32}) {
      std::vector<voter::Vertex> B;
      for (int v = 0; v < L / 2; ++v) B.push_back(v);
      family.push_back({"cycle:" + std::to_string(L), voter::directed_cycle(L), B});
    }
    const auto rows = voter::voter_sensitivity_sweep(family, epsilons, c.samples, c.seed);
    csv << "member,vertices,epsilon,xi,stderr,bound\n";
    for (const auto& r : rows)
      csv << r.name << ',' << r.vertices << ',' << fmt(r.epsilon) << ',' << fmt(r.xi.mean) << ',' << fmt(r.xi.se)
          << ',' << fmt(r.bound) << '\n';
    sink.write(csv.str());
    return kExitOk;
  }
  const auto family = function_family(c.suite == "all" ? "tribes" : c.suite);
  const auto low = low_level_energy_diagnostic(family);
  bool reversal = false;
  csv << "member,n,epsilon,h,xi,mu,level_cap,low_energy\n";
  for (double eps : epsilons) {
    const auto d = kk_diagnostic(family, eps);
    reversal = reversal || d.reversal;
    for (std::size_t i = 0; i < d.rows.size(); ++i)
      csv << d.rows[i].name << ',' << d.rows[i].n << ',' << fmt(eps) << ',' << fmt(d.rows[i].h) << ','
          << fmt(d.rows[i].xi) << ',' << fmt(low[i].mu) << ',' << low[i].cap << ',' << fmt(low[i].low_energy) << '\n';
  }
  sink.write(csv.str());
  return reversal ? kExitAuditFailed : kExitOk;
}

int cmd_zoo_list(const Sink& sink) {
  std::ostringstream os;
  for (const auto& e : zoo_listing()) os << std::left << std::setw(22) << e.syntax << e.description << '\n';
  sink.write(os.str());
  return kExitOk;
}

}  // namespace

std::vector<std::uint64_t> parse_positions(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) continue;
    if (const auto dots = part.find(".."); dots != std::string::npos) {
      const auto lo = to_position(part.substr(0, dots));
      const auto hi = to_position(part.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("empty bit range '" + part + "'");
      if (hi - lo > 1'000'000) throw std::invalid_argument("bit range '" + part + "' is too long");
      for (auto k = lo; k <= hi; ++k) out.push_back(k);
    } else {
      out.push_back(to_position(part));
    }
  }
  if (out.empty()) throw std::invalid_argument("no bit positions given");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) continue;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw std::invalid_argument("invalid number '" + part + "'");
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("epsilon " + part + " outside [0,1]");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("no epsilon values given");
  return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.workers < 0) throw std::invalid_argument("--workers must be >= 0");
    if (config.samples == 0) throw std::invalid_argument("--samples must be >= 1");
    set_worker_count(config.workers);
    const Sink sink{config, out};
    const auto& cmd = config.command;
    if (cmd == "spectrum") return cmd_spectrum(config, sink);
    if (cmd == "influence") return cmd_influence(config, sink);
    if (cmd == "audit") return cmd_audit(config, sink);
    if (cmd == "revealment") return cmd_revealment(config, sink);
    if (cmd == "voter") return cmd_voter(config, sink);
    if (cmd == "sweep") return cmd_sweep(config, sink);
    if (cmd == "zoo-list") return cmd_zoo_list(sink);
    throw std::invalid_argument("unknown command '" + cmd + "'");
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
}

int run_main(int argc, char** argv) {
  CLI::App app{"cubeinf: Boolean functions on the infinite cube"};
  app.require_subcommand(1);
  RunConfig config;
  if (const char* env = std::getenv("CUBEINF_SEED")) {
    try {
      config.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: CUBEINF_SEED must be a non-negative integer\n";
      return kExitInvalidInput;
    }
  }

  auto common = [&config](CLI::App* sub) {
    sub->add_option("--fn", config.fn, "function spec, e.g. maj:3, selector");
    sub->add_option("--graph", config.graph, "ordered digraph file");
    sub->add_option("--samples", config.samples, "Monte Carlo samples");
    sub->add_option("--seed", config.seed, "master seed (default: CUBEINF_SEED or 1)");
    sub->add_option("--eps", config.eps, "comma-separated epsilon grid");
    sub->add_option("--workers", config.workers, "worker threads (0 = all)");
    sub->add_option("--out", config.out, "output file (default: stdout)");
    sub->add_option("--mode", config.mode, "voter mode: simulate, bound, stability, sweep");
    sub->add_option("--track", config.track, "tracked bit range 1..K");
    sub->add_option("--alg", config.alg, "algorithm: natural, random-order");
    sub->add_option("--suite", config.suite, "audit: exact, mc, all; sweep: tribes, tribes-log, dictator, parity, voter-cycles");
    sub->add_option("--bits", config.bits, "bit positions, e.g. 1..8 or 1,3,5");
    sub->add_option("--p", config.p, "moment exponent for the witness lemmas");
    sub->add_option("--black", config.black, "voter vertex set, e.g. 0,2");
  };
  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "Fourier-Walsh spectrum as JSON"},
      {"influence", "per-bit influences as CSV"},
      {"audit", "inequality audits as JSON"},
      {"revealment", "per-bit revealment of a query algorithm"},
      {"voter", "edge-ordered voter model tools"},
      {"sweep", "sensitivity sweeps over a family as CSV"},
      {"zoo-list", "list the function zoo"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    sub->callback([&config, name] { config.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidInput;
  }
  return run(config, std::cout, std::cerr);
}

}  // namespace cubeinf::cli
