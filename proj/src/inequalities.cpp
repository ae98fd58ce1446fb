#include "cubeinf/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cubeinf/kernels.hpp"

namespace cubeinf {

double kkl_constant() { return std::min(1.0 / (11.0 * std::numbers::ln2), 1.0 / std::log(1000.0)); }

double variance(const Spectrum& s) {
  const double m = s.mean();
  return s.squared_norm() - m * m;
}

double variance(const TruthTable& f) {
  double sum = 0.0;
  for (auto v : f.values()) sum += v;
  const double m = sum / static_cast<double>(f.size());
  return 1.0 - m * m;
}

AuditReport poincare_check(const InfluenceProfile& profile, double var) {
  return make_report("poincare", Relation::GreaterEqual, profile.total, var, kExactTolerance,
                     profile.exact ? "exact" : "monte carlo");
}

AuditReport kkl_check(const InfluenceProfile& profile, double var) {
  const double delta = profile.max_influence;
  if (delta <= 0.0)
    return make_report("kkl", Relation::GreaterEqual, profile.total, 0.0, kExactTolerance,
                       profile.exact ? "exact" : "monte carlo", "max influence is 0: vacuous");
  const double rhs = kkl_constant() * var * std::log(1.0 / delta);
  return make_report("kkl", Relation::GreaterEqual, profile.total, rhs, kExactTolerance,
                     profile.exact ? "exact" : "monte carlo");
}

namespace {

void require_p(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("p must be > 1, got " + std::to_string(p));
}

// Right side shared by both lemmas: lead - (1/(p-1)) mp / nu^p.
double moment_penalty(double p, double mp, double nu) { return mp / ((p - 1.0) * std::pow(nu, p)); }

double finitary_lead(double var, double nu) { return nu > 0 ? 0.5 * kkl_constant() * var * std::log(nu) / nu : 0.0; }

struct SampleColumns {
  std::vector<double> value, size, w, wp;
  std::vector<std::vector<double>> indicator;  // per tracked bit
  std::size_t undetermined = 0;
};

SampleColumns collect(const QueryFunction& f, double p, std::size_t samples, std::uint64_t seed, Position track) {
  const auto draws = sample_pivotals(f, samples, seed);
  SampleColumns c;
  c.indicator.assign(track, {});
  for (const auto& d : draws) {
    if (!d.determined) {
      ++c.undetermined;
      continue;
    }
    c.value.push_back(d.value);
    c.size.push_back(static_cast<double>(d.pivotal.size()));
    c.w.push_back(static_cast<double>(d.max_w));
    c.wp.push_back(std::pow(static_cast<double>(d.max_w), p));
    for (Position k = 1; k <= track; ++k)
      c.indicator[k - 1].push_back(std::binary_search(d.pivotal.begin(), d.pivotal.end(), k) ? 1.0 : 0.0);
  }
  return c;
}

std::size_t argmax_column(const SampleColumns& c) {
  std::size_t best = 0;
  double best_mean = -1.0;
  for (std::size_t k = 0; k < c.indicator.size(); ++k) {
    const double m = column_mean(c.indicator[k]);
    if (m > best_mean) {
      best_mean = m;
      best = k;
    }
  }
  return best;
}

std::string provenance(const SampleColumns& c, Position track) {
  std::ostringstream os;
  os << "monte carlo: " << c.value.size() << " samples, " << c.undetermined << " undetermined, max over bits 1.."
     << track;
  return os.str();
}

}  // namespace

AuditReport maxinf_lemma_check(const TruthTable& f, double p) {
  require_p(p);
  const auto profile = influences_exact(f);
  const double nu = knowability_moment_exact(f, 1.0);
  const double mp = knowability_moment_exact(f, p);
  const double rhs = nu > 0 ? profile.total / nu - moment_penalty(p, mp, nu) : 0.0;
  return make_report("maxinf_lemma", Relation::GreaterEqual, profile.max_influence, rhs, kExactTolerance);
}

AuditReport maxinf_lemma_check(const QueryFunction& f, double p, std::size_t samples, std::uint64_t seed,
                               Position track) {
  require_p(p);
  const auto c = collect(f, p, samples, seed, track);
  const std::size_t k = argmax_column(c);
  const double ik = column_mean(c.indicator[k]);
  const double total = column_mean(c.size);
  const double nu = column_mean(c.w);
  const double mp = column_mean(c.wp);
  const double rhs = nu > 0 ? total / nu - moment_penalty(p, mp, nu) : 0.0;
  double se = 0.0;
  if (c.value.size() > 1 && nu > 0) {
    const double grad[] = {1.0, -1.0 / nu, total / (nu * nu) - p * mp / ((p - 1.0) * std::pow(nu, p + 1.0)),
                           1.0 / ((p - 1.0) * std::pow(nu, p))};
    se = linearized_stderr({c.indicator[k], c.size, c.w, c.wp}, grad);
  }
  return make_report("maxinf_lemma", Relation::GreaterEqual, ik, rhs, 3.0 * se + 1e-12, provenance(c, track),
                     "max attained at bit " + std::to_string(k + 1));
}

AuditReport finitary_kkl_check(const TruthTable& f, double p) {
  require_p(p);
  const auto profile = influences_exact(f);
  const double nu = knowability_moment_exact(f, 1.0);
  const double mp = knowability_moment_exact(f, p);
  const double rhs = nu > 0 ? finitary_lead(variance(f), nu) - moment_penalty(p, mp, nu) : 0.0;
  return make_report("finitary_kkl", Relation::GreaterEqual, profile.max_influence, rhs, kExactTolerance);
}

AuditReport finitary_kkl_check(const QueryFunction& f, double p, std::size_t samples, std::uint64_t seed,
                               Position track) {
  require_p(p);
  const auto c = collect(f, p, samples, seed, track);
  const std::size_t k = argmax_column(c);
  const double ik = column_mean(c.indicator[k]);
  const double mu = column_mean(c.value);
  const double var = 1.0 - mu * mu;
  const double nu = column_mean(c.w);
  const double mp = column_mean(c.wp);
  const double rhs = nu > 0 ? finitary_lead(var, nu) - moment_penalty(p, mp, nu) : 0.0;
  double se = 0.0;
  if (c.value.size() > 1 && nu > 0) {
    const double cc = 0.5 * kkl_constant();
    const double grad[] = {1.0, 2.0 * cc * mu * std::log(nu) / nu,
                           -cc * var * (1.0 - std::log(nu)) / (nu * nu) - p * mp / ((p - 1.0) * std::pow(nu, p + 1.0)),
                           1.0 / ((p - 1.0) * std::pow(nu, p))};
    se = linearized_stderr({c.indicator[k], c.value, c.w, c.wp}, grad);
  }
  return make_report("finitary_kkl", Relation::GreaterEqual, ik, rhs, 3.0 * se + 1e-12, provenance(c, track),
                     "max attained at bit " + std::to_string(k + 1));
}

namespace {

struct CoupledPair {
  bool ok = false;
  double a = 0, b = 0;
};

std::vector<CoupledPair> coupled_values(const QueryFunction& f, double epsilon, std::size_t samples,
                                        std::uint64_t seed) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0,1]");
  return kernels::map_samples<CoupledPair>(samples, [&](std::size_t s) {
    LazyInput omega(derive_seed(seed, s, 0));
    NoiseCoupling noised(omega, epsilon, derive_seed(seed, s, 1));
    const auto a = eval_query(f, omega);
    const auto b = eval_query(f, noised);
    if (!a.determined() || !b.determined()) return CoupledPair{};
    return CoupledPair{true, static_cast<double>(*a.value), static_cast<double>(*b.value)};
  });
}

}  // namespace

Estimate noise_correlation_mc(const QueryFunction& f, double epsilon, std::size_t samples, std::uint64_t seed) {
  const auto pairs = coupled_values(f, epsilon, samples, seed);
  std::vector<double> prod;
  for (const auto& p : pairs)
    if (p.ok) prod.push_back(p.a * p.b);
  auto e = summarize(prod);
  e.undetermined = pairs.size() - prod.size();
  return e;
}

Estimate xi_mc(const QueryFunction& f, double epsilon, std::size_t samples, std::uint64_t seed) {
  const auto pairs = coupled_values(f, epsilon, samples, seed);
  std::vector<double> prod, avg;
  for (const auto& p : pairs) {
    if (!p.ok) continue;
    prod.push_back(p.a * p.b);
    avg.push_back(0.5 * (p.a + p.b));
  }
  Estimate e;
  e.samples = prod.size();
  e.undetermined = pairs.size() - prod.size();
  if (prod.empty()) return e;
  const double m = column_mean(avg);
  e.mean = column_mean(prod) - m * m;
  if (prod.size() > 1) {
    const double grad[] = {1.0, -2.0 * m};
    e.se = linearized_stderr({prod, avg}, grad);
  }
  return e;
}

KKDiagnostic kk_diagnostic(const std::vector<FamilyMember>& family, double epsilon) {
  KKDiagnostic d;
  d.epsilon = epsilon;
  for (const auto& m : family) {
    const auto s = transform(m.table);
    d.rows.push_back({m.name, m.table.n(), h_fourier(s), xi(s, epsilon)});
  }
  if (d.rows.size() < 2) return d;
  constexpr double tol = 1e-12;
  d.h_decreasing = d.xi_decreasing = true;
  for (std::size_t i = 1; i < d.rows.size(); ++i) {
    d.h_decreasing = d.h_decreasing && d.rows[i].h < d.rows[i - 1].h + tol;
    d.xi_decreasing = d.xi_decreasing && d.rows[i].xi < d.rows[i - 1].xi + tol;
  }
  const auto& first = d.rows.front();
  const auto& last = d.rows.back();
  d.reversal = d.h_decreasing && last.h < 0.5 * first.h && last.xi > first.xi + tol;
  return d;
}

int log_level_cap(double mu) { return std::max(1, static_cast<int>(std::ceil(std::log(mu)))); }

std::vector<LowLevelRow> low_level_energy_diagnostic(const std::vector<FamilyMember>& family, double p,
                                                     LevelCapRule rule) {
  std::vector<LowLevelRow> rows;
  for (const auto& m : family) {
    const auto s = transform(m.table);
    LowLevelRow r;
    r.name = m.name;
    r.mu = knowability_moment_exact(m.table, p);
    r.cap = rule(r.mu);
    r.low_energy = band_energy(s, 1, r.cap);
    r.h = h_fourier(s);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace cubeinf
