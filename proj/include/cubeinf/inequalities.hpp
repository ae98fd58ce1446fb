#pragma once

#include <string>
#include <vector>

#include "cubeinf/audit.hpp"
#include "cubeinf/influence.hpp"
#include "cubeinf/montecarlo.hpp"
#include "cubeinf/query.hpp"
#include "cubeinf/spectral.hpp"
#include "cubeinf/truth_table.hpp"

namespace cubeinf {

/// Tolerance for audits over exactly computed quantities.
inline constexpr double kExactTolerance = 1e-9;

/// KKL constant in natural-log form: min(1/(11 ln 2), 1/ln 1000).
double kkl_constant();

double variance(const Spectrum& s);
double variance(const TruthTable& f);

/// I(f) >= Var(f).
AuditReport poincare_check(const InfluenceProfile& profile, double variance);

/// I(f) >= c Var(f) ln(1/delta). delta = 0 passes vacuously.
AuditReport kkl_check(const InfluenceProfile& profile, double variance);

/// max_k I_k >= I/nu - (1/(p-1)) E[(max W)^p] / nu^p with nu = E[max W].
/// Throws std::invalid_argument unless p > 1.
AuditReport maxinf_lemma_check(const TruthTable& f, double p);
AuditReport maxinf_lemma_check(const QueryFunction& f, double p, std::size_t samples, std::uint64_t seed,
                               Position track = 64);

/// max_k I_k >= (c/2) Var ln(nu)/nu - (1/(p-1)) E[(max W)^p] / nu^p.
AuditReport finitary_kkl_check(const TruthTable& f, double p);
AuditReport finitary_kkl_check(const QueryFunction& f, double p, std::size_t samples, std::uint64_t seed,
                               Position track = 64);

/// Coupled Monte Carlo estimates of E[f(w) f(w^eps)] and of Xi.
Estimate noise_correlation_mc(const QueryFunction& f, double epsilon, std::size_t samples, std::uint64_t seed);
Estimate xi_mc(const QueryFunction& f, double epsilon, std::size_t samples, std::uint64_t seed);

struct FamilyMember {
  std::string name;
  TruthTable table;
};

struct KKRow {
  std::string name;
  int n = 0;
  double h = 0.0;
  double xi = 0.0;
};

/// (H, Xi) along a family. Only a qualitative reversal fails: H falls below
/// half its first value while Xi ends above where it started.
struct KKDiagnostic {
  std::vector<KKRow> rows;
  double epsilon = 0.0;
  bool h_decreasing = false;
  bool xi_decreasing = false;
  bool reversal = false;
};
KKDiagnostic kk_diagnostic(const std::vector<FamilyMember>& family, double epsilon);

struct LowLevelRow {
  std::string name;
  double mu = 0.0;  // E[(max W)^p]
  int cap = 0;
  double low_energy = 0.0;
  double h = 0.0;
};

/// Level cap as a function of mu.
using LevelCapRule = int (*)(double mu);
/// max(1, ceil(ln mu)).
int log_level_cap(double mu);

std::vector<LowLevelRow> low_level_energy_diagnostic(const std::vector<FamilyMember>& family, double p = 1.0,
                                                     LevelCapRule rule = log_level_cap);

}  // namespace cubeinf
