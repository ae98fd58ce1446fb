#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cubeinf/truth_table.hpp"

namespace cubeinf {

/// Frequency set S as a bit mask: bit (j-1) set iff j in S.
using FrequencySet = std::uint32_t;

/// Coefficients with |value| below this are dropped after a transform.
inline constexpr double kCoefficientFloor = 1e-12;

struct SpectralTerm {
  FrequencySet set = 0;
  double coeff = 0.0;
};

/// Sparse Fourier-Walsh expansion of a function of the first n bits.
/// Terms are sorted by set mask and immutable after construction.
class Spectrum {
 public:
  Spectrum() = default;
  /// Terms may arrive in any order; duplicates are summed and zeros dropped.
  Spectrum(int n, std::vector<SpectralTerm> terms);

  int n() const noexcept { return n_; }
  std::span<const SpectralTerm> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// f-hat(S), zero when absent.
  double coefficient(FrequencySet s) const;
  /// Sum of squared coefficients.
  double squared_norm() const;
  double mean() const { return coefficient(0); }

  /// Filters terms, preserving n.
  template <class Pred>
  Spectrum filter(Pred&& keep) const {
    Spectrum out;
    out.n_ = n_;
    for (const auto& t : terms_)
      if (keep(t)) out.terms_.push_back(t);
    return out;
  }

 private:
  int n_ = 0;
  std::vector<SpectralTerm> terms_;
};

/// Positions in S, ascending.
std::vector<Position> set_positions(FrequencySet s);
FrequencySet make_set(std::span<const Position> positions);
inline int set_size(FrequencySet s) noexcept { return __builtin_popcount(s); }

/// Fourier transform of a Boolean table: f-hat(S) = E[f chi_S].
Spectrum transform(const TruthTable& f);
/// Fourier transform of a real-valued table of length 2^n.
Spectrum transform(int n, std::span<const double> values);

/// Pointwise values of the expansion at all 2^n points (inverse transform).
std::vector<double> evaluate(const Spectrum& s);

/// Energy E_f(i) for i = 0..n.
struct EnergyProfile {
  std::vector<double> levels;
  double total() const;
};
EnergyProfile energy_profile(const Spectrum& s);

/// A_n: keeps exactly the terms with S inside [n].
Spectrum project_An(const Spectrum& s, int n);

/// T_rho: multiplies f-hat(S) by rho^|S|. Throws unless 0 <= rho <= 1.
Spectrum noise_operator(const Spectrum& s, double rho);

/// E[f(omega) f(omega^eps)] = sum f-hat(S)^2 (1-eps)^|S|.
double noise_correlation(const Spectrum& s, double epsilon);

/// noise_correlation - f-hat(empty)^2.
double xi(const Spectrum& s, double epsilon);

/// Sum of E_f(i) for i >= k.
double tail_energy(const Spectrum& s, int k);

/// Sum of E_f(i) for lo <= i <= hi.
double band_energy(const Spectrum& s, int lo, int hi);

/// (E|g|^p)^(1/p) over the uniform measure on 2^n points.
double lp_norm(std::span<const double> values, double p);

nlohmann::json to_json(const Spectrum& s);
Spectrum spectrum_from_json(const nlohmann::json& j);

}  // namespace cubeinf
