#include "cubeinf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cubeinf/kernels.hpp"

namespace cubeinf {

Spectrum::Spectrum(int n, std::vector<SpectralTerm> terms) : n_(n) {
  if (n < 0 || n > kMaxTableBits) throw std::invalid_argument("spectrum: n out of range");
  const FrequencySet full = static_cast<FrequencySet>((std::uint64_t{1} << n) - 1);
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.set < b.set; });
  for (const auto& t : terms) {
    if ((t.set & ~full) != 0) throw std::invalid_argument("spectrum: frequency set outside [n]");
    if (!terms_.empty() && terms_.back().set == t.set)
      terms_.back().coeff += t.coeff;
    else
      terms_.push_back(t);
  }
  std::erase_if(terms_, [](const SpectralTerm& t) { return t.coeff == 0.0; });
}

double Spectrum::coefficient(FrequencySet s) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), s, [](const auto& t, FrequencySet v) { return t.set < v; });
  return (it != terms_.end() && it->set == s) ? it->coeff : 0.0;
}

double Spectrum::squared_norm() const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.coeff * t.coeff;
  return sum;
}

std::vector<Position> set_positions(FrequencySet s) {
  std::vector<Position> out;
  for (Position j = 1; s != 0; ++j, s >>= 1)
    if (s & 1U) out.push_back(j);
  return out;
}

FrequencySet make_set(std::span<const Position> positions) {
  FrequencySet s = 0;
  for (Position p : positions) {
    if (p == 0 || p > static_cast<Position>(kMaxTableBits)) throw std::invalid_argument("frequency position out of range");
    s |= FrequencySet{1} << (p - 1);
  }
  return s;
}

Spectrum transform(int n, std::span<const double> values) {
  if (n < 0 || n > kMaxSpectralBits)
    throw std::invalid_argument("transform: n = " + std::to_string(n) + " exceeds the spectral cap of " +
                                std::to_string(kMaxSpectralBits));
  if (values.size() != (std::size_t{1} << n)) throw std::invalid_argument("transform: table length must be 2^n");
  std::vector<double> work(values.begin(), values.end());
  kernels::fwht(work);
  const double scale = 1.0 / static_cast<double>(work.size());
  std::vector<SpectralTerm> terms;
  for (std::size_t s = 0; s < work.size(); ++s) {
    const double c = work[s] * scale;
    if (std::abs(c) >= kCoefficientFloor) terms.push_back({static_cast<FrequencySet>(s), c});
  }
  return Spectrum(n, std::move(terms));
}

Spectrum transform(const TruthTable& f) {
  if (f.n() > kMaxSpectralBits)
    throw std::invalid_argument("transform: n = " + std::to_string(f.n()) + " exceeds the spectral cap of " +
                                std::to_string(kMaxSpectralBits));
  std::vector<double> values(f.values().begin(), f.values().end());
  return transform(f.n(), values);
}

std::vector<double> evaluate(const Spectrum& s) {
  if (s.n() > kMaxSpectralBits) throw std::invalid_argument("evaluate: n exceeds the spectral cap");
  std::vector<double> values(std::size_t{1} << s.n(), 0.0);
  for (const auto& t : s.terms()) values[t.set] = t.coeff;
  kernels::fwht(values);
  return values;
}

double EnergyProfile::total() const {
  double sum = 0.0;
  for (double v : levels) sum += v;
  return sum;
}

EnergyProfile energy_profile(const Spectrum& s) {
  EnergyProfile e;
  e.levels.assign(static_cast<std::size_t>(s.n()) + 1, 0.0);
  for (const auto& t : s.terms()) e.levels[set_size(t.set)] += t.coeff * t.coeff;
  return e;
}

Spectrum project_An(const Spectrum& s, int n) {
  if (n < 0) throw std::invalid_argument("project_An: n must be >= 0");
  if (n >= 32) return s;
  const FrequencySet inside = static_cast<FrequencySet>((std::uint64_t{1} << n) - 1);
  return s.filter([inside](const SpectralTerm& t) { return (t.set & ~inside) == 0; });
}

Spectrum noise_operator(const Spectrum& s, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("noise_operator: rho must lie in [0,1]");
  std::vector<SpectralTerm> terms;
  for (const auto& t : s.terms()) terms.push_back({t.set, t.coeff * std::pow(rho, set_size(t.set))});
  return Spectrum(s.n(), std::move(terms));
}

double noise_correlation(const Spectrum& s, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("noise_correlation: epsilon must lie in [0,1]");
  double sum = 0.0;
  for (const auto& t : s.terms()) sum += t.coeff * t.coeff * std::pow(1.0 - epsilon, set_size(t.set));
  return sum;
}

double xi(const Spectrum& s, double epsilon) {
  const double m = s.mean();
  return noise_correlation(s, epsilon) - m * m;
}

double band_energy(const Spectrum& s, int lo, int hi) {
  double sum = 0.0;
  for (const auto& t : s.terms()) {
    const int k = set_size(t.set);
    if (k >= lo && k <= hi) sum += t.coeff * t.coeff;
  }
  return sum;
}

double tail_energy(const Spectrum& s, int k) {
  if (k < 0) throw std::invalid_argument("tail_energy: k must be >= 0");
  return band_energy(s, k, 64);
}

double lp_norm(std::span<const double> values, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += std::pow(std::abs(v), p);
  return std::pow(sum / static_cast<double>(values.size()), 1.0 / p);
}

nlohmann::json to_json(const Spectrum& s) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& t : s.terms()) coeffs.push_back({{"set", set_positions(t.set)}, {"coeff", t.coeff}});
  return {{"n", s.n()}, {"coefficients", coeffs}};
}

Spectrum spectrum_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  std::vector<SpectralTerm> terms;
  for (const auto& rec : j.at("coefficients")) {
    const auto positions = rec.at("set").get<std::vector<Position>>();
    terms.push_back({make_set(positions), rec.at("coeff").get<double>()});
  }
  return Spectrum(n, std::move(terms));
}

}  // namespace cubeinf
