#pragma once

// Two-stage search for the PAPR-minimizing fractional angle. A coarse grid
// over one A_alpha period brackets local minima of the quartic surrogate by
// the sign of its derivative, a fine grid refines each bracket, and PAPR is
// evaluated only on the fine points that still bracket a sign change.

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "dafrfdm/frft.hpp"
#include "dafrfdm/papr.hpp"

namespace dafrfdm {

struct AngleSearchConfig {
  double coarse_step = 0.0;   // radians
  double fine_step = 0.0;     // radians, coarse_step / fine_step integral
  int papr_grid_points = 0;   // grid for max g(t)

  int fine_ratio() const { return static_cast<int>(std::lround(coarse_step / fine_step)); }
};

struct AngleSearchResult {
  double alpha_star = 0.0;  // stored as the offset from pi/2
  double papr_db = 0.0;
  int evaluations = 0;      // PAPR (max) evaluations
  bool fallback_used = false;

  int coarse_brackets = 0;
  int fine_candidates = 0;  // refined set before the sign filter
  int derivative_evaluations = 0;
};

/// Width in alpha of one A_alpha period starting at pi/2, doubled:
/// asin(T^2 / pi).
inline double search_span(double block_duration) {
  const double ratio = block_duration * block_duration / kPi;
  require(ratio <= 1.0, "search span: T^2/pi must not exceed 1");
  return std::asin(ratio);
}

/// Step sizes used for the published simulations: coarse = span/80,
/// fine = coarse/39, PAPR on the N*L oversampled grid.
inline AngleSearchConfig default_search_config(const FrfdmParams& p) {
  AngleSearchConfig cfg;
  cfg.coarse_step = search_span(p.block_duration) / 80.0;
  cfg.fine_step = cfg.coarse_step / 39.0;
  cfg.papr_grid_points = p.transform_size();
  return cfg;
}

inline int initial_set_size(double block_duration, double coarse_step) {
  require(coarse_step > 0.0, "initial_set: step must be positive");
  const double count = search_span(block_duration) / (2.0 * coarse_step);
  const int n = static_cast<int>(std::floor(count + 1e-9));
  require(n >= 1, "initial_set: step exceeds half the search span");
  return n;
}

/// Coarse candidate offsets {i * coarse_step}, covering [0, span/2).
inline std::vector<double> initial_set(double block_duration, double coarse_step) {
  const int n = initial_set_size(block_duration, coarse_step);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = i * coarse_step;
  return out;
}

namespace detail {

inline void validate(const AngleSearchConfig& cfg, const FrfdmParams& p) {
  require(cfg.fine_step > 0.0 && cfg.fine_step <= cfg.coarse_step,
          "angle search: need 0 < fine_step <= coarse_step");
  const double ratio = cfg.coarse_step / cfg.fine_step;
  require(std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio,
          "angle search: fine_step must divide coarse_step");
  require(cfg.coarse_step <= 0.5 * search_span(p.block_duration) * (1.0 + 1e-12),
          "angle search: coarse_step exceeds half the search span");
  require(cfg.papr_grid_points >= p.n_subcarriers,
          "angle search: PAPR grid must have at least N points");
}

}  // namespace detail

namespace detail {

/// Lattice form of the two-stage search. Point q sits at offset_of(q); the
/// coarse points are q = i * ratio for i < n_coarse. `slope(q)` returns
/// I' at point q and `papr(q)` the PAPR there; `fallback_papr()` is called
/// only when no candidate survives.
template <class Offset, class Slope, class Papr, class Fallback>
AngleSearchResult search_lattice(int n_coarse, long ratio, Offset offset_of, Slope slope,
                                 Papr papr, Fallback fallback_papr) {
  AngleSearchResult result;
  std::map<long, double> cache;
  auto d = [&](long q) {
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
    const double v = slope(q);
    ++result.derivative_evaluations;
    cache.emplace(q, v);
    return v;
  };

  std::set<long> refined;
  for (long i = 0; i < n_coarse; ++i) {
    if (d(i * ratio) <= 0.0 && d((i + 1) * ratio) >= 0.0) {
      ++result.coarse_brackets;
      for (long j = 0; j <= ratio; ++j) refined.insert(i * ratio + j);
    }
  }
  result.fine_candidates = static_cast<int>(refined.size());

  std::vector<long> retained;
  for (long q : refined)
    if (d(q) <= 0.0 && d(q + 1) >= 0.0) retained.push_back(q);

  if (retained.empty()) {
    result.alpha_star = 0.0;
    result.papr_db = fallback_papr();
    result.evaluations = 1;
    result.fallback_used = true;
    return result;
  }

  // Ascending q means ascending offset, so strict < keeps the smallest one.
  result.papr_db = std::numeric_limits<double>::infinity();
  for (long q : retained) {
    const double eta = papr(q);
    if (eta < result.papr_db) {
      result.papr_db = eta;
      result.alpha_star = offset_of(q);
    }
  }
  result.evaluations = static_cast<int>(retained.size());
  return result;
}

}  // namespace detail

inline AngleSearchResult find_optimal_angle(const ComplexBlock& s,
                                            const FrfdmParams& params,
                                            const AngleSearchConfig& cfg) {
  require(static_cast<int>(s.size()) == params.n_subcarriers,
          "find_optimal_angle: block length must be N");
  detail::validate(cfg, params);
  const EnvelopeCoeffs env(s.values);
  if (env.mean_power_sum() < kMinBlockPower)
    throw InvalidArgument("papr: zero-power block");

  const long ratio = cfg.fine_ratio();
  const int n_coarse = initial_set_size(params.block_duration, cfg.coarse_step);
  auto offset_of = [&](long q) {
    return static_cast<double>(q / ratio) * cfg.coarse_step +
           static_cast<double>(q % ratio) * cfg.fine_step;
  };
  const int quad = default_quadrature_points(params.n_subcarriers);
  auto papr_at = [&](double offset) {
    const auto p = with_offset(params, offset);
    return papr_db_from_envelope(env, harmonic_coeffs(env, p.a_alpha),
                                 cfg.papr_grid_points);
  };
  return detail::search_lattice(
      n_coarse, ratio, offset_of,
      [&](long q) { return surrogate_I_prime(env, with_offset(params, offset_of(q)), quad); },
      [&](long q) { return papr_at(offset_of(q)); }, [&] { return papr_at(0.0); });
}

/// Exhaustive sweep of the eigendecomposition DFrFT over alpha in [0, 2pi),
/// without oversampling. The OFDM angle pi/2 is on the grid whenever the
/// step divides it.
inline AngleSearchResult brute_sweep_eigen(const ComplexBlock& s,
                                           const HermiteBasis& basis,
                                           double step) {
  require(static_cast<int>(s.size()) == basis.size(),
          "brute_sweep_eigen: block length must be N");
  require(step > 0.0, "brute_sweep_eigen: step must be positive");
  if (energy(s.values) < kMinBlockPower)
    throw InvalidArgument("papr: zero-power block");
  const int count = static_cast<int>(std::ceil(2.0 * kPi / step - 1e-9));
  const auto coeffs = basis.analyze(s.values);
  AngleSearchResult result;
  result.papr_db = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    const double alpha = i * step;
    // Inverse transform of angle alpha is the forward one at -alpha.
    const double eta = papr_db_samples(basis.apply(coeffs, -alpha));
    if (eta < result.papr_db) {
      result.papr_db = eta;
      result.alpha_star = alpha - kPi / 2;
    }
  }
  result.evaluations = count;
  return result;
}

inline AngleSearchResult brute_sweep_eigen(const ComplexBlock& s, int n, double step) {
  return brute_sweep_eigen(s, HermiteBasis(n), step);
}

}  // namespace dafrfdm
