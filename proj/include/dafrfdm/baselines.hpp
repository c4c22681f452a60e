#pragma once

// Reference PAPR reducers for plain OFDM: amplitude clipping, selected
// mapping (SLM) and partial transmit sequences (PTS). All operate on the
// zero-padded oversampled IDFT.

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "dafrfdm/frft.hpp"
#include "dafrfdm/papr.hpp"

namespace dafrfdm {

enum class PtsPartition { adjacent, interleaved };

struct BaselineConfig {
  int slm_candidates = 128;
  int pts_subblocks = 8;
  double clip_ratio = 2.0;
  PtsPartition partition = PtsPartition::adjacent;
};

/// Limits |x[n]| to CR * sigma, sigma the RMS magnitude of the block.
inline cvec clip(const cvec& x, double clip_ratio) {
  require(!x.empty(), "clip: empty signal");
  require(clip_ratio > 0.0, "clip: ratio must be positive");
  const double power = energy(x) / static_cast<double>(x.size());
  if (power == 0.0) return x;
  const double limit = clip_ratio * std::sqrt(power);
  cvec out(x);
  for (auto& v : out) {
    const double a = std::abs(v);
    if (a >= limit) v *= limit / a;
  }
  return out;
}

struct SlmResult {
  cvec time;
  int selected_index = 0;
  std::vector<double> phases;  // selected {+-1}^N sequence
  double papr_db = 0.0;
  int evaluations = 0;
};

/// Candidate 0 is all ones; the rest are i.i.d. {+-1}^N drawn from rng.
template <class Rng>
SlmResult slm(const ComplexBlock& s, int candidates, int oversample, Rng& rng) {
  require(candidates >= 1, "slm: need at least one candidate");
  const std::size_t n = s.size();
  SlmResult best;
  best.papr_db = std::numeric_limits<double>::infinity();
  for (int u = 0; u < candidates; ++u) {
    std::vector<double> phases(n, 1.0);
    if (u > 0)
      for (auto& ph : phases) ph = (rng() & 1u) ? -1.0 : 1.0;
    cvec weighted(s.values);
    for (std::size_t k = 0; k < n; ++k) weighted[k] *= phases[k];
    cvec x = oversampled_idft(weighted, oversample);
    const double eta = papr_db_samples(x);
    if (eta < best.papr_db) {
      best.papr_db = eta;
      best.time = std::move(x);
      best.selected_index = u;
      best.phases = std::move(phases);
    }
  }
  best.evaluations = candidates;
  return best;
}

struct PtsResult {
  cvec time;
  std::vector<double> phases;  // b^nu per subblock, b^1 = +1
  double papr_db = 0.0;
  int evaluations = 0;
};

/// Subblock index of symbol k.
inline int pts_subblock(std::size_t k, std::size_t n, int subblocks, PtsPartition part) {
  if (part == PtsPartition::adjacent)
    return static_cast<int>(k / (n / static_cast<std::size_t>(subblocks)));
  return static_cast<int>(k % static_cast<std::size_t>(subblocks));
}

inline PtsResult pts(const ComplexBlock& s, int subblocks, int oversample,
                     PtsPartition part = PtsPartition::adjacent) {
  const std::size_t n = s.size();
  require(subblocks >= 1 && subblocks <= 24, "pts: subblock count out of range");
  require(n % static_cast<std::size_t>(subblocks) == 0, "pts: V must divide N");
  std::vector<cvec> partial(static_cast<std::size_t>(subblocks));
  for (int v = 0; v < subblocks; ++v) {
    cvec sub(n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k)
      if (pts_subblock(k, n, subblocks, part) == v) sub[k] = s.values[k];
    partial[v] = oversampled_idft(sub, oversample);
  }
  const std::size_t nl = partial[0].size();
  const unsigned combos = 1u << (subblocks - 1);
  PtsResult best;
  best.papr_db = std::numeric_limits<double>::infinity();
  cvec x(nl);
  for (unsigned mask = 0; mask < combos; ++mask) {
    // Bit v-1 of mask set means b^v = -1, for v >= 1.
    std::fill(x.begin(), x.end(), cplx(0.0, 0.0));
    for (int v = 0; v < subblocks; ++v) {
      const double b = (v > 0 && ((mask >> (v - 1)) & 1u)) ? -1.0 : 1.0;
      for (std::size_t i = 0; i < nl; ++i) x[i] += b * partial[v][i];
    }
    const double eta = papr_db_samples(x);
    if (eta < best.papr_db) {
      best.papr_db = eta;
      best.time = x;
      best.phases.assign(static_cast<std::size_t>(subblocks), 1.0);
      for (int v = 1; v < subblocks; ++v)
        if ((mask >> (v - 1)) & 1u) best.phases[v] = -1.0;
    }
  }
  best.evaluations = static_cast<int>(combos);
  return best;
}

/// Per-symbol phase factors that PTS applied, for receiver-side inversion.
inline std::vector<double> pts_symbol_phases(const std::vector<double>& subblock_phases,
                                             std::size_t n, PtsPartition part) {
  const int v = static_cast<int>(subblock_phases.size());
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = subblock_phases[pts_subblock(k, n, v, part)];
  return out;
}

}  // namespace dafrfdm
