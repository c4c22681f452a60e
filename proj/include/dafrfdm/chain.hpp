#pragma once

// Transmit/receive chain: IDFrFT, quadratic phase, cyclic prefix, and the
// matching receiver that undoes the phase so a static channel acts as one
// complex tap per fractional-domain symbol.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dafrfdm/frft.hpp"

namespace dafrfdm {

/// How the per-sample transmit phase theta(i) is scaled on the oversampled
/// grid. matched_grid uses the sample interval of the IDFrFT time chirp,
/// T_s / L. literal_remark uses T_s^2 L^2 as written for the oversampled
/// case; the two agree only at L = 1 and the exactness tests select
/// matched_grid.
enum class PhaseConvention { matched_grid, literal_remark };

inline double phase_theta(const FrfdmParams& p, long i,
                          PhaseConvention conv = PhaseConvention::matched_grid) {
  require(i >= 0 && i < p.transform_size(), "phase_theta: index out of range");
  const double di = static_cast<double>(i);
  const double interval = conv == PhaseConvention::matched_grid
                              ? p.oversampled_interval()
                              : p.sampling_interval * p.oversample;
  return 0.5 * di * di * p.cot_alpha * interval * interval;
}

struct TxFrame {
  cvec samples;          // CP followed by the N*L body samples
  double alpha_offset = 0.0;
  int cp_samples = 0;
  std::uint64_t block_id = 0;

  cvec body() const { return cvec(samples.begin() + cp_samples, samples.end()); }
};

/// Body with the phase applied, no CP.
inline cvec apply_phase(const FrfdmParams& p, cvec x, double sign,
                        PhaseConvention conv = PhaseConvention::matched_grid) {
  for (long i = 0; i < static_cast<long>(x.size()); ++i)
    x[i] *= std::polar(1.0, sign * phase_theta(p, i, conv));
  return x;
}

inline TxFrame add_cyclic_prefix(const cvec& body, int cp_samples) {
  require(cp_samples >= 0 && cp_samples <= static_cast<int>(body.size()),
          "cyclic prefix longer than the block");
  TxFrame f;
  f.cp_samples = cp_samples;
  f.samples.reserve(body.size() + cp_samples);
  f.samples.insert(f.samples.end(), body.end() - cp_samples, body.end());
  f.samples.insert(f.samples.end(), body.begin(), body.end());
  return f;
}

/// s -> IDFrFT -> e^{j theta} -> CP. The CP spans cp_length * L samples.
inline TxFrame transmit(const FrfdmParams& p, const ComplexBlock& s, int cp_length,
                        PhaseConvention conv = PhaseConvention::matched_grid) {
  auto x = idfrft(p, s);
  auto z = apply_phase(p, std::move(x.values), +1.0, conv);
  TxFrame f = add_cyclic_prefix(z, cp_length * p.oversample);
  f.alpha_offset = p.angle_offset;
  return f;
}

/// Time-domain frame of an already computed body (e.g. a baseline's output).
inline TxFrame transmit_body(const cvec& body, int cp_length, int oversample) {
  return add_cyclic_prefix(body, cp_length * oversample);
}

/// Strip CP, remove the phase, DFrFT; no equalization.
inline ComplexBlock receive_unequalized(const FrfdmParams& p, const cvec& rx, int cp_length,
                                        PhaseConvention conv = PhaseConvention::matched_grid) {
  const long cp = static_cast<long>(cp_length) * p.oversample;
  require(static_cast<long>(rx.size()) >= cp + p.transform_size(),
          "receive: frame shorter than CP + N*L");
  cvec body(rx.begin() + cp, rx.begin() + cp + p.transform_size());
  body = apply_phase(p, std::move(body), -1.0, conv);
  return dfrft(p, time_block(std::move(body)));
}

/// A subcarrier whose channel gain is too small to divide by.
class UnequalizableBin : public Error {
 public:
  explicit UnequalizableBin(std::size_t bin)
      : Error("receive: channel response vanishes at bin " + std::to_string(bin)),
        bin_(bin) {}
  std::size_t bin() const { return bin_; }

 private:
  std::size_t bin_;
};

inline constexpr double kMinChannelGain = 1e-12;

/// Zero-forcing one-tap equalization.
inline ComplexBlock equalize(ComplexBlock s, const cvec& h_f) {
  require(h_f.size() == s.size(), "equalize: response length must be N");
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (std::abs(h_f[k]) < kMinChannelGain) throw UnequalizableBin(k);
    s.values[k] /= h_f[k];
  }
  return s;
}

inline ComplexBlock receive(const FrfdmParams& p, const cvec& rx, const cvec& h_f,
                            int cp_length,
                            PhaseConvention conv = PhaseConvention::matched_grid) {
  return equalize(receive_unequalized(p, rx, cp_length, conv), h_f);
}

}  // namespace dafrfdm
