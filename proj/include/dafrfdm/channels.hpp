#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "dafrfdm/chain.hpp"
#include "dafrfdm/frft.hpp"
#include "dafrfdm/papr.hpp"

namespace dafrfdm {

struct Tap {
  cplx gain;
  int delay = 0;         // symbol-rate samples
  double doppler = 0.0;  // Hz
};

enum class ChannelKind { static_multipath, ltv };

struct ChannelRealization {
  std::vector<Tap> taps;
  ChannelKind kind = ChannelKind::static_multipath;

  int max_delay() const { return taps.empty() ? 0 : taps.back().delay; }
};

inline void validate(const ChannelRealization& ch, int cp_length) {
  require(!ch.taps.empty(), "channel: no taps");
  int prev = -1;
  for (const auto& t : ch.taps) {
    require(t.delay > prev, "channel: delays must be non-negative and strictly increasing");
    prev = t.delay;
    if (ch.kind == ChannelKind::static_multipath)
      require(t.doppler == 0.0, "channel: static channel with Doppler");
  }
  require(ch.max_delay() <= cp_length, "channel: delay spread exceeds the cyclic prefix");
}

inline ChannelRealization identity_channel() {
  return {{Tap{cplx(1.0, 0.0), 0, 0.0}}, ChannelKind::static_multipath};
}

enum class DelayProfile { uniform, exponential };

/// Block-fading Rayleigh taps at delays 0..n_taps-1 with unit total average
/// power. The exponential profile weights tap d by exp(-d / decay).
template <class Rng>
ChannelRealization draw_rayleigh(int n_taps, Rng& rng,
                                 DelayProfile profile = DelayProfile::uniform,
                                 double decay = 2.0) {
  require(n_taps >= 1, "draw_rayleigh: need at least one tap");
  std::vector<double> power(static_cast<std::size_t>(n_taps), 1.0);
  if (profile == DelayProfile::exponential)
    for (int d = 0; d < n_taps; ++d) power[d] = std::exp(-d / decay);
  double total = 0.0;
  for (double v : power) total += v;
  std::normal_distribution<double> dist(0.0, 1.0);
  ChannelRealization ch;
  for (int d = 0; d < n_taps; ++d) {
    const double sigma = std::sqrt(power[d] / total / 2.0);
    const double re = dist(rng);
    const double im = dist(rng);
    ch.taps.push_back({cplx(sigma * re, sigma * im), d, 0.0});
  }
  return ch;
}

/// Four-path doubly dispersive channel: gains 0/-4/-5/-8 dB, Doppler
/// 500/1600/2200/3800 Hz, delays 0/10/20/40 us snapped to the T_s grid.
/// Initial path phases are drawn from rng.
template <class Rng>
ChannelRealization doubly_dispersive_channel(double sampling_interval, Rng& rng) {
  static constexpr double kGainDb[4] = {0.0, -4.0, -5.0, -8.0};
  static constexpr double kDoppler[4] = {500.0, 1600.0, 2200.0, 3800.0};
  static constexpr double kDelay[4] = {0.0, 10e-6, 20e-6, 40e-6};
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  ChannelRealization ch;
  ch.kind = ChannelKind::ltv;
  for (int i = 0; i < 4; ++i) {
    const double mag = std::pow(10.0, kGainDb[i] / 20.0);
    const int delay = static_cast<int>(std::lround(kDelay[i] / sampling_interval));
    ch.taps.push_back({std::polar(mag, phase(rng)), delay, kDoppler[i]});
  }
  return ch;
}

/// N-point response sum_p g_p e^{-j 2 pi k d_p / N}; identity channel gives 1.
inline cvec frequency_response(const ChannelRealization& ch, int n) {
  cvec h(static_cast<std::size_t>(n), cplx(0.0, 0.0));
  for (int k = 0; k < n; ++k)
    for (const auto& t : ch.taps)
      h[k] += t.gain * std::polar(1.0, -2.0 * kPi * static_cast<double>(k) * t.delay / n);
  return h;
}

/// Linear convolution on the oversampled grid; the tail past the frame is
/// dropped.
inline cvec apply_static(const cvec& frame, const ChannelRealization& ch, int oversample) {
  cvec y(frame.size(), cplx(0.0, 0.0));
  for (const auto& t : ch.taps) {
    const std::size_t shift = static_cast<std::size_t>(t.delay) * oversample;
    for (std::size_t i = shift; i < frame.size(); ++i) y[i] += t.gain * frame[i - shift];
  }
  return y;
}

/// y[i] = sum_p g_p e^{j 2 pi f_p i / fs} x[i - d_p L]; time origin at the
/// first sample of the frame.
inline cvec apply_ltv(const cvec& frame, const ChannelRealization& ch, int oversample,
                      double sample_rate) {
  cvec y(frame.size(), cplx(0.0, 0.0));
  for (const auto& t : ch.taps) {
    const std::size_t shift = static_cast<std::size_t>(t.delay) * oversample;
    const double w = 2.0 * kPi * t.doppler / sample_rate;
    for (std::size_t i = shift; i < frame.size(); ++i)
      y[i] += t.gain * std::polar(1.0, w * static_cast<double>(i)) * frame[i - shift];
  }
  return y;
}

inline cvec apply_channel(const cvec& frame, const ChannelRealization& ch,
                          const FrfdmParams& p) {
  if (ch.kind == ChannelKind::static_multipath) return apply_static(frame, ch, p.oversample);
  return apply_ltv(frame, ch, p.oversample, p.oversample / p.sampling_interval);
}

/// Noise variance per oversampled sample giving the requested Es/N0 per
/// fractional-domain symbol. With unitary transforms the per-symbol energy
/// is L times the mean sample power of the oversampled frame.
inline double noise_variance(const cvec& reference, double es_n0_db, int oversample) {
  if (std::isinf(es_n0_db) && es_n0_db > 0) return 0.0;
  require(!reference.empty(), "noise_variance: empty reference");
  const double power = energy(reference) / static_cast<double>(reference.size());
  require(std::isfinite(power), "noise_variance: non-finite signal power");
  return power * oversample / std::pow(10.0, es_n0_db / 10.0);
}

template <class Rng>
cvec add_noise(cvec frame, double variance, Rng& rng) {
  if (variance <= 0.0) return frame;
  std::normal_distribution<double> dist(0.0, std::sqrt(variance / 2.0));
  for (auto& v : frame) {
    const double re = dist(rng);
    const double im = dist(rng);
    v += cplx(re, im);
  }
  return frame;
}

/// AWGN with variance derived from the frame's own power; +inf dB is a no-op.
template <class Rng>
cvec apply_awgn(const cvec& frame, double es_n0_db, int oversample, Rng& rng) {
  return add_noise(frame, noise_variance(frame, es_n0_db, oversample), rng);
}

struct IciReport {
  double alpha_offset = 0.0;
  double signal_power = 0.0;
  double ici_power = 0.0;
  double papr_db = std::numeric_limits<double>::quiet_NaN();

  double ici_ratio() const { return signal_power > 0 ? ici_power / signal_power : 0.0; }
};

/// End-to-end N x N matrix from s to the unequalized receiver output,
/// column k probed with the k-th unit vector.
inline std::vector<cvec> end_to_end_matrix(const FrfdmParams& p, const ChannelRealization& ch,
                                           int cp_length) {
  validate(ch, cp_length);
  const int n = p.n_subcarriers;
  std::vector<cvec> cols(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    cvec e(static_cast<std::size_t>(n), cplx(0.0, 0.0));
    e[k] = 1.0;
    const auto frame = transmit(p, fractional_block(std::move(e)), cp_length);
    const auto rx = apply_channel(frame.samples, ch, p);
    cols[k] = receive_unequalized(p, rx, cp_length).values;
  }
  return cols;
}

/// Diagonal and off-diagonal energy of the end-to-end matrix, per subcarrier.
inline IciReport ici_power(const FrfdmParams& p, const ChannelRealization& ch, int cp_length) {
  const auto cols = end_to_end_matrix(p, ch, cp_length);
  const int n = p.n_subcarriers;
  IciReport r;
  r.alpha_offset = p.angle_offset;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      const double e = std::norm(cols[l][k]);
      if (k == l) r.signal_power += e;
      else r.ici_power += e;
    }
  r.signal_power /= n;
  r.ici_power /= n;
  return r;
}

}  // namespace dafrfdm
