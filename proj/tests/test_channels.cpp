#include <gtest/gtest.h>

#include <random>

#include "dafrfdm/chain.hpp"
#include "dafrfdm/channels.hpp"
#include "test_util.hpp"

using namespace dafrfdm;
using testutil::max_abs_diff;
using testutil::random_cvec;

namespace {

constexpr double kT = 128e-6;

double power(const cvec& x) { return energy(x) / x.size(); }

}  // namespace

TEST(DrawRayleigh, SingleTapAtZeroDelay) {
  std::mt19937_64 rng(1);
  const auto ch = draw_rayleigh(1, rng);
  ASSERT_EQ(ch.taps.size(), 1u);
  EXPECT_EQ(ch.taps[0].delay, 0);
  EXPECT_EQ(ch.taps[0].doppler, 0.0);
  const auto h = frequency_response(ch, 16);
  for (const auto& v : h) EXPECT_NEAR(std::abs(v - h[0]), 0.0, 1e-15);
}

TEST(DrawRayleigh, SixTapsUnitAveragePower) {
  std::mt19937_64 rng(2);
  double total = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const auto ch = draw_rayleigh(6, rng);
    ASSERT_EQ(ch.taps.size(), 6u);
    for (int d = 0; d < 6; ++d) EXPECT_EQ(ch.taps[d].delay, d);
    EXPECT_EQ(ch.max_delay(), 5);
    for (const auto& t : ch.taps) total += std::norm(t.gain);
  }
  EXPECT_NEAR(total / draws, 1.0, 0.05);
}

TEST(DrawRayleigh, ExponentialProfileDecays) {
  std::mt19937_64 rng(3);
  std::vector<double> p(6, 0.0);
  for (int i = 0; i < 20000; ++i) {
    const auto ch = draw_rayleigh(6, rng, DelayProfile::exponential, 2.0);
    for (int d = 0; d < 6; ++d) p[d] += std::norm(ch.taps[d].gain) / 20000;
  }
  double total = 0;
  for (double v : p) total += v;
  EXPECT_NEAR(total, 1.0, 0.05);
  EXPECT_GT(p[0], p[2]);
  EXPECT_GT(p[2], p[5]);
}

TEST(ApplyStatic, IdentityAndScalarTaps) {
  std::mt19937_64 rng(4);
  const auto x = random_cvec(200, rng);
  EXPECT_EQ(apply_static(x, identity_channel(), 10), x);
  ChannelRealization ch;
  ch.taps = {{cplx(0.3, -0.7), 0, 0.0}};
  const auto y = apply_static(x, ch, 10);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_LE(std::abs(y[i] - cplx(0.3, -0.7) * x[i]), 1e-15);
}

TEST(ApplyStatic, CyclicPrefixTurnsConvolutionCircular) {
  std::mt19937_64 rng(5);
  ChannelRealization ch;
  ch.taps = {{cplx(1.0, 0.2), 0, 0.0}, {cplx(-0.4, 0.5), 1, 0.0}};
  const auto body = random_cvec(4, rng);
  const auto frame = add_cyclic_prefix(body, 2);
  const auto y = apply_static(frame.samples, ch, 1);
  for (int n = 0; n < 4; ++n) {
    const cplx ref = ch.taps[0].gain * body[n] + ch.taps[1].gain * body[(n + 3) % 4];
    EXPECT_LE(std::abs(y[2 + n] - ref), 1e-12);
  }
}

TEST(ApplyStatic, UnitEnergyTapsPreserveFramePower) {
  std::mt19937_64 rng(6);
  ChannelRealization ch;
  for (int d = 0; d < 6; ++d) ch.taps.push_back({std::polar(1.0 / std::sqrt(6.0), 0.7 * d), d, 0.0});
  double in = 0, out = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = make_params(64, 10, kT, 1e-9);
    const auto f = transmit(p, fractional_block(random_cvec(64, rng)), 10);
    const auto y = apply_static(f.samples, ch, 10);
    in += power(cvec(f.samples.begin() + 100, f.samples.end()));
    out += power(cvec(y.begin() + 100, y.end()));
  }
  EXPECT_NEAR(out / in, 1.0, 0.02);
}

TEST(ApplyLtv, ZeroDopplerEqualsStatic) {
  std::mt19937_64 rng(7);
  const auto x = random_cvec(740, rng);
  auto ch = draw_rayleigh(6, rng);
  const auto ref = apply_static(x, ch, 10);
  ch.kind = ChannelKind::ltv;
  EXPECT_LE(max_abs_diff(apply_ltv(x, ch, 10, 5e6), ref), 1e-15);
}

TEST(ApplyLtv, SinglePathIsFrequencyShift) {
  std::mt19937_64 rng(8);
  const auto x = random_cvec(1000, rng);
  ChannelRealization ch{{{cplx(1, 0), 0, 1600.0}}, ChannelKind::ltv};
  const double fs = 5e6;
  const auto y = apply_ltv(x, ch, 10, fs);
  EXPECT_NEAR(energy(y), energy(x), 1e-9 * energy(x));
  for (int i = 0; i < 1000; i += 97)
    EXPECT_LE(std::abs(y[i] - x[i] * std::polar(1.0, 2 * kPi * 1600.0 * i / fs)), 1e-12);
}

TEST(DoublyDispersive, FourPathConfiguration) {
  std::mt19937_64 rng(9);
  const auto ch = doubly_dispersive_channel(kT / 64, rng);
  ASSERT_EQ(ch.taps.size(), 4u);
  EXPECT_EQ(ch.kind, ChannelKind::ltv);
  const int delays[4] = {0, 5, 10, 20};
  const double gains_db[4] = {0, -4, -5, -8};
  const double doppler[4] = {500, 1600, 2200, 3800};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(ch.taps[i].delay, delays[i]);
    EXPECT_NEAR(20 * std::log10(std::abs(ch.taps[i].gain)), gains_db[i], 1e-12);
    EXPECT_EQ(ch.taps[i].doppler, doppler[i]);
  }
}

TEST(ChannelValidation, RejectsBadDelays) {
  ChannelRealization late{{{cplx(1, 0), 11, 0.0}}, ChannelKind::static_multipath};
  EXPECT_THROW(validate(late, 10), InvalidArgument);
  ChannelRealization unordered{{{cplx(1, 0), 2, 0.0}, {cplx(1, 0), 1, 0.0}},
                               ChannelKind::static_multipath};
  EXPECT_THROW(validate(unordered, 10), InvalidArgument);
  ChannelRealization moving{{{cplx(1, 0), 0, 10.0}}, ChannelKind::static_multipath};
  EXPECT_THROW(validate(moving, 10), InvalidArgument);
}

TEST(Awgn, InfiniteSnrIsNoOp) {
  std::mt19937_64 rng(10);
  const auto x = random_cvec(100, rng);
  EXPECT_EQ(apply_awgn(x, INFINITY, 10, rng), x);
}

TEST(Awgn, EmpiricalSnrMatchesRequest) {
  std::mt19937_64 rng(11);
  const auto x = random_cvec(1000000, rng);
  for (double snr_db : {0.0, 10.0, 23.0}) {
    const auto y = apply_awgn(x, snr_db, 1, rng);
    double noise = 0;
    for (std::size_t i = 0; i < x.size(); ++i) noise += std::norm(y[i] - x[i]);
    const double measured = 10 * std::log10(energy(x) / noise);
    EXPECT_NEAR(measured, snr_db, 0.1);
    if (snr_db == 0.0) {
      EXPECT_NEAR(noise / energy(x), 1.0, 0.02);
    }
  }
}

TEST(Awgn, OversampledNoiseGivesRequestedSymbolSnr) {
  std::mt19937_64 rng(12);
  const auto p = make_params(64, 10, kT, 2e-9);
  double sig = 0, err = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_cvec(64, rng);
    const auto f = transmit(p, fractional_block(s), 10);
    const auto rx = apply_awgn(f.samples, 10.0, 10, rng);
    const auto out = receive(p, rx, cvec(64, 1.0), 10);
    sig += energy(s);
    for (int k = 0; k < 64; ++k) err += std::norm(out.values[k] - s[k]);
  }
  EXPECT_NEAR(10 * std::log10(sig / err), 10.0, 0.2);
}

TEST(Ici, StaticChannelHasNoLeakage) {
  std::mt19937_64 rng(13);
  const auto ch = draw_rayleigh(6, rng);
  const double span = std::asin(kT * kT / kPi);
  for (double delta : {0.0, span / 7, span / 3, -span / 5}) {
    const auto r = ici_power(make_params(64, 10, kT, delta), ch, 10);
    EXPECT_LE(r.ici_power, 1e-18 * (r.ici_power + r.signal_power)) << delta;
  }
  const auto big = ici_power(make_params(32, 4, 2.0, 0.7), ch, 10);
  EXPECT_LE(big.ici_power, 1e-18 * (big.ici_power + big.signal_power));
}

TEST(Ici, OfdmAngleMatchesReferenceOfdmComputation) {
  std::mt19937_64 rng(14);
  const auto ch = doubly_dispersive_channel(kT / 64, rng);
  const auto p = make_params(64, 10, kT, 0.0);
  const auto r = ici_power(p, ch, 20);
  // Reference CP-OFDM chain built from the plain transforms.
  double sig = 0, ici = 0;
  for (int l = 0; l < 64; ++l) {
    cvec e(64, cplx(0, 0));
    e[l] = 1.0;
    const auto frame = add_cyclic_prefix(oversampled_idft(e, 10), 200);
    const auto rx = apply_ltv(frame.samples, ch, 10, 10 / p.sampling_interval);
    const cvec body(rx.begin() + 200, rx.end());
    auto spec = fft::forward(body);
    const double scale = 1.0 / std::sqrt(640.0);
    for (int k = 0; k < 64; ++k) {
      const double v = std::norm(spec[k] * scale);
      (k == l ? sig : ici) += v;
    }
  }
  EXPECT_EQ(r.signal_power, sig / 64);
  EXPECT_EQ(r.ici_power, ici / 64);
  EXPECT_GT(r.ici_power, 0.0);
}

TEST(Ici, ProbedMatrixMatchesLeastSquares) {
  std::mt19937_64 rng(15);
  // Sample rate is L / T_s = 32 Hz here, so Doppler of a fraction of a Hz.
  const ChannelRealization ch{{{cplx(0.9, 0.1), 0, 0.05},
                               {cplx(-0.3, 0.4), 1, 0.2},
                               {cplx(0.2, -0.2), 3, -0.35}},
                              ChannelKind::ltv};
  const auto p = make_params(16, 4, 2.0, 0.3);
  const auto cols = end_to_end_matrix(p, ch, 3);
  const int n = 16, probes = 40;
  Eigen::MatrixXcd s(n, probes), y(n, probes);
  for (int j = 0; j < probes; ++j) {
    const auto v = random_cvec(n, rng);
    const auto frame = transmit(p, fractional_block(v), 3);
    const auto out = receive_unequalized(p, apply_channel(frame.samples, ch, p), 3).values;
    for (int i = 0; i < n; ++i) {
      s(i, j) = v[i];
      y(i, j) = out[i];
    }
  }
  // M S = Y  =>  M = Y S^+ (least squares over the probes).
  const Eigen::MatrixXcd m =
      s.transpose().colPivHouseholderQr().solve(y.transpose()).transpose();
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) EXPECT_LE(std::abs(m(r, c) - cols[c][r]), 1e-9);
}
