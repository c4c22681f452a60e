#include <gtest/gtest.h>

#include <random>

#include "dafrfdm/baselines.hpp"
#include "test_util.hpp"

using namespace dafrfdm;
using testutil::max_abs_diff;
using testutil::random_cvec;

TEST(Clip, BelowThresholdUnchanged) {
  const cvec x{cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  EXPECT_EQ(clip(x, 1.5), x);
}

TEST(Clip, LimitsMagnitudeKeepsPhase) {
  // RMS of {3A, small...}: choose values so the limit is known.
  cvec x(100, cplx(0.1, 0));
  x[7] = std::polar(10.0, 0.6);
  const double rms = std::sqrt(energy(x) / x.size());
  const auto y = clip(x, 2.0);
  EXPECT_NEAR(std::abs(y[7]), 2.0 * rms, 1e-12);
  EXPECT_NEAR(std::arg(y[7]), 0.6, 1e-12);
  EXPECT_EQ(y[0], x[0]);
}

TEST(Clip, ZeroBlockUnchanged) {
  const cvec z(16, cplx(0, 0));
  EXPECT_EQ(clip(z, 2.0), z);
}

TEST(Clip, BoundsOfdmPapr) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = oversampled_idft(random_cvec(64, rng), 10);
    const auto y = clip(x, 2.0);
    // Peak is CR times the pre-clip RMS; clipping lowers the RMS slightly.
    EXPECT_LE(papr_db_samples(y), 20 * std::log10(2.0) + 0.5);
  }
}

TEST(Slm, SingleCandidateIsOfdm) {
  std::mt19937_64 rng(2);
  const auto s = fractional_block(random_cvec(64, rng));
  const auto r = slm(s, 1, 10, rng);
  EXPECT_EQ(r.selected_index, 0);
  EXPECT_EQ(r.time, oversampled_idft(s.values, 10));
  EXPECT_EQ(r.evaluations, 1);
}

TEST(Slm, NeverWorseThanOfdmAndInvertible) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = fractional_block(random_cvec(64, rng));
    const auto r = slm(s, 128, 10, rng);
    EXPECT_EQ(r.evaluations, 128);
    EXPECT_LE(r.papr_db, papr_db_samples(oversampled_idft(s.values, 10)));
    EXPECT_NEAR(r.papr_db, papr_db_samples(r.time), 1e-12);
    // Receiver: DFT, undo the signs.
    auto spec = fft::forward(r.time);
    cvec back(64);
    for (int k = 0; k < 64; ++k) back[k] = spec[k] / std::sqrt(640.0) * r.phases[k];
    EXPECT_LE(max_abs_diff(back, s.values), 1e-12);
  }
}

TEST(Pts, SingleSubblockIsOfdm) {
  std::mt19937_64 rng(4);
  const auto s = fractional_block(random_cvec(64, rng));
  const auto r = pts(s, 1, 10);
  EXPECT_EQ(r.phases, std::vector<double>{1.0});
  EXPECT_EQ(r.evaluations, 1);
  EXPECT_LE(max_abs_diff(r.time, oversampled_idft(s.values, 10)), 1e-12);
}

TEST(Pts, NeverWorseThanOfdm) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = fractional_block(random_cvec(64, rng));
    const auto r = pts(s, 8, 10);
    EXPECT_EQ(r.evaluations, 128);
    EXPECT_EQ(r.phases[0], 1.0);
    EXPECT_LE(r.papr_db, papr_db_samples(oversampled_idft(s.values, 10)) + 1e-12);
  }
}

TEST(Pts, MatchesPreTransformBruteForce) {
  std::mt19937_64 rng(6);
  for (auto part : {PtsPartition::adjacent, PtsPartition::interleaved}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto s = fractional_block(random_cvec(8, rng));
      const auto r = pts(s, 2, 4, part);
      double best = INFINITY;
      for (double b : {1.0, -1.0}) {
        cvec w(s.values);
        for (int k = 0; k < 8; ++k)
          if (pts_subblock(k, 8, 2, part) == 1) w[k] *= b;
        best = std::min(best, papr_db_samples(oversampled_idft(w, 4)));
      }
      EXPECT_NEAR(r.papr_db, best, 1e-12);
      const auto phases = pts_symbol_phases(r.phases, 8, part);
      cvec w(s.values);
      for (int k = 0; k < 8; ++k) w[k] *= phases[k];
      EXPECT_LE(max_abs_diff(r.time, oversampled_idft(w, 4)), 1e-12);
    }
  }
}

TEST(Pts, PartialTransformsAreLinear) {
  std::mt19937_64 rng(7);
  const auto s = random_cvec(64, rng);
  std::vector<double> b(8);
  for (auto& v : b) v = (rng() & 1) ? 1.0 : -1.0;
  cvec sum(640, cplx(0, 0));
  for (int v = 0; v < 8; ++v) {
    cvec part(64, cplx(0, 0));
    for (int k = 0; k < 64; ++k)
      if (pts_subblock(k, 64, 8, PtsPartition::adjacent) == v) part[k] = s[k];
    const auto x = oversampled_idft(part, 10);
    for (int i = 0; i < 640; ++i) sum[i] += b[v] * x[i];
  }
  cvec w(s);
  const auto phases = pts_symbol_phases(b, 64, PtsPartition::adjacent);
  for (int k = 0; k < 64; ++k) w[k] *= phases[k];
  EXPECT_LE(max_abs_diff(sum, oversampled_idft(w, 10)), 1e-12);
}

TEST(Pts, Partitions) {
  EXPECT_EQ(pts_subblock(0, 64, 8, PtsPartition::adjacent), 0);
  EXPECT_EQ(pts_subblock(9, 64, 8, PtsPartition::adjacent), 1);
  EXPECT_EQ(pts_subblock(63, 64, 8, PtsPartition::adjacent), 7);
  EXPECT_EQ(pts_subblock(9, 64, 8, PtsPartition::interleaved), 1);
  EXPECT_EQ(pts_subblock(16, 64, 8, PtsPartition::interleaved), 0);
}

TEST(Pts, RejectsNonDividingSubblocks) {
  const auto s = fractional_block(cvec(64, cplx(1, 0)));
  EXPECT_THROW(pts(s, 6, 10), InvalidArgument);
}
