#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dafrfdm/modulation.hpp"

using namespace dafrfdm;

namespace {

int hamming(unsigned a, unsigned b) { return __builtin_popcount(a ^ b); }

double mean_power(const cvec& pts) { return energy(pts) / pts.size(); }

}  // namespace

TEST(Constellation, UnitMeanPower) {
  EXPECT_NEAR(mean_power(Constellation::get(ModulationKind::qam64).points()), 1.0, 1e-12);
  EXPECT_NEAR(mean_power(Constellation::get(ModulationKind::qam128).points()), 1.0, 1e-12);
}

TEST(Constellation, Square64IsGrayLabeled) {
  const auto& pts = Constellation::get(ModulationKind::qam64).points();
  ASSERT_EQ(pts.size(), 64u);
  const double dmin = 2.0 / std::sqrt(42.0);
  int pairs = 0;
  for (unsigned a = 0; a < 64; ++a)
    for (unsigned b = a + 1; b < 64; ++b)
      if (std::abs(std::abs(pts[a] - pts[b]) - dmin) < 1e-9) {
        EXPECT_EQ(hamming(a, b), 1) << a << " " << b;
        ++pairs;
      }
  EXPECT_EQ(pairs, 2 * 8 * 7);
}

TEST(Constellation, Cross128Geometry) {
  const auto& pts = Constellation::get(ModulationKind::qam128).points();
  ASSERT_EQ(pts.size(), 128u);
  const double unit = std::sqrt(energy(pts) / 128.0);  // already 1
  std::set<std::pair<int, int>> grid;
  // Undo normalization: mean |p|^2 of the odd-integer 128-cross is 82.
  const double scale = std::sqrt(82.0) / unit;
  for (const auto& p : pts) {
    const int i = static_cast<int>(std::lround(p.real() * scale));
    const int q = static_cast<int>(std::lround(p.imag() * scale));
    EXPECT_NEAR(p.real() * scale, i, 1e-9);
    EXPECT_TRUE(std::abs(i) % 2 == 1 && std::abs(q) % 2 == 1);
    EXPECT_LE(std::abs(i), 11);
    EXPECT_LE(std::abs(q), 11);
    EXPECT_FALSE(std::abs(i) > 7 && std::abs(q) > 7) << "corner point " << i << "," << q;
    grid.insert({i, q});
  }
  EXPECT_EQ(grid.size(), 128u);
}

TEST(Constellation, Cross128NeighboursMostlyDifferInOneBit) {
  const auto& pts = Constellation::get(ModulationKind::qam128).points();
  const double dmin = 2.0 / std::sqrt(82.0);
  int pairs = 0, gray = 0;
  for (unsigned a = 0; a < 128; ++a)
    for (unsigned b = a + 1; b < 128; ++b)
      if (std::abs(std::abs(pts[a] - pts[b]) - dmin) < 1e-9) {
        ++pairs;
        gray += hamming(a, b) == 1;
      }
  EXPECT_GT(pairs, 0);
  EXPECT_GE(double(gray) / pairs, 0.85);
}

TEST(Modulate, AllZeroBitsMapToFixedCorner) {
  const Bits zeros(6 * 4, 0);
  const auto s = modulate(ModulationKind::qam64, zeros, 4);
  for (const auto& v : s.values) EXPECT_EQ(v, Constellation::get(ModulationKind::qam64).map(0));
  EXPECT_NEAR(s.values[0].real(), -7 / std::sqrt(42.0), 1e-15);
  EXPECT_NEAR(s.values[0].imag(), -7 / std::sqrt(42.0), 1e-15);
}

TEST(Modulate, RoundTrip) {
  std::mt19937_64 rng(1);
  for (auto kind : {ModulationKind::qam64, ModulationKind::qam128}) {
    const auto bits = random_bits(bits_per_symbol(kind) * 500, rng);
    const auto s = modulate(kind, bits, 500);
    EXPECT_EQ(demodulate(kind, s), bits);
  }
}

TEST(Modulate, InsufficientBitsThrow) {
  EXPECT_THROW(modulate(ModulationKind::qam64, Bits(11, 0), 2), InvalidArgument);
  EXPECT_THROW(modulate(ModulationKind::complex_gaussian, Bits(12, 0), 2), InvalidArgument);
}

TEST(Modulate, GaussianIsReproducibleWithUnitPower) {
  std::mt19937_64 a(9), b(9);
  const auto s1 = gaussian_block(4096, a);
  const auto s2 = gaussian_block(4096, b);
  EXPECT_EQ(s1.values, s2.values);
  EXPECT_NEAR(energy(s1.values) / 4096, 1.0, 3.0 / std::sqrt(4096.0));
}

TEST(Demodulate, MidpointResolvesToLowerLabel) {
  const auto& c = Constellation::get(ModulationKind::qam64);
  for (unsigned a = 0; a < 64; ++a)
    for (unsigned b = a + 1; b < 64; ++b) {
      if (std::abs(std::abs(c.map(a) - c.map(b)) - 2.0 / std::sqrt(42.0)) > 1e-9) continue;
      const cplx mid = 0.5 * (c.map(a) + c.map(b));
      EXPECT_EQ(c.slice(mid), a);
    }
}

TEST(Modulation, Names) {
  EXPECT_EQ(parse_modulation("qam64"), ModulationKind::qam64);
  EXPECT_EQ(parse_modulation("128qam"), ModulationKind::qam128);
  EXPECT_EQ(parse_modulation("gaussian"), ModulationKind::complex_gaussian);
  EXPECT_THROW(parse_modulation("qpsk"), InvalidArgument);
  EXPECT_EQ(bits_per_symbol(ModulationKind::qam128), 7);
}
