#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dafrfdm/common.hpp"
#include "dafrfdm/frft.hpp"

namespace dafrfdm {

enum class ModulationKind { complex_gaussian, qam64, qam128 };

inline std::string to_string(ModulationKind k) {
  switch (k) {
    case ModulationKind::complex_gaussian: return "gaussian";
    case ModulationKind::qam64: return "qam64";
    case ModulationKind::qam128: return "qam128";
  }
  return "?";
}

inline ModulationKind parse_modulation(const std::string& name) {
  if (name == "gaussian" || name == "complex-gaussian") return ModulationKind::complex_gaussian;
  if (name == "qam64" || name == "64qam") return ModulationKind::qam64;
  if (name == "qam128" || name == "128qam") return ModulationKind::qam128;
  throw InvalidArgument("unknown modulation '" + name + "'");
}

using Bits = std::vector<std::uint8_t>;

namespace detail {

inline unsigned gray_decode(unsigned g) {
  unsigned b = g;
  for (unsigned shift = 1; shift < 16; shift <<= 1) b ^= b >> shift;
  return b;
}

// Odd integer amplitude of a Gray-coded axis label over `levels` positions.
inline int gray_level(unsigned label, int levels) {
  return 2 * static_cast<int>(gray_decode(label)) - (levels - 1);
}

inline void normalize(cvec& pts) {
  double e = 0.0;
  for (const auto& p : pts) e += std::norm(p);
  const double scale = 1.0 / std::sqrt(e / static_cast<double>(pts.size()));
  for (auto& p : pts) p *= scale;
}

}  // namespace detail

/// Unit-average-energy QAM constellation indexed by bit label (MSB first).
class Constellation {
 public:
  static const Constellation& get(ModulationKind kind) {
    static const Constellation q64 = square64();
    static const Constellation q128 = cross128();
    require(kind != ModulationKind::complex_gaussian,
            "constellation: Gaussian symbols have no constellation");
    return kind == ModulationKind::qam64 ? q64 : q128;
  }

  int bits_per_symbol() const { return bits_; }
  const cvec& points() const { return points_; }

  cplx map(unsigned label) const { return points_[label]; }

  /// Nearest point; equidistant points resolve to the lower label.
  unsigned slice(cplx y) const {
    unsigned best = 0;
    double best_d = std::norm(y - points_[0]);
    for (unsigned i = 1; i < points_.size(); ++i) {
      const double d = std::norm(y - points_[i]);
      if (d < best_d - 1e-12 * (1.0 + best_d)) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }

 private:
  Constellation(int bits, cvec pts) : bits_(bits), points_(std::move(pts)) {}

  // 8x8 square, 3 Gray bits per axis: label = (I bits << 3) | Q bits.
  static Constellation square64() {
    cvec pts(64);
    for (unsigned label = 0; label < 64; ++label)
      pts[label] = cplx(detail::gray_level(label >> 3, 8), detail::gray_level(label & 7u, 8));
    detail::normalize(pts);
    return Constellation(6, std::move(pts));
  }

  // 128-cross: a Gray-labeled 16x8 rectangle (4 I bits, 3 Q bits) whose
  // outer columns |I| in {13, 15} are folded onto the rows |Q| in {9, 11}.
  static Constellation cross128() {
    cvec pts(128);
    for (unsigned label = 0; label < 128; ++label) {
      int i = detail::gray_level(label >> 3, 16);
      int q = detail::gray_level(label & 7u, 8);
      if (std::abs(i) > 11) {
        const int si = i > 0 ? 1 : -1;
        const int sq = q > 0 ? 1 : -1;
        if (std::abs(q) > 4) {
          i = si * (std::abs(i) - 8);
          q = sq * (std::abs(q) + 4);
        } else {
          i = si * (std::abs(i) - 12);
          q = sq * (std::abs(q) + 8);
        }
      }
      pts[label] = cplx(i, q);
    }
    detail::normalize(pts);
    return Constellation(7, std::move(pts));
  }

  int bits_;
  cvec points_;
};

inline int bits_per_symbol(ModulationKind kind) {
  return kind == ModulationKind::complex_gaussian ? 0
                                                  : Constellation::get(kind).bits_per_symbol();
}

/// Maps a bit stream onto N QAM symbols.
inline ComplexBlock modulate(ModulationKind kind, const Bits& bits, int n) {
  const auto& c = Constellation::get(kind);
  const int b = c.bits_per_symbol();
  if (static_cast<long>(bits.size()) < static_cast<long>(b) * n)
    throw InvalidArgument("modulate: bit stream too short for N symbols");
  cvec out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    unsigned label = 0;
    for (int j = 0; j < b; ++j) label = (label << 1) | (bits[k * b + j] & 1u);
    out[k] = c.map(label);
  }
  return fractional_block(std::move(out));
}

/// N i.i.d. circularly-symmetric unit-variance complex Gaussian symbols.
template <class Rng>
ComplexBlock gaussian_block(int n, Rng& rng) {
  std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
  cvec out(static_cast<std::size_t>(n));
  for (auto& v : out) {
    const double re = dist(rng);
    const double im = dist(rng);
    v = cplx(re, im);
  }
  return fractional_block(std::move(out));
}

template <class Rng>
Bits random_bits(std::size_t count, Rng& rng) {
  Bits bits(count);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
  return bits;
}

/// One random data block; `bits` is empty for Gaussian symbols.
struct DataBlock {
  ComplexBlock symbols;
  Bits bits;
};

template <class Rng>
DataBlock random_block(ModulationKind kind, int n, Rng& rng) {
  if (kind == ModulationKind::complex_gaussian) return {gaussian_block(n, rng), {}};
  Bits bits = random_bits(static_cast<std::size_t>(bits_per_symbol(kind)) * n, rng);
  auto symbols = modulate(kind, bits, n);
  return {std::move(symbols), std::move(bits)};
}

/// Hard-decision bits for QAM.
inline Bits demodulate(ModulationKind kind, const ComplexBlock& s) {
  const auto& c = Constellation::get(kind);
  const int b = c.bits_per_symbol();
  Bits bits(s.size() * static_cast<std::size_t>(b));
  for (std::size_t k = 0; k < s.size(); ++k) {
    const unsigned label = c.slice(s.values[k]);
    for (int j = 0; j < b; ++j)
      bits[k * b + j] = static_cast<std::uint8_t>((label >> (b - 1 - j)) & 1u);
  }
  return bits;
}

}  // namespace dafrfdm
