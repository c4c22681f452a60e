#pragma once

// Envelope-power analysis of a DA-FrFDM block.
//
// With x(t) the continuous baseband signal of one block,
//   |x(t)|^2 = (1/N) sum |s_k|^2 + (2/N) g(t),
//   g(t) = sum_p (G1_p + G2_p) cos(2 pi p t / T) + (G3_p + G4_p) sin(2 pi p t / T),
// where the harmonic coefficients depend on the angle only through A_alpha.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "dafrfdm/common.hpp"
#include "dafrfdm/fft.hpp"
#include "dafrfdm/frft.hpp"

namespace dafrfdm {

inline constexpr double kMinBlockPower = 1e-30;

/// Angle-independent pair products of one symbol block:
/// lambda(m,p) + j mu(m,p) = s[m+p] conj(s[m]), 1 <= p < N, 0 <= m < N-p.
class EnvelopeCoeffs {
 public:
  EnvelopeCoeffs() = default;

  explicit EnvelopeCoeffs(const cvec& s) : n_(static_cast<int>(s.size())) {
    require(n_ >= 2, "envelope_coeffs: N must be >= 2");
    const std::size_t count = static_cast<std::size_t>(n_) * (n_ - 1) / 2;
    lambda_.reserve(count);
    mu_.reserve(count);
    for (int p = 1; p < n_; ++p) {
      for (int m = 0; m + p < n_; ++m) {
        const cplx c = s[m + p] * std::conj(s[m]);
        lambda_.push_back(c.real());
        mu_.push_back(c.imag());
      }
    }
    mean_power_sum_ = energy(s);
  }

  int size() const { return n_; }
  double lambda(int m, int p) const { return lambda_[offset(p) + m]; }
  double mu(int m, int p) const { return mu_[offset(p) + m]; }
  double mean_power_sum() const { return mean_power_sum_; }

 private:
  std::size_t offset(int p) const {
    // sum_{q=1}^{p-1} (N - q)
    return static_cast<std::size_t>(p - 1) * n_ -
           static_cast<std::size_t>(p - 1) * p / 2;
  }

  int n_ = 0;
  std::vector<double> lambda_;
  std::vector<double> mu_;
  double mean_power_sum_ = 0.0;
};

inline EnvelopeCoeffs envelope_coeffs(const ComplexBlock& s) {
  return EnvelopeCoeffs(s.values);
}

/// gamma^(1..4)_p and their A_alpha-derivatives rho^(1..4)_p, index p-1.
struct HarmonicCoeffs {
  std::array<std::vector<double>, 4> gamma;
  std::array<std::vector<double>, 4> rho;
  double a_alpha = 0.0;

  int harmonics() const { return static_cast<int>(gamma[0].size()); }

  std::vector<double> cos_terms() const { return sum_pair(gamma[0], gamma[1]); }
  std::vector<double> sin_terms() const { return sum_pair(gamma[2], gamma[3]); }
  std::vector<double> cos_terms_derivative() const { return sum_pair(rho[0], rho[1]); }
  std::vector<double> sin_terms_derivative() const { return sum_pair(rho[2], rho[3]); }

 private:
  static std::vector<double> sum_pair(const std::vector<double>& a,
                                      const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
  }
};

inline HarmonicCoeffs harmonic_coeffs(const EnvelopeCoeffs& env, double a_alpha) {
  const int n = env.size();
  HarmonicCoeffs h;
  h.a_alpha = a_alpha;
  for (auto& v : h.gamma) v.assign(static_cast<std::size_t>(n - 1), 0.0);
  for (auto& v : h.rho) v.assign(static_cast<std::size_t>(n - 1), 0.0);
  for (int p = 1; p < n; ++p) {
    double g1 = 0, g2 = 0, g3 = 0, g4 = 0, r1 = 0, r2 = 0, r3 = 0, r4 = 0;
    // beta(m) = p^2 A + m (2 p A); walk e^{j beta} geometrically in m.
    const double dp = static_cast<double>(p);
    cplx rot = std::polar(1.0, dp * dp * a_alpha);
    const cplx step = std::polar(1.0, 2.0 * dp * a_alpha);
    for (int m = 0; m + p < n; ++m, rot *= step) {
      const double w = dp * (2.0 * m + dp);
      const double cb = rot.real();
      const double sb = rot.imag();
      const double lam = env.lambda(m, p);
      const double mu = env.mu(m, p);
      g1 += lam * cb;
      g2 -= mu * sb;
      g3 -= lam * sb;
      g4 -= mu * cb;
      r1 -= w * lam * sb;
      r2 -= w * mu * cb;
      r3 -= w * lam * cb;
      r4 += w * mu * sb;
    }
    const std::size_t i = static_cast<std::size_t>(p - 1);
    h.gamma[0][i] = g1;
    h.gamma[1][i] = g2;
    h.gamma[2][i] = g3;
    h.gamma[3][i] = g4;
    h.rho[0][i] = r1;
    h.rho[1][i] = r2;
    h.rho[2][i] = r3;
    h.rho[3][i] = r4;
  }
  return h;
}

/// Samples of sum_p a_p cos(2 pi p n / M) + b_p sin(2 pi p n / M), p = 1..P,
/// at n = 0..M-1. Requires M > P.
inline std::vector<double> trig_poly_on_grid(const std::vector<double>& cos_terms,
                                             const std::vector<double>& sin_terms,
                                             int grid_points) {
  const int harmonics = static_cast<int>(cos_terms.size());
  require(grid_points > harmonics, "trig polynomial grid too coarse (aliasing)");
  cvec spec(static_cast<std::size_t>(grid_points), cplx(0.0, 0.0));
  for (int p = 1; p <= harmonics; ++p)
    spec[p] = cplx(cos_terms[p - 1], -sin_terms[p - 1]);
  const cvec t = fft::backward(spec);
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i].real();
  return out;
}

inline std::vector<double> g_on_grid(const HarmonicCoeffs& h, int grid_points) {
  return trig_poly_on_grid(h.cos_terms(), h.sin_terms(), grid_points);
}

/// Default uniform grid for maximizing g: 8(N-1) points.
inline int default_g_grid(int n) { return 8 * (n - 1); }

/// max_t g(t) over a uniform grid of the block period.
inline double g_max(const HarmonicCoeffs& h, int grid_points) {
  const auto g = g_on_grid(h, grid_points);
  return *std::max_element(g.begin(), g.end());
}

/// PAPR of an arbitrary sampled waveform, in dB.
inline double papr_db_samples(const cvec& x) {
  require(!x.empty(), "papr: empty signal");
  double peak = 0.0, sum = 0.0;
  for (const auto& v : x) {
    const double p = std::norm(v);
    peak = std::max(peak, p);
    sum += p;
  }
  if (sum < kMinBlockPower) throw InvalidArgument("papr: zero-power block");
  return 10.0 * std::log10(peak * static_cast<double>(x.size()) / sum);
}

/// PAPR of the oversampled DA-FrFDM time signal of s at the angle in p.
inline double papr_db(const FrfdmParams& p, const ComplexBlock& s) {
  if (energy(s.values) < kMinBlockPower)
    throw InvalidArgument("papr: zero-power block");
  return papr_db_samples(idfrft(p, s).values);
}

/// PAPR through the envelope expansion: 10 log10(1 + 2 max g / sum |s|^2).
inline double papr_db_from_envelope(const EnvelopeCoeffs& env,
                                    const HarmonicCoeffs& h, int grid_points) {
  if (env.mean_power_sum() < kMinBlockPower)
    throw InvalidArgument("papr: zero-power block");
  return 10.0 * std::log10(1.0 + 2.0 * g_max(h, grid_points) / env.mean_power_sum());
}

/// Quadrature size that integrates g^4 (degree 4(N-1)) exactly.
inline int default_quadrature_points(int n) { return 8 * (n - 1); }

/// I = int_0^T g(t)^4 dt, uniform-grid quadrature (exact for M > 4(N-1)).
inline double surrogate_I(const HarmonicCoeffs& h, double block_duration,
                          int quad_points = 0) {
  const int m = quad_points > 0 ? quad_points : default_quadrature_points(h.harmonics() + 1);
  require(m > 4 * h.harmonics(), "surrogate_I: quadrature too coarse");
  const auto g = g_on_grid(h, m);
  double acc = 0.0;
  for (double v : g) acc += v * v * v * v;
  return acc * block_duration / m;
}

/// dI/dA_alpha = int_0^T 4 g^3 dg/dA dt.
inline double surrogate_dI_dA(const HarmonicCoeffs& h, double block_duration,
                              int quad_points = 0) {
  const int m = quad_points > 0 ? quad_points : default_quadrature_points(h.harmonics() + 1);
  require(m > 4 * h.harmonics(), "surrogate_dI_dA: quadrature too coarse");
  const auto g = g_on_grid(h, m);
  const auto ga = trig_poly_on_grid(h.cos_terms_derivative(), h.sin_terms_derivative(), m);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) acc += 4.0 * g[i] * g[i] * g[i] * ga[i];
  return acc * block_duration / m;
}

/// dA_alpha / d alpha = -2 pi^2 cos(2 alpha) / T^2 = 2 pi^2 cos(2 delta) / T^2.
inline double a_alpha_slope(const FrfdmParams& p) {
  return 2.0 * kPi * kPi * std::cos(2.0 * p.angle_offset) /
         (p.block_duration * p.block_duration);
}

/// I'(alpha) at the angle carried by p.
inline double surrogate_I_prime(const EnvelopeCoeffs& env, const FrfdmParams& p,
                                int quad_points = 0) {
  const auto h = harmonic_coeffs(env, p.a_alpha);
  return surrogate_dI_dA(h, p.block_duration, quad_points) * a_alpha_slope(p);
}

enum class TrigKind { cos, sin };

/// Closed form of int_0^{2pi} xi1(kt) xi2(lt) xi3(mt) xi4(nt) dt for
/// positive integer frequencies, via the 16x8 sign table.
inline double quad_trig_integral(const std::array<TrigKind, 4>& kinds,
                                 const std::array<int, 4>& freq) {
  static constexpr int kQ[16][8] = {
      {0, +1, +1, +1, +1, +1, +1, +1}, {0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 0, 0, 0},        {0, -1, +1, +1, -1, -1, +1, +1},
      {0, 0, 0, 0, 0, 0, 0, 0},        {0, +1, +1, -1, +1, -1, -1, +1},
      {0, +1, -1, +1, +1, -1, +1, -1}, {0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 0, 0, 0},        {0, +1, +1, -1, -1, +1, +1, -1},
      {0, +1, -1, +1, -1, +1, -1, +1}, {0, 0, 0, 0, 0, 0, 0, 0},
      {0, -1, -1, -1, +1, +1, +1, +1}, {0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 0, 0, 0},        {0, +1, -1, -1, -1, -1, +1, +1},
  };
  for (int f : freq) require(f >= 1, "quad_trig_integral: frequencies must be >= 1");
  const int row = 8 * (kinds[0] == TrigKind::sin) + 4 * (kinds[1] == TrigKind::sin) +
                  2 * (kinds[2] == TrigKind::sin) + (kinds[3] == TrigKind::sin);
  const int k = freq[0], l = freq[1], m = freq[2], n = freq[3];
  const int combos[8] = {k + l + m + n, k + l - m - n, k + l + m - n, k + l - m + n,
                         k - l + m + n, k - l - m - n, k - l + m - n, k - l - m + n};
  int acc = 0;
  for (int c = 0; c < 8; ++c)
    if (combos[c] == 0) acc += kQ[row][c];
  return kPi / 4.0 * acc;
}

}  // namespace dafrfdm
