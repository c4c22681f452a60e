#pragma once

// Sampling-based discrete fractional Fourier transform (chirp, DFT, chirp)
// with zero-padding oversampling, plus the Hermite-eigenvector realization.
//
// Angles are carried as the offset delta = alpha - pi/2. The useful search
// range around pi/2 is a few nanoradians wide at realistic block durations,
// so every trigonometric quantity is derived from delta directly.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "dafrfdm/common.hpp"
#include "dafrfdm/fft.hpp"

namespace dafrfdm {

/// Transform configuration and the constants derived from it.
struct FrfdmParams {
  int n_subcarriers = 0;
  int oversample = 1;
  double block_duration = 0.0;  // T, seconds
  double angle_offset = 0.0;    // delta, alpha = pi/2 + delta

  double sampling_interval = 0.0;  // T_s = T / N
  double du = 0.0;                 // fractional-domain interval
  double cot_alpha = 0.0;
  double a_alpha = 0.0;  // -pi^2 sin(2 alpha) / T^2

  int transform_size() const { return n_subcarriers * oversample; }
  /// Sample interval of the oversampled time grid.
  double oversampled_interval() const { return sampling_interval / oversample; }
  double sin_alpha() const { return std::cos(angle_offset); }
  double cos_alpha() const { return -std::sin(angle_offset); }
};

inline FrfdmParams make_params(int n, int oversample, double block_duration,
                               double angle_offset) {
  require(n >= 2, "make_params: N must be >= 2");
  require(oversample >= 1, "make_params: L must be >= 1");
  require(block_duration > 0.0 && std::isfinite(block_duration),
          "make_params: T must be positive");
  require(std::abs(angle_offset) < kPi / 2,
          "make_params: angle offset must lie in (-pi/2, pi/2)");
  FrfdmParams p;
  p.n_subcarriers = n;
  p.oversample = oversample;
  p.block_duration = block_duration;
  p.angle_offset = angle_offset;
  p.sampling_interval = block_duration / n;
  p.du = 2.0 * kPi * std::cos(angle_offset) / block_duration;
  p.cot_alpha = -std::tan(angle_offset);
  p.a_alpha = kPi * kPi * std::sin(2.0 * angle_offset) /
              (block_duration * block_duration);
  return p;
}

inline FrfdmParams with_offset(const FrfdmParams& p, double angle_offset) {
  return make_params(p.n_subcarriers, p.oversample, p.block_duration,
                     angle_offset);
}

enum class Grid { fractional, time };

/// A block of samples tagged with the domain it lives in.
struct ComplexBlock {
  Grid grid = Grid::fractional;
  cvec values;

  std::size_t size() const { return values.size(); }
};

inline ComplexBlock fractional_block(cvec v) {
  return {Grid::fractional, std::move(v)};
}
inline ComplexBlock time_block(cvec v) { return {Grid::time, std::move(v)}; }

namespace detail {

// sqrt((sin a + j cos a) / NL), principal branch.
inline cplx kernel_scale(const FrfdmParams& p) {
  return std::sqrt(cplx(std::cos(p.angle_offset), -std::sin(p.angle_offset)) /
                   static_cast<double>(p.transform_size()));
}

// e^{sign * (j/2) i^2 rate}
inline cplx chirp(long i, double rate, double sign) {
  const double di = static_cast<double>(i);
  return std::polar(1.0, sign * 0.5 * di * di * rate);
}

inline double time_chirp_rate(const FrfdmParams& p) {
  const double ts = p.oversampled_interval();
  return p.cot_alpha * ts * ts;
}

inline double symbol_chirp_rate(const FrfdmParams& p) {
  return p.cot_alpha * p.du * p.du;
}

}  // namespace detail

/// Zero-padded, unitary-scaled inverse DFT of N symbols onto N*L samples.
inline cvec oversampled_idft(const cvec& s, int oversample) {
  const std::size_t nl = s.size() * static_cast<std::size_t>(oversample);
  cvec buf(nl, cplx(0.0, 0.0));
  std::copy(s.begin(), s.end(), buf.begin());
  cvec x = fft::backward(buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(nl));
  for (auto& v : x) v *= scale;
  return x;
}

/// Inverse DFrFT: N fractional-domain symbols to N*L time samples.
inline ComplexBlock idfrft(const FrfdmParams& p, const ComplexBlock& s) {
  const int n = p.n_subcarriers;
  const int nl = p.transform_size();
  require(static_cast<int>(s.size()) == n, "idfrft: block length must be N");
  // alpha = pi/2: both chirps are 1 and the kernel is the plain inverse DFT.
  if (p.angle_offset == 0.0) return time_block(oversampled_idft(s.values, p.oversample));
  const double krate = detail::symbol_chirp_rate(p);
  cvec buf(static_cast<std::size_t>(nl), cplx(0.0, 0.0));
  for (int k = 0; k < n; ++k) buf[k] = s.values[k] * detail::chirp(k, krate, -1.0);
  cvec x = fft::backward(buf);
  const cplx scale = detail::kernel_scale(p);
  const double nrate = detail::time_chirp_rate(p);
  for (int i = 0; i < nl; ++i) x[i] *= scale * detail::chirp(i, nrate, -1.0);
  return time_block(std::move(x));
}

/// Forward DFrFT over the full N*L grid (includes the oversampling tail).
inline cvec dfrft_full(const FrfdmParams& p, const ComplexBlock& x) {
  const int nl = p.transform_size();
  require(static_cast<int>(x.size()) == nl, "dfrft: block length must be N*L");
  if (p.angle_offset == 0.0) {
    cvec out = fft::forward(x.values);
    const double scale = 1.0 / std::sqrt(static_cast<double>(nl));
    for (auto& v : out) v *= scale;
    return out;
  }
  const double nrate = detail::time_chirp_rate(p);
  cvec buf(static_cast<std::size_t>(nl));
  for (int i = 0; i < nl; ++i) buf[i] = x.values[i] * detail::chirp(i, nrate, 1.0);
  cvec out = fft::forward(buf);
  const cplx scale = std::conj(detail::kernel_scale(p));
  const double krate = detail::symbol_chirp_rate(p);
  for (int k = 0; k < nl; ++k) out[k] *= scale * detail::chirp(k, krate, 1.0);
  return out;
}

/// Forward DFrFT returning the N data-bearing coefficients.
inline ComplexBlock dfrft(const FrfdmParams& p, const ComplexBlock& x) {
  cvec full = dfrft_full(p, x);
  full.resize(static_cast<std::size_t>(p.n_subcarriers));
  return fractional_block(std::move(full));
}

/// Real orthonormal eigenvectors of the DFT-commuting tridiagonal matrix,
/// each tagged with its Hermite order. F_alpha = V diag(e^{-j k alpha}) V^T.
class HermiteBasis {
 public:
  explicit HermiteBasis(int n) : n_(n) {
    require(n >= 2, "HermiteBasis: N must be >= 2");
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      s(i, i) = 2.0 * std::cos(2.0 * kPi * i / n) - 4.0;
      s(i, (i + 1) % n) += 1.0;
      s((i + 1) % n, i) += 1.0;
    }

    // Even/odd symmetric bases; S commutes with index reversal so it
    // decomposes into two independent symmetric problems.
    const int half = (n - 1) / 2;
    const double r = 1.0 / std::sqrt(2.0);
    const int n_even = 1 + half + (n % 2 == 0 ? 1 : 0);
    const int n_odd = half;
    Eigen::MatrixXd even = Eigen::MatrixXd::Zero(n, n_even);
    Eigen::MatrixXd odd = Eigen::MatrixXd::Zero(n, n_odd);
    even(0, 0) = 1.0;
    for (int m = 1; m <= half; ++m) {
      even(m, m) = r;
      even(n - m, m) = r;
      odd(m, m - 1) = r;
      odd(n - m, m - 1) = -r;
    }
    if (n % 2 == 0) even(n / 2, n_even - 1) = 1.0;

    vectors_ = Eigen::MatrixXd::Zero(n, n);
    orders_.assign(static_cast<std::size_t>(n), 0);
    int col = 0;
    auto place = [&](const Eigen::MatrixXd& basis, int parity) {
      if (basis.cols() == 0) return;
      Eigen::MatrixXd proj = basis.transpose() * s * basis;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(proj);
      const Eigen::MatrixXd v = basis * solver.eigenvectors();
      // Descending eigenvalue = ascending Hermite order within a parity.
      for (int c = static_cast<int>(v.cols()) - 1, rank = 0; c >= 0; --c, ++rank) {
        Eigen::VectorXd e = v.col(c);
        for (int i = 0; i < n; ++i) {
          if (std::abs(e(i)) > 1e-10) {
            if (e(i) < 0) e = -e;
            break;
          }
        }
        vectors_.col(col) = e;
        orders_[col] = 2 * rank + parity;
        ++col;
      }
    };
    place(even, 0);
    place(odd, 1);
  }

  int size() const { return n_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  const std::vector<int>& orders() const { return orders_; }

  Eigen::MatrixXcd matrix(double alpha) const {
    Eigen::VectorXcd d(n_);
    for (int c = 0; c < n_; ++c) d(c) = std::polar(1.0, -orders_[c] * alpha);
    const Eigen::MatrixXcd v = vectors_.cast<cplx>();
    return v * d.asDiagonal() * v.transpose();
  }

  /// Coefficients of s in the eigenbasis, for repeated application.
  Eigen::VectorXcd analyze(const cvec& s) const {
    require(static_cast<int>(s.size()) == n_, "HermiteBasis: length mismatch");
    Eigen::VectorXcd sv = Eigen::Map<const Eigen::VectorXcd>(s.data(), n_);
    return vectors_.transpose().cast<cplx>() * sv;
  }

  /// F_alpha applied to the signal whose eigen-coefficients are given.
  cvec apply(const Eigen::VectorXcd& coeffs, double alpha) const {
    Eigen::VectorXcd d(n_);
    for (int c = 0; c < n_; ++c)
      d(c) = coeffs(c) * std::polar(1.0, -orders_[c] * alpha);
    Eigen::VectorXcd x = vectors_.cast<cplx>() * d;
    return cvec(x.data(), x.data() + n_);
  }

 private:
  int n_;
  Eigen::MatrixXd vectors_;
  std::vector<int> orders_;
};

/// Eigendecomposition-based DFrFT matrix of angle alpha.
inline Eigen::MatrixXcd eigen_dfrft_matrix(int n, double alpha) {
  return HermiteBasis(n).matrix(alpha);
}

}  // namespace dafrfdm
