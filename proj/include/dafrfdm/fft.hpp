#pragma once

// Thin FFTW wrapper. Plans are created once per (size, direction) and shared;
// execution goes through the new-array interface, which FFTW documents as
// thread safe.

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "dafrfdm/common.hpp"

namespace dafrfdm::fft {

enum class Direction { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, Direction dir) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, static_cast<int>(dir));
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    // Planning needs scratch buffers; with FFTW_ESTIMATE they are not touched.
    auto* in = fftw_alloc_complex(static_cast<size_t>(n));
    auto* out = fftw_alloc_complex(static_cast<size_t>(n));
    fftw_plan p = fftw_plan_dft_1d(n, in, out, static_cast<int>(dir),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, p);
    return p;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

}  // namespace detail

/// Unnormalized DFT: forward uses e^{-j2pi nk/n}, backward e^{+j2pi nk/n}.
inline cvec transform(const cvec& in, Direction dir) {
  require(!in.empty(), "fft: empty input");
  const int n = static_cast<int>(in.size());
  fftw_plan p = detail::PlanCache::instance().get(n, dir);
  cvec in_copy(in);
  cvec out(in.size());
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in_copy.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

inline cvec forward(const cvec& in) { return transform(in, Direction::forward); }
inline cvec backward(const cvec& in) { return transform(in, Direction::backward); }

}  // namespace dafrfdm::fft
