#pragma once

#include <cstdint>
#include <random>

namespace dafrfdm::harness {

using Rng = std::mt19937_64;

/// Independent sub-streams of one block.
enum class Stream : std::uint32_t {
  data = 1,
  channel = 2,
  slm = 3,
  noise = 16,  // + SNR index
};

/// Generator for (master_seed, block_id, stream). Derived purely from the
/// triple, so results do not depend on which worker handles a block.
inline Rng seed_stream(std::uint64_t master_seed, std::uint64_t block_id,
                       std::uint32_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(block_id),
                    static_cast<std::uint32_t>(block_id >> 32), stream};
  return Rng(seq);
}

inline Rng seed_stream(std::uint64_t master_seed, std::uint64_t block_id, Stream stream,
                       std::uint32_t sub = 0) {
  return seed_stream(master_seed, block_id, static_cast<std::uint32_t>(stream) + sub);
}

}  // namespace dafrfdm::harness
