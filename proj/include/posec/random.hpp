#pragma once

#include <cstdint>
#include <random>

namespace posec {

using Engine = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits of one engine draw, so
// streams are identical on every standard library.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Trials are grouped in fixed-size blocks; block b of a run draws from an
// engine keyed by (master_seed, b). Every trial's randomness is therefore a
// function of the master seed and its own index, whatever the worker count.
inline constexpr std::uint64_t kTrialBlockSize = 4096;

inline Engine block_engine(std::uint64_t master_seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return Engine(seq);
}

}  // namespace posec
