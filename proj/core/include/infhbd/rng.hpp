// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace infhbd {

// splitmix64 finalizer; used to derive independent stream seeds so that
// parallel trials stay deterministic regardless of thread scheduling.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix_seed(base ^ mix_seed(stream + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t base, std::uint64_t stream = 0) {
  return std::mt19937_64(derive_seed(base, stream));
}

}  // namespace infhbd
