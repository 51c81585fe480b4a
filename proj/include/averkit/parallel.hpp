#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>

namespace averkit {

/// Worker count: hardware concurrency, capped by AVERKIT_THREADS when set.
std::size_t thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() workers.
/// Each index runs exactly once; the first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Seeding: each random stream is identified by (seed, stream ids...) and
// keyed through SplitMix64, so streams do not depend on scheduling.

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  return Rng(derive_seed(seed, stream));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace averkit
