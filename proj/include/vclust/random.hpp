#pragma once

#include <cstdint>
#include <random>

namespace vclust {

using Rng = std::mt19937_64;

/// Seed of the `index`-th independent stream derived from `master`
/// (SplitMix64 finalizer over the pair), so (master, index) fully
/// determines a task's random stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

inline Rng make_rng(std::uint64_t master, std::uint64_t index) {
  return Rng(derive_seed(master, index));
}

}  // namespace vclust
