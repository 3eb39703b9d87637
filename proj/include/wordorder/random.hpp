#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace wordorder {

// Unbiased draw from [0, n) via rejection sampling.  mt19937_64 output is
// fully specified by the standard, so results are identical across platforms;
// std::uniform_int_distribution is not and must not be used where output
// bytes have to be reproducible.
inline std::uint64_t bounded_uniform(std::mt19937_64& gen, std::uint64_t n) {
  if (n == 0) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t draw;
  do {
    draw = gen();
  } while (draw >= limit);
  return draw % n;
}

// Fisher-Yates with bounded_uniform, same portability argument as above.
inline std::vector<std::size_t> shuffled_indices(std::size_t n,
                                                 std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 gen(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(bounded_uniform(gen, i));
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

}  // namespace wordorder
