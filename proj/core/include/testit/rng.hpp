#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace testit {

/// A reproducible random stream. Draws use only the standardized
/// std::mt19937_64 bit sequence plus explicit rejection sampling, so values
/// are identical across standard libraries and platforms.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : engine_(key) {}

  /// Uniform integer in [0, n). `n` must be positive.
  std::uint64_t index(std::uint64_t n);
  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  /// Uniform real in [lo, hi] built from 53 random bits.
  double real(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

enum class StreamDomain : std::uint64_t { kParameter = 1, kDataset = 2 };

/// Key for the sub-stream identified by (seed, domain, iteration, test, name).
std::uint64_t stream_key(std::uint64_t seed, StreamDomain domain, std::uint64_t iteration,
                         std::uint64_t test_index, std::string_view name);

}  // namespace testit
