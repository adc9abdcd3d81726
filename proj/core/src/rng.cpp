#include "testit/rng.hpp"

#include <limits>

namespace testit {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

std::uint64_t stream_key(std::uint64_t seed, StreamDomain domain, std::uint64_t iteration,
                         std::uint64_t test_index, std::string_view name) {
  std::uint64_t k = splitmix64(seed);
  k = splitmix64(k ^ static_cast<std::uint64_t>(domain));
  k = splitmix64(k ^ iteration);
  k = splitmix64(k ^ test_index);
  return splitmix64(k ^ fnv1a(name));
}

std::uint64_t RandomStream::index(std::uint64_t n) {
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::int64_t RandomStream::integer(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) {
    return static_cast<std::int64_t>(engine_());
  }
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + index(span + 1));
}

double RandomStream::real(double lo, double hi) {
  // 53 bits, scaled by 1/(2^53 - 1) so that both endpoints are reachable.
  const double u = static_cast<double>(engine_() >> 11) / 9007199254740991.0;
  double v = lo + (hi - lo) * u;
  if (v < lo) v = lo;
  if (v > hi) v = hi;
  return v;
}

}  // namespace testit
