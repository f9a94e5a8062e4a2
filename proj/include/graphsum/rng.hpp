#ifndef GRAPHSUM_RNG_HPP
#define GRAPHSUM_RNG_HPP

#include <cstdint>
#include <string_view>

namespace graphsum {

/// Counter-based pseudo-random generator. Each draw hashes (seed, counter),
/// so the sequence depends only on the seed and the number of draws taken,
/// never on platform, compiler, or library version. Substreams forked from
/// the same generator are mutually independent and equally reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), counter_(0) {}

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double next_double();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);

  /// Uniform index in [0, n). n must be positive.
  std::size_t next_index(std::size_t n);

  /// Independent generator for a named substream of this seed.
  Rng fork(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

  /// FNV-1a of a byte string, for deriving substream ids from textual keys.
  static std::uint64_t hash_string(std::string_view s);

  /// Order-sensitive combine of two 64-bit values into one stream id.
  static std::uint64_t combine(std::uint64_t a, std::uint64_t b);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace graphsum

#endif  // GRAPHSUM_RNG_HPP
