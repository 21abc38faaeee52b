#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cnngp {

/// 64-bit mixing step of SplitMix64.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives a child seed from (seed, a, b) so that draws can be generated
/// independently per index and reproduced in any order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Seeded generator for one logical stream (one draw, one fold, ...).
///
/// Streams are cheap to create; parallel code makes one per work item via
/// `RandomStream(seed, index, purpose)` and never shares a stream.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);
  RandomStream(std::uint64_t seed, std::uint64_t index, std::uint64_t purpose = 0);

  double normal();
  double uniform();  ///< [0, 1)
  double chi_square(double dof);
  std::uint64_t next_u64() { return engine_(); }
  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Uniformly random permutation of 0..n-1 (Fisher-Yates with `below`), so the
/// result does not depend on the standard library's shuffle.
std::vector<std::int64_t> random_permutation(std::int64_t n, RandomStream& rng);

/// Stream purposes used across the library; keeps streams for the same
/// draw index independent between sampling stages.
namespace stream {
inline constexpr std::uint64_t kPosterior = 1;
inline constexpr std::uint64_t kPredict = 2;
inline constexpr std::uint64_t kFolds = 3;
inline constexpr std::uint64_t kSimulate = 4;
inline constexpr std::uint64_t kNoise = 5;
}  // namespace stream

}  // namespace cnngp
