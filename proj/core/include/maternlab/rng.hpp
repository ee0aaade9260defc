#pragma once

#include <cstdint>

namespace maternlab {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for task `index` derived from a run seed; the same (seed, index)
/// always yields the same stream regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Counter-based generator: draw k of stream (seed, stream) is a pure
/// function of (seed, stream, k). Normals use Box-Muller.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on (0, 1).
  double uniform();
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace maternlab
