#pragma once

#include <cstdint>

namespace kolmo {

// splitmix64 finalizer: a cheap, well-mixed bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t v);

// Counter-based random stream. A stream is identified by a 64-bit key;
// `child(id)` derives an independent sub-stream, and `uniform(counter)` /
// `gaussian(counter)` read the draw at a given counter position. There is
// no mutable state, so any draw can be reproduced from (key, counter) alone
// and independent sub-streams can be consumed in any order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  RngStream child(std::uint64_t id) const;

  std::uint64_t bits(std::uint64_t counter) const;

  // Uniform draw strictly inside (0, 1).
  double uniform(std::uint64_t counter) const;

  // Standard normal draw via the quantile function.
  double gaussian(std::uint64_t counter) const;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

// Stable derivation of a per-path stream id from an experiment seed.
std::uint64_t path_id_for(std::uint64_t seed, std::uint64_t index);

}  // namespace kolmo
