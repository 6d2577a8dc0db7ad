#include "kolmo/rng.hpp"

#include "kolmo/normal.hpp"

namespace kolmo {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kCounterSalt = 0xD1B54A32D192ED03ull;
}  // namespace

std::uint64_t mix64(std::uint64_t v) {
  v += kGolden;
  v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ull;
  v = (v ^ (v >> 27)) * 0x94D049BB133111EBull;
  return v ^ (v >> 31);
}

RngStream RngStream::child(std::uint64_t id) const {
  return RngStream(mix64(key_ ^ mix64(id + 1)));
}

std::uint64_t RngStream::bits(std::uint64_t counter) const {
  return mix64(key_ ^ (kCounterSalt * (counter + 1)));
}

double RngStream::uniform(std::uint64_t counter) const {
  // 53 random bits in (0,1); the +2^-54 offset keeps 0 out of range.
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

double RngStream::gaussian(std::uint64_t counter) const {
  return normal_quantile(uniform(counter));
}

std::uint64_t path_id_for(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ index);
}

}  // namespace kolmo
