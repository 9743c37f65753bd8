#pragma once

#include <cstdint>
#include <random>

namespace rlab {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// A value-typed random stream identified by (master seed, stream id).
/// Child streams are derived by hashing, never by advancing a shared engine,
/// so any set of streams can be consumed in any order or on any thread.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  RngStream child(std::uint64_t key) const {
    return {master_seed, mix64(stream_id ^ mix64(key + 0x632be59bd9b4e019ULL))};
  }

  std::mt19937_64 engine() const {
    return std::mt19937_64(mix64(master_seed ^ mix64(stream_id)));
  }

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Stream for sample `index` at `degree` of an experiment seeded with `seed`.
inline RngStream sample_stream(std::uint64_t seed, int degree, std::uint64_t index) {
  return RngStream{seed, 0}.child(static_cast<std::uint64_t>(degree)).child(index);
}

}  // namespace rlab
