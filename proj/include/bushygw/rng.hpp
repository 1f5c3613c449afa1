#pragma once

#include <cstdint>
#include <string_view>

namespace bushygw {

// Bijective 64-bit finalizer with full avalanche.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

// Seed for an independent stream, a pure function of (master seed, index).
// Trials keyed this way are reproducible regardless of execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

// Small deterministic generator (splitmix64).  Every draw advances the state
// by a fixed increment and finalizes it, so a stream is reproducible from its
// seed alone.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return (next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

// Keyed byte-sequential hash: FNV-1a over the bytes with a key-dependent
// basis, then mix64.  The raw FNV state is exposed (fnv_basis/fnv_feed) so a
// tree walk can extend a parent's state instead of rehashing whole strings;
// finish() of the incrementally built state equals hashing the full text.
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv_basis(std::uint64_t key) {
  return kFnvOffset ^ mix64(key);
}

inline std::uint64_t fnv_feed(std::uint64_t state, std::string_view bytes) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= kFnvPrime;
  }
  return state;
}

inline std::uint64_t fnv_finish(std::uint64_t state) { return mix64(state); }

inline std::uint64_t keyed_hash(std::uint64_t key, std::string_view text) {
  return fnv_finish(fnv_feed(fnv_basis(key), text));
}

}  // namespace bushygw
