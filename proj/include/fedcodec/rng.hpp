#pragma once

#include <cstdint>

namespace fedcodec {

// SplitMix64 finalizer. Full-avalanche 64-bit mixer, identical on every
// platform (no UB, no floating point).
constexpr uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Order-free hash of (key, index). hash_u64(seed, i) is the i-th element of
// the stream keyed by `seed`; no sequential state is needed to evaluate it.
constexpr uint64_t hash_u64(uint64_t key, uint64_t index) {
  return mix64(mix64(key) ^ mix64(index + 0x9e3779b97f4a7c15ull));
}

// Counter-based generator: output i is hash_u64(seed, i). Equal seeds give
// bit-identical streams regardless of platform or thread interleaving, and
// any position of the stream can be read without drawing the ones before it.
class Rng {
 public:
  explicit Rng(uint64_t seed) : key_(seed) {}

  uint64_t next_u64() { return hash_u64(key_, counter_++); }

  // Stream element at an absolute position; does not advance the generator.
  uint64_t at(uint64_t index) const { return hash_u64(key_, index); }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Standard normal via Box-Muller; consumes two stream elements.
  double normal();

  // Uniform integer in [0, n). n must be nonzero.
  uint64_t next_below(uint64_t n);

  // Seed for a child stream, e.g. derive(master, round, client_id). Distinct
  // (label, a, b) triples give statistically independent streams.
  static constexpr uint64_t derive(uint64_t master, uint64_t a, uint64_t b = 0) {
    return hash_u64(hash_u64(master, a), b);
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

// [0, 1) value at position `index` of the stream keyed by `seed`.
constexpr double unit_at(uint64_t seed, uint64_t index) {
  return static_cast<double>(hash_u64(seed, index) >> 11) * 0x1.0p-53;
}

}  // namespace fedcodec
