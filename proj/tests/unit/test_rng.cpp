#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "fedcodec/rng.hpp"

using namespace fedcodec;

TEST_CASE("rng: counter stream matches positional access") {
  Rng rng(42);
  for (uint64_t i = 0; i < 100; ++i) {
    Rng probe(42);
    CHECK(rng.next_u64() == probe.at(i));
    CHECK(probe.at(i) == hash_u64(42, i));
  }
}

TEST_CASE("rng: equal seeds give identical streams, different seeds differ") {
  Rng a(7), b(7), c(8);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 64; ++i) {
    uint64_t va = a.next_u64();
    all_equal = all_equal && va == b.next_u64();
    any_diff = any_diff || va != c.at(static_cast<uint64_t>(i));
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("rng: next_unit lies in [0,1) with mean near 1/2") {
  Rng rng(3);
  const int n = 20000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = rng.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // SE of the mean is 1/sqrt(12 n) ~= 0.002.
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("rng: unit_at is a pure function of (seed, index)") {
  CHECK(unit_at(11, 5) == unit_at(11, 5));
  CHECK(unit_at(11, 5) ==
        static_cast<double>(hash_u64(11, 5) >> 11) * 0x1.0p-53);
  CHECK(unit_at(11, 5) != unit_at(11, 6));
  CHECK(unit_at(11, 5) != unit_at(12, 5));
}

TEST_CASE("rng: normal has mean 0 and unit variance") {
  Rng rng(9);
  const int n = 40000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::isfinite(rng.normal()));
}

TEST_CASE("rng: next_below stays in range and covers small supports") {
  Rng rng(13);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 5000; ++i) {
    uint64_t v = rng.next_below(5);
    REQUIRE(v < 5);
    ++counts[v];
  }
  for (int c : counts) CHECK(c > 800);  // expected 1000 each
  CHECK(rng.next_below(1) == 0);
}

TEST_CASE("rng: derive separates streams by label pair") {
  std::set<uint64_t> seeds;
  for (uint64_t a = 0; a < 8; ++a)
    for (uint64_t b = 0; b < 8; ++b) seeds.insert(Rng::derive(99, a, b));
  CHECK(seeds.size() == 64);
  CHECK(Rng::derive(99, 1, 2) == Rng::derive(99, 1, 2));
  CHECK(Rng::derive(99, 1, 2) != Rng::derive(98, 1, 2));
}

TEST_CASE("rng: mix64 has no obvious fixed structure on low bits") {
  int ones = 0;
  for (uint64_t i = 0; i < 4096; ++i) ones += static_cast<int>(mix64(i) & 1);
  CHECK(ones > 1850);
  CHECK(ones < 2250);
}
