#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fedcodec/rng.hpp"
#include "fedcodec/transforms.hpp"

using namespace fedcodec;

namespace {
double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
}  // namespace

TEST_CASE("transforms: padded_length is the next power of two") {
  CHECK(padded_length(0) == 1);
  CHECK(padded_length(1) == 1);
  CHECK(padded_length(2) == 2);
  CHECK(padded_length(3) == 4);
  CHECK(padded_length(5) == 8);
  CHECK(padded_length(4096) == 4096);
  CHECK(padded_length(4097) == 8192);
}

TEST_CASE("transforms: orthonormal H2 hand traces") {
  std::vector<double> v = {1.0, 1.0};
  fwht_orthonormal(v);
  CHECK(v[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(v[1] == doctest::Approx(0.0));
  std::vector<double> w = {1.0, -1.0};
  fwht_orthonormal(w);
  CHECK(w[0] == doctest::Approx(0.0));
  CHECK(w[1] == doctest::Approx(std::sqrt(2.0)));
  std::vector<double> one = {3.5};
  fwht_orthonormal(one);
  CHECK(one[0] == 3.5);
}

TEST_CASE("transforms: H4 of a unit impulse spreads evenly") {
  std::vector<double> v = {1.0, 0.0, 0.0, 0.0};
  fwht_orthonormal(v);
  for (double x : v) CHECK(x == doctest::Approx(0.5));
}

TEST_CASE("transforms: fwht is self-inverse and norm-preserving") {
  Rng rng(5);
  std::vector<double> v(1024);
  for (auto& x : v) x = rng.normal();
  std::vector<double> orig = v;
  double norm0 = l2(v);
  fwht_orthonormal(v);
  CHECK(l2(v) == doctest::Approx(norm0).epsilon(1e-9));
  fwht_orthonormal(v);
  for (size_t i = 0; i < v.size(); ++i)
    CHECK(v[i] == doctest::Approx(orig[i]).epsilon(1e-9));
}

TEST_CASE("transforms: fwht rejects non-power-of-two lengths") {
  std::vector<double> v(3, 1.0);
  CHECK_THROWS_AS(fwht_orthonormal(v), std::invalid_argument);
}

TEST_CASE("transforms: rademacher signs are +-1, pure, and balanced") {
  int plus = 0;
  for (uint64_t i = 0; i < 10000; ++i) {
    double s = rademacher_sign(21, i);
    CHECK((s == 1.0 || s == -1.0));
    CHECK(s == rademacher_sign(21, i));
    if (s > 0) ++plus;
  }
  CHECK(plus > 4700);
  CHECK(plus < 5300);
}

TEST_CASE("transforms: randomized hadamard preserves the padded norm") {
  Rng rng(8);
  std::vector<double> u(1000);
  for (auto& x : u) x = rng.normal();
  std::vector<double> y = randomized_hadamard(u, 99);
  CHECK(y.size() == 1024);
  CHECK(l2(y) == doctest::Approx(l2(u)).epsilon(1e-9));
}

TEST_CASE("transforms: rotation roundtrip restores the original vector") {
  Rng rng(12);
  for (size_t d : {size_t{1}, size_t{2}, size_t{5}, size_t{100}, size_t{128}}) {
    std::vector<double> u(d);
    for (auto& x : u) x = rng.normal();
    std::vector<double> y = randomized_hadamard(u, 7);
    std::vector<double> back = inverse_hadamard(y, 7, d);
    REQUIRE(back.size() == d);
    for (size_t i = 0; i < d; ++i)
      CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-9));
  }
}

TEST_CASE("transforms: inverse with a wrong seed does not invert") {
  std::vector<double> u = {1.0, 2.0, -3.0, 0.5};
  std::vector<double> y = randomized_hadamard(u, 7);
  std::vector<double> wrong = inverse_hadamard(y, 8, u.size());
  double diff = 0.0;
  for (size_t i = 0; i < u.size(); ++i) diff += std::abs(wrong[i] - u[i]);
  CHECK(diff > 1e-6);
}

TEST_CASE("transforms: inverse rejects a padded-length mismatch") {
  std::vector<double> y(6, 1.0);
  CHECK_THROWS_AS(inverse_hadamard(y, 7, 5), std::invalid_argument);
}

TEST_CASE("transforms: zero vector rotates to zero") {
  std::vector<double> u(5, 0.0);
  std::vector<double> y = randomized_hadamard(u, 3);
  for (double x : y) CHECK(x == 0.0);
  std::vector<double> back = inverse_hadamard(y, 3, 5);
  for (double x : back) CHECK(x == 0.0);
}

TEST_CASE("transforms: normalize splits direction and norm") {
  std::vector<double> u = {3.0, 4.0};
  auto [dir, norm] = normalize(u);
  CHECK(norm == doctest::Approx(5.0));
  CHECK(dir[0] == doctest::Approx(0.6));
  CHECK(dir[1] == doctest::Approx(0.8));
  for (size_t i = 0; i < u.size(); ++i)
    CHECK(dir[i] * norm == doctest::Approx(u[i]).epsilon(1e-12));
  auto [zdir, znorm] = normalize(std::vector<double>{0.0, 0.0});
  CHECK(znorm == 0.0);
  CHECK(zdir == std::vector<double>{0.0, 0.0});
}
