#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fedcodec/baselines.hpp"
#include "fedcodec/errors.hpp"
#include "fedcodec/transforms.hpp"
#include "fedcodec/update.hpp"

using namespace fedcodec;

TEST_CASE("baselines: topk worked example") {
  std::vector<double> u = {5.0, -1.0, 0.5, 0.0};
  TopkMessage m = topk_encode(u, 0.25);
  CHECK(m.indices == std::vector<uint32_t>{0});
  CHECK(topk_decode(m) == std::vector<double>{5.0, 0.0, 0.0, 0.0});
  CHECK(topk_payload_bits(m) == 36);  // 4-bit mask + one 32-bit value
}

TEST_CASE("baselines: topk keep-all is exact") {
  std::vector<double> u = {1.0, -2.0, 0.25};
  TopkMessage m = topk_encode(u, 1.0);
  CHECK(topk_decode(m) == u);
  CHECK(topk_payload_bits(m) == 3 + 3 * 32);
}

TEST_CASE("baselines: topk ties break toward the lower index") {
  std::vector<double> u = {2.0, -2.0, 1.0};
  TopkMessage m = topk_encode(u, 1.0 / 3.0);
  CHECK(m.indices == std::vector<uint32_t>{0});
  CHECK(m.values == std::vector<double>{2.0});
}

TEST_CASE("baselines: topk error equals the dropped energy exactly") {
  std::vector<double> u = {3.0, -1.0, 0.5, 0.25, 0.1};
  TopkMessage m = topk_encode(u, 0.4);  // keeps 2
  std::vector<double> back = topk_decode(m);
  double dropped = 0.5 * 0.5 + 0.25 * 0.25 + 0.1 * 0.1;
  CHECK(distortion(u, back) == doctest::Approx(dropped).epsilon(1e-12));
}

TEST_CASE("baselines: qsgd exact levels are deterministic") {
  std::vector<double> u = {5.0, 0.0, 0.0};
  Rng rng(1);
  QsgdMessage m = qsgd_encode(u, 1, rng);
  CHECK(m.norm == doctest::Approx(5.0));
  CHECK(m.signed_levels == std::vector<int64_t>{1, 0, 0});
  CHECK(qsgd_decode(m) == std::vector<double>{5.0, 0.0, 0.0});
}

TEST_CASE("baselines: qsgd decode is unbiased (monte carlo)") {
  std::vector<double> u = {0.6, -0.8};
  const int n = 100000;
  Rng rng(33);
  double s0 = 0.0, s1 = 0.0;
  for (int i = 0; i < n; ++i) {
    QsgdMessage m = qsgd_encode(u, 2, rng);
    std::vector<double> v = qsgd_decode(m);
    s0 += v[0];
    s1 += v[1];
  }
  // Levels are Bernoulli between adjacent integers; var <= (norm/s)^2/4.
  double se = 0.5 * 1.0 / 2.0 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(s0 / n - 0.6) <= 4 * se);
  CHECK(std::abs(s1 / n + 0.8) <= 4 * se);
}

TEST_CASE("baselines: qsgd zero vector sends the norm alone") {
  std::vector<double> u = {0.0, 0.0};
  Rng rng(2);
  QsgdMessage m = qsgd_encode(u, 4, rng);
  CHECK(m.norm == 0.0);
  CHECK(qsgd_decode(m) == std::vector<double>{0.0, 0.0});
  CHECK(qsgd_payload_bits(m) == 32);
  EncodedUpdate e = to_container(m);
  CHECK(e.payload.empty());
  CHECK(decode_container(e) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("baselines: qsgd levels never exceed s") {
  std::vector<double> u = {1.0, -1.0, 0.5};
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    QsgdMessage m = qsgd_encode(u, 4, rng);
    for (int64_t l : m.signed_levels) CHECK(std::abs(l) <= 4);
  }
}

TEST_CASE("baselines: drive on [1,1] has scale sqrt(2)/2 and distortion 1") {
  std::vector<double> u = {1.0, 1.0};
  for (uint64_t seed : {1ull, 2ull, 3ull, 99ull}) {
    DriveMessage m = drive_encode(u, seed);
    CHECK(m.scale == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(drive_payload_bits(m) == 32 + 2);
    std::vector<double> back = drive_decode(m);
    CHECK(distortion(u, back) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("baselines: drive is exact when rotated magnitudes are equal") {
  // Build u whose rotation is c * (+-1 pattern), then encode it.
  uint64_t seed = 17;
  std::vector<double> y = {0.7, -0.7, 0.7, 0.7, -0.7, 0.7, -0.7, -0.7};
  std::vector<double> u = inverse_hadamard(y, seed, 8);
  DriveMessage m = drive_encode(u, seed);
  CHECK(m.scale == doctest::Approx(0.7));
  std::vector<double> back = drive_decode(m);
  for (size_t i = 0; i < u.size(); ++i)
    CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-9));
}

TEST_CASE("baselines: drive rate is fixed at padded d + 32") {
  std::vector<double> u(5, 0.25);
  DriveMessage m = drive_encode(u, 1);
  CHECK(m.signs.size() == 8);
  CHECK(drive_payload_bits(m) == 40);
}

TEST_CASE("baselines: drive scale minimizes the rotated distortion") {
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> u(33);
    for (auto& x : u) x = rng.normal();
    DriveMessage m = drive_encode(u, trial + 1);
    std::vector<double> y = randomized_hadamard(u, trial + 1);
    auto cost = [&](double s) {
      double c = 0.0;
      for (size_t i = 0; i < y.size(); ++i) {
        double r = y[i] - s * (m.signs[i] > 0 ? 1.0 : -1.0);
        c += r * r;
      }
      return c;
    };
    double at = cost(m.scale);
    CHECK(at <= cost(m.scale * 1.01) + 1e-12);
    CHECK(at <= cost(m.scale * 0.99) + 1e-12);
  }
}

TEST_CASE("baselines: tlc extreme values are exact") {
  std::vector<double> u = {4.0, 0.0, -4.0};
  Rng rng(4);
  TlcMessage m = tlc_encode(u, 1.0, rng);
  CHECK(m.scale == doctest::Approx(4.0));
  CHECK(m.trits == std::vector<int8_t>{1, 0, -1});
  CHECK(tlc_decode(m) == std::vector<double>{4.0, 0.0, -4.0});
}

TEST_CASE("baselines: tlc stochastic trit is unbiased") {
  std::vector<double> u = {2.0, 0.0, -4.0};
  const int n = 50000;
  Rng rng(44);
  std::vector<double> sum(3, 0.0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> v = tlc_decode(tlc_encode(u, 1.0, rng));
    for (size_t j = 0; j < 3; ++j) sum[j] += v[j];
  }
  double se = 4.0 / std::sqrt(static_cast<double>(n));  // scale m = 4
  CHECK(std::abs(sum[0] / n - 2.0) <= 4 * se);
  CHECK(std::abs(sum[1] / n) <= 1e-12);
  CHECK(std::abs(sum[2] / n + 4.0) <= 4 * se);
}

TEST_CASE("baselines: tlc sparsity clips before the stochastic draw") {
  // s = 2 halves the scale: u/m = [2, 0, -2] clipped to [1, 0, -1].
  std::vector<double> u = {4.0, 0.0, -4.0};
  Rng rng(5);
  TlcMessage m = tlc_encode(u, 2.0, rng);
  CHECK(m.scale == doctest::Approx(2.0));
  CHECK(m.trits == std::vector<int8_t>{1, 0, -1});
}

TEST_CASE("baselines: five trits pack into one byte, base 3") {
  std::vector<int8_t> ones = {1, 1, 1, 1, 1};
  std::vector<uint8_t> packed = tlc_pack(ones);
  REQUIRE(packed.size() == 1);
  CHECK(packed[0] == 242);
  std::vector<int8_t> zeros = {0, 0, 0, 0, 0};
  CHECK(tlc_pack(zeros)[0] == 121);  // all digits 1
  for (size_t d : {size_t{1}, size_t{4}, size_t{5}, size_t{6}, size_t{17}}) {
    std::vector<int8_t> trits(d);
    for (size_t i = 0; i < d; ++i) trits[i] = static_cast<int8_t>((i % 3) - 1);
    CHECK(tlc_unpack(tlc_pack(trits), d) == trits);
  }
  CHECK_THROWS_AS(tlc_unpack(std::vector<uint8_t>{1, 2}, 3),
                  CorruptStreamError);
}

TEST_CASE("baselines: tlc payload accounting") {
  std::vector<double> u(7, 1.0);
  Rng rng(6);
  TlcMessage m = tlc_encode(u, 1.0, rng);
  CHECK(tlc_packed_payload_bits(m) == 32 + 8 * 2);
  // All trits are 1 (u/m = 1 exactly): symbol stream 1111111 recodes as
  // 7 * (run token "1" + sign 0 + gamma(1)) = 21 bits.
  CHECK(tlc_reported_payload_bits(m) == 32 + 21);
}

TEST_CASE("baselines: zero vector tlc") {
  std::vector<double> u = {0.0, 0.0};
  Rng rng(7);
  TlcMessage m = tlc_encode(u, 1.5, rng);
  CHECK(m.scale == 0.0);
  CHECK(m.trits == std::vector<int8_t>{0, 0});
  CHECK(tlc_decode(m) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("baselines: none is identity at 32 bits per element") {
  CHECK(none_payload_bits(10) == 320);
  std::vector<double> u = {1.5, -0.25, 3.0};
  EncodedUpdate e = none_container(u);
  CHECK(e.payload.size() == 96);
  CHECK(decode_container(e) == u);  // values exactly representable in f32
}

TEST_CASE("baselines: every method survives container serialization") {
  std::vector<double> u = {1.5, -2.25, 0.0, 0.5, 3.0, 0.0, -0.125};
  Rng rng(9);

  TopkMessage tk = topk_encode(u, 0.3);
  EncodedUpdate e1 = deserialize_update(serialize(to_container(tk)));
  std::vector<double> d1 = decode_container(e1);
  std::vector<double> want1 = topk_decode(tk);
  REQUIRE(d1.size() == want1.size());
  for (size_t i = 0; i < d1.size(); ++i)
    CHECK(d1[i] == static_cast<double>(static_cast<float>(want1[i])));

  QsgdMessage qm = qsgd_encode(u, 8, rng);
  EncodedUpdate e2 = deserialize_update(serialize(to_container(qm)));
  std::vector<double> d2 = decode_container(e2);
  QsgdMessage qf = qm;
  qf.norm = static_cast<double>(static_cast<float>(qm.norm));
  std::vector<double> want2 = qsgd_decode(qf);
  for (size_t i = 0; i < d2.size(); ++i)
    CHECK(d2[i] == doctest::Approx(want2[i]).epsilon(1e-12));

  DriveMessage dm = drive_encode(u, 21);
  EncodedUpdate e3 = deserialize_update(serialize(to_container(dm)));
  std::vector<double> d3 = decode_container(e3);
  DriveMessage df = dm;
  df.scale = static_cast<double>(static_cast<float>(dm.scale));
  std::vector<double> want3 = drive_decode(df);
  for (size_t i = 0; i < d3.size(); ++i)
    CHECK(d3[i] == doctest::Approx(want3[i]).epsilon(1e-9));

  TlcMessage tm = tlc_encode(u, 1.0, rng);
  EncodedUpdate e4 = deserialize_update(serialize(to_container(tm)));
  std::vector<double> d4 = decode_container(e4);
  TlcMessage tf = tm;
  tf.scale = static_cast<double>(static_cast<float>(tm.scale));
  std::vector<double> want4 = tlc_decode(tf);
  for (size_t i = 0; i < d4.size(); ++i)
    CHECK(d4[i] == doctest::Approx(want4[i]).epsilon(1e-12));

  EncodedUpdate e5 = deserialize_update(serialize(none_container(u)));
  CHECK(decode_container(e5) == u);
}

TEST_CASE("baselines: unknown scheme id is rejected") {
  EncodedUpdate e;
  e.quantizer_id = 9;
  e.d = 1;
  CHECK_THROWS_AS(decode_container(e), CorruptStreamError);
}

TEST_CASE("baselines: method names") {
  CHECK(std::string(method_name(Method::topk)) == "topk");
  CHECK(std::string(method_name(Method::qsgd)) == "qsgd");
  CHECK(std::string(method_name(Method::drive)) == "drive");
  CHECK(std::string(method_name(Method::tlc)) == "tlc");
  CHECK(std::string(method_name(Method::none)) == "none");
}
