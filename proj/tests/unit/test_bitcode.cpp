#include "doctest.h"

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedcodec/bitcode.hpp"
#include "fedcodec/errors.hpp"
#include "fedcodec/rng.hpp"

using namespace fedcodec;

TEST_CASE("bitcode: bits are packed MSB-first with zero padding") {
  BitString b;
  b.append_bits(0b1011, 4);
  CHECK(b.size() == 4);
  CHECK(b.to_string() == "1011");
  CHECK(b.bytes().size() == 1);
  CHECK(b.bytes()[0] == 0xB0);
  b.push_back(true);
  CHECK(b.bytes()[0] == 0xB8);
  CHECK(b.bit(0));
  CHECK_FALSE(b.bit(1));
}

TEST_CASE("bitcode: append is associative with the empty string as identity") {
  BitString a = BitString::from_string("101");
  BitString b = BitString::from_string("0011");
  BitString c = BitString::from_string("11");
  BitString ab_c = a;
  ab_c.append(b);
  ab_c.append(c);
  BitString bc = b;
  bc.append(c);
  BitString a_bc = a;
  a_bc.append(bc);
  CHECK(ab_c == a_bc);
  CHECK(ab_c.to_string() == "101001111");
  BitString e;
  e.append(a);
  CHECK(e == a);
}

TEST_CASE("bitcode: from_string/to_string roundtrip and validation") {
  std::string s = "110100100011111";
  CHECK(BitString::from_string(s).to_string() == s);
  CHECK(BitString::from_string("").to_string().empty());
  CHECK_THROWS_AS(BitString::from_string("10x"), std::invalid_argument);
}

TEST_CASE("bitcode: serialize frames as u64 LE count plus padded bytes") {
  BitString b = BitString::from_string("1011001100101");  // 13 bits
  std::vector<uint8_t> wire;
  b.serialize(wire);
  REQUIRE(wire.size() == 8 + 2);
  CHECK(wire[0] == 13);
  for (int i = 1; i < 8; ++i) CHECK(wire[i] == 0);
  size_t offset = 0;
  CHECK(BitString::deserialize(wire, offset) == b);
  CHECK(offset == wire.size());
}

TEST_CASE("bitcode: deserialize rejects truncation with a byte offset") {
  BitString b = BitString::from_string("10110011");
  std::vector<uint8_t> wire;
  b.serialize(wire);
  std::vector<uint8_t> short_count(wire.begin(), wire.begin() + 4);
  size_t offset = 0;
  CHECK_THROWS_AS(BitString::deserialize(short_count, offset),
                  CorruptStreamError);
  std::vector<uint8_t> short_payload(wire.begin(), wire.end() - 1);
  offset = 0;
  CHECK_THROWS_AS(BitString::deserialize(short_payload, offset),
                  CorruptStreamError);
}

TEST_CASE("bitcode: reader throws past the end with the bit offset") {
  BitString b = BitString::from_string("101");
  BitReader r(b);
  CHECK(r.read_bit());
  CHECK(r.read_bits(2) == 0b01);
  CHECK(r.remaining() == 0);
  CHECK_THROWS_AS(r.read_bit(), CorruptStreamError);
  BitReader r2(b);
  try {
    r2.read_bits(4);
    FAIL("expected CorruptStreamError");
  } catch (const CorruptStreamError& e) {
    CHECK(e.offset() == 3);  // the bit position where the stream ran out
  }
}

TEST_CASE("bitcode: gamma codewords match the hand-derived table") {
  CHECK(gamma_encode(1).to_string() == "1");
  CHECK(gamma_encode(2).to_string() == "010");
  CHECK(gamma_encode(3).to_string() == "011");
  CHECK(gamma_encode(4).to_string() == "00100");
  CHECK(gamma_encode(17).to_string() == "000010001");
}

TEST_CASE("bitcode: delta codewords match the hand-derived table") {
  CHECK(delta_encode(1).to_string() == "1");
  CHECK(delta_encode(2).to_string() == "0100");
  CHECK(delta_encode(3).to_string() == "0101");
  CHECK(delta_encode(4).to_string() == "01100");
  // delta(17): width 5 -> gamma(5)="00101", then the 4 low bits 0001.
  CHECK(delta_encode(17).to_string() == "001010001");
}

TEST_CASE("bitcode: length laws hold across the range") {
  for (uint64_t n : {uint64_t{1}, uint64_t{2}, uint64_t{3}, uint64_t{100},
                     uint64_t{1} << 20, (uint64_t{1} << 30) + 7,
                     (uint64_t{1} << 62) - 1}) {
    unsigned w = std::bit_width(n);
    CHECK(gamma_length(n) == 2 * (w - 1) + 1);
    CHECK(gamma_encode(n).size() == gamma_length(n));
    CHECK(delta_length(n) == gamma_length(w) + w - 1);
    CHECK(delta_encode(n).size() == delta_length(n));
  }
}

TEST_CASE("bitcode: gamma and delta roundtrip over hard values") {
  std::vector<uint64_t> values;
  for (uint64_t n = 1; n <= 700; ++n) values.push_back(n);
  for (unsigned s = 10; s <= 61; ++s) {
    values.push_back((uint64_t{1} << s) - 1);
    values.push_back(uint64_t{1} << s);
    values.push_back((uint64_t{1} << s) + 1);
  }
  values.push_back((uint64_t{1} << 62) - 1);
  for (uint64_t n : values) {
    BitString g = gamma_encode(n);
    BitReader gr(g);
    CHECK(gamma_decode(gr) == n);
    CHECK(gr.remaining() == 0);
    BitString d = delta_encode(n);
    BitReader dr(d);
    CHECK(delta_decode(dr) == n);
    CHECK(dr.remaining() == 0);
  }
}

TEST_CASE("bitcode: codes are prefix-free over concatenated pairs") {
  Rng rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    uint64_t a = 1 + rng.next_below((uint64_t{1} << 40) - 1);
    uint64_t b = 1 + rng.next_below(1000);
    BitString s = gamma_encode(a);
    gamma_encode(b, s);
    delta_encode(a, s);
    delta_encode(b, s);
    BitReader r(s);
    CHECK(gamma_decode(r) == a);
    CHECK(gamma_decode(r) == b);
    CHECK(delta_decode(r) == a);
    CHECK(delta_decode(r) == b);
    CHECK(r.remaining() == 0);
  }
}

TEST_CASE("bitcode: out-of-range integers are a hard error") {
  CHECK_THROWS_AS(gamma_encode(0), std::domain_error);
  CHECK_THROWS_AS(delta_encode(0), std::domain_error);
  CHECK_THROWS_AS(gamma_encode(uint64_t{1} << 62), std::domain_error);
  CHECK_THROWS_AS(delta_encode(uint64_t{1} << 62), std::domain_error);
  CHECK_THROWS_AS(gamma_length(0), std::domain_error);
  CHECK_THROWS_AS(delta_length(uint64_t{1} << 62), std::domain_error);
}

TEST_CASE("bitcode: corrupt gamma streams fail loudly") {
  BitString zeros;
  for (int i = 0; i < 70; ++i) zeros.push_back(false);
  BitReader r(zeros);
  CHECK_THROWS_AS(gamma_decode(r), CorruptStreamError);
  BitString truncated = BitString::from_string("00010");  // needs 2 more bits
  BitReader t(truncated);
  CHECK_THROWS_AS(gamma_decode(t), CorruptStreamError);
}
