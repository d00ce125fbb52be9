#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fedcodec {

// Largest integer width the universal codes accept. Larger magnitudes are a
// hard error rather than a silent wrap.
inline constexpr unsigned kMaxCodeBits = 62;

// Append-only bit sequence, MSB-first within each byte; the final byte is
// zero-padded. Concatenation is associative with the empty string as
// identity.
class BitString {
 public:
  BitString() = default;

  void push_back(bool bit);
  // Appends the low `count` bits of `value`, most significant first.
  void append_bits(uint64_t value, unsigned count);
  void append(const BitString& other);

  bool bit(uint64_t index) const;
  uint64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const std::vector<uint8_t>& bytes() const { return bytes_; }

  std::string to_string() const;
  static BitString from_string(std::string_view bits);

  // Wire form: bit count as unsigned 64-bit little-endian, then the padded
  // payload bytes.
  void serialize(std::vector<uint8_t>& out) const;
  // Reads one serialized BitString from `data + offset`, advancing `offset`.
  // Throws CorruptStreamError (byte offset) on truncation.
  static BitString deserialize(const std::vector<uint8_t>& data, size_t& offset);

  bool operator==(const BitString& other) const {
    return size_ == other.size_ && bytes_ == other.bytes_;
  }

 private:
  std::vector<uint8_t> bytes_;
  uint64_t size_ = 0;
};

// Cursor over a BitString. Reads past the end throw CorruptStreamError with
// the bit offset of the failure.
class BitReader {
 public:
  explicit BitReader(const BitString& source) : source_(&source) {}

  bool read_bit();
  uint64_t read_bits(unsigned count);

  uint64_t position() const { return cursor_; }
  uint64_t remaining() const { return source_->size() - cursor_; }

 private:
  const BitString* source_;
  uint64_t cursor_ = 0;
};

// Elias gamma: floor(log2 n) zeros, then the binary digits of n. Length is
// exactly 2*floor(log2 n) + 1. n must be in [1, 2^62).
void gamma_encode(uint64_t n, BitString& out);
BitString gamma_encode(uint64_t n);
uint64_t gamma_decode(BitReader& reader);

// Elias delta: gamma(floor(log2 n) + 1), then the low floor(log2 n) bits.
void delta_encode(uint64_t n, BitString& out);
BitString delta_encode(uint64_t n);
uint64_t delta_decode(BitReader& reader);

uint64_t gamma_length(uint64_t n);
uint64_t delta_length(uint64_t n);

}  // namespace fedcodec
